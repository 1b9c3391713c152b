#pragma once

#include "ibd/fock.hpp"
#include "ibd/hamiltonian.hpp"
#include "ibd/kernels.hpp"
#include "ibd/sparse.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace ibd {

// ---- eigensolver ----

struct EigenOptions {
    double tol_dense = 1e-10;
    double tol_lanczos = 1e-8;
    double cluster_tol = 1e-7;
    int dense_max = 2000; // dense solve at or below this dimension
    int krylov_dim = 200;
    int max_restarts = 200;
    std::uint64_t seed = 20240501;
    bool force_lanczos = false;
};

struct EigenResult {
    std::vector<double> values; // ascending
    std::vector<VecC> vectors;
    std::vector<double> residuals; // ||H x - lambda x||
    int iterations = 0;
    bool dense = false;
    bool converged = true;
    double tol = 0.0;
};

// k lowest eigenpairs. Throws std::runtime_error on non-convergence.
EigenResult ground_state(const SparseOperator& H, int k, const EigenOptions& opt = {});

// E1 - E0 > max(10 tol, 1e-7)
bool is_simple(const EigenResult& r);
// Number of computed eigenvalues within cluster_tol of the lowest.
int multiplicity(const EigenResult& r, double cluster_tol);

// ---- model setup shared by the experiments ----

struct ModelSetup {
    Masses masses;
    double eB = 1.0;
    PhysicalConstants phys;
    double delta = 0.5;
    KernelSpec kernels;
    GridConfig grid;
    QuadSettings quad;
    Metric metric = Metric::minkowski;
    SectorCaps caps;
    EigenOptions eig;
    VertexContext context() const;
};

// The vacuum sector: closure of Omega under the interaction within caps.
FockBasis vacuum_sector(const ModeGrid& g, const SectorCaps& caps);

// ---- checks and studies ----

struct EnergyBoundReport {
    double g = 0.0, E0 = 0.0, bound = 0.0;
    bool nonpositive = false, within = false;
    bool pass() const { return nonpositive && within; }
};
// |E0| <= g K B / (1 - g0 K C) and E0 <= slack
EnergyBoundReport energy_bound_check(double E0, const ModelConstants& c, double g, double slack = 0.0);

struct GapRow {
    int n = 0;
    double sigma = 0.0;
    std::int64_t dim = 0;
    double E0 = 0.0, E1 = 0.0, gap = 0.0;
    double bound = 0.0;    // (1 - 3 g Dt / gamma) sigma, m_e reading
    double bound_mn = 0.0; // same with the m_n reading of Dt
    int multiplicity = 0;
    bool simple = false;
    bool pass = false;
};

struct GapStudy {
    double g = 0.0;
    bool gated = false; // g <= g2
    std::vector<GapRow> rows;
    bool energies_nonincreasing = false;
    bool pass() const;
};

// Neutrino shells of setup.grid must not straddle any sigma_n, n = 1..n_max.
GapStudy ir_gap_study(const ModelSetup& s, const ModelConstants& c, double g, int n_max);

struct PullThroughReport {
    double g = 0.0, sigma = 0.0, E0 = 0.0;
    std::int64_t dim = 0, vacuum_dim = 0;
    double eigen_residual = 0.0;
    double max_residual = 0.0; // max over neutrino modes
    int bound_violations = 0;
    double max_bound_ratio = 0.0; // ||b(k) psi|| / per-mode bound
    std::vector<double> residuals;
    bool pass(double tol) const { return max_residual <= tol && bound_violations == 0; }
};

PullThroughReport pull_through_residual(const ModelSetup& s, const ModelConstants& c, double g, double sigma);

struct SoftNumberReport {
    std::vector<double> g, N;
    double slope = 0.0;
    double max_ratio = 0.0; // max N / g^2
    double C2 = 0.0;        // analytic C(F,G)^2
    double sigma = 0.0;
    bool pass() const { return slope >= 1.9 && max_ratio <= C2; }
};

SoftNumberReport soft_number_scaling(const ModelSetup& s, const ModelConstants& c, const std::vector<double>& gs,
                                     double sigma);
// C0^2 (M + m_p)^2 integral over R^3 of (sum_beta ||F|| ||G(., p)||)^2 / |p|^2
double soft_number_constant(const KernelSpec& k, const ModelConstants& c);

struct DegeneracyReport {
    double g = 0.0;
    int multiplicity = 0;
    double E0 = 0.0, E1 = 0.0;
    int control_multiplicity = 0;
    bool derivative_hypothesis = false;
    bool pass() const { return multiplicity == 1 && control_multiplicity == 2; }
};

DegeneracyReport degeneracy_check(const ModelSetup& s, const ModelConstants& c, double g);
// Free single-neutrino sector with one neutrino mode duplicated: lowest multiplicity.
int degeneracy_negative_control(const ModelSetup& s);

} // namespace ibd
