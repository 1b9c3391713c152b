#pragma once

#include "ibd/fock.hpp"
#include "ibd/spectra.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace ibd {

// Structural invariants shared by the test suites, the acceptance runner and
// the "invariants" experiment.

struct SpinorCheck {
    int cases = 0;
    double max_eigen_rel_err = 0.0; // |H_D psi - (+-E) psi| / |E psi| over sample points
    double max_gram_err = 0.0;      // max |G - 1| of {U_s, V_s} at fixed (n, p1, p3)
    bool pass() const { return max_eigen_rel_err < 1e-6 && max_gram_err < 1e-10; }
};
SpinorCheck check_spinor_exactness(const Masses& m, double eB, int n_max, int samples, std::uint64_t seed);

struct ConjugationCheck {
    int cases = 0;
    double max_landau_err = 0.0;  // the four charged identities
    double max_neutral_err = 0.0; // neutron and neutrino phase relations
    bool pass() const { return max_landau_err <= 1e-12 && max_neutral_err <= 1e-12; }
};
ConjugationCheck check_conjugation(const Masses& m, double eB, int n_max, int samples, std::uint64_t seed);

struct CarCheck {
    int modes = 0;
    std::int64_t states = 0;
    std::int64_t pairs = 0;
    std::int64_t mismatches = 0;
    bool pass() const { return mismatches == 0 && pairs > 0; }
};
// All anticommutators {b_i, b_j}, {b*_i, b*_j}, {b_i, b*_j} on the full
// occupation basis of the grid (at most 20 modes), exact integer arithmetic.
CarCheck check_car(const ModeGrid& g);

struct ToyHamiltonianCheck {
    std::int64_t dim = 0;
    double hermiticity_error = 0.0;
    double max_spectrum_diff = 0.0; // Lanczos (forced) against dense
    double g = 0.0;
    bool pass() const { return hermiticity_error <= 1e-12 && max_spectrum_diff <= 1e-10; }
};
// Full occupation basis of the grid, H = H0 + g HI.
ToyHamiltonianCheck check_toy_hamiltonian(const ModelSetup& s, double g);

} // namespace ibd
