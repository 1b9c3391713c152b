#pragma once

#include "ibd/free_spinors.hpp"
#include "ibd/gamma.hpp"
#include "ibd/kernels.hpp"
#include "ibd/landau_spinors.hpp"

#include <array>

namespace ibd {

// One current of the contraction: either <charged(x2), gamma0 Gamma_a neutral>
// (charged_left) or <neutral, gamma0 Gamma_a charged(x2)>.
struct CurrentLeg {
    SpinorForm charged;
    Spinor4 neutral;
    bool charged_left = true;
    std::array<Mat4, 4> vertex; // Gamma_a for a = 0..3, metric signs already applied where needed
};

struct OverlapResult {
    cplx value = 0.0;
    int order = 0;      // quadrature order of the accepted value
    double diff = 0.0;  // |I(2q) - I(q)|
    bool converged = true;
};

struct QuadSettings {
    int base_order = 128;
    int max_order = 512;
    double rel_tol = 1e-9;
};

// Integral over x2 of exp(i sign x2 r2) sum_a legA_a(x2) legB_a(x2), evaluated by
// Gauss-Hermite centered on the product envelope, comparing orders q and 2q.
OverlapResult overlap_x2(const CurrentLeg& A, const CurrentLeg& B, double r2, int sign, double eB,
                         const QuadSettings& qs = {});

enum class Metric { minkowski, euclidean };

struct VertexContext {
    Masses masses;
    double eB = 1.0;
    double g_A = 1.27;
    QuadSettings quad;
    Metric metric = Metric::minkowski;
};

struct NeutronMode {
    Momentum3 p;
    int twice_lambda = 1;
};

// Coefficient of the operator monomial of process j (1..4). xi1 is the electron
// (j=1,2) or positron (j=3,4) label, xi2 the proton or antiproton label.
cplx amplitude(int process, const ChargedMode& xi1, const ChargedMode& xi2, const NeutronMode& xi3,
               const Momentum3& xi4, const KernelSpec& spec, const VertexContext& ctx, OverlapResult* info = nullptr);

// The spinor/x2 part only (no kernels).
OverlapResult vertex_overlap(int process, const ChargedMode& xi1, const ChargedMode& xi2, const NeutronMode& xi3,
                             const Momentum3& xi4, const VertexContext& ctx);

} // namespace ibd
