#pragma once

#include "ibd/free_spinors.hpp"
#include "ibd/landau_spinors.hpp"

#include <array>
#include <functional>
#include <string>
#include <vector>

namespace ibd {

// f(xi) = a rho^n exp(-(p1^2 + p3^2)/(2 w^2)) exp(i phase p1) on the charged leg,
// vanishing on the one decoupled (s, n=0) label of that leg.
struct ChargedProfile {
    double amplitude = 1.0;
    double width = 1.0;
    double rho = 0.5;
    double phase = 0.0;
    cplx eval(const ChargedMode& m, int decoupled_s) const;
    double norm2() const; // sum over labels and integral over (p1, p3) of |f|^2
};

// g(p) = |p|^eta exp(-(k1 p1^2 + k2 p2^2 + k3 p3^2)/2) on the neutral leg.
struct NeutralProfile {
    std::array<double, 3> kappa{1.0, 1.0, 1.0};
    double eta = 0.0;
    bool isotropic() const { return kappa[0] == kappa[1] && kappa[1] == kappa[2]; }
    double eval(const Momentum3& p) const;
    double d1(const Momentum3& p) const;  // d/dp1
    double d2(const Momentum3& p) const;  // d/dp2
    double d12(const Momentum3& p) const; // d^2/dp1 dp2
    double norm2() const;                 // integral over R^3 of |g|^2
};

struct KernelFactor {
    ChargedProfile charged;
    NeutralProfile neutral;
};

// F^(beta)(xi2, xi3) = F[beta-1].charged(xi2) * F[beta-1].neutral(p3)
// G^(beta)(xi1, xi4) = G[beta-1].charged(xi1) * G[beta-1].neutral(p4)
struct KernelSpec {
    std::array<KernelFactor, 2> F;
    std::array<KernelFactor, 2> G;
    void validate() const; // throws if a norm is not finite
    KernelSpec scaled(double lambda) const;
};

// Spin label at n = 0 whose field spinor vanishes on the charged leg.
// F1: proton U, F2: antiproton W^(p), G1: electron U, G2: positron W^(e).
int decoupled_spin(char leg, int beta);

cplx eval_F(const KernelSpec& k, int beta, const ChargedMode& xi2, const Momentum3& p3);
cplx eval_G(const KernelSpec& k, int beta, const ChargedMode& xi1, const Momentum3& p4);

// Closed-form L2 norms; the neutron leg sums over both helicities.
double norm_F(const KernelSpec& k, int beta);
double norm_G(const KernelSpec& k, int beta);
// L2(Gamma_1) norm of G(., xi4).
double norm_G_at(const KernelSpec& k, int beta, const Momentum3& p4);

// Integral over R^3 (or the ball |p| < radius) of h(p) by product quadrature
// in spherical coordinates.
double spherical_integral(const std::function<double(const Momentum3&)>& h, double r_min, double r_max,
                          int radial_panels = 8);

struct InfraredHypothesis {
    bool i_finite = true;
    double i_value = 0.0;         // closed form (isotropic) or quadrature
    double i_value_numeric = 0.0; // independent spherical quadrature
    double ii_Ktilde = 0.0;       // sup over sigma of softball(sigma)/sigma
    double ii_slope = 0.0;        // d log softball / d log sigma as sigma -> 0
    double sigma_at_sup = 0.0;
};
InfraredHypothesis check_infrared_hypothesis(const KernelSpec& k, int beta);
// Soft-ball norm (integral over Gamma_1 x {|p4| < sigma} of |G|^2)^(1/2).
double softball_norm(const KernelSpec& k, int beta, double sigma);

struct DerivativeHypothesis {
    double norm_d1 = 0.0, norm_d2 = 0.0, norm_d12 = 0.0; // on the annulus, charged leg included
    double fd_max_rel_err = 0.0;
    double r_in = 0.0, r_out = 0.0;
    bool pass = false;
};
DerivativeHypothesis check_derivative_hypothesis(const KernelSpec& k, int beta, double r_in = 0.05, double r_out = 6.0);

// C-infinity step: 1 on (-inf, 1], 0 on [2, inf)
double chi0(double t);
// 1 - chi0(|p|/sigma); sigma must be > 0
double ir_cutoff_factor(double sigma, const Momentum3& p4);
double ir_cutoff_factor_radius(double sigma, double radius);

struct Masses {
    double m_e = 1.0, m_p = 2.0, m_n = 2.2;
};

struct PhysicalConstants {
    double g_A = 1.27;
    double G_F = 1.16639e-5; // GeV^-2
    double cos_theta_c = 0.9751;
};

struct ModelConstants {
    double sup_hadronic = 0, sup_leptonic = 0;
    double C0 = 0, K = 0, C = 0, B = 0;
    std::array<double, 2> normF{}, normG{};
    double g0 = 0;
    double Ct = 0, Bt = 0;
    double Ktilde_G = 0, Ktilde_FG = 0;
    double Dt = 0;    // m_e reading (active)
    double Dt_mn = 0; // m_n reading (reported)
    double gamma = 0, delta = 0;
    double g1 = 0, g1_mn = 0, g3 = 0, g2 = 0, g2_mn = 0;
    double M = 0; // uniform bound on ||H0 phi|| for |g| <= g0
    double safety = 0.99;
    PhysicalConstants phys;
    Masses masses;
};

ModelConstants derive_constants(const KernelSpec& k, const Masses& m, const PhysicalConstants& pc, double delta,
                                double safety = 0.99);

// sigma_0 = 2 m_e + 1, sigma_1 = m_e - delta/2, sigma_{n+1} = gamma sigma_n
std::vector<double> sigma_sequence(double m_e, double delta, int n_max);
double gamma_factor(double m_e, double delta);

} // namespace ibd
