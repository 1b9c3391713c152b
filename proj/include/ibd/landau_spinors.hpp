#pragma once

#include <Eigen/Dense>

#include <array>
#include <complex>
#include <string>
#include <vector>

namespace ibd {

using cplx = std::complex<double>;
using Spinor4 = Eigen::Vector4cd;
using Mat4 = Eigen::Matrix4cd;

// Fixed global order of the Fock species slots.
enum class Species : int { electron = 0, positron = 1, proton = 2, antiproton = 3, neutron = 4, neutrino = 5 };
constexpr int kNumSpecies = 6;

const char* species_name(Species s);
bool is_charged(Species s);
// -1 for electron/antiproton, +1 for proton/positron, 0 otherwise.
int charge_sign(Species s);

struct ChargedMode {
    int s = -1; // spin label, -1 or +1
    int n = 0;  // Landau index
    double p1 = 0.0;
    double p3 = 0.0;
};

// E_n(p3) = sqrt(m^2 + p3^2 + 2 n eB)
double landau_energy(double mass, int n, double p3, double eB);

// Center in x2 of the Landau envelope of U/V for the given charge sign:
// p1/eB for negative charge, -p1/eB for positive charge.
double landau_center(int charge, double p1, double eB);

// Analytic representation of a Landau spinor: component j is
// norm * coef[j] * I_{idx[j]}(sqrt(eB)(x2 - center)).
struct SpinorForm {
    std::array<double, 4> coef{};
    std::array<int, 4> idx{};
    double norm = 0.0;
    double center = 0.0;
    bool zero = true;
    Spinor4 eval(double x2, double eB) const;
    Spinor4 eval_dx2(double x2, double eB) const; // derivative in x2
};

// Positive-energy (U) and negative-energy (V) eigenspinors. Negatively charged
// species use the electron formulas, positively charged ones the proton
// formulas; `mass` is the species mass. Forbidden (s, n=0) combinations give
// the zero spinor.
SpinorForm spinor_U_form(Species species, double mass, const ChargedMode& mode, double eB);
SpinorForm spinor_V_form(Species species, double mass, const ChargedMode& mode, double eB);
Spinor4 spinor_U(Species species, double mass, const ChargedMode& mode, double x2, double eB);
Spinor4 spinor_V(Species species, double mass, const ChargedMode& mode, double x2, double eB);

// Field spinors of the antiparticle part of the electron/proton fields:
// W(s, n, p1, p3) = V_{-s}(n, -p1, -p3) of the same species.
SpinorForm field_spinor_W_form(Species species, double mass, const ChargedMode& mode, double eB);
Spinor4 field_spinor_W(Species species, double mass, const ChargedMode& mode, double x2, double eB);

// (psi1, psi2, psi3, psi4) -> (psi4*, -psi3*, -psi2*, psi1*)
Spinor4 charge_conjugate(const Spinor4& psi);

// Reduced Dirac operator in the uniform field applied to an analytic spinor at
// x2: [[m, D], [D, -m]] with D = sigma1 f(x2) - i sigma2 d/dx2 + p3 sigma3 and
// f(x2) = p1 + q eB x2, q the charge sign.
Spinor4 reduced_dirac_apply(int charge, double mass, double p1, double p3, const SpinorForm& form, double x2,
                            double eB);

// {sqrt(m^2 + 2 n eB)}, n = 0..n_max
std::vector<double> thresholds(double mass, double eB, int n_max);

} // namespace ibd
