#include "ibd/landau_spinors.hpp"

#include "ibd/special_fn.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ibd {

const char* species_name(Species s) {
    switch (s) {
    case Species::electron: return "electron";
    case Species::positron: return "positron";
    case Species::proton: return "proton";
    case Species::antiproton: return "antiproton";
    case Species::neutron: return "neutron";
    case Species::neutrino: return "neutrino";
    }
    return "?";
}

bool is_charged(Species s) { return charge_sign(s) != 0; }

int charge_sign(Species s) {
    switch (s) {
    case Species::electron:
    case Species::antiproton: return -1;
    case Species::proton:
    case Species::positron: return +1;
    default: return 0;
    }
}

double landau_energy(double mass, int n, double p3, double eB) {
    if (!(mass > 0) || n < 0) throw std::invalid_argument("landau_energy: need mass > 0 and n >= 0");
    return std::sqrt(mass * mass + p3 * p3 + 2.0 * n * eB);
}

double landau_center(int charge, double p1, double eB) { return charge < 0 ? p1 / eB : -p1 / eB; }

// ---- analytic form ----

Spinor4 SpinorForm::eval(double x2, double eB) const {
    Spinor4 out = Spinor4::Zero();
    if (zero) return out;
    const int kmax = *std::max_element(idx.begin(), idx.end());
    if (kmax < 0) return out;
    std::vector<double> I;
    landau_modes(kmax, std::sqrt(eB) * (x2 - center), eB, I);
    for (int j = 0; j < 4; ++j)
        if (coef[j] != 0.0 && idx[j] >= 0) out[j] = norm * coef[j] * I[static_cast<size_t>(idx[j])];
    return out;
}

Spinor4 SpinorForm::eval_dx2(double x2, double eB) const {
    Spinor4 out = Spinor4::Zero();
    if (zero) return out;
    const int kmax = *std::max_element(idx.begin(), idx.end());
    if (kmax < 0) return out;
    std::vector<double> I;
    landau_modes(kmax + 1, std::sqrt(eB) * (x2 - center), eB, I);
    for (int j = 0; j < 4; ++j) {
        const int k = idx[j];
        if (coef[j] == 0.0 || k < 0) continue;
        const double lower = k > 0 ? std::sqrt(k / 2.0) * I[static_cast<size_t>(k) - 1] : 0.0;
        const double d = lower - std::sqrt((k + 1) / 2.0) * I[static_cast<size_t>(k) + 1];
        out[j] = norm * coef[j] * std::sqrt(eB) * d;
    }
    return out;
}

namespace {

struct Factors {
    double N, A, S;
};

Factors factors(double mass, const ChargedMode& m, double eB) {
    const double E = landau_energy(mass, m.n, m.p3, eB);
    return {std::sqrt((E + mass) / (2.0 * E)), m.p3 / (E + mass), std::sqrt(2.0 * m.n * eB) / (E + mass)};
}

void check_mode(const ChargedMode& m) {
    if (m.s != 1 && m.s != -1) throw std::invalid_argument("charged mode: s must be +1 or -1");
    if (m.n < 0) throw std::invalid_argument("charged mode: n must be >= 0");
}

SpinorForm make(double N, std::array<double, 4> c, std::array<int, 4> k, double center) {
    SpinorForm f;
    f.coef = c;
    f.idx = k;
    f.norm = N;
    f.center = center;
    f.zero = false;
    return f;
}

SpinorForm zero_form(double center) {
    SpinorForm f;
    f.center = center;
    return f;
}

} // namespace

SpinorForm spinor_U_form(Species species, double mass, const ChargedMode& m, double eB) {
    check_mode(m);
    const int q = charge_sign(species);
    if (q == 0) throw std::invalid_argument("spinor_U: species must be charged");
    const double c = landau_center(q, m.p1, eB);
    const auto [N, A, S] = factors(mass, m, eB);
    const int n = m.n;
    if (q < 0) {
        if (m.s == 1) {
            if (n == 0) return zero_form(c);
            return make(N, {1, 0, A, -S}, {n - 1, n, n - 1, n}, c);
        }
        return make(N, {0, 1, -S, -A}, {n, n, n - 1, n}, c);
    }
    if (m.s == 1) return make(N, {1, 0, A, S}, {n, n, n, n - 1}, c);
    if (n == 0) return zero_form(c);
    return make(N, {0, 1, S, -A}, {n, n - 1, n, n - 1}, c);
}

SpinorForm spinor_V_form(Species species, double mass, const ChargedMode& m, double eB) {
    check_mode(m);
    const int q = charge_sign(species);
    if (q == 0) throw std::invalid_argument("spinor_V: species must be charged");
    const double c = landau_center(q, m.p1, eB);
    const auto [N, A, S] = factors(mass, m, eB);
    const int n = m.n;
    if (q < 0) {
        if (m.s == 1) {
            if (n == 0) return zero_form(c);
            return make(N, {-A, S, 1, 0}, {n - 1, n, n - 1, n}, c);
        }
        return make(N, {S, A, 0, 1}, {n - 1, n, n, n}, c);
    }
    if (m.s == 1) return make(N, {-A, -S, 1, 0}, {n, n - 1, n, n}, c);
    if (n == 0) return zero_form(c);
    return make(N, {-S, A, 0, 1}, {n, n - 1, n, n - 1}, c);
}

Spinor4 spinor_U(Species species, double mass, const ChargedMode& mode, double x2, double eB) {
    return spinor_U_form(species, mass, mode, eB).eval(x2, eB);
}

Spinor4 spinor_V(Species species, double mass, const ChargedMode& mode, double x2, double eB) {
    return spinor_V_form(species, mass, mode, eB).eval(x2, eB);
}

SpinorForm field_spinor_W_form(Species species, double mass, const ChargedMode& mode, double eB) {
    if (species != Species::electron && species != Species::proton)
        throw std::invalid_argument("field_spinor_W: species must be electron or proton");
    ChargedMode flipped{-mode.s, mode.n, -mode.p1, -mode.p3};
    return spinor_V_form(species, mass, flipped, eB);
}

Spinor4 field_spinor_W(Species species, double mass, const ChargedMode& mode, double x2, double eB) {
    return field_spinor_W_form(species, mass, mode, eB).eval(x2, eB);
}

Spinor4 charge_conjugate(const Spinor4& psi) {
    Spinor4 out;
    out << std::conj(psi[3]), -std::conj(psi[2]), -std::conj(psi[1]), std::conj(psi[0]);
    return out;
}

Spinor4 reduced_dirac_apply(int charge, double mass, double p1, double p3, const SpinorForm& form, double x2,
                            double eB) {
    const Spinor4 psi = form.eval(x2, eB);
    const Spinor4 dpsi = form.eval_dx2(x2, eB);
    const double f = p1 + charge * eB * x2;
    // D(a, b) = (p3 a + f b - b', f a + a' - p3 b)
    auto D = [&](int ia, int ib) {
        return std::array<cplx, 2>{p3 * psi[ia] + f * psi[ib] - dpsi[ib], f * psi[ia] + dpsi[ia] - p3 * psi[ib]};
    };
    const auto Dl = D(2, 3);
    const auto Du = D(0, 1);
    Spinor4 out;
    out << mass * psi[0] + Dl[0], mass * psi[1] + Dl[1], Du[0] - mass * psi[2], Du[1] - mass * psi[3];
    return out;
}

std::vector<double> thresholds(double mass, double eB, int n_max) {
    if (n_max < 0) throw std::invalid_argument("thresholds: n_max must be >= 0");
    std::vector<double> t;
    for (int n = 0; n <= n_max; ++n) t.push_back(std::sqrt(mass * mass + 2.0 * n * eB));
    return t;
}

} // namespace ibd
