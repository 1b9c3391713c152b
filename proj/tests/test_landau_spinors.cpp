#include "ibd/checks.hpp"
#include "ibd/landau_spinors.hpp"
#include "ibd/special_fn.hpp"

#include "gen.hpp"

#include <doctest.h>

#include <cmath>

using namespace ibd;

namespace {

constexpr Species kCharged[] = {Species::electron, Species::positron, Species::proton, Species::antiproton};
const Masses kToy{1.0, 2.0, 2.2};

double mass_of(Species s) { return s == Species::electron || s == Species::positron ? kToy.m_e : kToy.m_p; }

// [[m, D], [D, -m]] with D = sigma1 f - i sigma2 d/dx2 + p3 sigma3, derivative by central differences
Spinor4 dirac_fd(int q, double m, double p1, double p3, double eB, const SpinorForm& f, double x) {
    const double h = 1e-5;
    const Spinor4 v = f.eval(x, eB);
    const Spinor4 dv = (f.eval(x + h, eB) - f.eval(x - h, eB)) / (2 * h);
    const double fx = p1 + q * eB * x;
    auto D = [&](const cplx& a, const cplx& b, const cplx& da, const cplx& db) {
        // sigma1 f (a,b) = f (b, a); -i sigma2 d = -i [[0,-i],[i,0]] d = [[0,-1],[1,0]] d
        return std::pair<cplx, cplx>{fx * b - db + p3 * a, fx * a + da - p3 * b};
    };
    const auto [u1, u2] = D(v[2], v[3], dv[2], dv[3]);
    const auto [l1, l2] = D(v[0], v[1], dv[0], dv[1]);
    Spinor4 r;
    r << m * v[0] + u1, m * v[1] + u2, l1 - m * v[2], l2 - m * v[3];
    return r;
}

} // namespace

TEST_SUITE("landau_spinors") {

TEST_CASE("landau energies and thresholds") {
    CHECK(landau_energy(1, 0, 0, 1) == 1.0);
    CHECK(landau_energy(1, 1, 0, 0.5) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
    CHECK(landau_energy(1, 3, 2, 1) == doctest::Approx(std::sqrt(11.0)).epsilon(1e-15));
    const auto t = thresholds(1.0, 1.5, 2);
    REQUIRE(t.size() == 3);
    CHECK(t[0] == 1.0);
    CHECK(t[1] == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(t[2] == doctest::Approx(std::sqrt(7.0)).epsilon(1e-15));
    CHECK(thresholds(kToy.m_e, 1.0, 0) == std::vector<double>{1.0});
    for (size_t i = 1; i < t.size(); ++i) CHECK(t[i] > t[i - 1]);
}

TEST_CASE("declared zero spinors") {
    const double eB = 1.0;
    CHECK(spinor_U_form(Species::electron, 1, {+1, 0, 0.3, 0.2}, eB).zero);
    CHECK(spinor_V_form(Species::electron, 1, {+1, 0, 0.3, 0.2}, eB).zero);
    CHECK(spinor_V_form(Species::proton, 2, {-1, 0, 0.3, 0.2}, eB).zero);
    CHECK(spinor_U_form(Species::proton, 2, {-1, 0, 0.3, 0.2}, eB).zero);
    CHECK(field_spinor_W_form(Species::electron, 1, {-1, 0, 0.3, 0.2}, eB).zero);
    CHECK(field_spinor_W_form(Species::proton, 2, {+1, 0, 0.3, 0.2}, eB).zero);
    CHECK(spinor_U(Species::electron, 1, {+1, 0, 0.3, 0.2}, 0.1, eB).norm() == 0.0);
}

TEST_CASE("exactly one spin survives at n = 0") {
    for (Species sp : kCharged) {
        int u = 0, v = 0;
        for (int s : {-1, +1}) {
            u += !spinor_U_form(sp, mass_of(sp), {s, 0, 0.1, 0.4}, 1.0).zero;
            v += !spinor_V_form(sp, mass_of(sp), {s, 0, 0.1, 0.4}, 1.0).zero;
        }
        CHECK(u == 1);
        CHECK(v == 1);
    }
    CHECK(!spinor_U_form(Species::electron, 1, {-1, 0, 0, 0}, 1).zero);
    CHECK(!spinor_U_form(Species::proton, 2, {+1, 0, 0, 0}, 1).zero);
}

TEST_CASE("electron ground spinor at rest in p3") {
    const double eB = 1.3, p1 = 0.4;
    for (double x : {-0.5, 0.1, 0.9}) {
        const Spinor4 u = spinor_U(Species::electron, 1, {-1, 0, p1, 0.0}, x, eB);
        const double xi = std::sqrt(eB) * (x - p1 / eB);
        CHECK(std::abs(u[0]) < 1e-15);
        CHECK(std::abs(u[1] - landau_mode(0, xi, eB)) < 1e-15);
        CHECK(std::abs(u[2]) < 1e-15);
        CHECK(std::abs(u[3]) < 1e-15);
    }
}

TEST_CASE("W is the relabeled V") {
    gen::Gen g(21);
    for (Species sp : {Species::electron, Species::proton})
        for (int t = 0; t < 20; ++t) {
            const ChargedMode m = g.charged(5);
            const ChargedMode flipped{-m.s, m.n, -m.p1, -m.p3};
            const double x = g.real(-2, 2);
            const Spinor4 w = field_spinor_W(sp, mass_of(sp), m, x, 1.0);
            const Spinor4 v = spinor_V(sp, mass_of(sp), flipped, x, 1.0);
            CHECK((w - v).norm() == 0.0);
        }
    const Spinor4 w = field_spinor_W(Species::electron, 1, {+1, 2, 0.3, -0.7}, 0.2, 1.0);
    const Spinor4 v = spinor_V(Species::electron, 1, {-1, 2, -0.3, 0.7}, 0.2, 1.0);
    CHECK((w - v).norm() == 0.0);
}

TEST_CASE("charge conjugation map") {
    Spinor4 e1;
    e1 << 1, 0, 0, 0;
    Spinor4 e4;
    e4 << 0, 0, 0, 1;
    CHECK((charge_conjugate(e1) - e4).norm() == 0.0);
    gen::Gen g(22);
    for (int t = 0; t < 50; ++t) {
        const Spinor4 v = g.spinor();
        CHECK((charge_conjugate(charge_conjugate(v)) - v).norm() < 1e-15);
    }
}

TEST_CASE("positron spinor is the conjugated electron V") {
    gen::Gen g(23);
    for (int t = 0; t < 20; ++t) {
        const double p1 = g.real(-2, 2), p3 = g.real(-2, 2);
        for (int n = 0; n <= 4; ++n) {
            const SpinorForm v = spinor_V_form(Species::electron, 1, {-1, n, p1, p3}, 1.0);
            const SpinorForm u = spinor_U_form(Species::positron, 1, {+1, n, -p1, -p3}, 1.0);
            for (double x : {v.center - 1.0, v.center, v.center + 0.7})
                CHECK((charge_conjugate(v.eval(x, 1.0)) - u.eval(x, 1.0)).norm() <= 1e-12);
        }
    }
}

TEST_CASE("eigenvector property against a finite difference Dirac operator") {
    gen::Gen g(24);
    for (Species sp : kCharged) {
        const double m = mass_of(sp);
        const int q = charge_sign(sp);
        for (int t = 0; t < 30; ++t) {
            const ChargedMode md = g.charged(6);
            const double eB = g.real(0.5, 2.0);
            const double E = landau_energy(m, md.n, md.p3, eB);
            for (int kind = 0; kind < 2; ++kind) {
                const SpinorForm f = kind ? spinor_V_form(sp, m, md, eB) : spinor_U_form(sp, m, md, eB);
                if (f.zero) continue;
                const double x = f.center + g.real(-1, 1) / std::sqrt(eB);
                const Spinor4 v = f.eval(x, eB);
                const Spinor4 hv = dirac_fd(q, m, md.p1, md.p3, eB, f, x);
                const double sgn = kind ? -1.0 : 1.0;
                CHECK((hv - sgn * E * v).norm() <= 1e-6 * E * std::max(v.norm(), 1e-3));
            }
        }
    }
}

TEST_CASE("spinor exactness and Gram orthonormality for n <= 6") {
    const SpinorCheck r = check_spinor_exactness(kToy, 1.0, 6, 20, 5);
    CHECK(r.cases > 0);
    CHECK(r.max_eigen_rel_err < 1e-6);
    CHECK(r.max_gram_err < 1e-10);
    for (double eB : {0.5, 2.0}) CHECK(check_spinor_exactness(kToy, eB, 3, 5, 6).pass());
}

TEST_CASE("all four conjugation identities") {
    const ConjugationCheck r = check_conjugation(kToy, 1.0, 4, 50, 7);
    CHECK(r.max_landau_err <= 1e-12);
    CHECK(r.max_neutral_err <= 1e-12);
}

}
