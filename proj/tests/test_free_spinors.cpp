#include "ibd/free_spinors.hpp"
#include "ibd/gamma.hpp"

#include "gen.hpp"

#include <doctest.h>

#include <cmath>

using namespace ibd;

namespace {

Eigen::Matrix2cd sigma_dot(const Momentum3& p) {
    Eigen::Matrix2cd s;
    s << p.p3, cplx(p.p1, -p.p2), cplx(p.p1, p.p2), -p.p3;
    return s;
}

} // namespace

TEST_SUITE("free_spinors") {

TEST_CASE("helicity basis conventions") {
    const HelicityPair a = helicity_basis({0, 0, 1});
    CHECK((a.plus - Eigen::Vector2cd(1, 0)).norm() < 1e-15);
    CHECK((a.minus - Eigen::Vector2cd(0, 1)).norm() < 1e-15);
    const HelicityPair b = helicity_basis({0, 0, -1});
    CHECK((b.plus - Eigen::Vector2cd(0, 1)).norm() < 1e-15);
    CHECK_THROWS(helicity_basis({0, 0, 0}));
}

TEST_CASE("helicity eigenvectors") {
    gen::Gen g(31);
    for (int t = 0; t < 100; ++t) {
        const Momentum3 p = g.momentum();
        const HelicityPair h = helicity_basis(p);
        const double n = p.norm();
        CHECK((sigma_dot(p) * h.plus - n * h.plus).norm() < 1e-12);
        CHECK((sigma_dot(p) * h.minus + n * h.minus).norm() < 1e-12);
        CHECK(std::abs(h.plus.norm() - 1) < 1e-14);
        CHECK(std::abs(h.plus.dot(h.minus)) < 1e-14);
    }
}

TEST_CASE("neutron spinors at rest") {
    const auto [u, v] = neutron_spinors({0, 0, 0}, +1, 2.2);
    Spinor4 e1;
    e1 << 1, 0, 0, 0;
    CHECK((u - e1).norm() < 1e-15);
    CHECK(std::abs(v.norm() - 1) < 1e-15);
}

TEST_CASE("neutron spinors are an orthonormal eigenbasis") {
    gen::Gen g(32);
    const double m = 2.2;
    for (int t = 0; t < 100; ++t) {
        const Momentum3 p = g.momentum();
        const double E = std::sqrt(m * m + p.norm() * p.norm());
        Eigen::Matrix4cd B;
        const auto [up, vp] = neutron_spinors(p, +1, m);
        const auto [um, vm] = neutron_spinors(p, -1, m);
        B << up, um, vp, vm;
        CHECK((B.adjoint() * B - Eigen::Matrix4cd::Identity()).norm() < 1e-12);
        const Mat4 H = free_dirac_matrix(p, m);
        CHECK((H * up - E * up).norm() < 1e-12);
        CHECK((H * um - E * um).norm() < 1e-12);
        CHECK((H * vp + E * vp).norm() < 1e-12);
        CHECK((H * vm + E * vm).norm() < 1e-12);
    }
}

TEST_CASE("free dirac matrix explicit form") {
    const Momentum3 p{0.3, -0.4, 1.1};
    const Mat4 H = free_dirac_matrix(p, 2.0);
    const Eigen::Matrix2cd s = sigma_dot(p);
    CHECK((H.topLeftCorner<2, 2>() - 2.0 * Eigen::Matrix2cd::Identity()).norm() == 0.0);
    CHECK((H.bottomRightCorner<2, 2>() + 2.0 * Eigen::Matrix2cd::Identity()).norm() == 0.0);
    CHECK((H.topRightCorner<2, 2>() - s).norm() < 1e-15);
    CHECK((H.bottomLeftCorner<2, 2>() - s).norm() < 1e-15);
}

TEST_CASE("neutrino spinors") {
    const Spinor4 u = neutrino_U({0, 0, 1}, -1);
    Spinor4 ref;
    ref << 0, 1, 0, -1;
    CHECK((u - ref / std::sqrt(2.0)).norm() < 1e-15);
    CHECK_THROWS(neutrino_spinors({0, 0, 0}));
    gen::Gen g(33);
    const Mat4 g5 = GammaAlgebra::get().gamma5;
    for (int t = 0; t < 100; ++t) {
        const Momentum3 p = g.momentum();
        const auto [un, wn] = neutrino_spinors(p);
        CHECK(std::abs(un.norm() - 1) < 1e-14);
        CHECK(std::abs(wn.norm() - 1) < 1e-14);
        CHECK((wn - neutrino_V(-p, +1)).norm() == 0.0);
        // positive energy branch and left-handed chirality
        CHECK((free_dirac_matrix(p, 0.0) * un - p.norm() * un).norm() < 1e-12);
        CHECK((0.5 * g5 * un + 0.5 * un).norm() < 1e-14);
    }
}

TEST_CASE("conjugation phase relations off the degenerate rays") {
    gen::Gen g(34);
    for (int t = 0; t < 50; ++t) {
        const Momentum3 p = g.momentum_off_axis();
        const double rho = std::hypot(p.p1, p.p2);
        for (int tl : {+1, -1}) {
            const cplx ph = -cplx(p.p1, tl * p.p2) / rho;
            const Spinor4 cv = charge_conjugate(neutron_spinors(p, tl, 2.2).second);
            CHECK((cv - ph * neutron_spinors(-p, tl, 2.2).first).norm() <= 1e-12);
            const Spinor4 cn = charge_conjugate(neutrino_V(p, tl));
            CHECK((cn - ph * neutrino_U(-p, tl)).norm() <= 1e-12);
        }
    }
}

}
