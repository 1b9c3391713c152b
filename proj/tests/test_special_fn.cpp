#include "ibd/special_fn.hpp"

#include "gen.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace ibd;

namespace {

// integral over x2 of f(x2) when f has a Gaussian envelope centered at c
template <class F>
double integrate_x2(F f, double c, double eB, int order) {
    const QuadratureRule& q = gauss_hermite_cached(order);
    const double h = 1.0 / std::sqrt(eB);
    double s = 0.0;
    for (int i = 0; i < q.order; ++i) s += h * q.scaled_weights[i] * f(c + h * q.nodes[i]);
    return s;
}

} // namespace

TEST_SUITE("special_fn") {

TEST_CASE("hermite polynomials") {
    CHECK(hermite_poly(0, 3.7) == 1.0);
    CHECK(hermite_poly(1, 2.0) == 4.0);
    // explicit degree-5 polynomial 32x^5 - 160x^3 + 120x at 1.3
    CHECK(hermite_poly(5, 1.3) == doctest::Approx(-76.70623999999998).epsilon(1e-14));
    gen::Gen g(11);
    for (int t = 0; t < 50; ++t) {
        const double x = g.real(-3, 3);
        CHECK(hermite_poly(5, x) == doctest::Approx(32 * std::pow(x, 5) - 160 * std::pow(x, 3) + 120 * x).epsilon(1e-12));
    }
}

TEST_CASE("hermite derivative identity by finite differences") {
    gen::Gen g(12);
    const double h = 1e-5;
    for (int n = 1; n <= 10; ++n)
        for (int t = 0; t < 10; ++t) {
            const double x = g.real(-2, 2);
            const double fd = (hermite_poly(n, x + h) - hermite_poly(n, x - h)) / (2 * h);
            const double exact = 2.0 * n * hermite_poly(n - 1, x);
            CHECK(std::abs(fd - exact) <= 1e-6 * std::max(1.0, std::abs(exact)));
        }
}

TEST_CASE("landau mode values") {
    CHECK(landau_mode(-1, 0.42, 1.0) == 0.0);
    CHECK(landau_mode(0, 0.0, 1.0) == doctest::Approx(0.7511255444649425).epsilon(1e-15));
    // n = 1 in closed form: (sqrt(eB)/(2 sqrt pi))^(1/2) e^(-xi^2/2) 2 xi
    const double xi = 0.7, eB = 2.0;
    const double ref = std::sqrt(std::sqrt(eB) / (2 * std::sqrt(std::numbers::pi))) * std::exp(-xi * xi / 2) * 2 * xi;
    CHECK(landau_mode(1, xi, eB) == doctest::Approx(ref).epsilon(1e-14));
}

TEST_CASE("landau modes orthonormal under the x2 measure") {
    const double eB = 1.0, p1 = 0.37;
    const double c = p1 / eB;
    for (int m = 0; m <= 12; ++m)
        for (int n = 0; n <= 12; ++n) {
            const double v = integrate_x2(
                [&](double x) {
                    const double xi = std::sqrt(eB) * (x - c);
                    return landau_mode(m, xi, eB) * landau_mode(n, xi, eB);
                },
                c, eB, 64);
            CHECK(std::abs(v - (m == n ? 1.0 : 0.0)) < 1e-12);
        }
}

TEST_CASE("landau mode normalization for n <= 20 and several fields") {
    for (double eB : {0.5, 1.0, 2.0})
        for (int n = 0; n <= 20; ++n) {
            const double v = integrate_x2(
                [&](double x) {
                    const double l = landau_mode(n, std::sqrt(eB) * x, eB);
                    return l * l;
                },
                0.0, eB, 64);
            CHECK(std::abs(v - 1.0) < 1e-10);
        }
}

TEST_CASE("landau modes stay finite at high index") {
    for (int n : {60, 120, 199}) {
        const double v = integrate_x2(
            [&](double x) {
                const double l = landau_mode(n, x, 1.0);
                return l * l;
            },
            0.0, 1.0, 256);
        CHECK(std::isfinite(landau_mode(n, 3.0, 1.0)));
        CHECK(std::abs(v - 1.0) < 1e-9);
    }
}

TEST_CASE("landau mode vector and derivative") {
    std::vector<double> out;
    landau_modes(8, 0.3, 1.5, out);
    REQUIRE(out.size() == 9);
    for (int n = 0; n <= 8; ++n) CHECK(out[n] == doctest::Approx(landau_mode(n, 0.3, 1.5)).epsilon(1e-14));
    const double h = 1e-6;
    for (int n = 0; n <= 8; ++n) {
        const double fd = (landau_mode(n, 0.3 + h, 1.5) - landau_mode(n, 0.3 - h, 1.5)) / (2 * h);
        CHECK(landau_mode_dxi(n, 0.3, 1.5) == doctest::Approx(fd).epsilon(1e-7));
    }
}

TEST_CASE("gauss hermite small orders") {
    const QuadratureRule r1 = gauss_hermite(1);
    REQUIRE(r1.nodes.size() == 1);
    CHECK(r1.nodes[0] == doctest::Approx(0.0));
    CHECK(r1.weights[0] == doctest::Approx(std::sqrt(std::numbers::pi)).epsilon(1e-14));
    const QuadratureRule r2 = gauss_hermite(2);
    CHECK(r2.nodes[0] == doctest::Approx(-0.7071067811865475).epsilon(1e-14));
    CHECK(r2.nodes[1] == doctest::Approx(0.7071067811865475).epsilon(1e-14));
    CHECK(r2.weights[0] == doctest::Approx(0.8862269254527579).epsilon(1e-14));
    CHECK(r2.weights[1] == doctest::Approx(0.8862269254527579).epsilon(1e-14));
    double m2 = 0.0;
    for (int i = 0; i < 2; ++i) m2 += r2.weights[i] * r2.nodes[i] * r2.nodes[i];
    CHECK(std::abs(m2 - std::sqrt(std::numbers::pi) / 2) < 1e-14);
}

TEST_CASE("gauss hermite exact on monomial moments") {
    for (int order : {3, 8, 20, 64}) {
        const QuadratureRule& q = gauss_hermite_cached(order);
        for (int i = 0; i < order; ++i) {
            CHECK(q.nodes[i] == doctest::Approx(-q.nodes[order - 1 - i]).epsilon(1e-13));
            if (i > 0) CHECK(q.nodes[i] > q.nodes[i - 1]);
        }
        const int max_deg = std::min(2 * order - 1, 40);
        for (int k = 0; k <= max_deg; ++k) {
            double s = 0.0;
            for (int i = 0; i < order; ++i) s += q.weights[i] * std::pow(q.nodes[i], k);
            // integral of x^k e^(-x^2) = Gamma((k+1)/2) for even k, 0 for odd
            // odd moments cancel, so the error is measured against the absolute moment
            const double scale = std::tgamma((k + 1) / 2.0);
            const double exact = k % 2 ? 0.0 : scale;
            INFO("order " << order << " k " << k);
            CHECK(std::abs(s - exact) <= 1e-12 * std::max(1.0, scale));
        }
    }
}

TEST_CASE("gauss hermite rejects bad orders") {
    CHECK_THROWS_AS(gauss_hermite(0), std::invalid_argument);
    CHECK_THROWS_AS(gauss_hermite(513), std::invalid_argument);
    CHECK_NOTHROW(gauss_hermite(512));
}

}
