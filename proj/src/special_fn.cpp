#include "ibd/special_fn.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <string>

namespace ibd {

double hermite_poly(int n, double x) {
    if (n < 0) throw std::invalid_argument("hermite_poly: n must be >= 0");
    if (n == 0) return 1.0;
    double hm1 = 1.0, h = 2.0 * x;
    for (int k = 1; k < n; ++k) {
        const double hp1 = 2.0 * x * h - 2.0 * k * hm1;
        hm1 = h;
        h = hp1;
    }
    return h;
}

// ---- normalized Hermite functions ----

namespace {

// psi_k(x) = (2^k k! sqrt(pi))^(-1/2) H_k(x) e^(-x^2/2), k = 0..n_max
void hermite_functions(int n_max, double x, double* out) {
    const double psi0 = std::pow(std::numbers::pi, -0.25) * std::exp(-0.5 * x * x);
    out[0] = psi0;
    if (n_max == 0) return;
    out[1] = std::sqrt(2.0) * x * psi0;
    for (int k = 1; k < n_max; ++k)
        out[k + 1] = std::sqrt(2.0 / (k + 1)) * x * out[k] - std::sqrt(double(k) / (k + 1)) * out[k - 1];
}

} // namespace

void landau_modes(int n_max, double xi, double eB, std::vector<double>& out) {
    if (n_max < 0) {
        out.clear();
        return;
    }
    out.resize(static_cast<size_t>(n_max) + 1);
    hermite_functions(n_max, xi, out.data());
    const double s = std::pow(eB, 0.25);
    for (double& v : out) v *= s;
}

double landau_mode(int n, double xi, double eB) {
    if (n < -1) throw std::invalid_argument("landau_mode: n must be >= -1");
    if (!(eB > 0)) throw std::invalid_argument("landau_mode: eB must be > 0");
    if (n == -1) return 0.0;
    std::vector<double> v;
    landau_modes(n, xi, eB, v);
    return v[static_cast<size_t>(n)];
}

double landau_mode_dxi(int n, double xi, double eB) {
    if (n < 0) return 0.0;
    std::vector<double> v;
    landau_modes(n + 1, xi, eB, v);
    const double lower = n > 0 ? std::sqrt(n / 2.0) * v[static_cast<size_t>(n) - 1] : 0.0;
    return lower - std::sqrt((n + 1) / 2.0) * v[static_cast<size_t>(n) + 1];
}

// ---- Gauss-Hermite ----

QuadratureRule gauss_hermite(int order, int max_order) {
    if (order < 1) throw std::invalid_argument("gauss_hermite: order must be >= 1");
    if (order > max_order)
        throw std::invalid_argument("gauss_hermite: order " + std::to_string(order) + " exceeds maximum " +
                                    std::to_string(max_order));
    const int n = order;
    Eigen::VectorXd diag = Eigen::VectorXd::Zero(n);
    Eigen::VectorXd sub(std::max(n - 1, 0));
    for (int k = 1; k < n; ++k) sub[k - 1] = std::sqrt(k / 2.0);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
    es.computeFromTridiagonal(diag, sub, Eigen::EigenvaluesOnly);
    std::vector<double> x(es.eigenvalues().data(), es.eigenvalues().data() + n);

    // Newton polish on psi_n, then enforce exact symmetry.
    std::vector<double> psi(static_cast<size_t>(n) + 1);
    for (double& xi : x) {
        for (int it = 0; it < 3; ++it) {
            hermite_functions(n, xi, psi.data());
            const double f = psi[n];
            const double df = std::sqrt(2.0 * n) * psi[n - 1] - xi * psi[n];
            if (df == 0.0) break;
            xi -= f / df;
        }
    }
    for (int i = 0; i < n / 2; ++i) {
        const double a = 0.5 * (x[n - 1 - i] - x[i]);
        x[i] = -a;
        x[n - 1 - i] = a;
    }
    if (n % 2 == 1) x[n / 2] = 0.0;

    QuadratureRule rule;
    rule.order = n;
    rule.nodes = x;
    rule.weights.resize(n);
    rule.scaled_weights.resize(n);
    for (int i = 0; i < n; ++i) {
        hermite_functions(n - 1, x[i], psi.data());
        double s = 0.0;
        for (int k = 0; k < n; ++k) s += psi[k] * psi[k];
        rule.scaled_weights[i] = 1.0 / s;
        rule.weights[i] = rule.scaled_weights[i] * std::exp(-x[i] * x[i]);
    }
    for (int i = 0; i < n / 2; ++i) {
        const double sw = 0.5 * (rule.scaled_weights[i] + rule.scaled_weights[n - 1 - i]);
        rule.scaled_weights[i] = rule.scaled_weights[n - 1 - i] = sw;
        const double w = 0.5 * (rule.weights[i] + rule.weights[n - 1 - i]);
        rule.weights[i] = rule.weights[n - 1 - i] = w;
    }
    return rule;
}

const QuadratureRule& gauss_hermite_cached(int order) {
    static std::mutex mu;
    static std::map<int, std::unique_ptr<QuadratureRule>> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(order);
    if (it == cache.end())
        it = cache.emplace(order, std::make_unique<QuadratureRule>(gauss_hermite(order))).first;
    return *it->second;
}

} // namespace ibd
