#pragma once

#include <vector>

namespace ibd {

// Physicists' Hermite polynomial H_n(x).
double hermite_poly(int n, double x);

// Normalized Landau mode I_n(xi) = (sqrt(eB)/(n! 2^n sqrt(pi)))^(1/2) e^(-xi^2/2) H_n(xi),
// with I_{-1} = 0. Normalized so that the integral of I_n^2 over x2 is 1 when
// xi = sqrt(eB)(x2 - c).
double landau_mode(int n, double xi, double eB);

// out[k] = I_k(xi) for k = 0..n_max (out resized to n_max+1).
void landau_modes(int n_max, double xi, double eB, std::vector<double>& out);

// dI_n/dxi = sqrt(n/2) I_{n-1} - sqrt((n+1)/2) I_{n+1}.
double landau_mode_dxi(int n, double xi, double eB);

struct QuadratureRule {
    std::vector<double> nodes;          // strictly increasing
    std::vector<double> weights;        // for weight function e^(-x^2)
    std::vector<double> scaled_weights; // weights[i] * exp(nodes[i]^2), finite for all orders
    int order = 0;
};

constexpr int kDefaultMaxQuadOrder = 512;

// Gauss-Hermite rule (weight e^(-x^2)). Nodes from Golub-Welsch, polished by
// Newton on the normalized Hermite functions; weights from the Christoffel sum.
// Throws std::invalid_argument for order < 1 or order > max_order.
QuadratureRule gauss_hermite(int order, int max_order = kDefaultMaxQuadOrder);

// Cached rule for repeated use; same contract as gauss_hermite.
const QuadratureRule& gauss_hermite_cached(int order);

} // namespace ibd
