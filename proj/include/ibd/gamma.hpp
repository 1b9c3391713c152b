#pragma once

#include "ibd/landau_spinors.hpp"

#include <array>

namespace ibd {

// Dirac matrices in the standard representation.
struct GammaAlgebra {
    std::array<Mat4, 4> gamma; // gamma^mu (upper index)
    Mat4 gamma5;               // [[0, I], [I, 0]]
    std::array<Mat4, 3> alpha;
    Mat4 beta;
    static constexpr std::array<double, 4> metric{1.0, -1.0, -1.0, -1.0};
    static const GammaAlgebra& get();
};

// gamma^alpha (1 - g_A gamma5), upper index
Mat4 hadronic_vertex(int alpha, double g_A);
// gamma_alpha (1 - gamma5), lower index (metric sign included)
Mat4 leptonic_vertex(int alpha);

// <u, gamma^0 Gamma v>, antilinear in u
cplx bilinear(const Spinor4& u, const Mat4& Gamma, const Spinor4& v);

} // namespace ibd
