#include "ibd/gamma.hpp"

namespace ibd {

const GammaAlgebra& GammaAlgebra::get() {
    static const GammaAlgebra g = [] {
        GammaAlgebra a;
        const cplx I(0.0, 1.0);
        std::array<Eigen::Matrix2cd, 3> sigma;
        sigma[0] << 0, 1, 1, 0;
        sigma[1] << 0, -I, I, 0;
        sigma[2] << 1, 0, 0, -1;
        const Eigen::Matrix2cd id = Eigen::Matrix2cd::Identity();
        a.beta = Mat4::Zero();
        a.beta.topLeftCorner<2, 2>() = id;
        a.beta.bottomRightCorner<2, 2>() = -id;
        a.gamma[0] = a.beta;
        for (int i = 0; i < 3; ++i) {
            a.alpha[i] = Mat4::Zero();
            a.alpha[i].topRightCorner<2, 2>() = sigma[i];
            a.alpha[i].bottomLeftCorner<2, 2>() = sigma[i];
            a.gamma[i + 1] = a.beta * a.alpha[i];
        }
        a.gamma5 = Mat4::Zero();
        a.gamma5.topRightCorner<2, 2>() = id;
        a.gamma5.bottomLeftCorner<2, 2>() = id;
        return a;
    }();
    return g;
}

Mat4 hadronic_vertex(int alpha, double g_A) {
    const auto& G = GammaAlgebra::get();
    return G.gamma[alpha] * (Mat4::Identity() - g_A * G.gamma5);
}

Mat4 leptonic_vertex(int alpha) {
    const auto& G = GammaAlgebra::get();
    return GammaAlgebra::metric[alpha] * G.gamma[alpha] * (Mat4::Identity() - G.gamma5);
}

cplx bilinear(const Spinor4& u, const Mat4& Gamma, const Spinor4& v) {
    return u.dot(GammaAlgebra::get().gamma[0] * (Gamma * v));
}

} // namespace ibd
