#include "ibd/free_spinors.hpp"

#include <cmath>
#include <stdexcept>

namespace ibd {

double Momentum3::norm() const { return std::sqrt(p1 * p1 + p2 * p2 + p3 * p3); }

namespace {

HelicityPair helicity_or_rest(const Momentum3& p) {
    const double a = p.norm();
    const double rho2 = p.p1 * p.p1 + p.p2 * p.p2;
    HelicityPair h;
    if (rho2 == 0.0 && p.p3 >= 0.0) {
        h.plus << 1.0, 0.0;
        h.minus << 0.0, 1.0;
        return h;
    }
    // |p| - p3 without cancellation
    const double d = p.p3 > 0.0 ? rho2 / (a + p.p3) : a - p.p3;
    const double nrm = 1.0 / std::sqrt(2.0 * a * d);
    h.plus << cplx(p.p1, -p.p2) * nrm, d * nrm;
    h.minus << -d * nrm, cplx(p.p1, p.p2) * nrm;
    return h;
}

Spinor4 stack(const Eigen::Vector2cd& top, const Eigen::Vector2cd& bottom) {
    Spinor4 s;
    s << top, bottom;
    return s;
}

void check_lambda(int twice_lambda) {
    if (twice_lambda != 1 && twice_lambda != -1) throw std::invalid_argument("helicity must be +1/2 or -1/2");
}

} // namespace

HelicityPair helicity_basis(const Momentum3& p) {
    if (p.norm() == 0.0) throw std::invalid_argument("helicity_basis: |p| = 0");
    return helicity_or_rest(p);
}

std::pair<Spinor4, Spinor4> neutron_spinors(const Momentum3& p, int twice_lambda, double m_n) {
    check_lambda(twice_lambda);
    if (!(m_n > 0)) throw std::invalid_argument("neutron_spinors: m_n must be > 0");
    const double a = p.norm();
    const double E = std::sqrt(a * a + m_n * m_n);
    const double ap = std::sqrt((1.0 + m_n / E) / 2.0);
    const double am = std::sqrt(std::max(0.0, (1.0 - m_n / E) / 2.0));
    const HelicityPair hp = helicity_or_rest(p);
    const Eigen::Vector2cd& h = twice_lambda > 0 ? hp.plus : hp.minus;
    const double sg = twice_lambda;
    return {stack(ap * h, sg * am * h), stack(-sg * am * h, ap * h)};
}

Spinor4 neutrino_U(const Momentum3& p, int twice_lambda) {
    check_lambda(twice_lambda);
    const HelicityPair hp = helicity_basis(p);
    const Eigen::Vector2cd& h = twice_lambda > 0 ? hp.plus : hp.minus;
    return stack(h, double(twice_lambda) * h) / std::sqrt(2.0);
}

Spinor4 neutrino_V(const Momentum3& p, int twice_lambda) {
    check_lambda(twice_lambda);
    const HelicityPair hp = helicity_basis(p);
    const Eigen::Vector2cd& h = twice_lambda > 0 ? hp.plus : hp.minus;
    return stack(-double(twice_lambda) * h, h) / std::sqrt(2.0);
}

std::pair<Spinor4, Spinor4> neutrino_spinors(const Momentum3& p) { return {neutrino_U(p, -1), neutrino_V(-p, +1)}; }

Mat4 free_dirac_matrix(const Momentum3& p, double mass) {
    Eigen::Matrix2cd sp;
    sp << p.p3, cplx(p.p1, -p.p2), cplx(p.p1, p.p2), -p.p3;
    Mat4 H = Mat4::Zero();
    H.topLeftCorner<2, 2>() = mass * Eigen::Matrix2cd::Identity();
    H.bottomRightCorner<2, 2>() = -mass * Eigen::Matrix2cd::Identity();
    H.topRightCorner<2, 2>() = sp;
    H.bottomLeftCorner<2, 2>() = sp;
    return H;
}

} // namespace ibd
