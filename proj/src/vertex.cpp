#include "ibd/vertex.hpp"

#include "ibd/special_fn.hpp"

#include <cmath>
#include <stdexcept>

namespace ibd {

namespace {

struct PreparedLeg {
    const SpinorForm* charged;
    std::array<Spinor4, 4> w; // bilinear_a(x2) = w_a^dagger charged(x2) or charged(x2)^dagger w_a
    bool charged_left;
};

PreparedLeg prepare(const CurrentLeg& leg) {
    const Mat4& g0 = GammaAlgebra::get().gamma[0];
    PreparedLeg p{&leg.charged, {}, leg.charged_left};
    for (int a = 0; a < 4; ++a) {
        const Mat4 M = g0 * leg.vertex[a];
        p.w[a] = leg.charged_left ? Spinor4(M * leg.neutral) : Spinor4(M.adjoint() * leg.neutral);
    }
    return p;
}

// sum_a legA_a * legB_a at x2
cplx contracted(const PreparedLeg& A, const PreparedLeg& B, double x2, double eB) {
    const Spinor4 ca = A.charged->eval(x2, eB);
    const Spinor4 cb = B.charged->eval(x2, eB);
    cplx acc = 0.0;
    for (int a = 0; a < 4; ++a) {
        const cplx la = A.charged_left ? ca.dot(A.w[a]) : A.w[a].dot(ca);
        const cplx lb = B.charged_left ? cb.dot(B.w[a]) : B.w[a].dot(cb);
        acc += la * lb;
    }
    return acc;
}

std::pair<cplx, double> integrate(const PreparedLeg& A, const PreparedLeg& B, double r2, int sign, double eB,
                                  int order) {
    const QuadratureRule& rule = gauss_hermite_cached(order);
    const double mid = 0.5 * (A.charged->center + B.charged->center);
    const double s = 1.0 / std::sqrt(eB);
    cplx sum = 0.0;
    double l1 = 0.0;
    for (int i = 0; i < rule.order; ++i) {
        const double x2 = mid + s * rule.nodes[i];
        const cplx f = contracted(A, B, x2, eB) * std::polar(1.0, sign * x2 * r2);
        sum += rule.scaled_weights[i] * f;
        l1 += rule.scaled_weights[i] * std::abs(f);
    }
    return {s * sum, s * l1};
}

} // namespace

OverlapResult overlap_x2(const CurrentLeg& A, const CurrentLeg& B, double r2, int sign, double eB,
                         const QuadSettings& qs) {
    OverlapResult res;
    if (A.charged.zero || B.charged.zero) return res;
    const PreparedLeg pa = prepare(A), pb = prepare(B);
    int q = qs.base_order;
    auto [prev, l1] = integrate(pa, pb, r2, sign, eB, q);
    while (true) {
        const int q2 = 2 * q;
        if (q2 > qs.max_order) {
            res.value = prev;
            res.order = q;
            res.converged = false;
            return res;
        }
        auto [cur, l1c] = integrate(pa, pb, r2, sign, eB, q2);
        const double d = std::abs(cur - prev);
        if (d <= qs.rel_tol * std::abs(cur) || d <= 1e-15 * l1c) {
            res.value = cur;
            res.order = q2;
            res.diff = d;
            return res;
        }
        prev = cur;
        q = q2;
    }
}

// ---- amplitudes ----

namespace {

std::array<Mat4, 4> hadronic_set(const VertexContext& ctx) {
    std::array<Mat4, 4> v;
    for (int a = 0; a < 4; ++a) v[a] = hadronic_vertex(a, ctx.g_A);
    return v;
}

std::array<Mat4, 4> leptonic_set(const VertexContext& ctx) {
    std::array<Mat4, 4> v;
    for (int a = 0; a < 4; ++a) {
        v[a] = leptonic_vertex(a);
        if (ctx.metric == Metric::euclidean) v[a] *= GammaAlgebra::metric[a];
    }
    return v;
}

} // namespace

OverlapResult vertex_overlap(int process, const ChargedMode& xi1, const ChargedMode& xi2, const NeutronMode& xi3,
                             const Momentum3& xi4, const VertexContext& ctx) {
    if (process < 1 || process > 4) throw std::invalid_argument("amplitude: process must be 1..4");
    const double eB = ctx.eB;
    const Spinor4 un = neutron_spinors(xi3.p, xi3.twice_lambda, ctx.masses.m_n).first;
    const Spinor4 unu = neutrino_U(xi4, -1);
    const double r2 = xi3.p.p2 + xi4.p2;

    CurrentLeg had, lep;
    had.vertex = hadronic_set(ctx);
    lep.vertex = leptonic_set(ctx);
    had.neutral = un;
    lep.neutral = unu;
    int sign = 1;
    switch (process) {
    case 1:
        had.charged = spinor_U_form(Species::proton, ctx.masses.m_p, xi2, eB);
        lep.charged = spinor_U_form(Species::electron, ctx.masses.m_e, xi1, eB);
        had.charged_left = lep.charged_left = true;
        sign = +1;
        break;
    case 2:
        had.charged = spinor_U_form(Species::proton, ctx.masses.m_p, xi2, eB);
        lep.charged = spinor_U_form(Species::electron, ctx.masses.m_e, xi1, eB);
        had.charged_left = lep.charged_left = false;
        sign = -1;
        break;
    case 3:
        had.charged = field_spinor_W_form(Species::proton, ctx.masses.m_p, xi2, eB);
        lep.charged = field_spinor_W_form(Species::electron, ctx.masses.m_e, xi1, eB);
        had.charged_left = lep.charged_left = false;
        sign = -1;
        break;
    case 4:
        had.charged = field_spinor_W_form(Species::proton, ctx.masses.m_p, xi2, eB);
        lep.charged = field_spinor_W_form(Species::electron, ctx.masses.m_e, xi1, eB);
        had.charged_left = lep.charged_left = true;
        sign = +1;
        break;
    }
    return overlap_x2(had, lep, r2, sign, eB, ctx.quad);
}

cplx amplitude(int process, const ChargedMode& xi1, const ChargedMode& xi2, const NeutronMode& xi3,
               const Momentum3& xi4, const KernelSpec& spec, const VertexContext& ctx, OverlapResult* info) {
    const OverlapResult ov = vertex_overlap(process, xi1, xi2, xi3, xi4, ctx);
    if (info) *info = ov;
    const int beta = process <= 2 ? 1 : 2;
    cplx kern = eval_F(spec, beta, xi2, xi3.p) * eval_G(spec, beta, xi1, xi4);
    if (process == 2 || process == 4) kern = std::conj(kern);
    return ov.value * kern;
}

} // namespace ibd
