#include "ibd/kernels.hpp"

#include "ibd/gamma.hpp"

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <boost/math/tools/minima.hpp>

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace ibd {

namespace {
constexpr double kPi = std::numbers::pi;
}

// ---- profiles ----

cplx ChargedProfile::eval(const ChargedMode& m, int decoupled_s) const {
    if (m.n == 0 && m.s == decoupled_s) return 0.0;
    const double mag = amplitude * std::pow(rho, m.n) * std::exp(-(m.p1 * m.p1 + m.p3 * m.p3) / (2.0 * width * width));
    return std::polar(mag, phase * m.p1);
}

double ChargedProfile::norm2() const {
    const double landau = (1.0 + rho * rho) / (1.0 - rho * rho);
    return amplitude * amplitude * landau * kPi * width * width;
}

double NeutralProfile::eval(const Momentum3& p) const {
    const double q = kappa[0] * p.p1 * p.p1 + kappa[1] * p.p2 * p.p2 + kappa[2] * p.p3 * p.p3;
    const double radial = eta == 0.0 ? 1.0 : std::pow(p.norm(), eta);
    return radial * std::exp(-0.5 * q);
}

double NeutralProfile::d1(const Momentum3& p) const {
    const double r2 = p.p1 * p.p1 + p.p2 * p.p2 + p.p3 * p.p3;
    const double a = (eta != 0.0 ? eta / r2 : 0.0) - kappa[0];
    return eval(p) * a * p.p1;
}

double NeutralProfile::d2(const Momentum3& p) const {
    const double r2 = p.p1 * p.p1 + p.p2 * p.p2 + p.p3 * p.p3;
    const double a = (eta != 0.0 ? eta / r2 : 0.0) - kappa[1];
    return eval(p) * a * p.p2;
}

double NeutralProfile::d12(const Momentum3& p) const {
    const double r2 = p.p1 * p.p1 + p.p2 * p.p2 + p.p3 * p.p3;
    const double e = eta != 0.0 ? eta / r2 : 0.0;
    const double a1 = e - kappa[0], a2 = e - kappa[1];
    const double extra = eta != 0.0 ? 2.0 * eta / (r2 * r2) : 0.0;
    return eval(p) * p.p1 * p.p2 * (a1 * a2 - extra);
}

double NeutralProfile::norm2() const {
    if (eta == 0.0) return std::pow(kPi, 1.5) / std::sqrt(kappa[0] * kappa[1] * kappa[2]);
    if (isotropic()) return 2.0 * kPi * std::tgamma(eta + 1.5) * std::pow(kappa[0], -eta - 1.5);
    const double kmin = std::min({kappa[0], kappa[1], kappa[2]});
    return spherical_integral([this](const Momentum3& p) { const double g = eval(p); return g * g; }, 0.0,
                              14.0 / std::sqrt(kmin));
}

// ---- kernel spec ----

void KernelSpec::validate() const {
    auto check = [](const KernelFactor& f, const std::string& name) {
        const auto& c = f.charged;
        if (!std::isfinite(c.amplitude)) throw std::invalid_argument(name + ": amplitude must be finite");
        if (!(c.width > 0)) throw std::invalid_argument(name + ": width must be > 0");
        if (!(c.rho >= 0 && c.rho < 1)) throw std::invalid_argument(name + ": rho must be in [0, 1)");
        for (double k : f.neutral.kappa)
            if (!(k > 0) || !std::isfinite(k))
                throw std::invalid_argument(name + ": neutral width must be finite and > 0 (kernel not square integrable)");
        if (!(f.neutral.eta >= 0)) throw std::invalid_argument(name + ": eta must be >= 0");
    };
    check(F[0], "F1");
    check(F[1], "F2");
    check(G[0], "G1");
    check(G[1], "G2");
}

KernelSpec KernelSpec::scaled(double lambda) const {
    KernelSpec s = *this;
    for (auto* f : {&s.F[0], &s.F[1], &s.G[0], &s.G[1]}) f->charged.amplitude *= lambda;
    return s;
}

int decoupled_spin(char leg, int beta) {
    if (leg == 'F') return beta == 1 ? -1 : +1;
    return beta == 1 ? +1 : -1;
}

cplx eval_F(const KernelSpec& k, int beta, const ChargedMode& xi2, const Momentum3& p3) {
    const auto& f = k.F[beta - 1];
    return f.charged.eval(xi2, decoupled_spin('F', beta)) * f.neutral.eval(p3);
}

cplx eval_G(const KernelSpec& k, int beta, const ChargedMode& xi1, const Momentum3& p4) {
    const auto& f = k.G[beta - 1];
    return f.charged.eval(xi1, decoupled_spin('G', beta)) * f.neutral.eval(p4);
}

double norm_F(const KernelSpec& k, int beta) {
    const auto& f = k.F[beta - 1];
    return std::sqrt(f.charged.norm2() * 2.0 * f.neutral.norm2());
}

double norm_G(const KernelSpec& k, int beta) {
    const auto& f = k.G[beta - 1];
    return std::sqrt(f.charged.norm2() * f.neutral.norm2());
}

double norm_G_at(const KernelSpec& k, int beta, const Momentum3& p4) {
    const auto& f = k.G[beta - 1];
    return std::sqrt(f.charged.norm2()) * std::abs(f.neutral.eval(p4));
}

// ---- spherical quadrature ----

double spherical_integral(const std::function<double(const Momentum3&)>& h, double r_min, double r_max,
                          int radial_panels) {
    using GL = boost::math::quadrature::gauss<double, 30>;
    constexpr int n_phi = 32;
    const double dr = (r_max - r_min) / radial_panels;
    double total = 0.0;
    for (int panel = 0; panel < radial_panels; ++panel) {
        const double a = r_min + panel * dr;
        total += GL::integrate(
            [&](double r) {
                const double ang = GL::integrate(
                    [&](double c) {
                        const double s = std::sqrt(std::max(0.0, 1.0 - c * c));
                        double acc = 0.0;
                        for (int k = 0; k < n_phi; ++k) {
                            const double phi = 2.0 * kPi * (k + 0.5) / n_phi;
                            acc += h({r * s * std::cos(phi), r * s * std::sin(phi), r * c});
                        }
                        return acc * 2.0 * kPi / n_phi;
                    },
                    -1.0, 1.0);
                return ang * r * r;
            },
            a, a + dr);
    }
    return total;
}

// ---- infrared hypothesis ----

double softball_norm(const KernelSpec& k, int beta, double sigma) {
    const auto& f = k.G[beta - 1];
    const double c2 = f.charged.norm2();
    if (c2 == 0.0 || sigma <= 0.0) return 0.0;
    const auto& g = f.neutral;
    double radial;
    if (g.isotropic()) {
        const double a = g.eta + 1.5;
        const double kap = g.kappa[0];
        radial = 4.0 * kPi * 0.5 * std::pow(kap, -a) * boost::math::tgamma_lower(a, kap * sigma * sigma);
    } else {
        radial = spherical_integral([&](const Momentum3& p) { const double v = g.eval(p); return v * v; }, 0.0, sigma, 2);
    }
    return std::sqrt(c2 * radial);
}

InfraredHypothesis check_infrared_hypothesis(const KernelSpec& k, int beta) {
    InfraredHypothesis rep;
    const auto& f = k.G[beta - 1];
    const double c2 = f.charged.norm2();
    const auto& g = f.neutral;
    const double kmin = std::min({g.kappa[0], g.kappa[1], g.kappa[2]});
    const double scale = 1.0 / std::sqrt(kmin);

    // (i): radial integrand r^(2 eta) e^(-kappa r^2) is integrable at 0 for every eta >= 0
    rep.i_finite = g.eta > -0.5;
    const double numeric = spherical_integral(
        [&](const Momentum3& p) {
            const double v = g.eval(p);
            const double r2 = p.p1 * p.p1 + p.p2 * p.p2 + p.p3 * p.p3;
            return v * v / r2;
        },
        0.0, 14.0 * scale);
    rep.i_value_numeric = c2 * numeric;
    if (g.isotropic())
        rep.i_value = c2 * 2.0 * kPi * std::tgamma(g.eta + 0.5) * std::pow(g.kappa[0], -g.eta - 0.5);
    else
        rep.i_value = rep.i_value_numeric;

    if (c2 == 0.0) return rep;

    // (ii): sup over sigma of softball(sigma)/sigma, log grid then Brent refinement
    auto ratio = [&](double ls) {
        const double s = std::exp(ls);
        return softball_norm(k, beta, s) / s;
    };
    const double lo = std::log(1e-4 * scale), hi = std::log(1e2 * scale);
    const int n = 120;
    int best = 0;
    double best_val = -1.0;
    for (int i = 0; i <= n; ++i) {
        const double v = ratio(lo + (hi - lo) * i / n);
        if (v > best_val) {
            best_val = v;
            best = i;
        }
    }
    const double a = lo + (hi - lo) * std::max(best - 1, 0) / n;
    const double b = lo + (hi - lo) * std::min(best + 1, n) / n;
    const auto res = boost::math::tools::brent_find_minima([&](double ls) { return -ratio(ls); }, a, b, 40);
    rep.ii_Ktilde = std::max(best_val, -res.second);
    rep.sigma_at_sup = std::exp(res.first);
    const double s1 = 1e-4 * scale, s2 = 2e-4 * scale;
    rep.ii_slope = std::log(softball_norm(k, beta, s2) / softball_norm(k, beta, s1)) / std::log(s2 / s1);
    return rep;
}

// ---- derivative hypothesis ----

DerivativeHypothesis check_derivative_hypothesis(const KernelSpec& k, int beta, double r_in, double r_out) {
    DerivativeHypothesis rep;
    rep.r_in = r_in;
    rep.r_out = r_out;
    const auto& f = k.G[beta - 1];
    const double c = std::sqrt(f.charged.norm2());
    const auto& g = f.neutral;
    auto sq = [](double v) { return v * v; };
    rep.norm_d1 = c * std::sqrt(spherical_integral([&](const Momentum3& p) { return sq(g.d1(p)); }, r_in, r_out));
    rep.norm_d2 = c * std::sqrt(spherical_integral([&](const Momentum3& p) { return sq(g.d2(p)); }, r_in, r_out));
    rep.norm_d12 = c * std::sqrt(spherical_integral([&](const Momentum3& p) { return sq(g.d12(p)); }, r_in, r_out));

    const Momentum3 pts[] = {{1.0, 1.0, 1.0}, {0.3, -0.7, 0.5}, {-1.2, 0.4, 0.9}, {0.8, 0.6, -0.35}};
    const double h = 1e-4;
    double worst = 0.0;
    for (const auto& p : pts) {
        const double g0 = std::abs(g.eval(p));
        auto at = [&](double a, double b) { return g.eval({p.p1 + a, p.p2 + b, p.p3}); };
        const double fd1 = (at(h, 0) - at(-h, 0)) / (2 * h);
        const double fd2 = (at(0, h) - at(0, -h)) / (2 * h);
        const double fd12 = (at(h, h) - at(h, -h) - at(-h, h) + at(-h, -h)) / (4 * h * h);
        auto rel = [&](double fd, double an) { return std::abs(fd - an) / std::max(std::abs(an), g0); };
        worst = std::max({worst, rel(fd1, g.d1(p)), rel(fd2, g.d2(p)), rel(fd12, g.d12(p))});
    }
    rep.fd_max_rel_err = worst;
    rep.pass = std::isfinite(rep.norm_d1) && std::isfinite(rep.norm_d2) && std::isfinite(rep.norm_d12) && worst < 1e-5;
    return rep;
}

// ---- infrared cutoff ----

double chi0(double t) {
    if (t <= 1.0) return 1.0;
    if (t >= 2.0) return 0.0;
    const double s = t - 1.0;
    const double a = std::exp(-1.0 / (1.0 - s));
    const double b = std::exp(-1.0 / s);
    return a / (a + b);
}

double ir_cutoff_factor_radius(double sigma, double radius) {
    if (!(sigma > 0)) throw std::invalid_argument("ir_cutoff_factor: sigma must be > 0");
    return 1.0 - chi0(radius / sigma);
}

double ir_cutoff_factor(double sigma, const Momentum3& p4) { return ir_cutoff_factor_radius(sigma, p4.norm()); }

// ---- constants ----

double gamma_factor(double m_e, double delta) { return 1.0 - delta / (2.0 * m_e - delta); }

std::vector<double> sigma_sequence(double m_e, double delta, int n_max) {
    if (!(delta > 0 && delta < m_e)) throw std::invalid_argument("sigma_sequence: delta must lie in (0, m_e)");
    std::vector<double> s{2.0 * m_e + 1.0};
    if (n_max >= 1) s.push_back(m_e - delta / 2.0);
    const double g = gamma_factor(m_e, delta);
    for (int n = 2; n <= n_max; ++n) s.push_back(g * s.back());
    return s;
}

namespace {

double max_singular_value(const Mat4& M) {
    Eigen::JacobiSVD<Mat4> svd(M);
    return svd.singularValues()[0];
}

} // namespace

ModelConstants derive_constants(const KernelSpec& k, const Masses& m, const PhysicalConstants& pc, double delta,
                                double safety) {
    if (!(delta > 0 && delta < m.m_e)) throw std::invalid_argument("derive_constants: delta must lie in (0, m_e)");
    if (!(m.m_e > 0 && m.m_p > 0 && m.m_n > 0)) throw std::invalid_argument("derive_constants: masses must be > 0");
    k.validate();
    ModelConstants c;
    c.safety = safety;
    c.phys = pc;
    c.masses = m;
    c.delta = delta;
    for (int a = 0; a < 4; ++a) {
        c.sup_hadronic = std::max(c.sup_hadronic, max_singular_value(hadronic_vertex(a, pc.g_A)));
        c.sup_leptonic = std::max(c.sup_leptonic, max_singular_value(leptonic_vertex(a)));
    }
    c.C0 = 0.5 * (1.0 / m.m_e + 1.0 / m.m_p) * c.sup_hadronic * c.sup_leptonic;
    for (int b = 1; b <= 2; ++b) {
        c.normF[b - 1] = norm_F(k, b);
        c.normG[b - 1] = norm_G(k, b);
        c.K += c.normF[b - 1] * c.normG[b - 1];
    }
    c.C = 2.0 * c.C0;
    c.B = 2.0 * m.m_p * c.C0;
    const double inf = std::numeric_limits<double>::infinity();
    c.g0 = c.K > 0 ? safety / (2.0 * c.C0 * c.K) : inf;
    const double x = c.K > 0 ? 1.0 - c.g0 * c.K * c.C : 1.0;
    c.Ct = c.C / x;
    c.Bt = c.B / (x * x);
    for (int b = 1; b <= 2; ++b) c.Ktilde_G = std::max(c.Ktilde_G, check_infrared_hypothesis(k, b).ii_Ktilde);
    c.Ktilde_FG = 2.0 * (c.normF[0] + c.normF[1]) * c.Ktilde_G;
    c.gamma = gamma_factor(m.m_e, delta);
    auto Dt = [&](double mass) {
        const double pre = std::max(4.0 * (2.0 * mass + 1.0) * c.gamma / (2.0 * mass - delta), 2.0);
        return pre * c.Ktilde_FG * (2.0 * mass * c.Ct + c.Bt);
    };
    c.Dt = Dt(m.m_e);
    c.Dt_mn = Dt(m.m_n);
    const double gg = c.gamma - c.gamma * c.gamma;
    auto g1 = [&](double D) { return safety * std::min({1.0, c.g0, D > 0 ? gg / (3.0 * D) : inf}); };
    c.g1 = g1(c.Dt);
    c.g1_mn = g1(c.Dt_mn);
    c.g3 = c.K > 0 ? 1.0 / (2.0 * c.K * (2.0 * c.C + c.B)) : inf;
    c.g2 = std::min(c.g3, c.g1);
    c.g2_mn = std::min(c.g3, c.g1_mn);
    c.M = c.K > 0 ? c.g0 * c.K * c.B / x * (1.0 + 1.0 / x) : 0.0;
    return c;
}

} // namespace ibd
