#include "ibd/spectra.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>

namespace ibd {

// ---- eigensolver ----

namespace {

EigenResult dense_solve(const SparseOperator& H, int k, const EigenOptions& opt) {
    EigenResult r;
    r.dense = true;
    r.tol = opt.tol_dense;
    const Eigen::MatrixXcd A = H.to_dense();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(A);
    if (es.info() != Eigen::Success) throw std::runtime_error("dense eigensolver failed");
    for (int i = 0; i < k; ++i) {
        r.values.push_back(es.eigenvalues()[i]);
        VecC v = es.eigenvectors().col(i);
        r.residuals.push_back((H.apply(v) - es.eigenvalues()[i] * v).norm());
        r.vectors.push_back(std::move(v));
    }
    r.converged = std::all_of(r.residuals.begin(), r.residuals.end(), [&](double x) { return x <= opt.tol_dense; });
    if (!r.converged) throw std::runtime_error("dense eigensolver residual above tolerance");
    return r;
}

void orthogonalize(VecC& v, const std::vector<VecC>& basis) {
    for (int pass = 0; pass < 2; ++pass)
        for (const auto& q : basis) v -= q.dot(v) * q;
}

// Lowest eigenpairs one at a time: Lanczos with full reorthogonalization in
// the complement of the already locked vectors, restarted from the best Ritz vector.
// The projected matrix keeps every Gram-Schmidt coefficient, so it stays exact
// after the Krylov space has become invariant (degenerate spectra).
EigenResult lanczos_solve(const SparseOperator& H, int k, const EigenOptions& opt) {
    EigenResult r;
    r.tol = opt.tol_lanczos;
    const std::int64_t n = H.dim();
    std::mt19937_64 rng(opt.seed);
    std::normal_distribution<double> nd;
    std::vector<VecC> locked;
    for (int e = 0; e < k; ++e) {
        VecC v(n);
        for (std::int64_t i = 0; i < n; ++i) v[i] = cplx(nd(rng), nd(rng));
        orthogonalize(v, locked);
        v.normalize();
        double best_res = INFINITY;
        bool done = false;
        for (int restart = 0; restart <= opt.max_restarts && !done; ++restart) {
            const int m = static_cast<int>(std::min<std::int64_t>(opt.krylov_dim, n - static_cast<std::int64_t>(locked.size())));
            std::vector<VecC> Q;
            Eigen::MatrixXcd T = Eigen::MatrixXcd::Zero(m, m);
            Q.push_back(v);
            int mm = 0;
            for (int j = 0; j < m; ++j) {
                VecC w = H.apply(Q[static_cast<size_t>(j)]);
                ++r.iterations;
                ++mm;
                const double wn = w.norm();
                for (int pass = 0; pass < 2; ++pass) {
                    orthogonalize(w, locked);
                    for (int i = 0; i <= j; ++i) {
                        const cplx h = Q[static_cast<size_t>(i)].dot(w);
                        T(i, j) += h;
                        w -= h * Q[static_cast<size_t>(i)];
                    }
                }
                const double b = w.norm();
                if (j + 1 == m || b <= 1e-12 * std::max(wn, 1.0)) break;
                T(j + 1, j) = b;
                Q.push_back(w / b);
            }
            const Eigen::MatrixXcd Tm = T.topLeftCorner(mm, mm);
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> proj(0.5 * (Tm + Tm.adjoint()));
            VecC x = VecC::Zero(n);
            for (int j = 0; j < mm; ++j) x += proj.eigenvectors()(j, 0) * Q[static_cast<size_t>(j)];
            orthogonalize(x, locked);
            x.normalize();
            const cplx rq = x.dot(H.apply(x));
            const double res = (H.apply(x) - rq.real() * x).norm();
            best_res = std::min(best_res, res);
            v = x;
            if (res <= opt.tol_lanczos) {
                r.values.push_back(rq.real());
                r.residuals.push_back(res);
                r.vectors.push_back(x);
                locked.push_back(x);
                done = true;
            }
        }
        if (!done) {
            r.converged = false;
            throw std::runtime_error("Lanczos did not converge; best residual " + std::to_string(best_res));
        }
    }
    std::vector<int> order(r.values.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) { return r.values[static_cast<size_t>(a)] < r.values[static_cast<size_t>(b)]; });
    EigenResult s = r;
    for (size_t i = 0; i < order.size(); ++i) {
        s.values[i] = r.values[static_cast<size_t>(order[i])];
        s.vectors[i] = r.vectors[static_cast<size_t>(order[i])];
        s.residuals[i] = r.residuals[static_cast<size_t>(order[i])];
    }
    return s;
}

} // namespace

EigenResult ground_state(const SparseOperator& H, int k, const EigenOptions& opt) {
    if (k < 1) throw std::invalid_argument("ground_state: k must be >= 1");
    if (H.dim() == 0) throw std::invalid_argument("ground_state: empty operator");
    k = static_cast<int>(std::min<std::int64_t>(k, H.dim()));
    if (!opt.force_lanczos && H.dim() <= opt.dense_max) return dense_solve(H, k, opt);
    return lanczos_solve(H, k, opt);
}

bool is_simple(const EigenResult& r) {
    if (r.values.size() < 2) return true;
    return r.values[1] - r.values[0] > std::max(10.0 * r.tol, 1e-7);
}

int multiplicity(const EigenResult& r, double cluster_tol) {
    int m = 0;
    for (double v : r.values)
        if (v - r.values.front() <= cluster_tol) ++m;
    return m;
}

// ---- setup ----

VertexContext ModelSetup::context() const {
    VertexContext c;
    c.masses = masses;
    c.eB = eB;
    c.g_A = phys.g_A;
    c.quad = quad;
    c.metric = metric;
    return c;
}

FockBasis vacuum_sector(const ModeGrid& g, const SectorCaps& caps) {
    return closure_basis(g, {FockState{}}, caps);
}

EnergyBoundReport energy_bound_check(double E0, const ModelConstants& c, double g, double slack) {
    EnergyBoundReport r;
    r.g = g;
    r.E0 = E0;
    r.bound = std::abs(g) * c.K * c.B / (1.0 - c.g0 * c.K * c.C);
    r.nonpositive = E0 <= slack;
    r.within = std::abs(E0) <= r.bound + slack;
    return r;
}

namespace {

std::vector<FockState> single_neutrino_seeds(const ModeGrid& g, bool with_vacuum) {
    std::vector<FockState> seeds;
    if (with_vacuum) seeds.push_back(FockState{});
    for (int k = 0; k < g.count(Species::neutrino); ++k) {
        FockState s;
        s.occ[static_cast<int>(Species::neutrino)] = 1ULL << k;
        seeds.push_back(s);
    }
    return seeds;
}

SectorCaps uncapped(const ModeGrid& g, std::int64_t max_dim) {
    SectorCaps c;
    c.max_total = g.total();
    c.per_species.fill(64);
    c.max_dim = max_dim;
    return c;
}

} // namespace

bool GapStudy::pass() const {
    return !rows.empty() && std::all_of(rows.begin(), rows.end(), [](const GapRow& r) { return r.pass; });
}

GapStudy ir_gap_study(const ModelSetup& s, const ModelConstants& c, double g, int n_max) {
    GapStudy st;
    st.g = g;
    st.gated = std::abs(g) <= c.g2;
    const auto sig = sigma_sequence(s.masses.m_e, s.delta, n_max);
    for (int n = 1; n <= n_max; ++n) check_shell_alignment(s.grid.nu_shell_edges, sig[static_cast<size_t>(n)]);
    const ModeGrid base = build_grid(s.grid, s.masses, s.eB);
    AssemblyOptions opt;
    opt.ctx = s.context();
    for (int n = 1; n <= n_max; ++n) {
        GapRow row;
        row.n = n;
        row.sigma = sig[static_cast<size_t>(n)];
        const ModeGrid gn = filter_neutrinos(base, row.sigma);
        const FockBasis basis = closure_basis(gn, single_neutrino_seeds(gn, true), s.caps);
        opt.sigma = row.sigma;
        const SparseOperator H = assemble_H(assemble_H0(gn, basis), assemble_HI(gn, basis, s.kernels, opt), g);
        const EigenResult er = ground_state(H, 3, s.eig);
        row.dim = basis.size();
        row.E0 = er.values[0];
        row.E1 = er.values.size() > 1 ? er.values[1] : INFINITY;
        row.gap = row.E1 - row.E0;
        row.bound = (1.0 - 3.0 * std::abs(g) * c.Dt / c.gamma) * row.sigma;
        row.bound_mn = (1.0 - 3.0 * std::abs(g) * c.Dt_mn / c.gamma) * row.sigma;
        row.multiplicity = multiplicity(er, s.eig.cluster_tol);
        row.simple = is_simple(er) && row.multiplicity == 1;
        row.pass = row.gap >= row.bound && row.simple;
        st.rows.push_back(row);
    }
    st.energies_nonincreasing = true;
    for (size_t i = 1; i < st.rows.size(); ++i)
        if (st.rows[i].E0 > st.rows[i - 1].E0 + 1e-10) st.energies_nonincreasing = false;
    return st;
}

PullThroughReport pull_through_residual(const ModelSetup& s, const ModelConstants& c, double g, double sigma) {
    PullThroughReport rep;
    rep.g = g;
    rep.sigma = sigma;
    const ModeGrid grid = build_grid(s.grid, s.masses, s.eB);
    const SectorCaps caps = uncapped(grid, s.caps.max_dim);
    AssemblyOptions opt;
    opt.ctx = s.context();
    opt.sigma = sigma;
    const AmplitudeTable amps(grid, s.kernels, opt);

    // exact vacuum sector and its ground state
    const FockBasis vac = closure_basis(grid, {FockState{}}, caps);
    const SparseOperator Hv = assemble_H(assemble_H0(grid, vac), assemble_HI(grid, vac, amps), g);
    const EigenResult er = ground_state(Hv, 1, s.eig);
    rep.E0 = er.values[0];
    rep.eigen_residual = er.residuals[0];
    rep.vacuum_dim = vac.size();

    // exact sector of the b(k) images
    const Species nu = Species::neutrino;
    std::vector<FockState> images;
    for (const auto& st : vac.states())
        for (int k = 0; k < grid.count(nu); ++k)
            if (st.has(nu, k)) images.push_back(apply_ladder(st, nu, k, Ladder::annihilate).first);
    const FockBasis img = closure_basis(grid, images, caps);
    const FockBasis uni = merge_bases(vac, img);
    rep.dim = uni.size();
    const SparseOperator H = assemble_H(assemble_H0(grid, uni), assemble_HI(grid, uni, amps), g);

    VecC psi = VecC::Zero(uni.size());
    for (std::int64_t i = 0; i < vac.size(); ++i) psi[uni.find(vac[i])] = er.vectors[0][i];

    for (int k = 0; k < grid.count(nu); ++k) {
        const Mode& mk = grid.at(nu, k);
        VecC bpsi = VecC::Zero(uni.size());
        for (std::int64_t i = 0; i < uni.size(); ++i) {
            if (psi[i] == 0.0) continue;
            auto [t, sign] = apply_ladder(uni[i], nu, k, Ladder::annihilate);
            if (!sign) continue;
            const std::int64_t j = uni.find(t);
            if (j < 0) throw std::logic_error("pull-through basis not closed under b(k)");
            bpsi[j] += static_cast<double>(sign) * psi[i];
        }
        const VecC lhs = H.apply(bpsi) + (mk.energy - rep.E0) * bpsi;
        const VecC rhs = -g * (pull_through_V1(grid, uni, amps, k).apply(psi) + pull_through_V2(grid, uni, amps, k).apply(psi));
        const double res = (lhs - rhs).norm();
        rep.residuals.push_back(res);
        rep.max_residual = std::max(rep.max_residual, res);

        // per-mode bound in continuum normalization: b(xi) ~ b_k / sqrt(w_k)
        double fg = 0.0;
        for (int beta = 1; beta <= 2; ++beta) fg += norm_F(s.kernels, beta) * norm_G_at(s.kernels, beta, mk.p);
        const double bound = std::abs(g) * c.C0 / mk.p.norm() * fg * (c.M + s.masses.m_p);
        const double lhs_norm = bpsi.norm() / std::sqrt(mk.weight);
        if (bound > 0) rep.max_bound_ratio = std::max(rep.max_bound_ratio, lhs_norm / bound);
        if (lhs_norm > bound) ++rep.bound_violations;
    }
    return rep;
}

double soft_number_constant(const KernelSpec& k, const ModelConstants& c) {
    double kmin = INFINITY;
    for (const auto& f : k.G)
        for (double x : f.neutral.kappa) kmin = std::min(kmin, x);
    const double nf1 = norm_F(k, 1), nf2 = norm_F(k, 2);
    const double integral = spherical_integral(
        [&](const Momentum3& p) {
            const double s = nf1 * norm_G_at(k, 1, p) + nf2 * norm_G_at(k, 2, p);
            const double r2 = p.p1 * p.p1 + p.p2 * p.p2 + p.p3 * p.p3;
            return s * s / r2;
        },
        0.0, 16.0 / std::sqrt(kmin));
    const double a = c.C0 * (c.M + c.masses.m_p);
    return a * a * integral;
}

SoftNumberReport soft_number_scaling(const ModelSetup& s, const ModelConstants& c, const std::vector<double>& gs,
                                     double sigma) {
    SoftNumberReport rep;
    rep.sigma = sigma;
    const ModeGrid grid = build_grid(s.grid, s.masses, s.eB);
    const FockBasis basis = vacuum_sector(grid, s.caps);
    AssemblyOptions opt;
    opt.ctx = s.context();
    opt.sigma = sigma;
    const SparseOperator H0 = assemble_H0(grid, basis);
    const SparseOperator HI = assemble_HI(grid, basis, s.kernels, opt);
    const SparseOperator Nnu = number_operator(basis, grid, Species::neutrino);
    for (double g : gs) {
        const EigenResult er = ground_state(assemble_H(H0, HI, g), 1, s.eig);
        const VecC& v = er.vectors[0];
        const double N = v.dot(Nnu.apply(v)).real();
        rep.g.push_back(g);
        rep.N.push_back(N);
        rep.max_ratio = std::max(rep.max_ratio, N / (g * g));
    }
    // least-squares slope of log N against log g
    const size_t m = gs.size();
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (size_t i = 0; i < m; ++i) {
        const double x = std::log(rep.g[i]), y = std::log(rep.N[i]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    rep.slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
    rep.C2 = soft_number_constant(s.kernels, c);
    return rep;
}

int degeneracy_negative_control(const ModelSetup& s) {
    GridConfig gc = s.grid;
    gc.nu_directions = 1;
    ModeGrid grid = build_grid(gc, s.masses, s.eB);
    auto& nu = grid.modes[static_cast<int>(Species::neutrino)];
    if (nu.empty() || nu.size() >= 64) throw std::invalid_argument("negative control needs 1..63 neutrino modes");
    nu.push_back(nu.front()); // the doubled mode
    const FockBasis basis(single_neutrino_seeds(grid, false));
    const EigenResult er = ground_state(assemble_H0(grid, basis), 3, s.eig);
    return multiplicity(er, s.eig.cluster_tol);
}

DegeneracyReport degeneracy_check(const ModelSetup& s, const ModelConstants&, double g) {
    DegeneracyReport rep;
    rep.g = g;
    rep.derivative_hypothesis = check_derivative_hypothesis(s.kernels, 1).pass && check_derivative_hypothesis(s.kernels, 2).pass;
    const ModeGrid grid = build_grid(s.grid, s.masses, s.eB);
    const FockBasis basis = closure_basis(grid, single_neutrino_seeds(grid, true), s.caps);
    AssemblyOptions opt;
    opt.ctx = s.context();
    const SparseOperator H = assemble_H(assemble_H0(grid, basis), assemble_HI(grid, basis, s.kernels, opt), g);
    const EigenResult er = ground_state(H, 3, s.eig);
    rep.E0 = er.values[0];
    rep.E1 = er.values.size() > 1 ? er.values[1] : INFINITY;
    rep.multiplicity = multiplicity(er, s.eig.cluster_tol);
    rep.control_multiplicity = degeneracy_negative_control(s);
    return rep;
}

} // namespace ibd
