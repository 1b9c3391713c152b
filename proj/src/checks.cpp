#include "ibd/checks.hpp"

#include "ibd/special_fn.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace ibd {

namespace {

constexpr Species kCharged[] = {Species::electron, Species::positron, Species::proton, Species::antiproton};

double species_mass(Species s, const Masses& m) {
    return (s == Species::electron || s == Species::positron) ? m.m_e : m.m_p;
}

// x2 sample points: Gauss-Hermite nodes around center, with the weights for dx2
struct Samples {
    std::vector<double> x, w;
};

Samples samples_around(double center, double eB, int order) {
    const QuadratureRule& q = gauss_hermite_cached(order);
    Samples s;
    const double h = 1.0 / std::sqrt(eB);
    for (int i = 0; i < q.order; ++i) {
        s.x.push_back(center + h * q.nodes[static_cast<size_t>(i)]);
        s.w.push_back(h * q.scaled_weights[static_cast<size_t>(i)]);
    }
    return s;
}

} // namespace

SpinorCheck check_spinor_exactness(const Masses& m, double eB, int n_max, int samples, std::uint64_t seed) {
    SpinorCheck r;
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> ud(-2.0, 2.0);
    for (Species sp : kCharged) {
        const double mass = species_mass(sp, m);
        const int q = charge_sign(sp);
        for (int n = 0; n <= n_max; ++n)
            for (int t = 0; t < samples; ++t) {
                const double p1 = ud(rng), p3 = ud(rng);
                const double E = landau_energy(mass, n, p3, eB);
                std::vector<SpinorForm> set;
                for (int s : {-1, +1}) {
                    const ChargedMode md{s, n, p1, p3};
                    for (int kind = 0; kind < 2; ++kind) {
                        const SpinorForm f = kind == 0 ? spinor_U_form(sp, mass, md, eB) : spinor_V_form(sp, mass, md, eB);
                        if (f.zero) continue;
                        set.push_back(f);
                        const double sgn = kind == 0 ? 1.0 : -1.0;
                        const Samples xs = samples_around(f.center, eB, 24);
                        double num = 0.0, den = 0.0;
                        for (double x : xs.x) {
                            const Spinor4 v = f.eval(x, eB);
                            const Spinor4 hv = reduced_dirac_apply(q, mass, p1, p3, f, x, eB);
                            num = std::max(num, (hv - sgn * E * v).norm());
                            den = std::max(den, E * v.norm());
                        }
                        r.max_eigen_rel_err = std::max(r.max_eigen_rel_err, num / den);
                        ++r.cases;
                    }
                }
                const Samples xs = samples_around(set.front().center, eB, 64);
                for (size_t a = 0; a < set.size(); ++a)
                    for (size_t b = 0; b < set.size(); ++b) {
                        cplx g = 0.0;
                        for (size_t i = 0; i < xs.x.size(); ++i)
                            g += xs.w[i] * set[a].eval(xs.x[i], eB).dot(set[b].eval(xs.x[i], eB));
                        r.max_gram_err = std::max(r.max_gram_err, std::abs(g - (a == b ? 1.0 : 0.0)));
                    }
            }
    }
    return r;
}

ConjugationCheck check_conjugation(const Masses& m, double eB, int n_max, int samples, std::uint64_t seed) {
    ConjugationCheck r;
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> ud(-2.0, 2.0);
    struct Identity {
        Species v_species, u_species;
        int v_spin, u_spin;
        double sign;
        int n_min;
    };
    const Identity ids[] = {
        {Species::electron, Species::positron, +1, -1, -1.0, 1},
        {Species::electron, Species::positron, -1, +1, +1.0, 0},
        {Species::proton, Species::antiproton, +1, -1, -1.0, 0},
        {Species::proton, Species::antiproton, -1, +1, +1.0, 1},
    };
    for (int t = 0; t < samples; ++t) {
        const double p1 = ud(rng), p3 = ud(rng);
        for (const auto& id : ids)
            for (int n = id.n_min; n <= n_max; ++n) {
                const double mass = species_mass(id.v_species, m);
                const SpinorForm v = spinor_V_form(id.v_species, mass, {id.v_spin, n, p1, p3}, eB);
                const SpinorForm u = spinor_U_form(id.u_species, mass, {id.u_spin, n, -p1, -p3}, eB);
                for (double x : samples_around(v.center, eB, 16).x) {
                    const Spinor4 lhs = charge_conjugate(v.eval(x, eB));
                    const Spinor4 rhs = id.sign * u.eval(x, eB);
                    r.max_landau_err = std::max(r.max_landau_err, (lhs - rhs).norm());
                }
                ++r.cases;
            }
        // off the degenerate rays: keep |p1 + i p2| away from 0
        Momentum3 p{ud(rng), ud(rng), ud(rng)};
        if (std::hypot(p.p1, p.p2) < 0.1) p.p1 += 0.5;
        const double rho = std::hypot(p.p1, p.p2);
        const cplx ph_plus = -cplx(p.p1, p.p2) / rho;
        const cplx ph_minus = -cplx(p.p1, -p.p2) / rho;
        for (int tl : {+1, -1}) {
            const cplx ph = tl > 0 ? ph_plus : ph_minus;
            const Spinor4 vn = neutron_spinors(p, tl, m.m_n).second;
            const Spinor4 un = neutron_spinors(-p, tl, m.m_n).first;
            r.max_neutral_err = std::max(r.max_neutral_err, (charge_conjugate(vn) - ph * un).norm());
            const Spinor4 vv = neutrino_V(p, tl);
            const Spinor4 uv = neutrino_U(-p, tl);
            r.max_neutral_err = std::max(r.max_neutral_err, (charge_conjugate(vv) - ph * uv).norm());
        }
        ++r.cases;
    }
    return r;
}

CarCheck check_car(const ModeGrid& g) {
    CarCheck r;
    struct Slot {
        Species sp;
        int idx;
    };
    std::vector<Slot> slots;
    for (int s = 0; s < kNumSpecies; ++s)
        for (int i = 0; i < g.count(static_cast<Species>(s)); ++i) slots.push_back({static_cast<Species>(s), i});
    r.modes = static_cast<int>(slots.size());
    if (r.modes > 20) throw std::invalid_argument("check_car: at most 20 modes");

    // every occupation pattern of the grid
    SectorCaps caps;
    caps.max_total = r.modes;
    caps.max_dim = std::int64_t(1) << r.modes;
    const FockBasis b = enumerate_basis(g, caps);
    r.states = b.size();

    auto act = [](const FockState& s, const Slot& o, Ladder k) { return apply_ladder(s, o.sp, o.idx, k); };
    const Ladder kinds[2] = {Ladder::annihilate, Ladder::create};
    for (size_t i = 0; i < slots.size(); ++i)
        for (size_t j = 0; j < slots.size(); ++j)
            for (int ka = 0; ka < 2; ++ka)
                for (int kb = ka; kb < 2; ++kb) {
                    // {A, B} with A = kinds[ka] on i, B = kinds[kb] on j
                    const bool mixed = ka != kb;
                    const int target = (mixed && i == j) ? 1 : 0;
                    ++r.pairs;
                    for (std::int64_t t = 0; t < b.size(); ++t) {
                        const FockState& s = b[t];
                        auto [s1, g1] = act(s, slots[j], kinds[kb]);
                        auto [s2, g2] = g1 ? act(s1, slots[i], kinds[ka]) : std::pair<FockState, int>{s, 0};
                        auto [s3, g3] = act(s, slots[i], kinds[ka]);
                        auto [s4, g4] = g3 ? act(s3, slots[j], kinds[kb]) : std::pair<FockState, int>{s, 0};
                        FockState outs[2];
                        int coef[2] = {0, 0}, n = 0;
                        auto push = [&](const FockState& st, int c) {
                            if (!c) return;
                            for (int k = 0; k < n; ++k)
                                if (outs[k] == st) {
                                    coef[k] += c;
                                    return;
                                }
                            outs[n] = st;
                            coef[n++] = c;
                        };
                        push(s2, g1 * g2);
                        push(s4, g3 * g4);
                        bool ok = true;
                        int diag = 0;
                        for (int k = 0; k < n; ++k) {
                            if (outs[k] == s) diag = coef[k];
                            else if (coef[k] != 0) ok = false;
                        }
                        ok = ok && diag == target;
                        if (!ok) ++r.mismatches;
                    }
                }
    return r;
}

ToyHamiltonianCheck check_toy_hamiltonian(const ModelSetup& s, double g) {
    ToyHamiltonianCheck r;
    r.g = g;
    const ModeGrid grid = build_grid(s.grid, s.masses, s.eB);
    SectorCaps caps;
    caps.max_total = grid.total();
    caps.max_dim = s.caps.max_dim;
    const FockBasis b = enumerate_basis(grid, caps);
    r.dim = b.size();
    AssemblyOptions opt;
    opt.ctx = s.context();
    const SparseOperator H = assemble_H(assemble_H0(grid, b), assemble_HI(grid, b, s.kernels, opt), g);
    r.hermiticity_error = H.hermiticity_error();
    EigenOptions dense = s.eig;
    const EigenResult d = ground_state(H, static_cast<int>(b.size()), dense);
    EigenOptions lz = s.eig;
    lz.force_lanczos = true;
    lz.tol_lanczos = std::min(lz.tol_lanczos, 1e-10);
    const EigenResult l = ground_state(H, static_cast<int>(b.size()), lz);
    for (size_t i = 0; i < d.values.size(); ++i)
        r.max_spectrum_diff = std::max(r.max_spectrum_diff, std::abs(d.values[i] - l.values[i]));
    return r;
}

} // namespace ibd
