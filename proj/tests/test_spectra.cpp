#include "ibd/config.hpp"
#include "ibd/spectra.hpp"

#include "gen.hpp"

#include <doctest.h>

#include <cmath>

using namespace ibd;

namespace {

SparseOperator random_hermitian(std::int64_t n, int per_row, std::uint64_t seed, bool degenerate) {
    gen::Gen g(seed);
    std::vector<Triplet> t;
    for (std::int64_t i = 0; i < n; ++i) {
        // integer diagonal levels give exact degeneracies when there is no coupling
        t.push_back({i, i, cplx(degenerate ? double(i % 7) : g.real(-3, 3), 0)});
        if (degenerate) continue;
        for (int k = 0; k < per_row; ++k) {
            const std::int64_t j = g.integer(0, static_cast<int>(n - 1));
            if (j == i) continue;
            const cplx v = 0.3 * g.complex();
            t.push_back({i, j, v});
            t.push_back({j, i, std::conj(v)});
        }
    }
    return SparseOperator(n, t, true);
}

struct Toy64 {
    ModelSetup s;
    ModelConstants c;
    ModeGrid grid;
    FockBasis basis;
    SparseOperator H0, HI;
};

Toy64 toy64(double kernel_scale = 1.0) {
    Toy64 t;
    t.s = preset_config("toy").setup("invariants");
    t.s.kernels = t.s.kernels.scaled(kernel_scale);
    t.c = derive_constants(t.s.kernels, t.s.masses, t.s.phys, t.s.delta);
    t.grid = build_grid(t.s.grid, t.s.masses, t.s.eB);
    SectorCaps caps;
    caps.max_total = t.grid.total();
    t.basis = enumerate_basis(t.grid, caps);
    AssemblyOptions opt;
    opt.ctx = t.s.context();
    t.H0 = assemble_H0(t.grid, t.basis);
    t.HI = assemble_HI(t.grid, t.basis, t.s.kernels, opt);
    return t;
}

// a reduced toy setup: one charged momentum, one neutrino direction, shells aligned with sigma_1..3
ModelSetup small_setup() {
    ModelSetup s = preset_config("toy").setup("ir-gap");
    s.grid.p3_count = 1;
    s.grid.nu_directions = 1;
    s.grid.nu_shell_edges = auto_shell_edges(s.masses.m_e, s.delta, 3, 1.5);
    return s;
}

} // namespace

TEST_SUITE("spectra") {

TEST_CASE("lanczos agrees with the dense solver") {
    const SparseOperator H = random_hermitian(600, 4, 81, false);
    EigenOptions o;
    const EigenResult d = ground_state(H, 5, o);
    CHECK(d.dense);
    o.force_lanczos = true;
    const EigenResult l = ground_state(H, 5, o);
    CHECK(!l.dense);
    for (int i = 0; i < 5; ++i) {
        CHECK(std::abs(d.values[i] - l.values[i]) < 1e-9);
        CHECK(l.residuals[i] <= o.tol_lanczos);
    }
    // deterministic given the seed
    const EigenResult l2 = ground_state(H, 5, o);
    for (int i = 0; i < 5; ++i) CHECK(l.values[i] == l2.values[i]);
}

TEST_CASE("lanczos on exactly degenerate spectra") {
    const SparseOperator H = random_hermitian(70, 0, 82, true);
    EigenOptions o;
    o.force_lanczos = true;
    const EigenResult l = ground_state(H, 12, o);
    for (int i = 0; i < 10; ++i) CHECK(std::abs(l.values[i]) < 1e-9);
    CHECK(std::abs(l.values[10] - 1) < 1e-9);
    CHECK(multiplicity(l, 1e-7) == 10);
    CHECK(!is_simple(l));
}

TEST_CASE("full spectrum of the 64-dim model against the dense solver") {
    const Toy64 t = toy64();
    const SparseOperator H = assemble_H(t.H0, t.HI, 0.5 * t.c.g0);
    EigenOptions o;
    const EigenResult d = ground_state(H, 64, o);
    o.force_lanczos = true;
    o.tol_lanczos = 1e-10;
    const EigenResult l = ground_state(H, 64, o);
    for (int i = 0; i < 64; ++i) CHECK(std::abs(d.values[i] - l.values[i]) < 1e-9);
}

TEST_CASE("non-convergence is reported") {
    const SparseOperator H = random_hermitian(300, 4, 83, false);
    EigenOptions o;
    o.force_lanczos = true;
    o.krylov_dim = 3;
    o.max_restarts = 1;
    o.tol_lanczos = 1e-14;
    CHECK_THROWS_AS(ground_state(H, 1, o), std::runtime_error);
    CHECK_THROWS_AS(ground_state(H, 0, o), std::invalid_argument);
}

TEST_CASE("free ground state is the vacuum") {
    const Toy64 t = toy64();
    const EigenResult r = ground_state(t.H0, 2, {});
    CHECK(std::abs(r.values[0]) < 1e-14);
    CHECK(std::abs(std::abs(r.vectors[0][t.basis.find(FockState{})]) - 1) < 1e-14);
    CHECK(is_simple(r));
    CHECK(multiplicity(r, 1e-7) == 1);
}

TEST_CASE("variational consistency and energy bound") {
    const Toy64 t = toy64();
    const double g = 0.5 * t.c.g0;
    const SparseOperator H = assemble_H(t.H0, t.HI, g);
    const EigenResult r = ground_state(H, 1, {});
    gen::Gen gen(84);
    for (int i = 0; i < 100; ++i) {
        VecC v(64);
        for (int k = 0; k < 64; ++k) v[k] = gen.complex();
        v.normalize();
        CHECK(r.values[0] <= v.dot(H.apply(v)).real() + 1e-12);
    }
    const EnergyBoundReport eb = energy_bound_check(r.values[0], t.c, g);
    CHECK(eb.pass());
    CHECK(r.values[0] <= 0.0);
    CHECK(energy_bound_check(0.0, t.c, 0.0).bound == 0.0);
    CHECK(energy_bound_check(0.0, t.c, 2 * g).bound == doctest::Approx(2 * eb.bound).epsilon(1e-15));
}

TEST_CASE("ground energy is concave in g") {
    const Toy64 t = toy64();
    std::vector<double> E;
    const int m = 9;
    for (int i = 0; i < m; ++i) {
        const double g = -t.c.g0 + 2.0 * t.c.g0 * i / (m - 1);
        E.push_back(ground_state(assemble_H(t.H0, t.HI, g), 1, {}).values[0]);
    }
    for (int i = 1; i + 1 < m; ++i) CHECK(E[i] >= 0.5 * (E[i - 1] + E[i + 1]) - 1e-10);
}

TEST_CASE("soft neutrino number scales with the square of the interaction") {
    // halving H_I quarters N_nu at small g
    const Toy64 a = toy64(1.0), b = toy64(std::sqrt(0.5));
    const double g = 0.25 * a.c.g0;
    const SparseOperator N = number_operator(a.basis, a.grid, Species::neutrino);
    const VecC va = ground_state(assemble_H(a.H0, a.HI, g), 1, {}).vectors[0];
    const VecC vb = ground_state(assemble_H(b.H0, b.HI, g), 1, {}).vectors[0];
    const double na = va.dot(N.apply(va)).real(), nb = vb.dot(N.apply(vb)).real();
    CHECK(na > 0);
    CHECK(nb / na == doctest::Approx(0.25).epsilon(1e-3));
    const VecC v0 = ground_state(assemble_H(a.H0, a.HI, 0.0), 1, {}).vectors[0];
    CHECK(v0.dot(N.apply(v0)).real() == 0.0);
}

TEST_CASE("soft number fit on the toy pull-through grid") {
    const ModelSetup s = preset_config("toy").setup("soft-number");
    const ModelConstants c = derive_constants(s.kernels, s.masses, s.phys, s.delta);
    const SoftNumberReport r = soft_number_scaling(s, c, {c.g0 / 8, c.g0 / 4, c.g0 / 2}, 0.75);
    CHECK(r.slope >= 1.9);
    CHECK(r.max_ratio <= r.C2);
    CHECK(std::isfinite(r.C2));
}

TEST_CASE("gap study on a reduced grid") {
    const ModelSetup s = small_setup();
    const ModelConstants c = derive_constants(s.kernels, s.masses, s.phys, s.delta);
    // g = 0: the gap is the lightest neutrino kept above sigma_n
    const GapStudy free = ir_gap_study(s, c, 0.0, 3);
    const ModeGrid grid = build_grid(s.grid, s.masses, s.eB);
    for (const GapRow& r : free.rows) {
        double lightest = INFINITY;
        for (const Mode& m : grid.modes[5])
            if (m.p.norm() >= r.sigma) lightest = std::min(lightest, m.energy);
        CHECK(r.gap == doctest::Approx(lightest).epsilon(1e-12));
        CHECK(r.gap >= r.sigma);
        CHECK(r.E0 == doctest::Approx(0.0));
    }
    const GapStudy st = ir_gap_study(s, c, c.g2 / 4, 3);
    CHECK(st.gated);
    CHECK(st.pass());
    CHECK(st.energies_nonincreasing);
    for (size_t i = 1; i < st.rows.size(); ++i)
        CHECK(st.rows[i].bound / st.rows[i - 1].bound == doctest::Approx(c.gamma).epsilon(1e-12));
    ModelSetup bad = s;
    bad.grid.nu_shell_edges = {0.1, 0.6, 1.0};
    CHECK_THROWS_AS(ir_gap_study(bad, c, 0.0, 1), std::invalid_argument);
}

TEST_CASE("pull-through identity") {
    const ModelSetup s = preset_config("toy").setup("pull-through");
    const ModelConstants c = derive_constants(s.kernels, s.masses, s.phys, s.delta);
    const PullThroughReport zero = pull_through_residual(s, c, 0.0, 0.75);
    CHECK(zero.max_residual == 0.0);
    for (double sigma : {0.0, 0.75}) {
        const PullThroughReport r = pull_through_residual(s, c, c.g0 / 4, sigma);
        CHECK(r.max_residual <= 1e-8);
        CHECK(r.bound_violations == 0);
        CHECK(r.pass(1e-8));
    }
}

TEST_CASE("degeneracy and its negative control") {
    ModelSetup s = small_setup();
    const ModelConstants c = derive_constants(s.kernels, s.masses, s.phys, s.delta);
    CHECK(degeneracy_negative_control(s) == 2);
    const DegeneracyReport r = degeneracy_check(s, c, c.g2 / 2);
    CHECK(r.derivative_hypothesis);
    CHECK(r.multiplicity == 1);
    CHECK(r.pass());
}

}
