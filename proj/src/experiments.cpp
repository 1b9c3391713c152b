#include "ibd/experiments.hpp"

#include "ibd/checks.hpp"
#include "ibd/spectra.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace ibd {

namespace {

std::string fmt(double v) {
    std::ostringstream o;
    o << std::setprecision(17) << v;
    return o.str();
}

ordered_json with_provenance(double v, const char* formula) {
    ordered_json j;
    j["value"] = v;
    j["provenance"] = formula;
    return j;
}

double sigma_at(const ModelSetup& s, int level) {
    if (level <= 0) return 0.0;
    return sigma_sequence(s.masses.m_e, s.delta, level)[static_cast<size_t>(level)];
}

class Timer {
  public:
    Timer() : t0_(std::chrono::steady_clock::now()) {}
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0_).count();
    }

  private:
    std::chrono::steady_clock::time_point t0_;
};

struct Outcome {
    ordered_json data;
    bool pass = true;
    bool gated = true;
    std::vector<std::string> warnings;
};

// Two charged modes per species, both neutron helicities, two neutrino shells.
GridConfig car_grid_12(GridConfig g) {
    g.n_landau = 0;
    g.p1_count = 1;
    g.p3_count = 2;
    g.neutron_helicity = 0;
    g.pn_count = 1;
    g.nu_directions = 1;
    g.nu_shell_edges = {0.5, 1.0, 1.5};
    return g;
}

// ---- experiments ----

Outcome run_hypothesis_checks(const RunConfig& cfg) {
    Outcome o;
    const ModelSetup s = cfg.setup("hypothesis-checks");
    for (int beta = 1; beta <= 2; ++beta) {
        ordered_json j;
        const double nf = norm_F(s.kernels, beta), ng = norm_G(s.kernels, beta);
        j["norm_F"] = nf;
        j["norm_G"] = ng;
        const InfraredHypothesis h5 = check_infrared_hypothesis(s.kernels, beta);
        j["infrared_moment_finite"] = h5.i_finite;
        j["infrared_moment"] = h5.i_value;
        j["infrared_moment_numeric"] = h5.i_value_numeric;
        j["softball_Ktilde"] = h5.ii_Ktilde;
        j["softball_slope"] = h5.ii_slope;
        j["softball_sigma_at_sup"] = h5.sigma_at_sup;
        const DerivativeHypothesis h6 = check_derivative_hypothesis(s.kernels, beta);
        j["derivative_norm_d1"] = h6.norm_d1;
        j["derivative_norm_d2"] = h6.norm_d2;
        j["derivative_norm_d12"] = h6.norm_d12;
        j["derivative_fd_max_rel_err"] = h6.fd_max_rel_err;
        j["derivative_annulus"] = {h6.r_in, h6.r_out};
        j["derivative_pass"] = h6.pass;
        const bool ok = std::isfinite(nf) && std::isfinite(ng) && h5.i_finite && std::isfinite(h5.ii_Ktilde) && h6.pass;
        j["pass"] = ok;
        o.pass = o.pass && ok;
        o.data["beta" + std::to_string(beta)] = j;
    }
    return o;
}

Outcome run_invariants(const RunConfig& cfg) {
    Outcome o;
    const ModelSetup s = cfg.setup("invariants");
    const SpinorCheck sc = check_spinor_exactness(s.masses, s.eB, 6, 20, cfg.seed);
    o.data["spinors"] = {{"cases", sc.cases},
                         {"max_eigen_rel_err", sc.max_eigen_rel_err},
                         {"max_gram_err", sc.max_gram_err},
                         {"pass", sc.pass()}};
    const ConjugationCheck cc = check_conjugation(s.masses, s.eB, 4, 50, cfg.seed + 1);
    o.data["conjugation"] = {{"cases", cc.cases},
                             {"max_landau_err", cc.max_landau_err},
                             {"max_neutral_err", cc.max_neutral_err},
                             {"pass", cc.pass()}};
    bool car_ok = true;
    ordered_json cars = ordered_json::array();
    for (const GridConfig& gc : {s.grid, car_grid_12(s.grid)}) {
        const CarCheck car = check_car(build_grid(gc, s.masses, s.eB));
        cars.push_back({{"modes", car.modes}, {"states", car.states}, {"pairs", car.pairs},
                        {"mismatches", car.mismatches}, {"pass", car.pass()}});
        car_ok = car_ok && car.pass();
    }
    o.data["car"] = cars;
    const ModelConstants c = constants_for(s);
    const ToyHamiltonianCheck th = check_toy_hamiltonian(s, 0.5 * c.g0);
    o.data["toy_hamiltonian"] = {{"dim", th.dim},
                                 {"g", th.g},
                                 {"hermiticity_error", th.hermiticity_error},
                                 {"max_spectrum_diff", th.max_spectrum_diff},
                                 {"pass", th.pass()}};
    o.pass = sc.pass() && cc.pass() && car_ok && th.pass();
    return o;
}

Outcome run_relative_bound(const RunConfig& cfg, RunResult& rr) {
    Outcome o;
    const ModelSetup s = cfg.setup("relative-bound");
    const ModelConstants c = constants_for(s);
    const ModeGrid grid = build_grid(s.grid, s.masses, s.eB);
    const FockBasis b = vacuum_sector(grid, s.caps);
    AssemblyOptions opt;
    opt.ctx = s.context();
    AssemblyStats st;
    const SparseOperator H0 = assemble_H0(grid, b);
    const SparseOperator HI = assemble_HI(grid, b, s.kernels, opt, &st);
    const RelativeBoundReport r = relative_bound_check(H0, HI, c, cfg.relative_trials, cfg.seed);
    o.data = {{"dim", b.size()},
              {"nnz", HI.nnz()},
              {"hermiticity_error", st.hermiticity_error},
              {"leaked_transitions", st.leaked},
              {"samples", r.samples},
              {"violations", r.violations},
              {"max_ratio", r.max_ratio},
              {"max_ratio_sqrt_form", r.max_ratio_sqrt},
              {"sqrt_form_gated", false},
              {"vacuum_norm_HI", HI.apply(VecC::Unit(b.size(), b.find(FockState{}))).norm()},
              {"pass", r.pass}};
    o.pass = r.pass;
    if (cfg.dump_operators) {
        const std::string meta = "relative-bound vacuum sector dim " + std::to_string(b.size()) + " seed " +
                                 std::to_string(cfg.seed);
        rr.dumps.push_back({"H0", H0, meta});
        rr.dumps.push_back({"HI", HI, meta});
    }
    return o;
}

Outcome run_ground_state(const RunConfig& cfg) {
    Outcome o;
    const ModelSetup s = cfg.setup("ground-state");
    const ModelConstants c = constants_for(s);
    const ModeGrid grid = build_grid(s.grid, s.masses, s.eB);
    const FockBasis b = vacuum_sector(grid, s.caps);
    AssemblyOptions opt;
    opt.ctx = s.context();
    const SparseOperator H0 = assemble_H0(grid, b);
    const SparseOperator HI = assemble_HI(grid, b, s.kernels, opt);
    o.data["dim"] = b.size();

    // H0 is diagonal in the occupation basis, so its ground state is read off exactly
    std::int64_t arg = 0;
    for (std::int64_t i = 1; i < H0.dim(); ++i)
        if (H0.at(i, i).real() < H0.at(arg, arg).real()) arg = i;
    const double E_free = H0.at(arg, arg).real();
    const std::int64_t vac = b.find(FockState{});
    int at_min = 0;
    for (std::int64_t i = 0; i < H0.dim(); ++i) at_min += H0.at(i, i).real() == E_free;
    const bool unique = at_min == 1;
    const double overlap = arg == vac && unique ? 1.0 : 0.0;
    const bool free_ok = E_free == 0.0 && overlap == 1.0;
    o.data["g0_E0"] = E_free;
    o.data["g0_vacuum_overlap"] = overlap;
    o.pass = free_ok;

    ordered_json rows = ordered_json::array();
    for (int k = 1; k <= cfg.energy_points; ++k) {
        const double g = c.g0 * k / cfg.energy_points;
        const EigenResult er = ground_state(assemble_H(H0, HI, g), 1, s.eig);
        const EnergyBoundReport eb = energy_bound_check(er.values[0], c, g, er.tol);
        rows.push_back({{"g", g},
                        {"E0", eb.E0},
                        {"bound", eb.bound},
                        {"residual", er.residuals[0]},
                        {"nonpositive", eb.nonpositive},
                        {"within_bound", eb.within}});
        o.pass = o.pass && eb.pass();
    }
    o.data["couplings"] = rows;
    o.data["pass"] = o.pass;
    return o;
}

Outcome run_ir_gap(const RunConfig& cfg, RunResult& rr) {
    Outcome o;
    const ModelSetup s = cfg.setup("ir-gap");
    const ModelConstants c = constants_for(s);
    const double g = cfg.gap_g_fraction * c.g2;
    const GapStudy st = ir_gap_study(s, c, g, cfg.gap_levels);
    o.gated = st.gated;
    if (!st.gated) o.warnings.push_back("g above g2: gap bound outside the proven regime, not gated");
    ordered_json rows = ordered_json::array();
    std::ostringstream csv;
    csv << "n,sigma,dim,E0,E1,gap,bound,bound_mn,multiplicity,simple,pass\n";
    for (const auto& r : st.rows) {
        rows.push_back({{"n", r.n},
                        {"sigma", r.sigma},
                        {"dim", r.dim},
                        {"E0", r.E0},
                        {"E1", r.E1},
                        {"gap", r.gap},
                        {"bound", r.bound},
                        {"bound_mn_reading", r.bound_mn},
                        {"multiplicity", r.multiplicity},
                        {"simple", r.simple},
                        {"pass", r.pass}});
        csv << r.n << ',' << fmt(r.sigma) << ',' << r.dim << ',' << fmt(r.E0) << ',' << fmt(r.E1) << ','
            << fmt(r.gap) << ',' << fmt(r.bound) << ',' << fmt(r.bound_mn) << ',' << r.multiplicity << ','
            << (r.simple ? 1 : 0) << ',' << (r.pass ? 1 : 0) << '\n';
    }
    rr.tables["ir_gap.csv"] = csv.str();
    o.data = {{"g", g},
              {"g2", c.g2},
              {"active_reading", "m_e"},
              {"rows", rows},
              {"energies_nonincreasing", st.energies_nonincreasing},
              {"pass", st.pass()}};
    o.pass = st.pass();
    return o;
}

Outcome run_pull_through(const RunConfig& cfg) {
    Outcome o;
    const ModelSetup s = cfg.setup("pull-through");
    const ModelConstants c = constants_for(s);
    const double g = cfg.pull_g_fraction * c.g0;
    const double sigma = sigma_at(s, cfg.pull_sigma_level);
    const PullThroughReport r = pull_through_residual(s, c, g, sigma);
    const double tol = 1e-8;
    o.data = {{"g", g},
              {"sigma", sigma},
              {"dim", r.dim},
              {"vacuum_dim", r.vacuum_dim},
              {"E0", r.E0},
              {"eigen_residual", r.eigen_residual},
              {"residuals", r.residuals},
              {"max_residual", r.max_residual},
              {"tolerance", tol},
              {"mode_bound_violations", r.bound_violations},
              {"max_mode_bound_ratio", r.max_bound_ratio},
              {"pass", r.pass(tol)}};
    o.pass = r.pass(tol);
    if (std::abs(g) > c.g0) o.warnings.push_back("g above g0");
    return o;
}

Outcome run_soft_number(const RunConfig& cfg, RunResult& rr) {
    Outcome o;
    const ModelSetup s = cfg.setup("soft-number");
    const ModelConstants c = constants_for(s);
    std::vector<double> gs;
    for (double f : cfg.soft_g_fractions) gs.push_back(f * c.g0);
    const SoftNumberReport r = soft_number_scaling(s, c, gs, sigma_at(s, cfg.soft_sigma_level));
    std::ostringstream csv;
    csv << "g,N_nu,N_nu_over_g2\n";
    for (size_t i = 0; i < r.g.size(); ++i)
        csv << fmt(r.g[i]) << ',' << fmt(r.N[i]) << ',' << fmt(r.N[i] / (r.g[i] * r.g[i])) << '\n';
    rr.tables["soft_number.csv"] = csv.str();
    o.data = {{"sigma", r.sigma},
              {"g", r.g},
              {"N_nu", r.N},
              {"slope", r.slope},
              {"max_N_over_g2", r.max_ratio},
              {"C_FG_squared", r.C2},
              {"pass", r.pass()}};
    o.pass = r.pass();
    return o;
}

Outcome run_degeneracy(const RunConfig& cfg) {
    Outcome o;
    const ModelSetup s = cfg.setup("degeneracy");
    const ModelConstants c = constants_for(s);
    const double g = cfg.degeneracy_g_fraction * c.g2;
    const DegeneracyReport r = degeneracy_check(s, c, g);
    o.gated = r.derivative_hypothesis && g <= c.g2;
    if (!r.derivative_hypothesis) o.warnings.push_back("kernels fail the derivative hypothesis; multiplicity not gated");
    if (g > c.g2) o.warnings.push_back("g above g2; multiplicity not gated");
    o.data = {{"g", g},
              {"E0", r.E0},
              {"E1", r.E1},
              {"multiplicity", r.multiplicity},
              {"cluster_tol", s.eig.cluster_tol},
              {"negative_control_multiplicity", r.control_multiplicity},
              {"derivative_hypothesis", r.derivative_hypothesis},
              {"pass", r.pass()}};
    o.pass = r.pass();
    return o;
}

std::string thresholds_csv(const ModelSetup& s) {
    std::ostringstream csv;
    csv << "species,n,threshold\n";
    auto rows = [&](const char* name, double mass) {
        const auto t = thresholds(mass, s.eB, s.grid.n_landau);
        for (size_t n = 0; n < t.size(); ++n) csv << name << ',' << n << ',' << fmt(t[n]) << '\n';
    };
    rows("electron", s.masses.m_e);
    rows("proton", s.masses.m_p);
    csv << "neutron,0," << fmt(s.masses.m_n) << '\n';
    return csv.str();
}

} // namespace

ModelConstants constants_for(const ModelSetup& s) { return derive_constants(s.kernels, s.masses, s.phys, s.delta); }

ordered_json constants_json(const ModelConstants& c, const std::vector<double>& sigmas) {
    ordered_json j;
    j["sup_hadronic"] = with_provenance(c.sup_hadronic, "max_a largest singular value of gamma^a (1 - g_A gamma5)");
    j["sup_leptonic"] = with_provenance(c.sup_leptonic, "max_a largest singular value of gamma_a (1 - gamma5)");
    j["C0"] = with_provenance(c.C0, "C0 = 1/2 (1/m_e + 1/m_p) sup_hadronic sup_leptonic");
    j["normF"] = c.normF;
    j["normG"] = c.normG;
    j["K"] = with_provenance(c.K, "K(F,G) = sum_beta ||F^beta|| ||G^beta||");
    j["C"] = with_provenance(c.C, "C = 2 C0");
    j["B"] = with_provenance(c.B, "B = 2 m_p C0");
    j["g0"] = with_provenance(c.g0, "g0 = safety / (2 C0 K), so that 2 g0 C0 K < 1");
    j["Ctilde"] = with_provenance(c.Ct, "C~ = C / (1 - g0 K C)");
    j["Btilde"] = with_provenance(c.Bt, "B~ = B / (1 - g0 K C)^2");
    j["Ktilde_G"] = with_provenance(c.Ktilde_G, "sup_sigma (int_{|p4|<sigma} |G|^2)^(1/2) / sigma, max over beta");
    j["Ktilde_FG"] = with_provenance(c.Ktilde_FG, "sum_beta ||F^beta|| K~(G^beta)");
    j["gamma"] = with_provenance(c.gamma, "gamma = 1 - delta / (2 m_e - delta)");
    j["delta"] = c.delta;
    j["Dtilde"] = with_provenance(c.Dt, "D~ = max{4(2m+1) gamma/(2m - delta), 2} K~(F,G) (2m C~ + B~), m = m_e (active)");
    j["Dtilde_mn"] = with_provenance(c.Dt_mn, "D~ with m = m_n (alternative reading, reported only)");
    j["g1"] = with_provenance(c.g1, "g1 = safety min{1, g0, (gamma - gamma^2) / (3 D~)}");
    j["g3"] = with_provenance(c.g3, "g3 = 1 / (2 K (2C + B))");
    j["g2"] = with_provenance(c.g2, "g2 = min(g3, g1)");
    j["g2_mn"] = c.g2_mn;
    j["M"] = with_provenance(c.M, "M = g0 K B / x (1 + 1/x), x = 1 - g0 K C; bound on ||H0 psi|| at the ground state");
    j["safety"] = c.safety;
    j["sigma"] = with_provenance(0.0, "sigma_0 = 2 m_e + 1, sigma_1 = m_e - delta/2, sigma_{n+1} = gamma sigma_n");
    j["sigma"]["value"] = sigmas;
    j["physical"] = {{"g_A", c.phys.g_A}, {"G_F", c.phys.G_F}, {"cos_theta_c", c.phys.cos_theta_c}};
    return j;
}

RunResult run_experiments(const RunConfig& cfg, std::ostream* log) {
    RunResult rr;
    ordered_json& rep = rr.report;
    rep["schema"] = "ibd-report";
    rep["schema_version"] = kReportSchemaVersion;
    rep["experiment"] = cfg.experiment;
    rep["seed"] = cfg.seed;

    ordered_json conf;
    for (const auto& [sec, kv] : cfg.raw)
        for (const auto& [k, v] : kv) conf[sec][k] = v;
    rep["config"] = conf;

    const ModelSetup base = cfg.setup("");
    const ModelConstants c = constants_for(base);
    rep["constants"] = constants_json(c, sigma_sequence(base.masses.m_e, base.delta, std::max(cfg.gap_levels, 4)));
    rep["substitutions"] = {
        "the light mass in the delta range, in sigma_0 and in D~ is read as m_e; D~ with m_n is reported as Dtilde_mn",
        "the mass ordering is read as m_e < m_p < m_n",
        "antiproton spinors are the electron formulas with m_p; positron spinors are the proton formulas with m_e"};
    rr.tables["thresholds.csv"] = thresholds_csv(base);

    std::vector<std::string> names;
    if (cfg.experiment == "all") names = experiment_names();
    else names = {cfg.experiment};

    ordered_json exps, gated = ordered_json::array();
    for (const auto& name : names) {
        const Timer t;
        if (log) *log << "[ibdlab] " << name << " ..." << std::flush;
        Outcome o;
        if (name == "hypothesis-checks") o = run_hypothesis_checks(cfg);
        else if (name == "invariants") o = run_invariants(cfg);
        else if (name == "relative-bound") o = run_relative_bound(cfg, rr);
        else if (name == "ground-state") o = run_ground_state(cfg);
        else if (name == "ir-gap") o = run_ir_gap(cfg, rr);
        else if (name == "pull-through") o = run_pull_through(cfg);
        else if (name == "soft-number") o = run_soft_number(cfg, rr);
        else if (name == "degeneracy") o = run_degeneracy(cfg);
        if (!o.warnings.empty()) o.data["warnings"] = o.warnings;
        exps[name] = o.data;
        gated.push_back({{"name", name}, {"gated", o.gated}, {"pass", o.pass}});
        if (o.gated && !o.pass) rr.all_pass = false;
        if (log) *log << (o.pass ? " pass" : " FAIL") << (o.gated ? "" : " (not gated)") << " ["
                      << std::fixed << std::setprecision(1) << t.seconds() << " s]\n"
                      << std::defaultfloat;
    }
    rep["experiments"] = exps;
    rep["checks"] = gated;
    rep["pass"] = rr.all_pass;
    return rr;
}

std::string content_hash(const ordered_json& report) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a(report.dump())));
    return buf;
}

std::string render_report(const ordered_json& report, const std::string& timestamp) {
    ordered_json out;
    out["timestamp"] = timestamp;
    out["content_hash"] = content_hash(report);
    for (const auto& [k, v] : report.items()) out[k] = v;
    return out.dump(2) + "\n";
}

void write_outputs(const RunResult& r, const std::string& out_dir, const std::string& timestamp) {
    namespace fs = std::filesystem;
    fs::create_directories(fs::path(out_dir) / "tables");
    {
        std::ofstream f(fs::path(out_dir) / "report.json");
        if (!f) throw std::runtime_error("cannot write " + (fs::path(out_dir) / "report.json").string());
        f << render_report(r.report, timestamp);
    }
    for (const auto& [name, text] : r.tables) {
        std::ofstream f(fs::path(out_dir) / "tables" / name);
        f << text;
    }
    if (!r.dumps.empty()) {
        fs::create_directories(fs::path(out_dir) / "operators");
        for (const auto& d : r.dumps) d.op.dump((fs::path(out_dir) / "operators" / (d.name + ".txt")).string(), d.metadata);
    }
}

} // namespace ibd
