#include "ibd/checks.hpp"
#include "ibd/config.hpp"
#include "ibd/experiments.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>

using namespace ibd;

namespace {

struct Verdict {
    bool pass = false;
    std::string detail;
};

std::string num(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

int failures = 0;

void criterion(int id, const char* name, double limit_s, const std::function<Verdict()>& body) {
    const auto t0 = std::chrono::steady_clock::now();
    Verdict v;
    try {
        v = body();
    } catch (const std::exception& e) {
        v = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool in_time = secs < limit_s;
    const bool ok = v.pass && in_time;
    if (!ok) ++failures;
    std::printf("[%s] criterion %d: %s: %s; runtime %.1f s (limit %.0f s%s)\n", ok ? "PASS" : "FAIL", id, name,
                v.detail.c_str(), secs, limit_s, in_time ? "" : ", exceeded");
    std::fflush(stdout);
}

RunResult run_one(const std::string& experiment) {
    RunConfig cfg = preset_config("toy");
    cfg.experiment = experiment;
    return run_experiments(cfg);
}

const ordered_json& data(const RunResult& r, const std::string& experiment) { return r.report["experiments"][experiment]; }

} // namespace

int main() {
    const RunConfig toy = preset_config("toy");
    const ModelSetup inv = toy.setup("invariants");

    criterion(1, "spinor exactness", 10, [&] {
        const SpinorCheck r = check_spinor_exactness(inv.masses, inv.eB, 6, 20, toy.seed);
        return Verdict{r.max_eigen_rel_err < 1e-6 && r.max_gram_err <= 1e-10,
                       "max Dirac rel err " + num(r.max_eigen_rel_err) + " (< 1e-6), max Gram err " +
                           num(r.max_gram_err) + " (<= 1e-10), " + std::to_string(r.cases) + " spinors"};
    });

    criterion(2, "charge conjugation", 5, [&] {
        const ConjugationCheck r = check_conjugation(inv.masses, inv.eB, 4, 50, toy.seed + 1);
        return Verdict{r.max_landau_err <= 1e-12 && r.max_neutral_err <= 1e-12,
                       "Landau identities err " + num(r.max_landau_err) + ", neutral phase err " +
                           num(r.max_neutral_err) + " (<= 1e-12), " + std::to_string(r.cases) + " cases"};
    });

    criterion(3, "CAR exactness", 30, [&] {
        // bases of 2 to 12 modes, every species present in the larger ones
        std::vector<GridConfig> grids;
        GridConfig g = inv.grid;
        g.n_landau = 0;
        g.p1_count = 1;
        g.p3_count = 1;
        g.pn_count = 1;
        g.nu_directions = 1;
        g.neutron_helicity = 1;
        g.nu_shell_edges = {0.5, 1.0};
        grids.push_back(g); // 6 modes
        g.neutron_helicity = 0;
        g.nu_shell_edges = {0.5, 1.0, 1.5};
        grids.push_back(g); // 8 modes
        g.p3_count = 2;
        grids.push_back(g); // 12 modes
        int total_pairs = 0, mismatches = 0, max_modes = 0;
        std::string sizes;
        for (const auto& gc : grids) {
            const CarCheck r = check_car(build_grid(gc, inv.masses, inv.eB));
            if (r.modes > 12) throw std::logic_error("CAR grid above 12 modes");
            total_pairs += r.pairs;
            mismatches += r.mismatches;
            max_modes = std::max(max_modes, r.modes);
            sizes += (sizes.empty() ? "" : "/") + std::to_string(r.modes);
        }
        return Verdict{mismatches == 0 && max_modes == 12,
                       std::to_string(mismatches) + " mismatches over " + std::to_string(total_pairs) +
                           " operator pairs on bases with " + sizes + " modes"};
    });

    criterion(4, "hermiticity and dense oracle", 5, [&] {
        const ToyHamiltonianCheck r = check_toy_hamiltonian(inv, 0.5 * constants_for(inv).g0);
        return Verdict{r.dim == 64 && r.hermiticity_error <= 1e-12 && r.max_spectrum_diff <= 1e-10,
                       "dim " + std::to_string(r.dim) + ", hermiticity err " + num(r.hermiticity_error) +
                           " (<= 1e-12), spectrum diff " + num(r.max_spectrum_diff) + " (<= 1e-10)"};
    });

    criterion(5, "relative bound", 120, [&] {
        const auto r = run_one("relative-bound");
        const auto& d = data(r, "relative-bound");
        const long long dim = d["dim"], samples = d["samples"], viol = d["violations"];
        return Verdict{dim >= 1000 && samples >= 1000 && viol == 0,
                       "dim " + std::to_string(dim) + ", " + std::to_string(samples) + " vectors, " +
                           std::to_string(viol) + " violations, max ratio " + num(d["max_ratio"])};
    });

    criterion(6, "ground-state energy", 300, [&] {
        const auto r = run_one("ground-state");
        const auto& d = data(r, "ground-state");
        const ModelConstants c = constants_for(toy.setup("ground-state"));
        bool ok = d["g0_E0"].get<double>() == 0.0 && d["g0_vacuum_overlap"].get<double>() == 1.0;
        int points = 0, violations = 0;
        for (const auto& row : d["couplings"]) {
            const double g = row["g"], E0 = row["E0"];
            const double bound = g * c.K * c.B / (1 - c.g0 * c.K * c.C);
            if (!(g > 0 && g <= c.g0)) ok = false;
            if (!(E0 <= 0 && std::abs(E0) <= bound)) ++violations;
            ++points;
        }
        return Verdict{ok && points == 5 && violations == 0,
                       "E0(0) = " + num(d["g0_E0"]) + ", overlap with vacuum " + num(d["g0_vacuum_overlap"]) +
                           ", " + std::to_string(points) + " couplings, " + std::to_string(violations) +
                           " violations"};
    });

    criterion(7, "infrared gap", 600, [&] {
        const auto r = run_one("ir-gap");
        const auto& d = data(r, "ir-gap");
        const ModelSetup s = toy.setup("ir-gap");
        const ModelConstants c = constants_for(s);
        bool ok = s.delta == 0.5 * s.masses.m_e && d["g"].get<double>() == c.g2 / 4 && s.eig.cluster_tol == 1e-7;
        std::string gaps;
        int levels = 0;
        for (const auto& row : d["rows"]) {
            const double sigma = row["sigma"], gap = row["gap"];
            const double bound = (1 - 3 * d["g"].get<double>() * c.Dt / c.gamma) * sigma;
            ok = ok && row["n"].get<int>() == levels + 1 && gap >= bound && row["multiplicity"].get<int>() == 1;
            gaps += (gaps.empty() ? "" : ", ") + num(gap) + " >= " + num(bound);
            ++levels;
        }
        return Verdict{ok && levels == 4, "g = g2/4, n = 1.." + std::to_string(levels) + ": " + gaps};
    });

    criterion(8, "pull-through identity", 300, [&] {
        const auto r = run_one("pull-through");
        const auto& d = data(r, "pull-through");
        const ModelConstants c = constants_for(toy.setup("pull-through"));
        const double res = d["max_residual"];
        const long long viol = d["mode_bound_violations"];
        return Verdict{d["g"].get<double>() == c.g0 / 4 && res <= 1e-8 && viol == 0,
                       "g = g0/4, max residual " + num(res) + " (<= 1e-8), " + std::to_string(viol) +
                           " per-mode bound violations"};
    });

    criterion(9, "soft-neutrino scaling", 600, [&] {
        const auto r = run_one("soft-number");
        const auto& d = data(r, "soft-number");
        const ModelConstants c = constants_for(toy.setup("soft-number"));
        const std::vector<double> gs = d["g"], N = d["N_nu"];
        bool ok = gs.size() == 3 && gs[0] == c.g0 / 8 && gs[1] == c.g0 / 4 && gs[2] == c.g0 / 2;
        // independent least-squares slope of log N against log g
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        double max_ratio = 0;
        for (size_t i = 0; i < gs.size(); ++i) {
            const double x = std::log(gs[i]), y = std::log(N[i]);
            sx += x, sy += y, sxx += x * x, sxy += x * y;
            max_ratio = std::max(max_ratio, N[i] / (gs[i] * gs[i]));
        }
        const double n = static_cast<double>(gs.size());
        const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
        const double C2 = d["C_FG_squared"];
        ok = ok && slope >= 1.9 && max_ratio <= C2;
        return Verdict{ok, "slope " + num(slope) + " (>= 1.9), max N/g^2 " + num(max_ratio) + " <= C^2 estimate " +
                               num(C2)};
    });

    criterion(10, "ground-state simplicity", 300, [&] {
        const auto r = run_one("degeneracy");
        const auto& d = data(r, "degeneracy");
        const ModelConstants c = constants_for(toy.setup("degeneracy"));
        const int mult = d["multiplicity"], ctrl = d["negative_control_multiplicity"];
        const bool hyp = d["derivative_hypothesis"];
        return Verdict{hyp && d["g"].get<double>() <= c.g2 / 2 && mult == 1 && ctrl == 2,
                       "derivative hypothesis " + std::string(hyp ? "holds" : "fails") + ", multiplicity " +
                           std::to_string(mult) + ", negative control " + std::to_string(ctrl)};
    });

    criterion(11, "determinism", 60, [&] {
        int compared = 0, differing = 0;
        for (const char* e : {"invariants", "relative-bound", "pull-through", "soft-number"}) {
            const auto a = run_one(e), b = run_one(e);
            // different timestamps, everything else must match byte for byte
            std::string ra = render_report(a.report, "2000-01-01T00:00:00Z");
            std::string rb = render_report(b.report, "2099-12-31T23:59:59Z");
            ra.erase(0, ra.find('\n', ra.find("\"timestamp\"")));
            rb.erase(0, rb.find('\n', rb.find("\"timestamp\"")));
            if (ra != rb || a.tables != b.tables) ++differing;
            ++compared;
        }
        return Verdict{differing == 0, std::to_string(compared) + " experiments run twice, " +
                                           std::to_string(differing) + " reports differ"};
    });

    std::printf("%s: %d of 11 criteria failed\n", failures ? "FAIL" : "PASS", failures);
    return failures ? 1 : 0;
}
