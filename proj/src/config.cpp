#include "ibd/config.hpp"

#include <boost/algorithm/string.hpp>
#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

namespace ibd {

namespace {

const char* kToyPreset = R"([model]
m_e = 1
m_p = 2
m_n = 2.2
eB = 1
g_A = 1.27
G_F = 1.16639e-5
cos_theta_c = 0.9751
delta = 0.5
metric = minkowski

[kernels]
F1.amp = 1
F1.width = 1
F1.rho = 0.5
F1.phase = 0.3
F1.kappa = 1
F1.eta = 0
G1.amp = 1
G1.width = 1
G1.rho = 0.5
G1.phase = -0.2
G1.kappa = 1
G1.eta = 0
F2.amp = 0.8
F2.width = 1.2
F2.rho = 0.4
F2.phase = 0.15
F2.kappa = 1.5
F2.eta = 0
G2.amp = 0.9
G2.width = 0.9
G2.rho = 0.3
G2.phase = 0.4
G2.kappa = 1
G2.eta = 1

[grid]
n_landau = 1
p1_extent = 1
p1_count = 1
p3_extent = 1
p3_count = 2
pn_extent = 0.5
pn_count = 1
neutron_helicity = 0
nu_shells = auto
nu_auto_levels = 4
nu_outer = 1.5
nu_directions = 4
max_modes = 64

[grid:invariants]
n_landau = 0
p3_count = 1
neutron_helicity = 1
nu_shells = 0.5, 1.0
nu_directions = 1

[grid:pull-through]
p3_count = 1
nu_auto_levels = 2
nu_directions = 1

[sector]
max_total = 4
max_dim = 200000

[sector:ir-gap]
max_total = 5
max_neutrino = 2

[sector:degeneracy]
max_total = 5
max_neutrino = 2

[solver]
tol_dense = 1e-10
tol_lanczos = 1e-8
cluster_tol = 1e-7
dense_max = 2000
krylov_dim = 200
max_restarts = 200
quad_order = 128
quad_max_order = 512
quad_rel_tol = 1e-9

[run]
experiment = all
seed = 20240501
out = out
relative_trials = 1000
energy_points = 5
gap_levels = 4
gap_g_fraction = 0.25
pull_g_fraction = 0.25
pull_sigma_level = 1
soft_g_fractions = 0.125, 0.25, 0.5
soft_sigma_level = 1
degeneracy_g_fraction = 0.5
dump_operators = false
)";

// Physical masses in units of the electron mass; the rest follows the toy preset.
const char* kPhysicalOverrides = R"([model]
m_p = 1836.15267
m_n = 1838.68366
)";

const std::set<std::string> kKernelFields{"amp", "width", "rho", "phase", "kappa", "eta"};
const std::set<std::string> kGridKeys{"n_landau",   "p1_extent", "p1_count",       "p3_extent",     "p3_count",
                                      "pn_extent",  "pn_count",  "neutron_helicity", "nu_shells",   "nu_auto_levels",
                                      "nu_outer",   "nu_directions", "max_modes"};
const std::set<std::string> kSectorKeys{"max_total",  "max_electron", "max_positron", "max_proton",
                                        "max_antiproton", "max_neutron", "max_neutrino", "max_dim"};
const std::map<std::string, std::set<std::string>> kFixedSections{
    {"model", {"m_e", "m_p", "m_n", "eB", "g_A", "G_F", "cos_theta_c", "delta", "metric"}},
    {"solver",
     {"tol_dense", "tol_lanczos", "cluster_tol", "dense_max", "krylov_dim", "max_restarts", "quad_order",
      "quad_max_order", "quad_rel_tol"}},
    {"run",
     {"preset", "experiment", "seed", "out", "relative_trials", "energy_points", "gap_levels", "gap_g_fraction",
      "pull_g_fraction", "pull_sigma_level", "soft_g_fractions", "soft_sigma_level", "degeneracy_g_fraction",
      "dump_operators"}},
};

struct Source {
    std::string name;
    std::string text;
    // 1-based line of "key" inside [section], 0 if not found
    int line_of(const std::string& section, const std::string& key) const {
        std::istringstream in(text);
        std::string line, cur;
        int n = 0;
        while (std::getline(in, line)) {
            ++n;
            std::string t = boost::trim_copy(line);
            if (t.empty() || t[0] == ';' || t[0] == '#') continue;
            if (t.front() == '[' && t.back() == ']') {
                cur = boost::trim_copy(t.substr(1, t.size() - 2));
                continue;
            }
            const auto eq = t.find('=');
            if (cur == section && eq != std::string::npos && boost::trim_copy(t.substr(0, eq)) == key) return n;
        }
        return 0;
    }
    std::string where(const std::string& section, const std::string& key) const {
        const int l = line_of(section, key);
        return name + (l ? ":" + std::to_string(l) : std::string()) + " [" + section + "] " + key;
    }
};

void check_known(const std::string& section, const std::string& key, const Source& src) {
    auto bad = [&](const std::string& msg) { throw ConfigError(src.where(section, key), msg); };
    if (section == "kernels") {
        const auto dot = key.find('.');
        if (dot == std::string::npos) bad("kernel keys have the form F1.amp, G2.eta, ...");
        const std::string leg = key.substr(0, dot), field = key.substr(dot + 1);
        if (leg != "F1" && leg != "F2" && leg != "G1" && leg != "G2") bad("unknown kernel '" + leg + "'");
        if (!kKernelFields.count(field)) bad("unknown kernel field '" + field + "'");
        return;
    }
    const std::string head = section.substr(0, section.find(':'));
    if (head == "grid") {
        if (!kGridKeys.count(key)) bad("unknown grid key");
        if (section != "grid") {
            const std::string exp = section.substr(5);
            const auto& names = experiment_names();
            if (std::find(names.begin(), names.end(), exp) == names.end()) bad("unknown experiment '" + exp + "'");
        }
        return;
    }
    if (head == "sector") {
        if (!kSectorKeys.count(key)) bad("unknown sector key");
        return;
    }
    auto it = kFixedSections.find(section);
    if (it == kFixedSections.end()) throw ConfigError(src.name + " [" + section + "]", "unknown section");
    if (!it->second.count(key)) bad("unknown key");
}

void merge_text(RawConfig& raw, const Source& src) {
    namespace pt = boost::property_tree;
    pt::ptree tree;
    std::istringstream in(src.text);
    try {
        pt::read_ini(in, tree);
    } catch (const pt::ini_parser_error& e) {
        throw ConfigError(src.name + ":" + std::to_string(e.line()), e.message());
    }
    for (const auto& [section, body] : tree) {
        if (body.empty() && !body.data().empty())
            throw ConfigError(src.where("", section), "key outside of any section");
        for (const auto& [key, val] : body) {
            check_known(section, key, src);
            raw[section][key] = boost::trim_copy(val.data());
        }
    }
}

// Typed access with field diagnostics.
class Reader {
  public:
    Reader(const RawConfig& raw, const Source& src) : raw_(raw), src_(src) {}

    const std::string* find(const std::string& section, const std::string& key) const {
        auto s = raw_.find(section);
        if (s == raw_.end()) return nullptr;
        auto k = s->second.find(key);
        return k == s->second.end() ? nullptr : &k->second;
    }
    std::string str(const std::string& section, const std::string& key) const {
        const std::string* v = find(section, key);
        if (!v) throw ConfigError(src_.where(section, key), "missing value");
        return *v;
    }
    double num(const std::string& section, const std::string& key) const {
        const std::string v = str(section, key);
        try {
            size_t pos = 0;
            const double d = std::stod(v, &pos);
            if (pos != v.size()) throw std::invalid_argument("trailing");
            return d;
        } catch (const std::exception&) {
            throw ConfigError(src_.where(section, key), "expected a number, got '" + v + "'");
        }
    }
    long long integer(const std::string& section, const std::string& key) const {
        const std::string v = str(section, key);
        try {
            size_t pos = 0;
            const long long d = std::stoll(v, &pos);
            if (pos != v.size()) throw std::invalid_argument("trailing");
            return d;
        } catch (const std::exception&) {
            throw ConfigError(src_.where(section, key), "expected an integer, got '" + v + "'");
        }
    }
    bool boolean(const std::string& section, const std::string& key) const {
        const std::string v = boost::to_lower_copy(str(section, key));
        if (v == "true" || v == "1" || v == "yes") return true;
        if (v == "false" || v == "0" || v == "no") return false;
        throw ConfigError(src_.where(section, key), "expected true/false, got '" + v + "'");
    }
    std::vector<double> list(const std::string& section, const std::string& key) const {
        std::vector<std::string> parts;
        const std::string v = str(section, key);
        boost::split(parts, v, boost::is_any_of(","));
        std::vector<double> out;
        for (auto& p : parts) {
            boost::trim(p);
            try {
                size_t pos = 0;
                out.push_back(std::stod(p, &pos));
                if (pos != p.size()) throw std::invalid_argument("trailing");
            } catch (const std::exception&) {
                throw ConfigError(src_.where(section, key), "expected a comma separated list of numbers");
            }
        }
        return out;
    }
    [[noreturn]] void fail(const std::string& section, const std::string& key, const std::string& msg) const {
        throw ConfigError(src_.where(section, key), msg);
    }
    const Source& source() const { return src_; }

  private:
    const RawConfig& raw_;
    const Source& src_;
};

// Value from [base:exp] if present, else [base].
std::string pick(const Reader& r, const std::string& base, const std::string& exp, const std::string& key) {
    if (!exp.empty() && r.find(base + ":" + exp, key)) return base + ":" + exp;
    return base;
}

} // namespace

const std::vector<std::string>& experiment_names() {
    static const std::vector<std::string> names{"hypothesis-checks", "invariants", "relative-bound", "ground-state",
                                                "ir-gap",            "pull-through", "soft-number",  "degeneracy"};
    return names;
}

std::vector<double> auto_shell_edges(double m_e, double delta, int levels, double outer_factor) {
    if (levels < 1) throw std::invalid_argument("nu_auto_levels must be >= 1");
    if (!(outer_factor > 1)) throw std::invalid_argument("nu_outer must be > 1");
    const auto sig = sigma_sequence(m_e, delta, levels + 1);
    std::vector<double> e;
    for (int n = levels + 1; n >= 1; --n) e.push_back(sig[static_cast<size_t>(n)]);
    e.push_back(outer_factor * sig[1]);
    return e;
}

namespace {

ModelSetup make_setup(const RawConfig& raw, const std::string& exp, const Source& src, std::uint64_t seed) {
    const Reader r(raw, src);
    ModelSetup s;
    s.masses = {r.num("model", "m_e"), r.num("model", "m_p"), r.num("model", "m_n")};
    if (!(s.masses.m_e > 0)) r.fail("model", "m_e", "mass must be > 0");
    if (!(s.masses.m_p > s.masses.m_e)) r.fail("model", "m_p", "need m_e < m_p");
    if (!(s.masses.m_n > 0)) r.fail("model", "m_n", "mass must be > 0");
    s.eB = r.num("model", "eB");
    if (!(s.eB > 0)) r.fail("model", "eB", "must be > 0");
    s.phys.g_A = r.num("model", "g_A");
    s.phys.G_F = r.num("model", "G_F");
    s.phys.cos_theta_c = r.num("model", "cos_theta_c");
    s.delta = r.num("model", "delta");
    if (!(s.delta > 0 && s.delta < s.masses.m_e)) r.fail("model", "delta", "need 0 < delta < m_e");
    const std::string metric = r.str("model", "metric");
    if (metric == "minkowski") s.metric = Metric::minkowski;
    else if (metric == "euclidean") s.metric = Metric::euclidean;
    else r.fail("model", "metric", "expected minkowski or euclidean");

    auto factor = [&](const std::string& leg) {
        KernelFactor f;
        f.charged.amplitude = r.num("kernels", leg + ".amp");
        f.charged.width = r.num("kernels", leg + ".width");
        f.charged.rho = r.num("kernels", leg + ".rho");
        f.charged.phase = r.num("kernels", leg + ".phase");
        const auto k = r.list("kernels", leg + ".kappa");
        if (k.size() == 1) f.neutral.kappa = {k[0], k[0], k[0]};
        else if (k.size() == 3) f.neutral.kappa = {k[0], k[1], k[2]};
        else r.fail("kernels", leg + ".kappa", "expected one or three values");
        f.neutral.eta = r.num("kernels", leg + ".eta");
        return f;
    };
    s.kernels.F = {factor("F1"), factor("F2")};
    s.kernels.G = {factor("G1"), factor("G2")};
    try {
        s.kernels.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError("config [kernels]", e.what());
    }

    auto gnum = [&](const std::string& key) { return r.num(pick(r, "grid", exp, key), key); };
    auto gint = [&](const std::string& key) { return static_cast<int>(r.integer(pick(r, "grid", exp, key), key)); };
    s.grid.n_landau = gint("n_landau");
    s.grid.p1_extent = gnum("p1_extent");
    s.grid.p1_count = gint("p1_count");
    s.grid.p3_extent = gnum("p3_extent");
    s.grid.p3_count = gint("p3_count");
    s.grid.pn_extent = gnum("pn_extent");
    s.grid.pn_count = gint("pn_count");
    s.grid.neutron_helicity = gint("neutron_helicity");
    s.grid.nu_directions = gint("nu_directions");
    s.grid.max_modes_per_species = gint("max_modes");
    const std::string shells_sec = pick(r, "grid", exp, "nu_shells");
    const std::string shells = r.str(shells_sec, "nu_shells");
    if (shells == "auto") {
        try {
            s.grid.nu_shell_edges = auto_shell_edges(s.masses.m_e, s.delta, gint("nu_auto_levels"), gnum("nu_outer"));
        } catch (const std::invalid_argument& e) {
            r.fail(pick(r, "grid", exp, "nu_auto_levels"), "nu_auto_levels", e.what());
        }
    } else {
        s.grid.nu_shell_edges = r.list(shells_sec, "nu_shells");
    }
    try {
        build_grid(s.grid, s.masses, s.eB);
    } catch (const std::invalid_argument& e) {
        throw ConfigError("config [" + (exp.empty() ? std::string("grid") : "grid:" + exp) + "]", e.what());
    }

    auto sint = [&](const std::string& key, long long dflt) {
        const std::string sec = pick(r, "sector", exp, key);
        return r.find(sec, key) ? r.integer(sec, key) : dflt;
    };
    s.caps.max_total = static_cast<int>(sint("max_total", 4));
    const char* names[] = {"max_electron", "max_positron", "max_proton", "max_antiproton", "max_neutron", "max_neutrino"};
    for (int k = 0; k < kNumSpecies; ++k) s.caps.per_species[static_cast<size_t>(k)] = static_cast<int>(sint(names[k], 64));
    s.caps.max_dim = sint("max_dim", 200000);
    if (s.caps.max_total < 0) r.fail("sector", "max_total", "must be >= 0");

    s.eig.tol_dense = r.num("solver", "tol_dense");
    s.eig.tol_lanczos = r.num("solver", "tol_lanczos");
    s.eig.cluster_tol = r.num("solver", "cluster_tol");
    s.eig.dense_max = static_cast<int>(r.integer("solver", "dense_max"));
    s.eig.krylov_dim = static_cast<int>(r.integer("solver", "krylov_dim"));
    s.eig.max_restarts = static_cast<int>(r.integer("solver", "max_restarts"));
    s.eig.seed = seed;
    if (s.eig.krylov_dim < 2) r.fail("solver", "krylov_dim", "must be >= 2");
    s.quad.base_order = static_cast<int>(r.integer("solver", "quad_order"));
    s.quad.max_order = static_cast<int>(r.integer("solver", "quad_max_order"));
    s.quad.rel_tol = r.num("solver", "quad_rel_tol");
    if (s.quad.base_order < 1 || s.quad.base_order > s.quad.max_order || s.quad.max_order > 512)
        r.fail("solver", "quad_order", "need 1 <= quad_order <= quad_max_order <= 512");
    return s;
}

RunConfig build(const RawConfig& raw, const Source& src) {
    const Reader r(raw, src);
    RunConfig c;
    c.raw = raw;
    // validate everything eagerly so errors surface at load time
    c.preset = r.find("run", "preset") ? r.str("run", "preset") : "toy";
    c.experiment = r.str("run", "experiment");
    if (c.experiment != "all") {
        const auto& names = experiment_names();
        if (std::find(names.begin(), names.end(), c.experiment) == names.end())
            r.fail("run", "experiment", "unknown experiment '" + c.experiment + "'");
    }
    c.out_dir = r.str("run", "out");
    const long long seed = r.integer("run", "seed");
    if (seed < 0) r.fail("run", "seed", "seed must be >= 0");
    c.seed = static_cast<std::uint64_t>(seed);
    c.relative_trials = static_cast<int>(r.integer("run", "relative_trials"));
    c.energy_points = static_cast<int>(r.integer("run", "energy_points"));
    c.gap_levels = static_cast<int>(r.integer("run", "gap_levels"));
    c.gap_g_fraction = r.num("run", "gap_g_fraction");
    c.pull_g_fraction = r.num("run", "pull_g_fraction");
    c.pull_sigma_level = static_cast<int>(r.integer("run", "pull_sigma_level"));
    c.soft_g_fractions = r.list("run", "soft_g_fractions");
    c.soft_sigma_level = static_cast<int>(r.integer("run", "soft_sigma_level"));
    c.degeneracy_g_fraction = r.num("run", "degeneracy_g_fraction");
    c.dump_operators = r.boolean("run", "dump_operators");
    if (c.relative_trials < 1) r.fail("run", "relative_trials", "must be >= 1");
    if (c.energy_points < 1) r.fail("run", "energy_points", "must be >= 1");
    if (c.gap_levels < 1) r.fail("run", "gap_levels", "must be >= 1");
    if (c.soft_g_fractions.size() < 2) r.fail("run", "soft_g_fractions", "need at least two couplings for a fit");
    for (double f : c.soft_g_fractions)
        if (!(f > 0)) r.fail("run", "soft_g_fractions", "fractions must be > 0");
    if (c.pull_sigma_level < 0) r.fail("run", "pull_sigma_level", "must be >= 0");
    if (c.soft_sigma_level < 0) r.fail("run", "soft_sigma_level", "must be >= 0");
    make_setup(raw, "", src, c.seed);
    for (const auto& e : experiment_names()) make_setup(raw, e, src, c.seed);
    return c;
}

} // namespace

ModelSetup RunConfig::setup(const std::string& exp) const { return make_setup(raw, exp, Source{"config", ""}, seed); }

RunConfig preset_config(const std::string& preset) { return parse_config("", preset, "<preset>"); }

RunConfig parse_config(const std::string& text, const std::string& preset, const std::string& source) {
    RawConfig raw;
    merge_text(raw, Source{"<preset toy>", kToyPreset});
    // the file may name its own preset
    std::string chosen = preset;
    RawConfig file;
    const Source src{source, text};
    merge_text(file, src);
    if (chosen.empty()) {
        auto it = file.find("run");
        chosen = (it != file.end() && it->second.count("preset")) ? it->second.at("preset") : "toy";
    }
    if (chosen == "physical") merge_text(raw, Source{"<preset physical>", kPhysicalOverrides});
    else if (chosen != "toy") throw ConfigError(source + " [run] preset", "unknown preset '" + chosen + "' (toy|physical)");
    for (const auto& [sec, kv] : file)
        for (const auto& [k, v] : kv) raw[sec][k] = v;
    raw["run"]["preset"] = chosen;
    return build(raw, src);
}

RunConfig load_config(const std::string& path, const std::string& preset_override) {
    std::ifstream f(path);
    if (!f) throw ConfigError(path, "cannot open config file");
    std::stringstream ss;
    ss << f.rdbuf();
    return parse_config(ss.str(), preset_override, path);
}

} // namespace ibd
