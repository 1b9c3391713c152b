#include "ibd/fock.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <numbers>
#include <stdexcept>
#include <string>

namespace ibd {

int ModeGrid::total() const {
    int t = 0;
    for (const auto& v : modes) t += static_cast<int>(v.size());
    return t;
}

int grid_decoupled_spin(Species s) {
    switch (s) {
    case Species::electron: return +1;   // U^(e)_{+1}(n=0) = 0
    case Species::positron: return -1;   // W^(e)(-1, 0) = 0
    case Species::proton: return -1;     // U^(p)_{-1}(n=0) = 0
    case Species::antiproton: return +1; // W^(p)(+1, 0) = 0
    default: return 0;
    }
}

namespace {

std::vector<double> midpoints(double extent, int count) {
    const double h = 2.0 * extent / count;
    std::vector<double> x(static_cast<size_t>(count));
    for (int i = 0; i < count; ++i) x[static_cast<size_t>(i)] = -extent + (i + 0.5) * h;
    return x;
}

double species_mass(Species s, const Masses& m) {
    switch (s) {
    case Species::electron:
    case Species::positron: return m.m_e;
    case Species::proton:
    case Species::antiproton: return m.m_p;
    case Species::neutron: return m.m_n;
    default: return 0.0;
    }
}

void check_cap(const std::vector<Mode>& v, Species s, int cap) {
    const int hard = std::min(cap, 64);
    if (static_cast<int>(v.size()) > hard)
        throw std::invalid_argument(std::string("grid: ") + species_name(s) + " has " + std::to_string(v.size()) +
                                    " modes, cap is " + std::to_string(hard));
}

} // namespace

std::vector<std::array<double, 3>> neutrino_directions(int count) {
    const double a = 1.0 / std::sqrt(3.0);
    switch (count) {
    case 1: return {{0.0, 0.0, 1.0}};
    case 4: return {{a, a, a}, {-a, -a, a}, {-a, a, -a}, {a, -a, -a}};
    case 8: {
        std::vector<std::array<double, 3>> d;
        for (int i = 0; i < 8; ++i) d.push_back({(i & 1) ? -a : a, (i & 2) ? -a : a, (i & 4) ? -a : a});
        return d;
    }
    default: throw std::invalid_argument("nu_directions must be 1, 4 or 8");
    }
}

ModeGrid build_grid(const GridConfig& cfg, const Masses& m, double eB) {
    if (cfg.n_landau < 0) throw std::invalid_argument("grid: n_landau must be >= 0");
    if (cfg.p1_count < 1 || cfg.p3_count < 1 || cfg.pn_count < 1)
        throw std::invalid_argument("grid: momentum counts must be >= 1");
    if (!(cfg.p1_extent > 0 && cfg.p3_extent > 0 && cfg.pn_extent > 0))
        throw std::invalid_argument("grid: momentum extents must be > 0");
    if (!(eB > 0)) throw std::invalid_argument("grid: eB must be > 0");
    if (cfg.neutron_helicity < -1 || cfg.neutron_helicity > 1)
        throw std::invalid_argument("grid: neutron_helicity must be -1, 0 or +1");

    ModeGrid g;
    const auto p1s = midpoints(cfg.p1_extent, cfg.p1_count);
    const auto p3s = midpoints(cfg.p3_extent, cfg.p3_count);
    const double wc = (2.0 * cfg.p1_extent / cfg.p1_count) * (2.0 * cfg.p3_extent / cfg.p3_count);
    for (Species sp : {Species::electron, Species::positron, Species::proton, Species::antiproton}) {
        auto& v = g.modes[static_cast<int>(sp)];
        const double mass = species_mass(sp, m);
        for (int n = 0; n <= cfg.n_landau; ++n)
            for (int s : {-1, +1}) {
                if (n == 0 && s == grid_decoupled_spin(sp)) continue;
                for (double p1 : p1s)
                    for (double p3 : p3s) {
                        Mode md;
                        md.species = sp;
                        md.s = s;
                        md.n = n;
                        md.p = {p1, 0.0, p3};
                        md.weight = wc;
                        md.energy = landau_energy(mass, n, p3, eB);
                        v.push_back(md);
                    }
            }
        check_cap(v, sp, cfg.max_modes_per_species);
    }

    const auto pn = midpoints(cfg.pn_extent, cfg.pn_count);
    const double hn = 2.0 * cfg.pn_extent / cfg.pn_count;
    auto& nv = g.modes[static_cast<int>(Species::neutron)];
    for (double a : pn)
        for (double b : pn)
            for (double c : pn)
                for (int tl : {+1, -1}) {
                    if (cfg.neutron_helicity != 0 && tl != cfg.neutron_helicity) continue;
                    Mode md;
                    md.species = Species::neutron;
                    md.s = tl;
                    md.p = {a, b, c};
                    md.weight = hn * hn * hn;
                    md.energy = std::sqrt(m.m_n * m.m_n + a * a + b * b + c * c);
                    nv.push_back(md);
                }
    check_cap(nv, Species::neutron, cfg.max_modes_per_species);

    const auto& e = cfg.nu_shell_edges;
    if (e.size() < 2) throw std::invalid_argument("grid: need at least two neutrino shell edges");
    if (!(e.front() > 0)) throw std::invalid_argument("grid: innermost neutrino shell edge must be > 0");
    for (size_t i = 1; i < e.size(); ++i)
        if (!(e[i] > e[i - 1])) throw std::invalid_argument("grid: neutrino shell edges must increase");
    g.nu_shell_edges = e;
    const auto dirs = neutrino_directions(cfg.nu_directions);
    auto& uv = g.modes[static_cast<int>(Species::neutrino)];
    for (size_t i = 0; i + 1 < e.size(); ++i) {
        const double r = 0.5 * (e[i] + e[i + 1]);
        const double vol = 4.0 / 3.0 * std::numbers::pi * (std::pow(e[i + 1], 3) - std::pow(e[i], 3));
        for (const auto& d : dirs) {
            Mode md;
            md.species = Species::neutrino;
            md.s = -1;
            md.p = {r * d[0], r * d[1], r * d[2]};
            md.weight = vol / static_cast<double>(dirs.size());
            md.energy = r;
            md.shell = static_cast<int>(i);
            uv.push_back(md);
        }
    }
    check_cap(uv, Species::neutrino, cfg.max_modes_per_species);
    return g;
}

ModeGrid filter_neutrinos(const ModeGrid& g, double min_radius) {
    ModeGrid out = g;
    auto& v = out.modes[static_cast<int>(Species::neutrino)];
    v.erase(std::remove_if(v.begin(), v.end(), [&](const Mode& m) { return m.p.norm() < min_radius; }), v.end());
    return out;
}

void check_shell_alignment(const std::vector<double>& edges, double sigma) {
    for (size_t i = 0; i + 1 < edges.size(); ++i) {
        const double tol = 1e-12 * edges[i + 1];
        if (sigma > edges[i] + tol && sigma < edges[i + 1] - tol)
            throw std::invalid_argument("neutrino shell [" + std::to_string(edges[i]) + ", " +
                                        std::to_string(edges[i + 1]) + ") straddles sigma = " +
                                        std::to_string(sigma));
    }
}

// ---- Fock states ----

bool FockState::operator<(const FockState& o) const {
    const int a = count(), b = o.count();
    if (a != b) return a < b;
    return occ < o.occ;
}

size_t FockStateHash::operator()(const FockState& s) const {
    std::uint64_t h = 1469598103934665603ULL;
    for (auto w : s.occ) {
        h ^= w + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
        h *= 1099511628211ULL;
    }
    return static_cast<size_t>(h);
}

std::pair<FockState, int> apply_ladder(const FockState& st, Species sp, int idx, Ladder kind) {
    const int k = static_cast<int>(sp);
    const std::uint64_t bit = 1ULL << idx;
    const bool occupied = st.occ[k] & bit;
    if ((kind == Ladder::create) == occupied) return {st, 0};
    int before = std::popcount(st.occ[k] & (bit - 1));
    for (int j = 0; j < k; ++j) before += std::popcount(st.occ[j]);
    FockState out = st;
    out.occ[k] ^= bit;
    return {out, (before & 1) ? -1 : 1};
}

FockBasis::FockBasis(std::vector<FockState> states) : states_(std::move(states)) {
    std::sort(states_.begin(), states_.end());
    states_.erase(std::unique(states_.begin(), states_.end()), states_.end());
    index_.reserve(states_.size());
    for (size_t i = 0; i < states_.size(); ++i) index_.emplace(states_[i], static_cast<std::int64_t>(i));
}

std::int64_t FockBasis::find(const FockState& s) const {
    auto it = index_.find(s);
    return it == index_.end() ? -1 : it->second;
}

namespace {

bool within_caps(const FockState& s, const SectorCaps& caps) {
    if (s.count() > caps.max_total) return false;
    for (int k = 0; k < kNumSpecies; ++k)
        if (std::popcount(s.occ[k]) > caps.per_species[k]) return false;
    return true;
}

void check_dim(size_t n, const SectorCaps& caps) {
    if (static_cast<std::int64_t>(n) > caps.max_dim)
        throw std::length_error("Fock basis exceeds max_dim = " + std::to_string(caps.max_dim));
}

} // namespace

FockBasis enumerate_basis(const ModeGrid& g, const SectorCaps& caps) {
    std::vector<FockState> out;
    FockState cur;
    // species by species; within a species, subsets in increasing mode order
    std::function<void(int, int)> species_rec;
    std::function<void(int, int, int, int)> subsets = [&](int sp, int from, int in_species, int total) {
        species_rec(sp + 1, total);
        if (in_species >= caps.per_species[sp] || total >= caps.max_total) return;
        const int nm = g.count(static_cast<Species>(sp));
        for (int i = from; i < nm; ++i) {
            cur.occ[sp] |= 1ULL << i;
            subsets(sp, i + 1, in_species + 1, total + 1);
            cur.occ[sp] &= ~(1ULL << i);
        }
    };
    species_rec = [&](int sp, int total) {
        if (sp == kNumSpecies) {
            out.push_back(cur);
            check_dim(out.size(), caps);
            return;
        }
        subsets(sp, 0, 0, total);
    };
    species_rec(0, 0);
    return FockBasis(std::move(out));
}

std::array<Species, 4> process_species(int process) {
    if (process == 1 || process == 2) return {Species::electron, Species::proton, Species::neutron, Species::neutrino};
    if (process == 3 || process == 4)
        return {Species::positron, Species::antiproton, Species::neutron, Species::neutrino};
    throw std::invalid_argument("process must be 1..4");
}

void for_each_transition(const ModeGrid& g, const FockState& st, int process,
                         const std::function<void(const std::array<int, 4>&, const FockState&, int)>& f) {
    const auto sp = process_species(process);
    // Operators applied right to left, as (leg, kind) in application order.
    std::array<std::pair<int, Ladder>, 4> seq;
    switch (process) {
    case 1: // b*(1) b*(2) b(3) b(4)
        seq = {{{3, Ladder::annihilate}, {2, Ladder::annihilate}, {1, Ladder::create}, {0, Ladder::create}}};
        break;
    case 2: // b*(4) b*(3) b(2) b(1)
        seq = {{{0, Ladder::annihilate}, {1, Ladder::annihilate}, {2, Ladder::create}, {3, Ladder::create}}};
        break;
    case 3: // b*(4) b*(3) b*(2) b*(1)
        seq = {{{0, Ladder::create}, {1, Ladder::create}, {2, Ladder::create}, {3, Ladder::create}}};
        break;
    default: // b(4) b(3) b(2) b(1)
        seq = {{{0, Ladder::annihilate}, {1, Ladder::annihilate}, {2, Ladder::annihilate}, {3, Ladder::annihilate}}};
        break;
    }
    std::array<int, 4> k{};
    std::function<void(int, const FockState&, int)> step = [&](int depth, const FockState& s, int sign) {
        if (depth == 4) {
            f(k, s, sign);
            return;
        }
        const auto [leg, kind] = seq[static_cast<size_t>(depth)];
        const Species species = sp[static_cast<size_t>(leg)];
        const std::uint64_t w = s.occ[static_cast<int>(species)];
        const int nm = g.count(species);
        for (int i = 0; i < nm; ++i) {
            const bool occ = (w >> i) & 1ULL;
            if (occ != (kind == Ladder::annihilate)) continue;
            auto [next, sg] = apply_ladder(s, species, i, kind);
            k[static_cast<size_t>(leg)] = i;
            step(depth + 1, next, sign * sg);
        }
    };
    step(0, st, 1);
}

FockBasis closure_basis(const ModeGrid& g, const std::vector<FockState>& seeds, const SectorCaps& caps,
                        int max_depth) {
    std::unordered_map<FockState, int, FockStateHash> depth;
    std::deque<FockState> queue;
    for (const auto& s : seeds) {
        if (!within_caps(s, caps)) continue;
        if (depth.emplace(s, 0).second) queue.push_back(s);
    }
    while (!queue.empty()) {
        const FockState s = queue.front();
        queue.pop_front();
        const int d = depth[s];
        if (max_depth >= 0 && d >= max_depth) continue;
        for (int j = 1; j <= 4; ++j)
            for_each_transition(g, s, j, [&](const std::array<int, 4>&, const FockState& t, int) {
                if (!within_caps(t, caps)) return;
                if (depth.emplace(t, d + 1).second) {
                    check_dim(depth.size(), caps);
                    queue.push_back(t);
                }
            });
    }
    std::vector<FockState> out;
    out.reserve(depth.size());
    for (const auto& [s, d] : depth) out.push_back(s);
    return FockBasis(std::move(out));
}

FockBasis merge_bases(const FockBasis& a, const FockBasis& b) {
    std::vector<FockState> v = a.states();
    v.insert(v.end(), b.states().begin(), b.states().end());
    return FockBasis(std::move(v));
}

SparseOperator ladder_operator(const FockBasis& b, Species sp, int idx, Ladder kind) {
    std::vector<Triplet> t;
    for (std::int64_t i = 0; i < b.size(); ++i) {
        auto [s, sign] = apply_ladder(b[i], sp, idx, kind);
        if (sign == 0) continue;
        const std::int64_t j = b.find(s);
        if (j < 0) continue; // leaves the truncated space
        t.push_back({j, i, cplx(sign, 0.0)});
    }
    return SparseOperator(b.size(), t, false);
}

SparseOperator number_operator(const FockBasis& b, const ModeGrid& g, Species sp,
                               const std::function<bool(const Mode&)>& pred) {
    std::uint64_t mask = 0;
    for (int i = 0; i < g.count(sp); ++i)
        if (!pred || pred(g.at(sp, i))) mask |= 1ULL << i;
    std::vector<Triplet> t;
    for (std::int64_t i = 0; i < b.size(); ++i) {
        const int c = std::popcount(b[i].occ[static_cast<int>(sp)] & mask);
        if (c) t.push_back({i, i, cplx(c, 0.0)});
    }
    return SparseOperator(b.size(), t, true);
}

} // namespace ibd
