#pragma once

#include "ibd/free_spinors.hpp"
#include "ibd/kernels.hpp"
#include "ibd/landau_spinors.hpp"
#include "ibd/sparse.hpp"
#include "ibd/vertex.hpp"

#include <array>
#include <bit>
#include <cstdint>
#include <functional>
#include <unordered_map>
#include <utility>
#include <vector>

namespace ibd {

// ---- mode grid ----

struct Mode {
    Species species = Species::electron;
    int s = -1; // spin label (charged), 2*lambda (neutron), -1 (neutrino)
    int n = 0;  // Landau index (charged only)
    Momentum3 p;
    double weight = 0.0;
    double energy = 0.0;
    int shell = -1; // neutrino shell index
    ChargedMode charged() const { return {s, n, p.p1, p.p3}; }
    NeutronMode neutron() const { return {p, s}; }
};

struct GridConfig {
    int n_landau = 1;
    double p1_extent = 1.0;
    int p1_count = 1;
    double p3_extent = 1.0;
    int p3_count = 1;
    double pn_extent = 1.0;
    int pn_count = 1;
    int neutron_helicity = 0; // 0: both, +1/-1: that helicity only
    std::vector<double> nu_shell_edges{0.1, 0.25, 0.5, 1.0, 1.5};
    int nu_directions = 4;
    int max_modes_per_species = 64;
};

struct ModeGrid {
    std::array<std::vector<Mode>, kNumSpecies> modes;
    std::vector<double> nu_shell_edges;
    int count(Species s) const { return static_cast<int>(modes[static_cast<int>(s)].size()); }
    const Mode& at(Species s, int i) const { return modes[static_cast<int>(s)][static_cast<size_t>(i)]; }
    int total() const;
};

// Spin label at n = 0 that carries no mode in the Fock grid of that species.
int grid_decoupled_spin(Species s);

ModeGrid build_grid(const GridConfig& cfg, const Masses& m, double eB);
// Keep only neutrino modes with |p| >= min_radius (the Fock space above a cutoff).
ModeGrid filter_neutrinos(const ModeGrid& g, double min_radius);
// Throws std::invalid_argument when sigma lies strictly inside a neutrino shell.
void check_shell_alignment(const std::vector<double>& edges, double sigma);
std::vector<std::array<double, 3>> neutrino_directions(int count);

// ---- Fock states ----

struct FockState {
    std::array<std::uint64_t, kNumSpecies> occ{};
    int count() const {
        int c = 0;
        for (auto w : occ) c += std::popcount(w);
        return c;
    }
    int count(Species s) const { return std::popcount(occ[static_cast<int>(s)]); }
    bool has(Species s, int i) const { return (occ[static_cast<int>(s)] >> i) & 1ULL; }
    bool operator==(const FockState& o) const { return occ == o.occ; }
    bool operator<(const FockState& o) const;
};

struct FockStateHash {
    size_t operator()(const FockState& s) const;
};

enum class Ladder { create, annihilate };

// Fermionic action with sign (-1)^(occupied modes preceding the target in the
// global order e-, e+, p+, p-, n, nu). Returns sign 0 when Pauli-blocked.
std::pair<FockState, int> apply_ladder(const FockState& st, Species sp, int idx, Ladder kind);

struct SectorCaps {
    int max_total = 4;
    std::array<int, kNumSpecies> per_species{64, 64, 64, 64, 64, 64};
    std::int64_t max_dim = 200000;
};

class FockBasis {
  public:
    FockBasis() = default;
    explicit FockBasis(std::vector<FockState> states); // sorts into canonical order
    std::int64_t size() const { return static_cast<std::int64_t>(states_.size()); }
    const FockState& operator[](std::int64_t i) const { return states_[static_cast<size_t>(i)]; }
    std::int64_t find(const FockState& s) const;
    const std::vector<FockState>& states() const { return states_; }

  private:
    std::vector<FockState> states_;
    std::unordered_map<FockState, std::int64_t, FockStateHash> index_;
};

// Every occupation pattern allowed by the caps.
FockBasis enumerate_basis(const ModeGrid& g, const SectorCaps& caps);
// States reachable from the seeds under the four interaction monomials,
// within the caps; max_depth < 0 means unlimited.
FockBasis closure_basis(const ModeGrid& g, const std::vector<FockState>& seeds, const SectorCaps& caps,
                        int max_depth = -1);
FockBasis merge_bases(const FockBasis& a, const FockBasis& b);

// ---- interaction monomials ----

// Species of the four legs of process j (1..4): {xi1, xi2, xi3, xi4}.
std::array<Species, 4> process_species(int process);

// For every mode tuple compatible with the state, apply the monomial of
// process j (operators right to left) and report (k1..k4, target, sign != 0).
void for_each_transition(const ModeGrid& g, const FockState& st, int process,
                         const std::function<void(const std::array<int, 4>&, const FockState&, int)>& f);

// ---- operators on a basis ----

SparseOperator ladder_operator(const FockBasis& b, Species sp, int idx, Ladder kind);
SparseOperator number_operator(const FockBasis& b, const ModeGrid& g, Species sp,
                               const std::function<bool(const Mode&)>& pred = nullptr);

} // namespace ibd
