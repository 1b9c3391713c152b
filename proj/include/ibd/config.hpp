#pragma once

#include "ibd/spectra.hpp"

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace ibd {

class ConfigError : public std::runtime_error {
  public:
    ConfigError(const std::string& where, const std::string& what) : std::runtime_error(where + ": " + what) {}
};

// section -> key -> raw value, after preset and file have been merged
using RawConfig = std::map<std::string, std::map<std::string, std::string>>;

struct RunConfig {
    RawConfig raw;
    std::string preset = "toy";
    std::string experiment = "all";
    std::string out_dir = "out";
    std::uint64_t seed = 20240501;

    // run parameters
    int relative_trials = 1000;
    int energy_points = 5;
    int gap_levels = 4;
    double gap_g_fraction = 0.25;        // of g2
    double pull_g_fraction = 0.25;       // of g0
    int pull_sigma_level = 1;            // sigma_n used for the cut Hamiltonian
    std::vector<double> soft_g_fractions{0.125, 0.25, 0.5}; // of g0
    int soft_sigma_level = 1;
    double degeneracy_g_fraction = 0.5; // of g2
    bool dump_operators = false;

    // model for the given experiment, with its [grid:name] and [sector:name] overrides
    ModelSetup setup(const std::string& experiment) const;
};

const std::vector<std::string>& experiment_names(); // without "all"

RunConfig preset_config(const std::string& preset);
// INI text on top of a preset; source names the origin in diagnostics.
RunConfig parse_config(const std::string& text, const std::string& preset, const std::string& source = "<string>");
RunConfig load_config(const std::string& path, const std::string& preset_override = "");

// Neutrino shell edges aligned with sigma_1..sigma_levels+1 plus an outer edge.
std::vector<double> auto_shell_edges(double m_e, double delta, int levels, double outer_factor);

} // namespace ibd
