#include "ibd/config.hpp"
#include "ibd/experiments.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <ctime>
#include <iostream>

namespace {

std::string utc_timestamp() {
    const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"ibdlab: truncated Fock-space experiments for the inverse beta decay model in a magnetic field"};
    std::string config_path, experiment, out_dir, preset;
    std::uint64_t seed = 0;
    app.add_option("--config", config_path, "INI config file (defaults to the preset)");
    app.add_option("--preset", preset, "toy or physical")->check(CLI::IsMember({"toy", "physical"}));
    std::vector<std::string> choices = ibd::experiment_names();
    choices.push_back("all");
    app.add_option("--experiment", experiment, "experiment to run (default all)")->check(CLI::IsMember(choices));
    app.add_option("--out", out_dir, "output directory");
    auto* seed_opt = app.add_option("--seed", seed, "RNG seed");
    auto* quiet = app.add_flag("--quiet", "no progress output");
    CLI11_PARSE(app, argc, argv);

    try {
        ibd::RunConfig cfg = config_path.empty() ? ibd::preset_config(preset.empty() ? "toy" : preset)
                                                 : ibd::load_config(config_path, preset);
        if (!experiment.empty()) cfg.experiment = experiment;
        if (!out_dir.empty()) cfg.out_dir = out_dir;
        if (*seed_opt) cfg.seed = seed;

        const ibd::RunResult r = ibd::run_experiments(cfg, *quiet ? nullptr : &std::cerr);
        ibd::write_outputs(r, cfg.out_dir, utc_timestamp());
        std::cout << (r.all_pass ? "PASS" : "FAIL") << " content_hash=" << ibd::content_hash(r.report)
                  << " report=" << cfg.out_dir << "/report.json\n";
        return r.all_pass ? 0 : 1;
    } catch (const ibd::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    }
}
