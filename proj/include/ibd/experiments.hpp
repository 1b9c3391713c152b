#pragma once

#include "ibd/config.hpp"
#include "ibd/kernels.hpp"
#include "ibd/sparse.hpp"

#include <json.hpp>

#include <map>
#include <ostream>
#include <string>
#include <vector>

namespace ibd {

using ordered_json = nlohmann::ordered_json;

constexpr int kReportSchemaVersion = 1;

struct OperatorDump {
    std::string name;
    SparseOperator op;
    std::string metadata;
};

struct RunResult {
    ordered_json report;                        // without timestamp and content hash
    std::map<std::string, std::string> tables; // "ir_gap.csv" -> CSV text
    std::vector<OperatorDump> dumps;
    bool all_pass = true;
};

ModelConstants constants_for(const ModelSetup& s);
ordered_json constants_json(const ModelConstants& c, const std::vector<double>& sigmas);

// Runs cfg.experiment (or every experiment for "all"). Progress goes to log.
RunResult run_experiments(const RunConfig& cfg, std::ostream* log = nullptr);

// Hash of the report body (FNV-1a of its canonical dump), as 16 hex digits.
std::string content_hash(const ordered_json& report);
// Report text with timestamp and content_hash fields added.
std::string render_report(const ordered_json& report, const std::string& timestamp);
// Writes report.json, tables/*.csv and operators/*.txt under out_dir.
void write_outputs(const RunResult& r, const std::string& out_dir, const std::string& timestamp);

} // namespace ibd
