#pragma once

#include "fractrans/config.hpp"
#include "fractrans/registry.hpp"

#include "json.hpp"

#include <filesystem>
#include <ostream>
#include <string>
#include <vector>

namespace fractrans {

using ojson = nlohmann::ordered_json;

enum class ContractStatus { Pass, Fail, Inconclusive, RecordOnly };
std::string status_name(ContractStatus s);

struct Contract {
    std::string id;
    ContractStatus status = ContractStatus::RecordOnly;
    ojson detail = ojson::object();
};

struct ExperimentOutcome {
    std::vector<Contract> contracts;
    ojson sections = ojson::object();  // merged into summary.json (constants, results, blowup, ...)
    std::vector<std::string> failures; // one line per violated check
};

struct RunContext {
    ExperimentConfig cfg;
    std::filesystem::path run_dir;
    std::string config_hash;
    const ConstantRegistry* registry = nullptr;  // null only for calibrate-constants
};

// Each writes its own files into ctx.run_dir; summary.json is written by execute().
ExperimentOutcome simulate(const RunContext& ctx);
ExperimentOutcome verify_operators(const RunContext& ctx);
ExperimentOutcome verify_weights(const RunContext& ctx);
ExperimentOutcome verify_commutators(const RunContext& ctx);
ExperimentOutcome verify_inequalities(const RunContext& ctx);
ExperimentOutcome relaxation(const RunContext& ctx);
ExperimentOutcome blowup_sweep(const RunContext& ctx);
ExperimentOutcome calibrate(const RunContext& ctx);

std::filesystem::path default_registry_path();
std::filesystem::path run_directory(const ExperimentConfig& cfg);

// Validates, runs and writes summary.json (also when the run throws).
// Returns 0 when every contract passes, 1 on a failed check or numerical error, 2 on a config error.
int execute(const ExperimentConfig& cfg, std::ostream& log, std::ostream& err);

} // namespace fractrans
