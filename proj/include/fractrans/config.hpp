#pragma once

#include "fractrans/solver.hpp"

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace fractrans {

enum class ExperimentKind {
    Simulate,
    VerifyOperators,
    VerifyWeights,
    VerifyCommutators,
    VerifyInequalities,
    RelaxationStudy,
    BlowupSweep,
    CalibrateConstants,
};

ExperimentKind parse_kind(const std::string& name);
std::string kind_name(ExperimentKind k);
const std::vector<std::string>& kind_names();

// Parse or validation failure; `key` is section.key and `location` is
// "file:line" when the problem comes from a config line.
class ConfigParseError : public std::runtime_error {
public:
    ConfigParseError(std::string key, std::string location, const std::string& what);
    const std::string& key() const { return key_; }
    const std::string& location() const { return location_; }

private:
    std::string key_;
    std::string location_;
};

struct ExperimentConfig {
    ExperimentKind kind = ExperimentKind::Simulate;

    // [grid]
    double half_length = 50.0;
    std::size_t n = 4096;

    // [equation] [time] [data] and blow-up handling
    SolverConfig solver;

    // [run]
    std::vector<double> betas{0.25, 0.5, 0.75};
    std::uint64_t seed = 2024;
    std::string outdir = "runs";
    std::string run_id;  // empty: <kind>-<hash prefix>
    std::string registry;  // empty: the shipped registry
    unsigned jobs = 1;

    // [sweep]
    std::vector<double> sweep_alphas{0.25, 0.4, 1.0};
    std::vector<double> sweep_amplitudes{4.0};

    // [relaxation]
    LadderKind ladder = LadderKind::Epsilon;
    std::vector<double> ladder_values{1e-1, 1e-2, 1e-3, 0.0};
    double relax_delta = 0.1;
    double relax_probe = 0.05;

    // [suite] random families used by the verify-* commands
    std::size_t suite_size = 50;

    // [truncation] larger box for the cutoff commutator scaling
    double trunc_half_length = 200.0;
    std::size_t trunc_n = 16384;
    std::vector<double> trunc_radii{4.0, 8.0, 16.0, 32.0};

    // Checks cross-field invariants; throws ConfigParseError naming the key.
    void validate() const;
};

// Flat "key = value" text with [section] headers and '#' comments.
ExperimentConfig parse_config(const std::string& text, const std::string& source = "<config>",
                              ExperimentConfig base = {});
// Applies "section.key=value".
void apply_override(ExperimentConfig& cfg, const std::string& assignment);
// Every key with its resolved value, one per line in a fixed order.
std::string canonical_text(const ExperimentConfig& cfg);
// SHA-256 of canonical_text without run.outdir, run.run_id and run.jobs, lowercase hex.
std::string config_hash(const ExperimentConfig& cfg);
std::string sha256_hex(const std::string& data);

} // namespace fractrans
