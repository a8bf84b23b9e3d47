#pragma once

#include "fractrans/registry.hpp"
#include "fractrans/solver.hpp"
#include "fractrans/weights.hpp"

#include <map>
#include <string>
#include <vector>

namespace fractrans {

// Norms of theta against one weight (beta = 0 is the unweighted twin).
struct NormSet {
    double beta = 0.0;
    double l2 = 0.0;          // |theta|
    double h_half = 0.0;      // |Lambda^{1/2} theta|
    double h1 = 0.0;          // |Lambda theta|
    double dissip_half = 0.0; // |Lambda^{1/2} theta|^2
    double dissip_1 = 0.0;    // |Lambda theta|^2
    double dissip_3half = 0.0;// |Lambda^{3/2} theta|^2
    double theta_lambda = 0.0;// integral of |theta Lambda theta| w
};

struct ResidualValue {
    double value = 0.0;      // <= tolerance means satisfied
    double tolerance = 0.0;
    bool asserted = false;   // the inequality's hypotheses hold for this run
    bool inconclusive = false;
    bool dt_flag = false;    // time-derivative error could flip the verdict
    bool ok() const { return value <= tolerance; }
};

struct DiagnosticsRecord {
    double t = 0.0;
    double sup_norm = 0.0;
    double min_val = 0.0;
    double max_val = 0.0;
    double grad_sup = 0.0;
    std::vector<NormSet> weighted;
    NormSet unweighted;
    double d3_sq = 0.0;       // |d^3 theta|_2^2
    double lambda72_sq = 0.0; // |Lambda^{7/2} theta|_2^2
    double d4_sq = 0.0;       // |d^4 theta|_2^2
    double cc_slack = 0.0;    // min of 3 theta^2 Lambda theta - Lambda(theta^3), when theta >= 0
    double cc_scale = 0.0;    // 3 |theta|^2_inf |Lambda theta|_inf + |Lambda(theta^3)|_inf
    bool cc_evaluated = false;
    std::map<std::string, ResidualValue> residuals;
};

struct DiagnosticsRequest {
    std::vector<double> betas{0.25, 0.5, 0.75};
    bool cc_check = true;  // evaluated only where theta >= -1e-10
};

DiagnosticsRecord record(const Field& theta, double t, const std::vector<WeightSpec>& weights, bool cc_check = true);

// Everything a residual needs beyond the records.
struct ResidualContext {
    double alpha = 1.0, nu = 1.0, epsilon = 0.0;
    bool nonlinear = true;
    double m0 = 0.0;  // sup of the initial datum
    const ConstantRegistry* registry = nullptr;
};

inline constexpr double residual_rel_tol = 1e-4;

// Derivative of series values v at index i from up to five neighbouring
// records (centred where possible); err estimates the truncation error.
struct TimeDerivative {
    double value;
    double err;
};
TimeDerivative time_derivative(const std::vector<double>& t, const std::vector<double>& v, std::size_t i);

// Residual ids: eql2_<beta>, eqsob3_<beta>, l2, h1_2, sob, h3, cc_pointwise.
void evaluate_residuals(std::vector<DiagnosticsRecord>& records, const ResidualContext& ctx);
std::string beta_tag(double beta);

// min over the grid of 3 theta^2 Lambda theta - Lambda(theta^3); theta must be >= -1e-10.
double cc_pointwise_check(const Field& theta);

struct MagicResult {
    double sup_error;  // sup |2H(f Hf) - (Hf)^2 + f^2| / |f|_inf^2
    bool band_limited; // false: aliasing voids the tolerance (warning only)
};
MagicResult magic_identity_check(const Field& f);

// Probe times where v exceeds v0 e^{rate t} (1 + 1e-4).
int gronwall_envelope(const std::vector<double>& t, const std::vector<double>& v, double rate, double v0);

// Running trapezoid integral of v over t.
std::vector<double> cumulative_integral(const std::vector<double>& t, const std::vector<double>& v);

struct DiagnosedRun {
    RunResult run;
    std::vector<DiagnosticsRecord> records;
};

DiagnosedRun run_with_diagnostics(const Grid& g, const SolverConfig& cfg, const DiagnosticsRequest& req,
                                  const ConstantRegistry& registry);

} // namespace fractrans
