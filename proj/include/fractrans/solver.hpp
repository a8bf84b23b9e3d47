#pragma once

#include "fractrans/field.hpp"
#include "fractrans/initial_data.hpp"

#include <cstddef>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace fractrans {

// Thrown by validate(); field() names the offending setting.
class ConfigError : public std::invalid_argument {
public:
    ConfigError(std::string field, const std::string& what)
        : std::invalid_argument(field + ": " + what), field_(std::move(field)) {}
    const std::string& field() const { return field_; }

private:
    std::string field_;
};

enum class StepMode { Fixed, Adaptive };

struct StepPolicy {
    StepMode mode = StepMode::Adaptive;
    double dt = 1e-3;      // fixed mode
    double cfl = 0.4;      // adaptive mode
    double dt_max = 1e-2;  // adaptive mode
};

// theta_t + theta_x H theta + nu Lambda^alpha theta = eps theta_xx,
// started from the initial datum mollified at scale eta (eta = 0: unmollified).
struct SolverConfig {
    double alpha = 1.0;
    double nu = 1.0;
    double epsilon = 0.0;
    double eta = 0.0;
    double t_end = 1.0;
    StepPolicy step;
    bool dealias = true;
    bool nonlinear = true;
    InitialData initial;

    // probes: every probe_every steps, or on a fixed time grid when probe_interval > 0
    std::size_t probe_every = 10;
    double probe_interval = 0.0;

    // blow-up handling
    bool continue_after_breach = true;
    double dt_floor = 1e-7;
    std::size_t max_steps = 2'000'000;

    void validate() const;
};

struct TrajectoryState {
    double t = 0.0;
    Field theta;
    std::size_t step_count = 0;
    double dt_last = 0.0;
};

enum class BlowupIndicator { None, GradientSup, DtCollapse, H3Norm };

struct BlowupReport {
    bool detected = false;
    double t_detect = 0.0;
    BlowupIndicator indicator = BlowupIndicator::None;
    double growth = 1.0;           // max_t |theta_x|_inf / |theta_x(0)|_inf
    double dt_min = 0.0;
    bool dt_collapse = false;
    bool non_finite = false;
    bool breach = false;           // |theta|_inf > 10 |theta0|_inf + 1
    double t_breach = 0.0;
    double t_final = 0.0;
    double final_sup = 0.0;
    std::vector<double> history_t;  // one entry per accepted step (and t = 0)
    std::vector<double> history;    // |theta_x|_inf
};

std::string indicator_name(BlowupIndicator i);

// Worst drift of the interpolant extrema against the initial ones over the probes.
struct ExtremaTrack {
    double max0 = 0.0, min0 = 0.0;
    double max_rise = 0.0;  // max over probes of max theta(t) - max theta(0)
    double min_drop = 0.0;  // max over probes of min theta(0) - min theta(t)
    std::size_t probes = 0;
};

struct RunResult {
    TrajectoryState final_state;
    BlowupReport blowup;
    ExtremaTrack extrema;
    bool reached_end = false;
};

using ProbeObserver = std::function<void(const TrajectoryState&)>;

// The mollified datum the run starts from.
Field initial_field(const Grid& g, const SolverConfig& cfg);

// -(theta_x H theta), from dealiased factors with a dealiased product when cfg.dealias.
Field advection(const Field& theta, bool dealias);
// Full right-hand side.
Field rhs(const Field& theta, const SolverConfig& cfg);
// Half-spectrum symbol of the linear part, -nu |k|^alpha - eps k^2.
std::vector<double> linear_symbol(const Grid& g, const SolverConfig& cfg);

// dt chosen by the policy for the current state (before clipping to probes).
double choose_dt(const Field& theta, const SolverConfig& cfg);
// One integrating-factor RK4 step of size dt.
TrajectoryState step(const TrajectoryState& s, const SolverConfig& cfg, double dt);
TrajectoryState step(const TrajectoryState& s, const SolverConfig& cfg);

// The observer sees t = 0, every probe and the final state.
RunResult run(const Grid& g, const SolverConfig& cfg, const ProbeObserver& observer = {});

enum class Verdict { Detected, NotDetected, Inconclusive };
std::string verdict_name(Verdict v);

struct RefinementCheck {
    BlowupReport coarse, fine;
    Verdict verdict = Verdict::NotDetected;
};

// Runs on g and on g.refined() (concurrently when jobs > 1); detected only when both runs detect.
RefinementCheck confirm_blowup(const Grid& g, const SolverConfig& cfg, unsigned jobs = 2);

struct PicardResult {
    std::vector<double> deviation;   // sup |theta^(m)(T) - theta_stepped(T)|, m = 0..K
    std::vector<double> increment;   // sup_t |theta^(m+1) - theta^(m)|, m = 0..K-1
    bool contraction = true;
    double max_deviation = 0.0;      // deviation[K]
};

// Duhamel fixed-point iteration on [0, t_short] over `nodes` uniform time nodes
// (composite trapezoid in s). t_short <= 0 means 16 steps of the step policy.
PicardResult picard_validate(const Grid& g, const SolverConfig& cfg, int K, double t_short = 0.0,
                             std::size_t nodes = 64);

enum class LadderKind { Epsilon, Eta };

struct RelaxationTable {
    LadderKind kind = LadderKind::Epsilon;
    std::vector<double> values;
    std::vector<double> distances;  // between values[i] and values[i+1]
    bool monotone = true;
};

// L2 space-time distances between consecutive ladder solutions on [delta, t_end],
// sampled every probe_interval. Runs execute concurrently up to `jobs`.
RelaxationTable relaxation_study(const Grid& g, const SolverConfig& base, LadderKind kind,
                                 const std::vector<double>& ladder, double probe_interval = 0.05,
                                 double delta = 0.1, unsigned jobs = 1);

} // namespace fractrans
