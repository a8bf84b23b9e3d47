#include "fractrans/solver.hpp"

#include "fractrans/parallel.hpp"
#include "fractrans/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace fractrans {

void SolverConfig::validate() const
{
    if (!(alpha > 0.0 && alpha <= 2.0)) throw ConfigError("alpha", "must lie in (0, 2]");
    if (!(nu >= 0.0) || !std::isfinite(nu)) throw ConfigError("nu", "must be a nonnegative number");
    if (!(epsilon >= 0.0) || !std::isfinite(epsilon)) throw ConfigError("epsilon", "must be a nonnegative number");
    if (!(eta >= 0.0) || !std::isfinite(eta)) throw ConfigError("eta", "must be a nonnegative number");
    if (!(t_end > 0.0) || !std::isfinite(t_end)) throw ConfigError("t_end", "must be positive");
    if (step.mode == StepMode::Fixed && !(step.dt > 0.0)) throw ConfigError("dt", "must be positive");
    if (step.mode == StepMode::Adaptive) {
        if (!(step.cfl > 0.0 && step.cfl <= 1.0)) throw ConfigError("cfl", "must lie in (0, 1]");
        if (!(step.dt_max > 0.0)) throw ConfigError("dt_max", "must be positive");
    }
    if (probe_every == 0) throw ConfigError("probe_every", "must be at least 1");
    if (!(probe_interval >= 0.0)) throw ConfigError("probe_interval", "must be nonnegative");
    if (!(dt_floor > 0.0)) throw ConfigError("dt_floor", "must be positive");
    if (max_steps == 0) throw ConfigError("max_steps", "must be at least 1");
    if (!std::isfinite(initial.amplitude)) throw ConfigError("amplitude", "must be finite");
    if (!(initial.width > 0.0)) throw ConfigError("width", "must be positive");
}

std::string indicator_name(BlowupIndicator i)
{
    switch (i) {
    case BlowupIndicator::None: return "none";
    case BlowupIndicator::GradientSup: return "gradient_sup";
    case BlowupIndicator::DtCollapse: return "dt_collapse";
    case BlowupIndicator::H3Norm: return "h3_norm";
    }
    return "none";
}

std::string verdict_name(Verdict v)
{
    switch (v) {
    case Verdict::Detected: return "detected";
    case Verdict::NotDetected: return "not_detected";
    case Verdict::Inconclusive: return "inconclusive";
    }
    return "inconclusive";
}

Field initial_field(const Grid& g, const SolverConfig& cfg)
{
    const Field f = cfg.initial.sample(g);
    return cfg.eta > 0.0 ? mollify(f, cfg.eta) : f;
}

Field advection(const Field& theta, bool dealias_on)
{
    if (!dealias_on) return -(derivative(theta) * hilbert(theta));
    const Field d = dealias(theta);
    return -dealias(derivative(d) * hilbert(d));
}

std::vector<double> linear_symbol(const Grid& g, const SolverConfig& cfg)
{
    std::vector<double> s(g.spectrum_size(), 0.0);
    for (std::size_t m = 1; m < s.size(); ++m) {
        const double k = std::abs(g.wavenumber(m));
        s[m] = -cfg.nu * std::pow(k, cfg.alpha) - cfg.epsilon * k * k;
    }
    return s;
}

Field rhs(const Field& theta, const SolverConfig& cfg)
{
    const std::vector<double> lin = linear_symbol(theta.grid(), cfg);
    std::vector<Complex> out(theta.spectrum());
    for (std::size_t m = 0; m < out.size(); ++m) out[m] *= lin[m];
    if (cfg.nonlinear) {
        const Field adv = advection(theta, cfg.dealias);
        const auto& a = adv.spectrum();
        for (std::size_t m = 0; m < out.size(); ++m) out[m] += a[m];
    }
    return Field::from_spectrum(theta.grid(), std::move(out));
}

double choose_dt(const Field& theta, const SolverConfig& cfg)
{
    if (cfg.step.mode == StepMode::Fixed) return cfg.step.dt;
    const double h = theta.grid().spacing();
    const double u = std::max(hilbert(theta).sup_norm(), 1e-8);
    const double gx = std::max(derivative(theta).sup_norm(), 1e-8);
    return std::min({cfg.step.dt_max, cfg.step.cfl * h / u, cfg.step.cfl / gx});
}

namespace {

using Spectrum = std::vector<Complex>;

Spectrum nonlinear(const Grid& g, const Spectrum& v, const SolverConfig& cfg)
{
    if (!cfg.nonlinear) return Spectrum(v.size());
    return advection(Field::from_spectrum(g, v), cfg.dealias).spectrum();
}

} // namespace

TrajectoryState step(const TrajectoryState& s, const SolverConfig& cfg, double dt)
{
    const Grid& g = s.theta.grid();
    const std::vector<double> lin = linear_symbol(g, cfg);
    const std::size_t n = lin.size();
    std::vector<double> e(n), e2(n);
    for (std::size_t m = 0; m < n; ++m) {
        e[m] = std::exp(0.5 * dt * lin[m]);
        e2[m] = e[m] * e[m];
    }
    const Spectrum& v = s.theta.spectrum();
    Spectrum tmp(n);

    const Spectrum k1 = nonlinear(g, v, cfg);
    for (std::size_t m = 0; m < n; ++m) tmp[m] = e[m] * (v[m] + 0.5 * dt * k1[m]);
    const Spectrum k2 = nonlinear(g, tmp, cfg);
    for (std::size_t m = 0; m < n; ++m) tmp[m] = e[m] * v[m] + 0.5 * dt * k2[m];
    const Spectrum k3 = nonlinear(g, tmp, cfg);
    for (std::size_t m = 0; m < n; ++m) tmp[m] = e2[m] * v[m] + dt * e[m] * k3[m];
    const Spectrum k4 = nonlinear(g, tmp, cfg);

    Spectrum out(n);
    for (std::size_t m = 0; m < n; ++m)
        out[m] = e2[m] * v[m] + dt / 6.0 * (e2[m] * k1[m] + 2.0 * e[m] * (k2[m] + k3[m]) + k4[m]);
    return TrajectoryState{s.t + dt, Field::from_spectrum(g, std::move(out)), s.step_count + 1, dt};
}

TrajectoryState step(const TrajectoryState& s, const SolverConfig& cfg)
{
    return step(s, cfg, choose_dt(s.theta, cfg));
}

RunResult run(const Grid& g, const SolverConfig& cfg, const ProbeObserver& observer)
{
    cfg.validate();
    TrajectoryState s{0.0, initial_field(g, cfg), 0, 0.0};
    RunResult r{s, {}, {}, false};
    const double sup0 = s.theta.sup_norm();
    const double grad0 = std::max(derivative(s.theta).sup_norm(), 1e-300);
    const Extrema ex0 = refined_extrema(s.theta);
    r.extrema.max0 = ex0.max;
    r.extrema.min0 = ex0.min;

    BlowupReport& b = r.blowup;
    b.dt_min = std::numeric_limits<double>::infinity();
    b.history_t.push_back(0.0);
    b.history.push_back(grad0);

    auto probe = [&](const TrajectoryState& st) {
        const Extrema ex = refined_extrema(st.theta);
        r.extrema.max_rise = std::max(r.extrema.max_rise, ex.max - ex0.max);
        r.extrema.min_drop = std::max(r.extrema.min_drop, ex0.min - ex.min);
        ++r.extrema.probes;
        if (observer) observer(st);
    };
    probe(s);

    const double t_eps = 1e-12 * cfg.t_end;
    std::size_t next_probe = 1;
    bool last_probed = true;
    while (s.t < cfg.t_end - t_eps) {
        double dt = choose_dt(s.theta, cfg);
        if (cfg.step.mode == StepMode::Adaptive && dt < cfg.dt_floor) {
            b.dt_collapse = true;
            b.dt_min = std::min(b.dt_min, dt);
            break;
        }
        double t_target = cfg.t_end;
        bool at_probe = false;
        if (cfg.probe_interval > 0.0) {
            const double tp = static_cast<double>(next_probe) * cfg.probe_interval;
            if (tp < cfg.t_end - t_eps) t_target = tp;
        }
        if (s.t + dt >= t_target - t_eps) {
            dt = t_target - s.t;
            at_probe = cfg.probe_interval > 0.0;
        }
        TrajectoryState n = step(s, cfg, dt);
        if (s.t + dt >= t_target - t_eps) n.t = t_target;
        if (!n.theta.is_finite()) {
            b.non_finite = true;
            break;
        }
        s = std::move(n);
        b.dt_min = std::min(b.dt_min, dt);
        const double grad = derivative(s.theta).sup_norm();
        b.history_t.push_back(s.t);
        b.history.push_back(grad);
        b.growth = std::max(b.growth, grad / grad0);

        last_probed = false;
        if (at_probe) {
            ++next_probe;
            probe(s);
            last_probed = true;
        } else if (cfg.probe_interval <= 0.0 && s.step_count % cfg.probe_every == 0) {
            probe(s);
            last_probed = true;
        }

        if (!b.breach && s.theta.sup_norm() > 10.0 * sup0 + 1.0) {
            b.breach = true;
            b.t_breach = s.t;
            if (!cfg.continue_after_breach) break;
        }
        if (s.step_count >= cfg.max_steps) break;
    }
    if (!last_probed) probe(s);

    r.reached_end = s.t >= cfg.t_end - t_eps;
    if (!std::isfinite(b.dt_min)) b.dt_min = 0.0;
    if (b.growth >= 50.0 && (b.dt_collapse || b.non_finite)) {
        b.detected = true;
        b.t_detect = s.t;
        b.indicator = b.dt_collapse ? BlowupIndicator::DtCollapse : BlowupIndicator::GradientSup;
    }
    b.t_final = s.t;
    b.final_sup = s.theta.sup_norm();
    r.final_state = std::move(s);
    return r;
}

RefinementCheck confirm_blowup(const Grid& g, const SolverConfig& cfg, unsigned jobs)
{
    const Grid grids[2] = {g, g.refined()};
    BlowupReport reports[2];
    parallel_for(2, jobs, [&](std::size_t i) { reports[i] = run(grids[i], cfg).blowup; });
    RefinementCheck c{std::move(reports[0]), std::move(reports[1]), Verdict::NotDetected};
    if (c.coarse.detected && c.fine.detected)
        c.verdict = Verdict::Detected;
    else if (c.coarse.detected || c.fine.detected)
        c.verdict = Verdict::Inconclusive;
    return c;
}

PicardResult picard_validate(const Grid& g, const SolverConfig& cfg, int K, double t_short, std::size_t nodes)
{
    cfg.validate();
    if (!(cfg.epsilon > 0.0)) throw ConfigError("epsilon", "Picard validation needs positive viscosity");
    if (K < 0) throw std::invalid_argument("picard_validate: K must be nonnegative");
    if (nodes < 2) throw std::invalid_argument("picard_validate: need at least two time nodes");

    const Field gamma0 = initial_field(g, cfg);
    const double T = t_short > 0.0 ? t_short : 16.0 * choose_dt(gamma0, cfg);
    const std::size_t M = nodes;
    const double ds = T / static_cast<double>(M);
    const std::size_t ns = g.spectrum_size();

    std::vector<double> k2(ns), lam(ns);
    for (std::size_t m = 0; m < ns; ++m) {
        const double k = std::abs(g.wavenumber(m));
        k2[m] = k * k;
        lam[m] = m == 0 ? 0.0 : std::pow(k, cfg.alpha);
    }
    auto heat = [&](double tau) {
        std::vector<double> h(ns);
        for (std::size_t m = 0; m < ns; ++m) h[m] = std::exp(-cfg.epsilon * tau * k2[m]);
        return h;
    };
    // heat factors for every lag j*ds
    std::vector<std::vector<double>> lag(M + 1);
    for (std::size_t j = 0; j <= M; ++j) lag[j] = heat(static_cast<double>(j) * ds);

    const Spectrum& g0 = gamma0.spectrum();
    std::vector<Spectrum> iterate(M + 1, Spectrum(ns));
    for (std::size_t j = 0; j <= M; ++j)
        for (std::size_t m = 0; m < ns; ++m) iterate[j][m] = lag[j][m] * g0[m];

    // stepped reference at T
    SolverConfig ref = cfg;
    ref.t_end = T;
    ref.step = StepPolicy{StepMode::Fixed, ds, ref.step.cfl, ref.step.dt_max};
    ref.probe_interval = 0.0;
    const Field reference = run(g, ref).final_state.theta;

    PicardResult res;
    auto deviation = [&](const Spectrum& v) { return (Field::from_spectrum(g, v) - reference).sup_norm(); };
    res.deviation.push_back(deviation(iterate[M]));

    for (int it = 0; it < K; ++it) {
        std::vector<Spectrum> F(M + 1);
        for (std::size_t i = 0; i <= M; ++i) {
            const Field th = Field::from_spectrum(g, iterate[i]);
            F[i] = cfg.nonlinear ? advection(th, cfg.dealias).spectrum() : Spectrum(ns);
            for (std::size_t m = 0; m < ns; ++m) F[i][m] = -F[i][m] + cfg.nu * lam[m] * iterate[i][m];
        }
        std::vector<Spectrum> next(M + 1, Spectrum(ns));
        double inc = 0.0;
        for (std::size_t j = 0; j <= M; ++j) {
            Spectrum& out = next[j];
            for (std::size_t m = 0; m < ns; ++m) out[m] = lag[j][m] * g0[m];
            for (std::size_t i = 0; i <= j && j > 0; ++i) {
                const double wgt = (i == 0 || i == j) ? 0.5 * ds : ds;
                const auto& h = lag[j - i];
                for (std::size_t m = 0; m < ns; ++m) out[m] -= wgt * h[m] * F[i][m];
            }
            inc = std::max(inc, (Field::from_spectrum(g, out) - Field::from_spectrum(g, iterate[j])).sup_norm());
        }
        iterate = std::move(next);
        res.increment.push_back(inc);
        res.deviation.push_back(deviation(iterate[M]));
    }

    // increments shrink until they reach rounding level
    const double floor = 1e-13 * std::max(1.0, gamma0.sup_norm());
    for (std::size_t m = 1; m < res.increment.size(); ++m)
        if (res.increment[m] > res.increment[m - 1] && res.increment[m - 1] > floor) res.contraction = false;
    res.max_deviation = res.deviation.back();
    return res;
}

RelaxationTable relaxation_study(const Grid& g, const SolverConfig& base, LadderKind kind,
                                 const std::vector<double>& ladder, double probe_interval, double delta,
                                 unsigned jobs)
{
    const char* name = kind == LadderKind::Epsilon ? "epsilon" : "eta";
    for (std::size_t i = 0; i < ladder.size(); ++i) {
        if (!(ladder[i] >= 0.0)) throw ConfigError(name, "ladder values must be nonnegative");
        if (i > 0 && !(ladder[i] < ladder[i - 1])) throw ConfigError(name, "ladder must be strictly decreasing");
    }
    if (!(probe_interval > 0.0)) throw ConfigError("probe_interval", "must be positive");
    if (!(delta >= 0.0 && delta < base.t_end)) throw ConfigError("delta", "must lie in [0, t_end)");

    RelaxationTable table;
    table.kind = kind;
    table.values = ladder;
    if (ladder.size() < 2) return table;

    std::vector<std::vector<std::pair<double, Field>>> snaps(ladder.size());
    parallel_for(ladder.size(), jobs, [&](std::size_t i) {
        SolverConfig c = base;
        (kind == LadderKind::Epsilon ? c.epsilon : c.eta) = ladder[i];
        c.probe_interval = probe_interval;
        run(g, c, [&](const TrajectoryState& s) {
            if (s.t >= delta - 1e-12) snaps[i].emplace_back(s.t, s.theta);
        });
    });

    for (std::size_t i = 0; i + 1 < ladder.size(); ++i) {
        const auto& a = snaps[i];
        const auto& b = snaps[i + 1];
        const std::size_t n = std::min(a.size(), b.size());
        double acc = 0.0;
        for (std::size_t j = 0; j + 1 < n; ++j) {
            const double da = l2_norm(a[j].second - b[j].second);
            const double db = l2_norm(a[j + 1].second - b[j + 1].second);
            acc += 0.5 * (a[j + 1].first - a[j].first) * (da * da + db * db);
        }
        table.distances.push_back(std::sqrt(acc));
    }
    for (std::size_t i = 1; i < table.distances.size(); ++i)
        if (!(table.distances[i] < table.distances[i - 1])) table.monotone = false;
    return table;
}

} // namespace fractrans
