#include "fractrans/experiments.hpp"

#include "fractrans/commutators.hpp"
#include "fractrans/cutoff.hpp"
#include "fractrans/diagnostics.hpp"
#include "fractrans/output.hpp"
#include "fractrans/parallel.hpp"
#include "fractrans/random_suite.hpp"
#include "fractrans/spectral.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>

#ifndef FRACTRANS_DEFAULT_REGISTRY
#define FRACTRANS_DEFAULT_REGISTRY "data/registry.json"
#endif

namespace fractrans {

namespace {

constexpr double extrema_tol = 1e-6;
// horizon over which the weighted bounds are required to settle
constexpr double plateau_horizon = 20.0;

ContractStatus verdict(bool ok) { return ok ? ContractStatus::Pass : ContractStatus::Fail; }

double rel_drift(double a, double b) { return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-300}); }

// JSON has no nan/inf; non-finite values become null.
ojson num(double x)
{
    if (!std::isfinite(x)) return nullptr;
    return x;
}

ojson blowup_json(const BlowupReport& b)
{
    return ojson{{"detected", b.detected},
                 {"t_detect", num(b.t_detect)},
                 {"indicator", indicator_name(b.indicator)},
                 {"growth", num(b.growth)},
                 {"dt_min", num(b.dt_min)},
                 {"dt_collapse", b.dt_collapse},
                 {"non_finite", b.non_finite},
                 {"breach", b.breach},
                 {"t_breach", num(b.t_breach)},
                 {"t_final", num(b.t_final)},
                 {"final_sup", num(b.final_sup)},
                 {"final_grad_sup", num(b.history.empty() ? 0.0 : b.history.back())},
                 {"steps", b.history.empty() ? 0 : b.history.size() - 1}};
}

ojson extrema_json(const ExtremaTrack& e)
{
    return ojson{{"max0", num(e.max0)},
                 {"min0", num(e.min0)},
                 {"max_rise", num(e.max_rise)},
                 {"min_drop", num(e.min_drop)},
                 {"probes", e.probes}};
}

Contract extrema_contract(const std::string& id, const RunResult& r)
{
    Contract c{id, ContractStatus::RecordOnly, extrema_json(r.extrema)};
    c.detail["tolerance"] = extrema_tol;
    const bool smooth = !r.blowup.breach && !r.blowup.detected && !r.blowup.non_finite && r.reached_end;
    if (smooth) c.status = verdict(r.extrema.max_rise <= extrema_tol && r.extrema.min_drop <= extrema_tol);
    return c;
}

void add(ExperimentOutcome& out, Contract c, const std::string& failure = "")
{
    if (c.status == ContractStatus::Fail)
        out.failures.push_back(failure.empty() ? c.id + " failed: " + c.detail.dump() : failure);
    out.contracts.push_back(std::move(c));
}

std::string fmt(double x) { return format_double(x); }

CsvProvenance provenance(const RunContext& ctx)
{
    return {ctx.config_hash, ctx.registry ? ctx.registry->version : 0};
}

Grid run_grid(const ExperimentConfig& cfg) { return Grid(cfg.half_length, cfg.n); }

std::vector<Field> sample_all(const std::vector<SmoothFunction>& suite, const Grid& g)
{
    std::vector<Field> out;
    out.reserve(suite.size());
    for (const auto& s : suite) out.push_back(s.sample(g));
    return out;
}

void residual_contracts(const std::vector<DiagnosticsRecord>& records, ExperimentOutcome& out)
{
    std::map<std::string, std::vector<std::pair<double, const ResidualValue*>>> by_id;
    for (const auto& r : records)
        for (const auto& [id, v] : r.residuals) by_id[id].push_back({r.t, &v});

    for (const auto& [id, series] : by_id) {
        Contract c{"residual_" + id, ContractStatus::RecordOnly, ojson::object()};
        bool asserted = false, inconclusive = false;
        std::size_t dt_flags = 0, violations = 0;
        double worst_excess = -std::numeric_limits<double>::infinity();
        double worst_t = 0.0, worst_v = 0.0, worst_tol = 0.0;
        double first_t = 0.0, first_v = 0.0, first_tol = 0.0;
        for (const auto& [t, v] : series) {
            asserted |= v->asserted;
            inconclusive |= v->inconclusive;
            if (v->dt_flag) ++dt_flags;
            const double excess = v->value - v->tolerance;
            if (excess > worst_excess) {
                worst_excess = excess;
                worst_t = t;
                worst_v = v->value;
                worst_tol = v->tolerance;
            }
            if (v->asserted && !v->ok() && violations++ == 0) {
                first_t = t;
                first_v = v->value;
                first_tol = v->tolerance;
            }
        }
        c.detail = ojson{{"probes", series.size()},
                         {"violations", violations},
                         {"dt_flags", dt_flags},
                         {"worst_t", num(worst_t)},
                         {"worst_value", num(worst_v)},
                         {"worst_tolerance", num(worst_tol)}};
        if (asserted)
            c.status = verdict(violations == 0);
        else if (inconclusive)
            c.status = ContractStatus::Inconclusive;
        std::ostringstream msg;
        if (violations)
            msg << "inequality " << id << " violated at t=" << fmt(first_t) << ": residual " << fmt(first_v)
                << " > tolerance " << fmt(first_tol) << " (" << violations << " probes)";
        add(out, std::move(c), msg.str());
    }
}

std::size_t last_index_at_or_before(const std::vector<double>& t, double tc)
{
    std::size_t k = 0;
    for (std::size_t i = 0; i < t.size(); ++i)
        if (t[i] <= tc * (1 + 1e-12)) k = i;
    return k;
}

} // namespace

std::string status_name(ContractStatus s)
{
    switch (s) {
    case ContractStatus::Pass: return "pass";
    case ContractStatus::Fail: return "fail";
    case ContractStatus::Inconclusive: return "inconclusive";
    case ContractStatus::RecordOnly: return "record-only";
    }
    return "record-only";
}

std::filesystem::path default_registry_path() { return FRACTRANS_DEFAULT_REGISTRY; }

std::filesystem::path run_directory(const ExperimentConfig& cfg)
{
    const std::string id = cfg.run_id.empty() ? kind_name(cfg.kind) + "-" + config_hash(cfg).substr(0, 12) : cfg.run_id;
    return std::filesystem::path(cfg.outdir) / id;
}

// simulate

ExperimentOutcome simulate(const RunContext& ctx)
{
    const ExperimentConfig& cfg = ctx.cfg;
    const ConstantRegistry& reg = *ctx.registry;
    for (double b : cfg.betas) {
        try {
            reg.for_beta(b);
        } catch (const std::out_of_range&) {
            throw ConfigParseError("run.betas", "", "beta " + fmt(b) + " is not calibrated in the registry");
        }
    }
    const Grid g = run_grid(cfg);
    const SolverConfig& sc = cfg.solver;
    const DiagnosedRun d = run_with_diagnostics(g, sc, DiagnosticsRequest{cfg.betas, true}, reg);
    atomic_write(ctx.run_dir / "series.csv", series_csv(d.records, cfg.betas, provenance(ctx)));

    ExperimentOutcome out;
    const auto& rec = d.records;
    const double m0 = rec.empty() ? 0.0 : rec.front().sup_norm;
    const bool core = sc.alpha == 1.0 && sc.nu == 1.0;
    const bool clean = d.run.reached_end && !d.run.blowup.detected && !d.run.blowup.non_finite;

    add(out, extrema_contract("max_principle", d.run));
    residual_contracts(rec, out);

    std::vector<double> t;
    for (const auto& r : rec) t.push_back(r.t);

    // unweighted H^{1/2} decay and its dissipation budget
    {
        Contract c{"unweighted_decay", ContractStatus::RecordOnly, ojson::object()};
        double worst_rise = 0.0;
        std::vector<double> dis;
        for (std::size_t i = 0; i < rec.size(); ++i) {
            dis.push_back(rec[i].unweighted.dissip_1);
            if (i > 0) worst_rise = std::max(worst_rise, rec[i].unweighted.h_half - rec[i - 1].unweighted.h_half);
        }
        const double h0 = rec.empty() ? 0.0 : rec.front().unweighted.h_half;
        const double spent = rec.size() > 1 ? cumulative_integral(t, dis).back() : 0.0;
        const double budget = m0 < 1.0 ? h0 * h0 / (2.0 * (1.0 - m0)) : std::numeric_limits<double>::infinity();
        const double slack = 1e-6 * h0;
        c.detail = ojson{{"hhalf0", num(h0)},       {"worst_rise", num(worst_rise)}, {"slack", num(slack)},
                         {"dissipation", num(spent)}, {"budget", num(budget)}};
        if (core && sc.nonlinear && m0 < 1.0 && clean && rec.size() > 1)
            c.status = verdict(worst_rise <= slack && spent <= budget);
        add(out, std::move(c));
    }

    // weighted bounds settle: sup over [0, T] against [0, T/2], dissipation integral plateau
    for (std::size_t k = 0; k < cfg.betas.size(); ++k) {
        const double beta = cfg.betas[k];
        Contract c{"weighted_plateau_" + beta_tag(beta), ContractStatus::RecordOnly, ojson::object()};
        if (rec.size() < 3) {
            add(out, std::move(c));
            continue;
        }
        const std::size_t half = last_index_at_or_before(t, 0.5 * t.back());
        double l2_half = 0.0, l2_all = 0.0, hh_half = 0.0, hh_all = 0.0;
        std::vector<double> dis;
        for (std::size_t i = 0; i < rec.size(); ++i) {
            const NormSet& n = rec[i].weighted[k];
            l2_all = std::max(l2_all, n.l2);
            hh_all = std::max(hh_all, n.h_half);
            if (i <= half) {
                l2_half = std::max(l2_half, n.l2);
                hh_half = std::max(hh_half, n.h_half);
            }
            dis.push_back(n.dissip_1);
        }
        const auto cum = cumulative_integral(t, dis);
        const double l2_change = rel_drift(l2_half, l2_all);
        const double hh_change = rel_drift(hh_half, hh_all);
        const double dis_change = cum[half] > 0.0 ? (cum.back() - cum[half]) / cum[half] : 0.0;
        c.detail = ojson{{"t_half", num(t[half])},
                         {"sup_l2w", num(l2_all)},
                         {"sup_hhalfw", num(hh_all)},
                         {"dissipation_integral", num(cum.back())},
                         {"sup_l2w_change", num(l2_change)},
                         {"sup_hhalfw_change", num(hh_change)},
                         {"dissipation_change", num(dis_change)},
                         {"tolerance", 0.05}};
        const bool inside = reg.regime(beta, m0) == ConstantRegistry::Regime::Inside;
        if (core && sc.epsilon == 0.0 && inside && clean && sc.t_end >= plateau_horizon)
            c.status = verdict(l2_change < 0.05 && hh_change < 0.05 && dis_change < 0.05);
        add(out, std::move(c));
    }

    ojson constants = ojson::object();
    ojson envelopes = ojson::array();
    for (std::size_t k = 0; k < cfg.betas.size(); ++k) {
        const WeightConstants& wc = reg.for_beta(cfg.betas[k]);
        const auto regime = reg.regime(cfg.betas[k], m0);
        constants[beta_tag(cfg.betas[k])] = ojson{
            {"comm_half", wc.comm_half}, {"hilbert", wc.hilbert},     {"l2_rate", wc.l2_rate},
            {"c8", wc.c8},               {"smallness", wc.smallness},
            {"regime", regime == ConstantRegistry::Regime::Inside         ? "inside"
                       : regime == ConstantRegistry::Regime::Inconclusive ? "inconclusive"
                                                                          : "outside"}};
        // e^{C t} envelope of |theta|^2_{L2(w)}
        std::vector<double> e0;
        for (const auto& r : rec) e0.push_back(r.weighted[k].l2 * r.weighted[k].l2);
        const double rate = wc.l2_rate * (1.0 + m0);
        envelopes.push_back(ojson{{"beta", cfg.betas[k]},
                                  {"column", "l2w_" + beta_tag(cfg.betas[k])},
                                  {"squared", true},
                                  {"rate", rate},
                                  {"v0", num(e0.empty() ? 0.0 : e0.front())},
                                  {"exceedances", e0.empty() ? 0 : gronwall_envelope(t, e0, rate, e0.front())}});
    }
    constants["c1"] = reg.c1;
    constants["c0"] = reg.c0;
    constants["m0"] = m0;
    out.sections["constants"] = constants;
    out.sections["envelopes"] = envelopes;
    out.sections["blowup"] = blowup_json(d.run.blowup);
    out.sections["extrema"] = extrema_json(d.run.extrema);
    out.sections["results"] = ojson{{"t_final", num(d.run.final_state.t)},
                                    {"steps", d.run.final_state.step_count},
                                    {"reached_end", d.run.reached_end},
                                    {"records", rec.size()}};
    out.sections["refinement"] = nullptr;
    return out;
}

// verify-operators

ExperimentOutcome verify_operators(const RunContext& ctx)
{
    const ExperimentConfig& cfg = ctx.cfg;
    const Grid g = run_grid(cfg);
    const int jmax = static_cast<int>(g.size() / 4) - 1;
    const auto fields = sample_all(trig_suite(cfg.seed, cfg.suite_size, g.half_length(), jmax), g);

    double dxh = 0.0, hl = 0.0, iso = 0.0, hsq = 0.0, magic = 0.0;
    std::size_t aliased = 0;
    for (const Field& f : fields) {
        const Field lf = lambda_alpha(f, 1.0);
        const Field dx = derivative(f);
        dxh = std::max(dxh, (derivative(hilbert(f)) + lf).sup_norm() / std::max(lf.sup_norm(), 1e-300));
        hl = std::max(hl, (hilbert(lf) - dx).sup_norm() / std::max(dx.sup_norm(), 1e-300));
        const double n0 = l2_norm(f);
        iso = std::max(iso, std::abs(l2_norm(hilbert(f)) - n0) / std::max(n0, 1e-300));
        hsq = std::max(hsq, (hilbert(hilbert(f)) + f).sup_norm() / std::max(f.sup_norm(), 1e-300));
        const MagicResult m = magic_identity_check(f);
        magic = std::max(magic, m.sup_error);
        if (!m.band_limited) ++aliased;
    }

    ExperimentOutcome out;
    const double tol = 1e-10;
    auto ident = [&](const std::string& id, double v, double t) {
        add(out, Contract{id, verdict(v <= t), ojson{{"worst", v}, {"tolerance", t}, {"fields", fields.size()}}});
    };
    ident("identity_dx_hilbert", dxh, tol);
    ident("identity_hilbert_lambda", hl, tol);
    ident("hilbert_isometry", iso, tol);
    ident("hilbert_square", hsq, tol);
    Contract m{"magic_identity", verdict(magic <= 1e-8),
               ojson{{"worst", magic}, {"tolerance", 1e-8}, {"fields", fields.size()}, {"aliased", aliased}}};
    if (aliased) m.detail["warning"] = "aliased fields in the suite";
    add(out, std::move(m));
    out.sections["results"] = ojson{{"jmax", jmax}};
    return out;
}

// verify-weights

ExperimentOutcome verify_weights(const RunContext& ctx)
{
    const ExperimentConfig& cfg = ctx.cfg;
    const Grid g = run_grid(cfg);
    const Grid g2 = g.refined();
    ExperimentOutcome out;

    OracleOptions fine;
    fine.near_radius = 5e-4;
    fine.tolerance = 1e-12;
    fine.absolute = 1e-12;
    const double xmax = 0.5 * g.half_length();
    for (double b : cfg.betas) {
        const WeightSpec w(g, b);
        double sup[2] = {0.0, 0.0}, odd = 0.0;
        for (double x = 0.0; x <= xmax * (1 + 1e-12); x += 0.5) {
            const double v = lambda_of_weight(w, x);
            odd = std::max(odd, std::abs(v - lambda_of_weight(w, -x)));
            sup[0] = std::max(sup[0], std::abs(v) / WeightSpec::value(b, x));
            sup[1] = std::max(sup[1], std::abs(lambda_of_weight(w, x, fine)) / WeightSpec::value(b, x));
        }
        const double drift = rel_drift(sup[0], sup[1]);
        add(out, Contract{"lambda_weight_" + beta_tag(b),
                          verdict(std::isfinite(sup[0]) && odd <= 1e-8 && drift <= 0.02),
                          ojson{{"sup_ratio", num(sup[0])},
                                {"sup_ratio_refined", num(sup[1])},
                                {"drift", num(drift)},
                                {"even_error", num(odd)},
                                {"x_max", xmax}}});
        add(out, Contract{"ap_constant_" + beta_tag(b), ContractStatus::RecordOnly,
                          ojson{{"p2", num(ap_constant(w, 2.0))}, {"p3", num(ap_constant(w, 3.0))}}});
    }

    const auto suite = bump_suite(cfg.seed, cfg.suite_size);
    const auto f1 = sample_all(suite, g);
    const auto f2 = sample_all(suite, g2);

    // scale invariance under f -> 2f and sup over the suite at N and 2N
    {
        double sup[2] = {0.0, 0.0}, inv = 0.0;
        for (std::size_t i = 0; i < f1.size(); ++i) {
            const double a = hedberg_check(f1[i], 0.5, 1.0).sup_ratio;
            inv = std::max(inv, std::abs(hedberg_check(2.0 * f1[i], 0.5, 1.0).sup_ratio - a) / a);
            sup[0] = std::max(sup[0], a);
            sup[1] = std::max(sup[1], hedberg_check(f2[i], 0.5, 1.0).sup_ratio);
        }
        const double drift = rel_drift(sup[0], sup[1]);
        add(out, Contract{"hedberg", verdict(std::isfinite(sup[0]) && inv <= 1e-10 && drift < 0.1),
                          ojson{{"gamma", 0.5},
                                {"delta", 1.0},
                                {"sup_ratio", num(sup[0])},
                                {"sup_ratio_2n", num(sup[1])},
                                {"drift", num(drift)},
                                {"scale_error", num(inv)}}});
    }
    const std::pair<GnInequality, const char*> gns[] = {
        {GnInequality::B1, "b1"}, {GnInequality::B, "b"}, {GnInequality::B2, "b2"}};
    for (double b : cfg.betas) {
        const WeightSpec w1(g, b), w2(g2, b);
        for (const auto& [which, name] : gns) {
            double sup[2] = {0.0, 0.0}, inv = 0.0;
            for (std::size_t i = 0; i < f1.size(); ++i) {
                const double a = gn_check(f1[i], w1, which);
                inv = std::max(inv, std::abs(gn_check(2.0 * f1[i], w1, which) - a) / a);
                sup[0] = std::max(sup[0], a);
                sup[1] = std::max(sup[1], gn_check(f2[i], w2, which));
            }
            const double drift = rel_drift(sup[0], sup[1]);
            add(out, Contract{std::string("gn_") + name + "_" + beta_tag(b),
                              verdict(std::isfinite(sup[0]) && inv <= 1e-10 && drift < 0.1),
                              ojson{{"sup_ratio", num(sup[0])},
                                    {"sup_ratio_2n", num(sup[1])},
                                    {"drift", num(drift)},
                                    {"scale_error", num(inv)}}});
        }
    }
    out.sections["results"] = ojson{{"suite_size", f1.size()}, {"n", g.size()}, {"n_refined", g2.size()}};
    return out;
}

// verify-commutators

ExperimentOutcome verify_commutators(const RunContext& ctx)
{
    const ExperimentConfig& cfg = ctx.cfg;
    const Grid grids[2] = {run_grid(cfg), run_grid(cfg).refined()};
    const auto suite = bump_suite(cfg.seed, cfg.suite_size);
    const std::vector<Field> fields[2] = {sample_all(suite, grids[0]), sample_all(suite, grids[1])};
    ExperimentOutcome out;

    for (double b : cfg.betas) {
        const WeightSpec w[2] = {WeightSpec(grids[0], b), WeightSpec(grids[1], b)};
        for (double p : {2.0, 3.0}) {
            double half[2], full[2];
            for (int r = 0; r < 2; ++r) {
                half[r] = empirical_norm([&](const Field& f) { return commutator_half(f, w[r]); }, fields[r], p, w[r]);
                full[r] = empirical_norm([&](const Field& f) { return commutator_full(f, w[r]); }, fields[r], p, w[r]);
            }
            const std::string tag = "_p" + fmt(p) + "_" + beta_tag(b);
            const double dh = rel_drift(half[0], half[1]);
            const double df = rel_drift(full[0], full[1]);
            Contract ch{"comm_half" + tag, ContractStatus::RecordOnly,
                        ojson{{"norm", num(half[0])}, {"norm_2n", num(half[1])}, {"drift", num(dh)}}};
            if (1.5 - b * (1.0 - 1.0 / p) > 1.0) ch.status = verdict(std::isfinite(half[0]) && dh < 0.2);
            add(out, std::move(ch));
            add(out, Contract{"comm_full" + tag, verdict(std::isfinite(full[0]) && df < 0.2),
                              ojson{{"norm", num(full[0])}, {"norm_2n", num(full[1])}, {"drift", num(df)}}});
        }
    }

    const Grid tg(cfg.trunc_half_length, cfg.trunc_n);
    const double cut = 0.5 * cfg.trunc_half_length;
    const Field theta0 =
        Field::from_function(tg, [cut](double x) { return std::pow(1.0 + x * x, -0.25) * plateau(x / cut); });
    for (double b : cfg.betas) {
        const TruncationScaling s = truncation_commutator_scaling(theta0, WeightSpec(tg, b), cfg.trunc_radii);
        add(out, Contract{"truncation_slope_" + beta_tag(b), verdict(s.slope <= -0.35),
                          ojson{{"slope", num(s.slope)}, {"bound", -0.35}, {"radii", s.radii}, {"norms", s.norms}}});
    }
    out.sections["results"] = ojson{{"suite_size", suite.size()},
                                    {"n", grids[0].size()},
                                    {"truncation_L", cfg.trunc_half_length},
                                    {"truncation_N", cfg.trunc_n}};
    return out;
}

// verify-inequalities

ExperimentOutcome verify_inequalities(const RunContext& ctx)
{
    const ExperimentConfig& cfg = ctx.cfg;
    const Grid g = run_grid(cfg);
    ExperimentOutcome out;

    {
        double worst = std::numeric_limits<double>::infinity();
        for (const auto& s : bump_suite(cfg.seed, cfg.suite_size, true)) {
            const DiagnosticsRecord r = record(s.sample(g), 0.0, {}, true);
            if (r.cc_evaluated) worst = std::min(worst, r.cc_slack / std::max(r.cc_scale, 1e-300));
        }
        add(out, Contract{"cc_pointwise_suite", verdict(worst >= -1e-6),
                          ojson{{"worst_scaled_slack", num(worst)}, {"tolerance", 1e-6}}});
    }

    // maximum principle over mixed-sign and nonnegative data, with the CC slack along nonnegative trajectories
    struct Case {
        double alpha, eps;
        InitialData data;
    };
    std::vector<Case> cases;
    for (double a : {0.6, 1.0, 1.5})
        for (double e : {0.0, 1e-3}) cases.push_back({a, e, InitialData{DataFamily::Mixed, 0.8, 1.5, 0.0, 1}});
    for (double a : {0.6, 1.5})
        for (double e : {0.0, 1e-3}) cases.push_back({a, e, InitialData{DataFamily::Bump, 1.0, 2.0, 0.0, 1}});
    std::vector<RunResult> results(cases.size(), RunResult{TrajectoryState{0.0, Field::zero(g), 0, 0.0}, {}, {}, false});
    std::vector<double> cc_worst(cases.size(), std::numeric_limits<double>::infinity());
    parallel_for(cases.size(), cfg.jobs, [&](std::size_t i) {
        SolverConfig c = cfg.solver;
        c.alpha = cases[i].alpha;
        c.epsilon = cases[i].eps;
        c.eta = 0.0;
        c.initial = cases[i].data;
        if (c.probe_interval <= 0.0) c.probe_interval = 0.05;
        const bool nonneg = cases[i].data.family == DataFamily::Bump;
        results[i] = run(g, c, [&](const TrajectoryState& s) {
            if (!nonneg) return;
            const DiagnosticsRecord r = record(s.theta, s.t, {}, true);
            cc_worst[i] = std::min(cc_worst[i], r.cc_evaluated ? r.cc_slack / std::max(r.cc_scale, 1e-300)
                                                              : -std::numeric_limits<double>::infinity());
        });
    });
    for (std::size_t i = 0; i < cases.size(); ++i) {
        const std::string id = "max_principle_" + family_name(cases[i].data.family) + "_a" + fmt(cases[i].alpha) +
                               "_e" + fmt(cases[i].eps);
        Contract c = extrema_contract(id, results[i]);
        if (c.status == ContractStatus::RecordOnly) c.status = ContractStatus::Fail;  // these runs must stay smooth
        add(out, std::move(c));
        if (cases[i].data.family == DataFamily::Bump)
            add(out, Contract{"cc_trajectory_a" + fmt(cases[i].alpha) + "_e" + fmt(cases[i].eps),
                              verdict(cc_worst[i] >= -1e-6),
                              ojson{{"worst_scaled_slack", num(cc_worst[i])}, {"tolerance", 1e-6}}});
    }

    // temporal order by step halving against a much finer reference
    {
        SolverConfig c;
        c.alpha = 1.0;
        c.t_end = 1.0;
        c.step.mode = StepMode::Fixed;
        c.initial = InitialData{DataFamily::Gaussian, 0.5, 2.0, 0.0, 1};
        c.probe_every = 1'000'000;
        const std::vector<double> dts{0.1, 0.05, 0.025};
        c.step.dt = dts.back() / 16.0;
        const Field ref = run(g, c).final_state.theta;
        std::vector<double> errs, orders;
        for (double dt : dts) {
            c.step.dt = dt;
            errs.push_back((run(g, c).final_state.theta - ref).sup_norm());
        }
        for (std::size_t i = 1; i < errs.size(); ++i) orders.push_back(std::log2(errs[i - 1] / errs[i]));
        const double worst = *std::min_element(orders.begin(), orders.end());
        add(out, Contract{"integrator_order", verdict(worst >= 3.7),
                          ojson{{"dt", dts}, {"errors", errs}, {"orders", orders}, {"bound", 3.7}}});
    }

    // Duhamel fixed point against the stepped solution
    {
        SolverConfig c;
        c.alpha = cfg.solver.alpha;
        c.nu = cfg.solver.nu;
        c.epsilon = cfg.solver.epsilon > 0.0 ? cfg.solver.epsilon : 1e-2;
        c.initial = InitialData{DataFamily::Bump, 0.1, 2.0, 0.0, 1};
        const PicardResult p = picard_validate(g, c, 8);
        add(out, Contract{"picard", verdict(p.contraction && p.max_deviation <= 1e-4),
                          ojson{{"epsilon", c.epsilon},
                                {"deviation", p.deviation},
                                {"increment", p.increment},
                                {"contraction", p.contraction},
                                {"tolerance", 1e-4}}});
    }
    return out;
}

// relaxation-study

ExperimentOutcome relaxation(const RunContext& ctx)
{
    const ExperimentConfig& cfg = ctx.cfg;
    const Grid g = run_grid(cfg);
    const RelaxationTable t =
        relaxation_study(g, cfg.solver, cfg.ladder, cfg.ladder_values, cfg.relax_probe, cfg.relax_delta, cfg.jobs);
    std::vector<std::vector<std::string>> rows;
    for (std::size_t i = 0; i < t.distances.size(); ++i)
        rows.push_back({fmt(t.values[i]), fmt(t.values[i + 1]), fmt(t.distances[i])});
    atomic_write(ctx.run_dir / "relaxation.csv", table_csv({"from", "to", "distance"}, rows, provenance(ctx)));

    ExperimentOutcome out;
    const std::string kind = cfg.ladder == LadderKind::Epsilon ? "epsilon" : "eta";
    add(out, Contract{"relaxation_monotone_" + kind, verdict(t.monotone),
                      ojson{{"values", t.values}, {"distances", t.distances}}});
    out.sections["results"] = ojson{{"ladder", kind}, {"delta", cfg.relax_delta}, {"probe_interval", cfg.relax_probe}};
    return out;
}

// blowup-sweep

ExperimentOutcome blowup_sweep(const RunContext& ctx)
{
    const ExperimentConfig& cfg = ctx.cfg;
    const Grid g = run_grid(cfg);
    struct Cell {
        double alpha, amplitude;
        RefinementCheck check;
        std::string error;
    };
    std::vector<Cell> cells;
    for (double a : cfg.sweep_alphas)
        for (double amp : cfg.sweep_amplitudes) cells.push_back({a, amp, {}, ""});

    const unsigned inner = cells.size() == 1 ? std::max(1u, std::min(cfg.jobs, 2u)) : 1u;
    parallel_for(cells.size(), cfg.jobs, [&](std::size_t i) {
        SolverConfig c = cfg.solver;
        c.alpha = cells[i].alpha;
        c.initial.amplitude = cells[i].amplitude;
        try {
            cells[i].check = confirm_blowup(g, c, inner);
        } catch (const std::exception& e) {
            cells[i].error = e.what();
        }
    });

    ExperimentOutcome out;
    std::vector<std::vector<std::string>> rows;
    ojson table = ojson::array();
    for (const Cell& cell : cells) {
        const BlowupReport& a = cell.check.coarse;
        const BlowupReport& b = cell.check.fine;
        const std::string v = cell.error.empty() ? verdict_name(cell.check.verdict) : "error";
        rows.push_back({fmt(cell.alpha), fmt(cell.amplitude), v, a.detected ? "1" : "0", b.detected ? "1" : "0",
                        fmt(a.t_detect), fmt(b.t_detect), fmt(a.growth), fmt(b.growth), fmt(a.dt_min), fmt(b.dt_min),
                        fmt(a.t_final), fmt(b.t_final), fmt(a.final_sup), fmt(b.final_sup),
                        fmt(a.history.empty() ? 0.0 : a.history.back()), fmt(b.history.empty() ? 0.0 : b.history.back())});
        const std::string id = "blowup_a" + fmt(cell.alpha) + "_A" + fmt(cell.amplitude);
        Contract c{id, ContractStatus::RecordOnly,
                   ojson{{"alpha", cell.alpha}, {"amplitude", cell.amplitude}, {"verdict", v},
                         {"coarse", blowup_json(a)}, {"fine", blowup_json(b)}}};
        if (!cell.error.empty()) {
            c.status = ContractStatus::Fail;
            c.detail["error"] = cell.error;
        } else if (cell.alpha < 0.5) {
            c.detail["expected"] = "detected";
            c.status = cell.check.verdict == Verdict::Detected       ? ContractStatus::Pass
                       : cell.check.verdict == Verdict::Inconclusive ? ContractStatus::Inconclusive
                                                                     : ContractStatus::Fail;
        } else if (cell.alpha >= 1.0) {
            c.detail["expected"] = "not-detected";
            c.status = cell.check.verdict == Verdict::NotDetected    ? ContractStatus::Pass
                       : cell.check.verdict == Verdict::Inconclusive ? ContractStatus::Inconclusive
                                                                     : ContractStatus::Fail;
        }
        table.push_back(c.detail);
        add(out, std::move(c));
    }
    atomic_write(ctx.run_dir / "sweep.csv",
                 table_csv({"alpha", "amplitude", "verdict", "detected_n", "detected_2n", "t_detect_n", "t_detect_2n",
                            "growth_n", "growth_2n", "dt_min_n", "dt_min_2n", "t_final_n", "t_final_2n", "final_sup_n",
                            "final_sup_2n", "final_grad_sup_n", "final_grad_sup_2n"},
                           rows, provenance(ctx)));
    out.sections["refinement"] = ojson{{"n", g.size()}, {"n_refined", 2 * g.size()}};
    return out;
}

// calibrate-constants

ExperimentOutcome calibrate(const RunContext& ctx)
{
    const ExperimentConfig& cfg = ctx.cfg;
    const ConstantRegistry r = calibrate_constants(run_grid(cfg), cfg.betas, cfg.seed, cfg.suite_size);
    atomic_write(ctx.run_dir / "registry.json", r.to_json() + "\n");
    ExperimentOutcome out;
    out.sections["constants"] = ojson::parse(r.to_json());
    return out;
}

int execute(const ExperimentConfig& cfg, std::ostream& log, std::ostream& err)
{
    const auto t0 = std::chrono::steady_clock::now();
    try {
        cfg.validate();
    } catch (const ConfigParseError& e) {
        err << "config error: " << e.what() << "\n";
        return 2;
    }

    const std::filesystem::path reg_path = cfg.registry.empty() ? default_registry_path() : std::filesystem::path(cfg.registry);
    ConstantRegistry registry;
    const bool needs_registry = cfg.kind != ExperimentKind::CalibrateConstants;
    if (needs_registry) {
        try {
            registry = ConstantRegistry::load(reg_path);
        } catch (const std::exception& e) {
            err << "config error: run.registry: " << e.what() << "\n";
            return 2;
        }
    }

    RunContext ctx{cfg, run_directory(cfg), config_hash(cfg), needs_registry ? &registry : nullptr};
    try {
        std::filesystem::create_directories(ctx.run_dir);
    } catch (const std::exception& e) {
        err << "config error: run.outdir: " << e.what() << "\n";
        return 2;
    }

    ojson summary = ojson::object();
    summary["schema_version"] = series_schema_version;
    summary["kind"] = kind_name(cfg.kind);
    summary["run_id"] = ctx.run_dir.filename().string();
    summary["config_hash"] = ctx.config_hash;
    summary["registry_version"] = needs_registry ? ojson(registry.version) : ojson(ConstantRegistry::current_version);
    summary["registry_path"] = needs_registry ? reg_path.string() : (ctx.run_dir / "registry.json").string();
    ojson echo = ojson::object();
    {
        std::istringstream in(canonical_text(cfg));
        std::string line;
        while (std::getline(in, line)) {
            const auto eq = line.find(" = ");
            if (eq != std::string::npos) echo[line.substr(0, eq)] = line.substr(eq + 3);
        }
    }
    summary["config"] = echo;

    int code = 0;
    ExperimentOutcome outcome;
    std::string error;
    try {
        if (needs_registry) atomic_write(ctx.run_dir / "registry.json", registry.to_json() + "\n");
        switch (cfg.kind) {
        case ExperimentKind::Simulate: outcome = simulate(ctx); break;
        case ExperimentKind::VerifyOperators: outcome = verify_operators(ctx); break;
        case ExperimentKind::VerifyWeights: outcome = verify_weights(ctx); break;
        case ExperimentKind::VerifyCommutators: outcome = verify_commutators(ctx); break;
        case ExperimentKind::VerifyInequalities: outcome = verify_inequalities(ctx); break;
        case ExperimentKind::RelaxationStudy: outcome = relaxation(ctx); break;
        case ExperimentKind::BlowupSweep: outcome = blowup_sweep(ctx); break;
        case ExperimentKind::CalibrateConstants: outcome = calibrate(ctx); break;
        }
    } catch (const ConfigParseError& e) {
        error = std::string("config error: ") + e.what();
        code = 2;
    } catch (const std::exception& e) {
        error = std::string("numerical failure: ") + e.what();
        code = 1;
    }

    ojson contracts = ojson::array();
    std::size_t counts[4] = {0, 0, 0, 0};
    for (const Contract& c : outcome.contracts) {
        ojson j = ojson{{"id", c.id}, {"status", status_name(c.status)}};
        for (const auto& [k, v] : c.detail.items()) j[k] = v;
        contracts.push_back(std::move(j));
        ++counts[static_cast<int>(c.status)];
        log << status_name(c.status) << "\t" << c.id << "\n";
    }
    if (code == 0 && counts[static_cast<int>(ContractStatus::Fail)] > 0) code = 1;
    for (const auto& f : outcome.failures) err << f << "\n";
    if (!error.empty()) err << error << "\n";

    summary["status"] = !error.empty() ? "error" : code == 0 ? "pass" : "fail";
    summary["exit_code"] = code;
    summary["error"] = error.empty() ? ojson(nullptr) : ojson(error);
    summary["counts"] = ojson{{"pass", counts[0]}, {"fail", counts[1]}, {"inconclusive", counts[2]}, {"record_only", counts[3]}};
    summary["contracts"] = contracts;
    for (const auto& [k, v] : outcome.sections.items()) summary[k] = v;
    summary["wall_clock_s"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    try {
        atomic_write(ctx.run_dir / "summary.json", summary.dump(2) + "\n");
    } catch (const std::exception& e) {
        err << "cannot write summary: " << e.what() << "\n";
        if (code == 0) code = 1;
    }
    log << "summary: " << (ctx.run_dir / "summary.json").string() << " (" << summary["status"].get<std::string>() << ")\n";
    return code;
}

} // namespace fractrans
