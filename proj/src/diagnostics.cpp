#include "fractrans/diagnostics.hpp"

#include "fractrans/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace fractrans {

namespace {

// |Lambda^s f|_2^2 by Parseval over the half spectrum
double sobolev_sq(const Field& f, double s)
{
    const Grid& g = f.grid();
    const auto& fh = f.spectrum();
    const std::size_t last = fh.size() - 1;
    double acc = 0.0;
    for (std::size_t m = 1; m <= last; ++m) {
        const double weight = m == last ? 1.0 : 2.0;
        acc += weight * std::norm(fh[m]) * std::pow(std::abs(g.wavenumber(m)), 2.0 * s);
    }
    return acc * g.spacing() / static_cast<double>(g.size());
}

double wsq(const Field& f, const WeightSpec& w) { return weighted_integral(f * f, w); }

NormSet norms(const Field& theta, const Field& lh, const Field& l1, const Field& l32, const WeightSpec& w)
{
    NormSet s;
    s.beta = w.beta();
    s.l2 = std::sqrt(wsq(theta, w));
    s.dissip_half = wsq(lh, w);
    s.dissip_1 = wsq(l1, w);
    s.dissip_3half = wsq(l32, w);
    s.h_half = std::sqrt(s.dissip_half);
    s.h1 = std::sqrt(s.dissip_1);
    std::vector<double> v(theta.size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = std::abs(theta[i] * l1[i]);
    s.theta_lambda = weighted_integral(Field::from_samples(theta.grid(), std::move(v)), w);
    return s;
}

// First-derivative finite-difference weights at x0 over nodes x (Fornberg).
std::vector<double> fd_weights(const std::vector<double>& x, double x0)
{
    const std::size_t n = x.size();
    std::vector<std::vector<double>> c(n, std::vector<double>(2, 0.0));
    double c1 = 1.0, c4 = x[0] - x0;
    c[0][0] = 1.0;
    for (std::size_t i = 1; i < n; ++i) {
        const std::size_t mn = std::min<std::size_t>(i, 1);
        double c2 = 1.0;
        const double c5 = c4;
        c4 = x[i] - x0;
        for (std::size_t j = 0; j < i; ++j) {
            const double c3 = x[i] - x[j];
            c2 *= c3;
            if (j == i - 1) {
                for (std::size_t k = mn; k >= 1; --k) c[i][k] = c1 * (k * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2;
                c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
            }
            for (std::size_t k = mn; k >= 1; --k) c[j][k] = (c4 * c[j][k] - k * c[j][k - 1]) / c3;
            c[j][0] = c4 * c[j][0] / c3;
        }
        c1 = c2;
    }
    std::vector<double> w(n);
    for (std::size_t i = 0; i < n; ++i) w[i] = c[i][1];
    return w;
}

double stencil_derivative(const std::vector<double>& t, const std::vector<double>& v, std::size_t i, std::size_t width)
{
    const std::size_t n = t.size();
    width = std::min(width, n);
    std::size_t lo = i >= width / 2 ? i - width / 2 : 0;
    lo = std::min(lo, n - width);
    const std::vector<double> x(t.begin() + static_cast<long>(lo), t.begin() + static_cast<long>(lo + width));
    const auto w = fd_weights(x, t[i]);
    double d = 0.0;
    for (std::size_t k = 0; k < width; ++k) d += w[k] * v[lo + k];
    return d;
}

} // namespace

std::string beta_tag(double beta)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", beta);
    return buf;
}

DiagnosticsRecord record(const Field& theta, double t, const std::vector<WeightSpec>& weights, bool cc_check)
{
    DiagnosticsRecord r;
    r.t = t;
    r.sup_norm = theta.sup_norm();
    r.min_val = theta.min();
    r.max_val = theta.max();
    r.grad_sup = derivative(theta).sup_norm();
    const Field lh = lambda_alpha(theta, 0.5), l1 = lambda_alpha(theta, 1.0), l32 = lambda_alpha(theta, 1.5);
    for (const auto& w : weights) r.weighted.push_back(norms(theta, lh, l1, l32, w));
    r.unweighted = norms(theta, lh, l1, l32, WeightSpec::uniform(theta.grid()));
    r.d3_sq = sobolev_sq(theta, 3.0);
    r.lambda72_sq = sobolev_sq(theta, 3.5);
    r.d4_sq = sobolev_sq(theta, 4.0);
    if (cc_check && r.min_val >= -1e-10) {
        r.cc_slack = cc_pointwise_check(theta);
        const Field cube = theta * theta * theta;
        r.cc_scale = 3.0 * r.sup_norm * r.sup_norm * l1.sup_norm() + lambda_alpha(cube, 1.0).sup_norm();
        r.cc_evaluated = true;
    }
    return r;
}

TimeDerivative time_derivative(const std::vector<double>& t, const std::vector<double>& v, std::size_t i)
{
    if (t.size() != v.size() || i >= t.size()) throw std::invalid_argument("time_derivative: bad index");
    if (t.size() < 2) return {0.0, 0.0};
    const double hi = stencil_derivative(t, v, i, 5);
    const double lo = stencil_derivative(t, v, i, 3);
    return {hi, std::abs(hi - lo)};
}

namespace {

ResidualValue make(double value, double scale, bool asserted, double err)
{
    ResidualValue r;
    r.value = value;
    r.tolerance = residual_rel_tol * scale;
    r.asserted = asserted;
    r.dt_flag = err > std::abs(r.tolerance - value);
    return r;
}

} // namespace

void evaluate_residuals(std::vector<DiagnosticsRecord>& records, const ResidualContext& c)
{
    const std::size_t n = records.size();
    if (n == 0) return;
    std::vector<double> t(n);
    for (std::size_t i = 0; i < n; ++i) t[i] = records[i].t;
    auto series = [&](auto fn) {
        std::vector<double> v(n);
        for (std::size_t i = 0; i < n; ++i) v[i] = fn(records[i]);
        return v;
    };
    const bool core = c.alpha == 1.0 && c.nu == 1.0;
    const double m = c.m0;

    // unweighted levels, no registered constant needed
    const auto l2 = series([](const DiagnosticsRecord& r) { return r.unweighted.l2 * r.unweighted.l2; });
    const auto hh = series([](const DiagnosticsRecord& r) { return r.unweighted.dissip_half; });
    const auto h1 = series([](const DiagnosticsRecord& r) { return r.unweighted.dissip_1; });
    const auto h3 = series([](const DiagnosticsRecord& r) { return r.unweighted.l2 * r.unweighted.l2 + r.d3_sq; });

    for (std::size_t i = 0; i < n; ++i) {
        DiagnosticsRecord& r = records[i];
        const NormSet& u = r.unweighted;
        {
            const auto d = time_derivative(t, l2, i);
            const double a = 2.0 * u.dissip_half, b = 2.0 * m * u.l2 * u.h1;
            r.residuals["l2"] = make(d.value + a - b, std::abs(d.value) + a + b, core, d.err);
        }
        {
            const auto d = time_derivative(t, hh, i);
            const double a = 2.0 * (1.0 - m) * u.dissip_1;
            r.residuals["h1_2"] = make(d.value + a, std::abs(d.value) + std::abs(a), core && m < 1.0, d.err);
        }
        if (c.registry) {
            const auto d = time_derivative(t, h1, i);
            const double a = 2.0 * (1.0 - c.registry->c1 * m) * u.dissip_3half;
            r.residuals["sob"] = make(d.value + a, std::abs(d.value) + std::abs(a), core, d.err);

            const auto d3 = time_derivative(t, h3, i);
            const double c0m = c.registry->c0 * m;
            const double gr = c0m * h3[i], lam = 2.0 * (c0m - 1.0) * r.lambda72_sq, eps = 2.0 * c.epsilon * r.d4_sq;
            r.residuals["h3"] = make(d3.value - gr - lam + eps, std::abs(d3.value) + gr + std::abs(lam) + eps, core, d3.err);
        }
        if (r.cc_evaluated) {
            ResidualValue cc;
            cc.value = -r.cc_slack;
            cc.tolerance = 1e-6 * r.cc_scale;
            cc.asserted = true;
            r.residuals["cc_pointwise"] = cc;
        }
    }

    if (!c.registry) return;
    const std::size_t nb = records[0].weighted.size();
    for (std::size_t b = 0; b < nb; ++b) {
        const double beta = records[0].weighted[b].beta;
        const WeightConstants* wc = nullptr;
        try {
            wc = &c.registry->for_beta(beta);
        } catch (const std::out_of_range&) {
            continue;
        }
        const std::string tag = beta_tag(beta);
        const auto e0 = series([b](const DiagnosticsRecord& r) { return r.weighted[b].l2 * r.weighted[b].l2; });
        const auto e01 = series([b](const DiagnosticsRecord& r) { return r.weighted[b].l2 * r.weighted[b].l2 + r.weighted[b].dissip_half; });
        const auto reg = c.registry->regime(beta, m);
        const bool base = core && c.epsilon == 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            DiagnosticsRecord& r = records[i];
            const NormSet& s = r.weighted[b];
            {
                const auto d = time_derivative(t, e0, i);
                const double grow = wc->l2_rate * (1.0 + m) * e0[i], nl = m * s.theta_lambda;
                r.residuals["eql2_" + tag] =
                    make(d.value + s.dissip_half - grow - nl, std::abs(d.value) + s.dissip_half + grow + nl, base, d.err);
            }
            {
                const auto d = time_derivative(t, e01, i);
                const double c9 = wc->comm_half * wc->comm_half + wc->c8 * m;
                const double diss = (wc->c8 * m - 1.0) * s.dissip_1, grow = c9 * e01[i];
                ResidualValue v = make(d.value - diss - grow, std::abs(d.value) + std::abs(diss) + grow,
                                       base && reg == ConstantRegistry::Regime::Inside, d.err);
                v.inconclusive = base && reg == ConstantRegistry::Regime::Inconclusive;
                r.residuals["eqsob3_" + tag] = v;
            }
        }
    }
}

double cc_pointwise_check(const Field& theta)
{
    if (theta.min() < -1e-10) throw std::invalid_argument("cc_pointwise_check: field has a negative part");
    const Field sq = theta * theta;
    const Field lhs = 3.0 * (sq * lambda_alpha(theta, 1.0));
    const Field rhs = lambda_alpha(sq * theta, 1.0);
    return (lhs - rhs).min();
}

MagicResult magic_identity_check(const Field& f)
{
    const double sup = f.sup_norm();
    if (sup == 0.0) return {0.0, true};
    if (std::abs(f.mean()) > 1e-12 * sup) throw std::invalid_argument("magic_identity_check: field must have zero mean");
    const auto& fh = f.spectrum();
    double peak = 0.0, tail = 0.0;
    const std::size_t quarter = f.size() / 4;
    for (std::size_t m = 0; m < fh.size(); ++m) {
        peak = std::max(peak, std::abs(fh[m]));
        if (m >= quarter) tail = std::max(tail, std::abs(fh[m]));
    }
    const Field hf = hilbert(f);
    const Field lhs = 2.0 * hilbert(f * hf);
    const Field rhs = hf * hf - f * f;
    return {(lhs - rhs).sup_norm() / (sup * sup), tail <= 1e-13 * peak};
}

int gronwall_envelope(const std::vector<double>& t, const std::vector<double>& v, double rate, double v0)
{
    if (!(rate >= 0.0)) throw std::invalid_argument("gronwall_envelope: rate must be nonnegative");
    if (t.size() != v.size()) throw std::invalid_argument("gronwall_envelope: size mismatch");
    int count = 0;
    for (std::size_t i = 0; i < t.size(); ++i)
        if (v[i] > v0 * std::exp(rate * t[i]) * (1.0 + 1e-4)) ++count;
    return count;
}

std::vector<double> cumulative_integral(const std::vector<double>& t, const std::vector<double>& v)
{
    std::vector<double> out(t.size(), 0.0);
    for (std::size_t i = 1; i < t.size(); ++i) out[i] = out[i - 1] + 0.5 * (t[i] - t[i - 1]) * (v[i] + v[i - 1]);
    return out;
}

DiagnosedRun run_with_diagnostics(const Grid& g, const SolverConfig& cfg, const DiagnosticsRequest& req,
                                  const ConstantRegistry& registry)
{
    std::vector<WeightSpec> weights;
    for (double b : req.betas) weights.emplace_back(g, b);
    std::vector<DiagnosticsRecord> records;
    RunResult res = run(g, cfg, [&](const TrajectoryState& s) { records.push_back(record(s.theta, s.t, weights, req.cc_check)); });
    ResidualContext ctx{cfg.alpha, cfg.nu, cfg.epsilon, cfg.nonlinear, records.empty() ? 0.0 : records[0].sup_norm, &registry};
    evaluate_residuals(records, ctx);
    return {std::move(res), std::move(records)};
}

} // namespace fractrans
