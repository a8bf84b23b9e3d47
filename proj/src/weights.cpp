#include "fractrans/weights.hpp"

#include "fractrans/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace fractrans {

WeightSpec::WeightSpec(const Grid& grid, double beta) : WeightSpec(grid, beta, true)
{
    if (!(beta > 0.0 && beta < 1.0))
        throw std::invalid_argument("weight exponent beta must lie in (0, 1), got " + std::to_string(beta));
}

WeightSpec::WeightSpec(const Grid& grid, double beta, bool) : grid_(grid), beta_(beta)
{
    w_.resize(grid.size());
    gamma_.resize(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double x = grid.x(i);
        w_[i] = value(beta, x);
        gamma_[i] = std::pow(1.0 + x * x, -beta / 4.0);
    }
}

WeightSpec WeightSpec::uniform(const Grid& grid) { return WeightSpec(grid, 0.0, true); }

double WeightSpec::value(double beta, double x) { return std::pow(1.0 + x * x, -beta / 2.0); }

double WeightSpec::first_derivative(double beta, double x)
{
    return -beta * x * std::pow(1.0 + x * x, -beta / 2.0 - 1.0);
}

double WeightSpec::second_derivative(double beta, double x)
{
    const double q = 1.0 + x * x;
    return -beta * std::pow(q, -beta / 2.0 - 1.0) + beta * (beta + 2.0) * x * x * std::pow(q, -beta / 2.0 - 2.0);
}

namespace {

void require_grid(const Field& f, const WeightSpec& w)
{
    if (f.grid() != w.grid()) throw std::invalid_argument("weight and field live on different grids");
}

} // namespace

double weighted_lp_norm(const Field& f, double p, const WeightSpec& w)
{
    if (!(p >= 1.0) || !std::isfinite(p)) throw std::invalid_argument("weighted_lp_norm: p must be finite and >= 1");
    require_grid(f, w);
    const auto& v = f.samples();
    const auto& wt = w.w();
    double s = 0.0;
    if (p == 2.0)
        for (std::size_t i = 0; i < v.size(); ++i) s += v[i] * v[i] * wt[i];
    else
        for (std::size_t i = 0; i < v.size(); ++i) s += std::pow(std::abs(v[i]), p) * wt[i];
    return std::pow(s * f.grid().spacing(), 1.0 / p);
}

double weighted_integral(const Field& f, const WeightSpec& w)
{
    require_grid(f, w);
    const auto& v = f.samples();
    double s = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) s += v[i] * w.w()[i];
    return s * f.grid().spacing();
}

double weighted_sobolev_norm(const Field& f, double s, const WeightSpec& w)
{
    if (s != 0.5 && s != 1.0) throw std::invalid_argument("weighted_sobolev_norm: order must be 1/2 or 1");
    const double a = weighted_lp_norm(f, 2.0, w);
    const double b = weighted_lp_norm(lambda_alpha(f, s), 2.0, w);
    return std::sqrt(a * a + b * b);
}

WeightedNorm weighted_norm(const Field& f, double p, double s, const WeightSpec& w)
{
    if (s != 0.0 && s != 0.5 && s != 1.0 && s != 1.5)
        throw std::invalid_argument("weighted_norm: order must be one of 0, 1/2, 1, 3/2");
    const Field g = s == 0.0 ? f : lambda_alpha(f, s);
    return {p, s, weighted_lp_norm(g, p, w)};
}

std::vector<std::size_t> radius_cells(const Grid& g, RadiusLadder ladder)
{
    std::vector<std::size_t> r;
    const std::size_t n = g.size();
    if (ladder == RadiusLadder::Dense) {
        for (std::size_t m = 1; m <= n; ++m) r.push_back(m);
    } else {
        std::size_t m = 1;
        for (; m < n; m *= 2) r.push_back(m);
        r.push_back(m);
    }
    return r;
}

WindowAverager::WindowAverager(std::vector<double> values) : v_(std::move(values)), prefix_(v_.size() + 1, 0.0)
{
    for (std::size_t i = 0; i < v_.size(); ++i) prefix_[i + 1] = prefix_[i] + v_[i];
}

double WindowAverager::range_sum(long lo, std::size_t count) const
{
    const long n = static_cast<long>(v_.size());
    const std::size_t start = static_cast<std::size_t>(((lo % n) + n) % n);
    const std::size_t periods = count / v_.size();
    const std::size_t rest = count % v_.size();
    double s = static_cast<double>(periods) * prefix_.back();
    if (start + rest <= v_.size()) {
        s += prefix_[start + rest] - prefix_[start];
    } else {
        s += prefix_.back() - prefix_[start];
        s += prefix_[start + rest - v_.size()];
    }
    return s;
}

double WindowAverager::average(std::size_t center, std::size_t m) const
{
    const long n = static_cast<long>(v_.size());
    const long c = static_cast<long>(center);
    const long ml = static_cast<long>(m);
    const double ends = 0.5 * (v_[static_cast<std::size_t>(((c - ml) % n + n) % n)] + v_[static_cast<std::size_t>((c + ml) % n)]);
    const double total = range_sum(c - ml, 2 * m + 1) - ends;
    return total / static_cast<double>(2 * m);
}

Field maximal_function(const Field& f, RadiusLadder ladder)
{
    std::vector<double> a(f.samples());
    for (double& v : a) v = std::abs(v);
    const WindowAverager avg(a);
    const auto radii = radius_cells(f.grid(), ladder);
    std::vector<double> out(a);
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t m : radii) out[i] = std::max(out[i], avg.average(i, m));
    return Field::from_samples(f.grid(), std::move(out));
}

double ap_constant(const WeightSpec& w, double p)
{
    if (!(p > 1.0)) throw std::invalid_argument("ap_constant: p must exceed 1");
    std::vector<double> dual(w.w());
    const double e = -1.0 / (p - 1.0);
    for (double& v : dual) v = std::pow(v, e);
    const WindowAverager aw(w.w());
    const WindowAverager ad(dual);
    const auto radii = radius_cells(w.grid(), RadiusLadder::Dyadic);
    double best = 0.0;
    for (std::size_t i = 0; i < dual.size(); ++i)
        for (std::size_t m : radii) best = std::max(best, aw.average(i, m) * std::pow(ad.average(i, m), p - 1.0));
    return best;
}

HedbergResult hedberg_check(const Field& f, double gamma, double delta)
{
    if (!(gamma > 0.0)) throw std::invalid_argument("hedberg_check: gamma must be positive");
    if (!(gamma < delta)) throw std::invalid_argument("hedberg_check: gamma must be below delta");
    if (!(delta <= 2.0)) throw std::invalid_argument("hedberg_check: delta must not exceed 2");
    const double fs = f.sup_norm();
    if (fs == 0.0) throw std::invalid_argument("hedberg_check: field is identically zero");
    const Field lg = lambda_power(f, gamma);
    const Field md = maximal_function(lambda_power(f, delta));
    const double q = gamma / delta;
    const double tail = std::pow(fs, 1.0 - q);
    HedbergResult r{0.0, f.grid().x(0)};
    for (std::size_t i = 0; i < f.size(); ++i) {
        const double den = std::max(std::pow(md[i], q) * tail, ratio_floor);
        const double ratio = std::abs(lg[i]) / den;
        if (ratio > r.sup_ratio) r = {ratio, f.grid().x(i)};
    }
    return r;
}

double gn_check(const Field& f, const WeightSpec& w, GnInequality which)
{
    const double fs = f.sup_norm();
    if ((f - Field::constant(f.grid(), f.mean())).sup_norm() <= 1e-14 * std::max(fs, 1e-300))
        throw std::invalid_argument("gn_check: field is constant, right-hand side vanishes");
    switch (which) {
    case GnInequality::B1: {
        const double lhs = weighted_lp_norm(lambda_alpha(f, 0.5), 4.0, w);
        const double rhs = std::sqrt(fs) * std::sqrt(weighted_lp_norm(lambda_alpha(f, 1.0), 2.0, w));
        return lhs / std::max(rhs, ratio_floor);
    }
    case GnInequality::B:
    case GnInequality::B2: {
        const Field g = which == GnInequality::B ? lambda_alpha(f, 1.0) : derivative(f);
        const double lhs = weighted_lp_norm(g, 3.0, w);
        const double rhs = std::cbrt(fs) * std::pow(weighted_lp_norm(lambda_alpha(f, 1.5), 2.0, w), 2.0 / 3.0);
        return lhs / std::max(rhs, ratio_floor);
    }
    }
    throw std::invalid_argument("gn_check: unknown inequality");
}

} // namespace fractrans
