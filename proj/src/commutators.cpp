#include "fractrans/commutators.hpp"

#include "fractrans/cutoff.hpp"
#include "fractrans/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace fractrans {

Region classify(double x, double y)
{
    const double d = std::abs(x - y);
    if (d < 2.0) return Region::Near;
    return d <= 0.5 * std::max(std::abs(x), std::abs(y)) ? Region::Intermediate : Region::Far;
}

namespace {

Field multiply(const Field& f, const std::vector<double>& m)
{
    std::vector<double> v(f.samples());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] *= m[i];
    return Field::from_samples(f.grid(), std::move(v));
}

Field divide(const Field& f, const std::vector<double>& m)
{
    std::vector<double> v(f.samples());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] /= m[i];
    return Field::from_samples(f.grid(), std::move(v));
}

Field weighted_commutator(const Field& f, const std::vector<double>& m, double power)
{
    const Field a = lambda_alpha(multiply(f, m), power);
    const Field b = multiply(lambda_alpha(f, power), m);
    return divide(a - b, m);
}

} // namespace

Field commutator_half(const Field& f, const WeightSpec& w)
{
    if (f.grid() != w.grid()) throw std::invalid_argument("commutator_half: grid mismatch");
    return weighted_commutator(f, w.w(), 0.5);
}

Field commutator_full(const Field& f, const WeightSpec& w)
{
    if (f.grid() != w.grid()) throw std::invalid_argument("commutator_full: grid mismatch");
    return weighted_commutator(f, w.gamma(), 1.0);
}

Field truncated_hilbert(const Field& f)
{
    const Grid& g = f.grid();
    const std::size_t n = g.size();
    const double h = g.spacing();
    const std::size_t reach = std::min<std::size_t>(static_cast<std::size_t>(std::ceil(2.0 / h)), n / 2 - 1);
    std::vector<double> kern(reach + 1, 0.0);
    for (std::size_t m = 1; m <= reach; ++m) {
        const double s = static_cast<double>(m) * h;
        kern[m] = plateau(s) / s;
    }
    const auto& v = f.samples();
    const Field slope = derivative(f);
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) {
        double acc = -slope[i]; // (h/2) * (-2 f'(x)) / h
        for (std::size_t m = 1; m <= reach; ++m) acc += kern[m] * (v[(i + n - m) % n] - v[(i + m) % n]);
        out[i] = acc * h / std::numbers::pi;
    }
    return Field::from_samples(g, std::move(out));
}

namespace {

// int_L^inf w(y) [(y-x)^-2 + (y+x)^-2] dy with w(y) = sum_j c_j y^(-beta-2j)
double weight_tail(double beta, double x, double L)
{
    double total = 0.0;
    double cj = 1.0; // binomial(-beta/2, j)
    for (int j = 0; j < 12; ++j) {
        double part = 0.0;
        double xn = 1.0; // x^n, n even
        for (int n = 0; n < 400; n += 2) {
            const double term = (n + 1) * xn * std::pow(L, -beta - 2.0 * j - 1.0 - n) / (beta + 2.0 * j + 1.0 + n);
            part += term;
            if (std::abs(term) < 1e-19 * std::abs(part)) break;
            xn *= x * x;
        }
        total += 2.0 * cj * part;
        if (std::abs(cj * part) < 1e-19 * std::abs(total)) break;
        cj *= (-beta / 2.0 - j) / (j + 1.0);
    }
    return total;
}

} // namespace

double lambda_of_weight(const WeightSpec& w, double x, const OracleOptions& opt)
{
    const double L = w.grid().half_length();
    if (!(std::abs(x) <= L / 2.0)) throw std::invalid_argument("lambda_of_weight: x outside the trusted window |x| <= L/2");
    const double beta = w.beta();
    auto wf = [beta](double y) { return WeightSpec::value(beta, y); };
    const double wx = wf(x);
    const double a = L - std::abs(x);
    const double s0 = opt.near_radius;

    // symmetric part |y - x| < a
    auto sym = [&](double s) { return (2.0 * wx - wf(x + s) - wf(x - s)) / (s * s); };
    double total = -WeightSpec::second_derivative(beta, x) * s0 + integrate_pieces(sym, s0, a, opt);

    // leftover inside the box on the side away from the nearer edge
    if (2.0 * a < 2.0 * L) {
        auto side = [&](double s) {
            const double y = x >= 0.0 ? x - s : x + s;
            return (wx - wf(y)) / (s * s);
        };
        total += integrate_pieces(side, a, L + std::abs(x), opt);
    }

    // |y| > L
    total += wx * (1.0 / (L - x) + 1.0 / (L + x)) - weight_tail(beta, x, L);
    return total / std::numbers::pi;
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y)
{
    const std::size_t n = x.size();
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += std::log(x[i]);
        my += std::log(y[i]);
    }
    mx /= n;
    my /= n;
    double sxy = 0, sxx = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const double dx = std::log(x[i]) - mx;
        sxy += dx * (std::log(y[i]) - my);
        sxx += dx * dx;
    }
    return sxy / sxx;
}

TruncationScaling truncation_commutator_scaling(const Field& theta0, const WeightSpec& w, const std::vector<double>& radii)
{
    const Grid& g = theta0.grid();
    if (radii.size() < 2) throw std::invalid_argument("truncation scaling needs at least two radii");
    for (std::size_t i = 0; i < radii.size(); ++i) {
        if (!(radii[i] > 0.0)) throw std::invalid_argument("truncation radii must be positive");
        if (i > 0 && !(radii[i] > radii[i - 1])) throw std::invalid_argument("truncation radii must increase");
    }
    if (radii.back() > g.half_length() / 4.0) throw std::invalid_argument("largest truncation radius exceeds L/4");
    const double base = weighted_lp_norm(theta0, 2.0, w);
    if (!(base > 0.0)) throw std::invalid_argument("truncation scaling: theta0 vanishes");

    TruncationScaling out{radii, {}, 0.0};
    const Field l0 = lambda_alpha(theta0, 0.5);
    for (double R : radii) {
        const Field psi = Field::from_function(g, [R](double x) { return plateau(x / R); });
        const Field c = lambda_alpha(psi * theta0, 0.5) - psi * l0;
        const double v = weighted_lp_norm(c, 2.0, w);
        if (!(v > 0.0) || !std::isfinite(v)) throw std::runtime_error("truncation commutator norm underflowed");
        out.norms.push_back(v);
    }
    out.slope = loglog_slope(out.radii, out.norms);
    return out;
}

double empirical_norm(const std::function<Field(const Field&)>& op, const std::vector<Field>& fields, double p, const WeightSpec& w)
{
    double worst = 0.0;
    for (const Field& f : fields) {
        const double den = weighted_lp_norm(f, p, w);
        if (den <= ratio_floor) continue;
        worst = std::max(worst, weighted_lp_norm(op(f), p, w) / den);
    }
    return worst;
}

} // namespace fractrans
