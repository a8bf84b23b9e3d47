#include "fractrans/quadrature.hpp"

#include "fractrans/cutoff.hpp"
#include "fractrans/spectral.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace fractrans {

double hurwitz_zeta(double s, double a)
{
    if (!(s > 1.0) || !(a > 0.0)) throw std::invalid_argument("hurwitz_zeta: need s > 1 and a > 0");
    // Euler-Maclaurin with a shifted start
    constexpr int shift = 12;
    static constexpr std::array<double, 8> b2k = {1.0 / 6, -1.0 / 30, 1.0 / 42, -1.0 / 30, 5.0 / 66, -691.0 / 2730, 7.0 / 6, -3617.0 / 510};
    double sum = 0.0;
    for (int n = 0; n < shift; ++n) sum += std::pow(n + a, -s);
    const double q = shift + a;
    sum += std::pow(q, 1.0 - s) / (s - 1.0) + 0.5 * std::pow(q, -s);
    double rising = s;        // s (s+1) ... (s+2k-2)
    double fact = 2.0;        // (2k)!
    double qp = std::pow(q, -s - 1.0);
    for (std::size_t k = 1; k <= b2k.size(); ++k) {
        sum += b2k[k - 1] / fact * rising * qp;
        rising *= (s + 2.0 * k - 1.0) * (s + 2.0 * k);
        fact *= (2.0 * k + 1.0) * (2.0 * k + 2.0);
        qp /= q * q;
    }
    return sum;
}

double singular_constant(double alpha)
{
    if (!(alpha > 0.0 && alpha < 2.0)) throw std::invalid_argument("singular_constant: alpha must lie in (0, 2)");
    const double s = alpha / 2.0;
    return std::pow(4.0, s) * boost::math::tgamma(0.5 + s) / (std::sqrt(std::numbers::pi) * std::abs(boost::math::tgamma(-s)));
}

double periodic_image_kernel(double s, double p, double period)
{
    const double u = s / period;
    return std::pow(period, -p) * (hurwitz_zeta(p, 1.0 + u) + hurwitz_zeta(p, 1.0 - u));
}

namespace {

double adaptive(const std::function<double(double)>& g, double a, double b, const OracleOptions& opt, unsigned depth)
{
    using boost::math::quadrature::gauss_kronrod;
    double err = 0.0;
    const double v = gauss_kronrod<double, 31>::integrate(g, a, b, 0, 0.0, &err);
    if (depth >= opt.max_depth || err <= std::max(opt.tolerance * std::abs(v), opt.absolute)) return v;
    const double m = 0.5 * (a + b);
    return adaptive(g, a, m, opt, depth + 1) + adaptive(g, m, b, opt, depth + 1);
}

} // namespace

double integrate_pieces(const std::function<double(double)>& g, double a, double b, const OracleOptions& opt)
{
    std::vector<double> cuts{a};
    for (double c : {1e-2, 1e-1, 0.5, 1.0, 2.0, 4.0, 8.0, 16.0, 32.0, 64.0, 128.0})
        if (c > a && c < b) cuts.push_back(c);
    cuts.push_back(b);
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i)
        total += adaptive(g, cuts[i], cuts[i + 1], opt, 0);
    return total;
}

namespace {

double wrap(double y, double half_length)
{
    const double p = 2.0 * half_length;
    return y - p * std::round(y / p);
}

} // namespace

double frac_lap_oracle(const LineFunction& f, double x, double alpha, double half_length, double c, const OracleOptions& opt)
{
    const double p = 1.0 + alpha;
    const double period = 2.0 * half_length;
    const double s0 = opt.near_radius;
    const double fx = f(x, 0);
    auto fp = [&](double y) { return f(wrap(y, half_length), 0); };
    // symmetric pairing removes the odd part of the singularity
    auto integrand = [&](double s) {
        const double g = 2.0 * fx - fp(x - s) - fp(x + s);
        return g * (std::pow(s, -p) + periodic_image_kernel(s, p, period));
    };
    const double f2 = f(x, 2), f4 = f(x, 4);
    double near = -f2 * std::pow(s0, 2.0 - alpha) / (2.0 - alpha) - f4 / 12.0 * std::pow(s0, 4.0 - alpha) / (4.0 - alpha);
    near += -f2 * periodic_image_kernel(0.0, p, period) * s0 * s0 * s0 / 3.0;
    return c * (near + integrate_pieces(integrand, s0, half_length, opt));
}

double calibrate_singular_constant(double alpha, const Grid& g, const OracleOptions& opt)
{
    auto gauss = [](double x, int n) {
        switch (n) {
        case 0: return std::exp(-x * x);
        case 2: return (4 * x * x - 2) * std::exp(-x * x);
        case 4: return (16 * x * x * x * x - 48 * x * x + 12) * std::exp(-x * x);
        default: throw std::invalid_argument("gaussian derivative order not provided");
        }
    };
    const Field f = Field::from_function(g, [&](double x) { return gauss(x, 0); });
    const double spectral = lambda_alpha(f, alpha)[g.size() / 2];
    return spectral / frac_lap_oracle(gauss, 0.0, alpha, g.half_length(), 1.0, opt);
}

double commutator_half_oracle(const LineFunction& f, double beta, double x, double half_length, double c0, const OracleOptions& opt)
{
    const double p = 1.5;
    const double period = 2.0 * half_length;
    const double s0 = opt.near_radius;
    auto w = [&](double y) { return std::pow(1.0 + y * y, -beta / 2.0); };
    const double wx = w(x);
    auto integrand = [&](double s) {
        const double ym = wrap(x - s, half_length), yp = wrap(x + s, half_length);
        const double g = (wx - w(ym)) * f(ym, 0) + (wx - w(yp)) * f(yp, 0);
        return g * (std::pow(s, -p) + periodic_image_kernel(s, p, period));
    };
    const double q = 1.0 + x * x;
    const double w1 = -beta * x * std::pow(q, -beta / 2.0 - 1.0);
    const double w2 = -beta * std::pow(q, -beta / 2.0 - 1.0) + beta * (beta + 2.0) * x * x * std::pow(q, -beta / 2.0 - 2.0);
    const double g2 = -(w2 * f(x, 0) + 2.0 * w1 * f(x, 1));
    const double near = g2 * std::pow(s0, 1.5) / 1.5;
    return c0 / wx * (near + integrate_pieces(integrand, s0, half_length, opt));
}

double truncated_hilbert_oracle(const LineFunction& f, double x, const OracleOptions& opt)
{
    const double s0 = opt.near_radius;
    auto integrand = [&](double s) { return plateau(s) * (f(x - s, 0) - f(x + s, 0)) / s; };
    const double near = -2.0 * f(x, 1) * s0 - f(x, 3) * s0 * s0 * s0 / 9.0;
    return (near + integrate_pieces(integrand, s0, 2.0, opt)) / std::numbers::pi;
}

} // namespace fractrans
