#include "fractrans/cutoff.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <vector>

namespace fractrans {

double bump(double x)
{
    const double a = 1.0 - x * x;
    return a > 0.0 ? std::exp(-1.0 / a) : 0.0;
}

double bump_mass()
{
    static const double mass = [] {
        using boost::math::quadrature::gauss_kronrod;
        return gauss_kronrod<double, 61>::integrate(bump, -1.0, 1.0, 20, 1e-15);
    }();
    return mass;
}

double mollifier_profile(double x) { return bump(x) / bump_mass(); }

namespace {

constexpr int step_nodes = 8192;

// running integral of the profile at u_k = k / step_nodes
const std::vector<double>& step_table()
{
    static const std::vector<double> table = [] {
        using boost::math::quadrature::gauss_kronrod;
        std::vector<double> t(step_nodes + 1, 0.0);
        double acc = 0.0;
        for (int k = 0; k < step_nodes; ++k) {
            const double a = 2.0 * k / step_nodes - 1.0, b = 2.0 * (k + 1) / step_nodes - 1.0;
            acc += gauss_kronrod<double, 15>::integrate(bump, a, b, 0);
            t[k + 1] = acc;
        }
        for (double& v : t) v /= acc;
        return t;
    }();
    return table;
}

} // namespace

double smooth_step(double u)
{
    if (u <= 0.0) return 0.0;
    if (u >= 1.0) return 1.0;
    // cubic Hermite between table nodes, slopes from the exact derivative
    const auto& t = step_table();
    const double pos = u * step_nodes;
    const int k = std::min(static_cast<int>(pos), step_nodes - 1);
    const double h = 1.0 / step_nodes;
    const double r = pos - k;
    const double u0 = static_cast<double>(k) / step_nodes, u1 = static_cast<double>(k + 1) / step_nodes;
    const double d0 = 2.0 * mollifier_profile(2.0 * u0 - 1.0) * h;
    const double d1 = 2.0 * mollifier_profile(2.0 * u1 - 1.0) * h;
    const double r2 = r * r, r3 = r2 * r;
    return (2 * r3 - 3 * r2 + 1) * t[k] + (r3 - 2 * r2 + r) * d0 + (-2 * r3 + 3 * r2) * t[k + 1] + (r3 - r2) * d1;
}

double plateau(double x)
{
    const double a = std::abs(x);
    if (a <= 1.0) return 1.0;
    if (a >= 2.0) return 0.0;
    return 1.0 - smooth_step(a - 1.0);
}

} // namespace fractrans
