#include "fractrans/initial_data.hpp"

#include "fractrans/cutoff.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace fractrans {

Field InitialData::sample(const Grid& g) const
{
    const double A = amplitude, w = width, c = center;
    switch (family) {
    case DataFamily::Bump:
        return Field::from_function(g, [=](double x) { return A * std::numbers::e * bump((x - c) / w); });
    case DataFamily::Gaussian:
        return Field::from_function(g, [=](double x) { return A * std::exp(-(x - c) * (x - c) / (w * w)); });
    case DataFamily::Ccf:
        return Field::from_function(g, [=](double x) { return A * std::exp(-x * x / (w * w)) * plateau(x / (3.0 * w)); });
    case DataFamily::Mode: {
        const double k = mode * std::numbers::pi / g.half_length();
        return Field::from_function(g, [=](double x) { return A * std::sin(k * x); });
    }
    case DataFamily::Mixed:
        return Field::from_function(g, [=](double x) {
            const double a = x / w, b = (x - 2.0 * w) / w, d = (x + 2.0 * w) / w;
            return A * (std::exp(-a * a) - 0.6 * (std::exp(-b * b) + std::exp(-d * d)));
        });
    case DataFamily::Constant:
        return Field::constant(g, A);
    }
    throw std::invalid_argument("unknown initial data family");
}

DataFamily parse_family(const std::string& name)
{
    if (name == "bump") return DataFamily::Bump;
    if (name == "gaussian") return DataFamily::Gaussian;
    if (name == "ccf") return DataFamily::Ccf;
    if (name == "mode") return DataFamily::Mode;
    if (name == "mixed") return DataFamily::Mixed;
    if (name == "constant") return DataFamily::Constant;
    throw std::invalid_argument("unknown initial data family '" + name + "'");
}

std::string family_name(DataFamily f)
{
    switch (f) {
    case DataFamily::Bump: return "bump";
    case DataFamily::Gaussian: return "gaussian";
    case DataFamily::Ccf: return "ccf";
    case DataFamily::Mode: return "mode";
    case DataFamily::Mixed: return "mixed";
    case DataFamily::Constant: return "constant";
    }
    return "unknown";
}

} // namespace fractrans
