#include "fractrans/random_suite.hpp"

#include <cmath>
#include <numbers>

namespace fractrans {

double Rng::uniform()
{
    return static_cast<double>(eng_() >> 11) * 0x1.0p-53;
}

double Rng::uniform(double a, double b) { return a + (b - a) * uniform(); }

double Rng::normal()
{
    if (have_spare_) {
        have_spare_ = false;
        return spare_;
    }
    double u = 0.0;
    while (u == 0.0) u = uniform();
    const double v = uniform();
    const double r = std::sqrt(-2.0 * std::log(u));
    const double a = 2.0 * std::numbers::pi * v;
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
}

double SmoothFunction::operator()(double x) const
{
    double s = 0.0;
    for (const auto& g : bumps) {
        const double z = (x - g.center) / g.width;
        s += g.amplitude * std::exp(-z * z);
    }
    const double phase = std::numbers::pi * (x + period_half) / period_half;
    for (const auto& m : modes) s += m.a * std::cos(m.j * phase) + m.b * std::sin(m.j * phase);
    return s;
}

double SmoothFunction::derivative(double x, int order) const
{
    if (order == 0) return (*this)(x);
    double s = 0.0;
    for (const auto& g : bumps) {
        // d^n/dz^n exp(-z^2) = (-1)^n H_n(z) exp(-z^2), physicists' Hermite
        const double z = (x - g.center) / g.width;
        double hm = 1.0, hn = 2.0 * z;
        for (int n = 1; n < order; ++n) {
            const double next = 2.0 * z * hn - 2.0 * n * hm;
            hm = hn;
            hn = next;
        }
        const double sign = order % 2 == 0 ? 1.0 : -1.0;
        s += g.amplitude * sign * hn * std::exp(-z * z) / std::pow(g.width, order);
    }
    const double phase = std::numbers::pi * (x + period_half) / period_half;
    for (const auto& m : modes) {
        const double k = m.j * std::numbers::pi / period_half;
        // derivative of order n shifts the phase by n quarter turns
        const double shift = order * std::numbers::pi / 2.0;
        s += std::pow(k, order) * (m.a * std::cos(m.j * phase + shift) + m.b * std::sin(m.j * phase + shift));
    }
    return s;
}

Field SmoothFunction::sample(const Grid& g) const
{
    bool spectral = period_half == g.half_length();
    for (const auto& m : modes) spectral = spectral && m.j >= 0 && static_cast<std::size_t>(m.j) < g.size() / 2;
    if (!spectral || modes.empty()) return Field::from_function(g, [this](double x) { return (*this)(x); });

    // trigonometric part placed directly in the half spectrum
    std::vector<Complex> spec(g.spectrum_size());
    const double half_n = static_cast<double>(g.size()) / 2.0;
    for (const auto& m : modes) {
        if (m.j == 0) spec[0] += static_cast<double>(g.size()) * m.a;
        else spec[static_cast<std::size_t>(m.j)] += half_n * Complex(m.a, -m.b);
    }
    Field trig = Field::from_spectrum(g, std::move(spec));
    if (bumps.empty()) return trig;
    SmoothFunction localized = *this;
    localized.modes.clear();
    return trig + localized.sample(g);
}

SmoothFunction random_bumps(Rng& rng, double wmin, double wmax, double cmax, bool nonnegative)
{
    SmoothFunction f;
    const int count = 1 + static_cast<int>(rng.uniform() * 3.0);
    for (int i = 0; i < count; ++i) {
        SmoothFunction::Gaussian g;
        g.amplitude = nonnegative ? rng.uniform(0.2, 1.0) : rng.uniform(-1.0, 1.0);
        g.center = rng.uniform(-cmax, cmax);
        // log-uniform width
        g.width = wmin * std::pow(wmax / wmin, rng.uniform());
        f.bumps.push_back(g);
    }
    return f;
}

SmoothFunction random_trig(Rng& rng, double half_length, int jmax)
{
    SmoothFunction f;
    f.period_half = half_length;
    for (int j = 1; j <= jmax; ++j) f.modes.push_back({j, rng.normal(), rng.normal()});
    return f;
}

std::vector<SmoothFunction> bump_suite(std::uint64_t seed, std::size_t count, bool nonnegative)
{
    Rng rng(seed);
    std::vector<SmoothFunction> out;
    out.reserve(count);
    for (std::size_t i = 0; i < count; ++i) out.push_back(random_bumps(rng, 0.5, 4.0, 10.0, nonnegative));
    return out;
}

std::vector<SmoothFunction> trig_suite(std::uint64_t seed, std::size_t count, double half_length, int jmax)
{
    Rng rng(seed);
    std::vector<SmoothFunction> out;
    out.reserve(count);
    for (std::size_t i = 0; i < count; ++i) out.push_back(random_trig(rng, half_length, jmax));
    return out;
}

} // namespace fractrans
