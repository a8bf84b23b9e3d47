#include "fractrans/spectral.hpp"

#include "fractrans/cutoff.hpp"
#include "fractrans/fft.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <numbers>
#include <string>

namespace fractrans {

OperatorSymbol hilbert_symbol(const Grid& g)
{
    OperatorSymbol s{SymbolKind::Hilbert, std::vector<Complex>(g.spectrum_size())};
    // every retained slot has k > 0; slot 0 and the Nyquist slot stay zero
    for (std::size_t m = 1; m + 1 < g.spectrum_size(); ++m) s.multiplier[m] = Complex(0.0, 1.0);
    return s;
}

OperatorSymbol frac_lap_symbol(const Grid& g, double power)
{
    if (!(power >= 0.0)) throw std::invalid_argument("fractional power must be nonnegative");
    OperatorSymbol s{SymbolKind::FracLap, std::vector<Complex>(g.spectrum_size())};
    for (std::size_t m = 1; m < g.spectrum_size(); ++m) s.multiplier[m] = std::pow(std::abs(g.wavenumber(m)), power);
    s.multiplier[0] = power == 0.0 ? 1.0 : 0.0;
    return s;
}

OperatorSymbol derivative_symbol(const Grid& g, int order)
{
    if (order < 0) throw std::invalid_argument("derivative order must be nonnegative");
    OperatorSymbol s{SymbolKind::Derivative, std::vector<Complex>(g.spectrum_size())};
    for (std::size_t m = 0; m < g.spectrum_size(); ++m) {
        const Complex ik(0.0, g.wavenumber(m));
        Complex v = 1.0;
        for (int p = 0; p < order; ++p) v *= ik;
        s.multiplier[m] = v;
    }
    if (order % 2 == 1) s.multiplier.back() = 0.0;
    return s;
}

OperatorSymbol heat_symbol(const Grid& g, double t, double eps)
{
    if (!(t >= 0.0)) throw std::invalid_argument("heat semigroup time must be nonnegative");
    if (!(eps >= 0.0)) throw std::invalid_argument("heat semigroup viscosity must be nonnegative");
    OperatorSymbol s{SymbolKind::HeatSemigroup, std::vector<Complex>(g.spectrum_size())};
    for (std::size_t m = 0; m < g.spectrum_size(); ++m) {
        const double k = g.wavenumber(m);
        s.multiplier[m] = std::exp(-eps * t * k * k);
    }
    return s;
}

Field apply(const OperatorSymbol& sym, const Field& f)
{
    const auto& fh = f.spectrum();
    if (sym.multiplier.size() != fh.size()) throw std::invalid_argument("symbol does not match field grid");
    std::vector<Complex> out(fh.size());
    for (std::size_t m = 0; m < fh.size(); ++m) out[m] = sym.multiplier[m] * fh[m];
    return Field::from_spectrum(f.grid(), std::move(out));
}

Field hilbert(const Field& f) { return apply(hilbert_symbol(f.grid()), f); }

Field lambda_alpha(const Field& f, double alpha)
{
    if (!(alpha > 0.0 && alpha <= 2.0))
        throw std::invalid_argument("lambda_alpha: alpha must lie in (0, 2], got " + std::to_string(alpha));
    return apply(frac_lap_symbol(f.grid(), alpha), f);
}

Field lambda_power(const Field& f, double s)
{
    if (!(s > 0.0)) throw std::invalid_argument("lambda_power: exponent must be positive");
    return apply(frac_lap_symbol(f.grid(), s), f);
}

Field derivative(const Field& f, int order) { return apply(derivative_symbol(f.grid(), order), f); }

Field heat_semigroup(const Field& f, double t, double eps)
{
    OperatorSymbol sym = heat_symbol(f.grid(), t, eps);
    if (t == 0.0 || eps == 0.0) return f;
    return apply(sym, f);
}

Field mollify(const Field& f, double eta)
{
    const Grid& g = f.grid();
    if (!(eta > 0.0)) throw std::invalid_argument("mollify: eta must be positive");
    if (!(eta < g.half_length() / 4.0))
        throw std::invalid_argument("mollify: eta must be below L/4 (kernel would wrap)");
    const std::size_t n = g.size();
    const double h = g.spacing();
    std::vector<double> kernel(n, 0.0);
    double mass = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double d = (i < n / 2 ? static_cast<double>(i) : static_cast<double>(i) - static_cast<double>(n)) * h;
        kernel[i] = mollifier_profile(d / eta);
        mass += kernel[i];
    }
    // unit discrete mass keeps constants and the mean exact
    for (double& v : kernel) v /= mass;
    std::vector<Complex> kh(g.spectrum_size());
    fft::forward(kernel, kh);
    const auto& fh = f.spectrum();
    std::vector<Complex> out(fh.size());
    for (std::size_t m = 0; m < fh.size(); ++m) out[m] = kh[m].real() * fh[m];
    return Field::from_spectrum(g, std::move(out));
}

std::size_t dealias_cutoff(std::size_t n) { return n / 3; }

void dealias_inplace(std::span<Complex> spectrum, std::size_t n)
{
    const std::size_t cut = dealias_cutoff(n);
    for (std::size_t m = cut + 1; m < spectrum.size(); ++m) spectrum[m] = 0.0;
}

Field dealias(const Field& f)
{
    std::vector<Complex> s(f.spectrum());
    dealias_inplace(s, f.size());
    return Field::from_spectrum(f.grid(), std::move(s));
}

Field upsample(const Field& f, std::size_t factor)
{
    if (factor == 0) throw std::invalid_argument("upsample factor must be positive");
    const Grid fine(f.grid().half_length(), f.size() * factor);
    const auto& fh = f.spectrum();
    std::vector<Complex> out(fine.spectrum_size());
    const double scale = static_cast<double>(factor);
    // Nyquist is dropped: its split between +-N/2 is ambiguous
    for (std::size_t m = 0; m + 1 < fh.size(); ++m) out[m] = scale * fh[m];
    if (factor == 1) out.back() = fh.back();
    return Field::from_spectrum(fine, std::move(out));
}

} // namespace fractrans

namespace fractrans {

double interpolant(const Field& f, double x, int order)
{
    const Grid& g = f.grid();
    const auto& fh = f.spectrum();
    const std::size_t n = g.size();
    const double y = x + g.half_length();
    const double k1 = std::numbers::pi / g.half_length();
    const Complex step = std::polar(1.0, k1 * y);
    Complex phase = 1.0;
    double acc = order == 0 ? fh[0].real() : 0.0;
    for (std::size_t m = 1; m + 1 < fh.size(); ++m) {
        phase *= step;
        if (m % 64 == 0) phase = std::polar(1.0, k1 * y * static_cast<double>(m));
        Complex term = fh[m] * phase;
        const Complex ik(0.0, k1 * static_cast<double>(m));
        for (int p = 0; p < order; ++p) term *= ik;
        acc += 2.0 * term.real();
    }
    if (order == 0) acc += fh.back().real() * std::cos(k1 * static_cast<double>(n / 2) * y);
    return acc / static_cast<double>(n);
}

namespace {

double polish(const Field& f, std::size_t i, double sign)
{
    const double h = f.grid().spacing();
    const double x0 = f.grid().x(i);
    double x = x0;
    for (int it = 0; it < 12; ++it) {
        const double d1 = interpolant(f, x, 1), d2 = interpolant(f, x, 2);
        if (!(sign * d2 < 0.0)) break;
        const double dx = std::clamp(-d1 / d2, -h, h);
        x += dx;
        if (std::abs(x - x0) > h) {
            x = x0;
            break;
        }
        if (std::abs(dx) < 1e-14 * std::max(1.0, std::abs(x))) break;
    }
    return x;
}

} // namespace

Extrema refined_extrema(const Field& f)
{
    const auto& v = f.samples();
    const std::size_t imax = static_cast<std::size_t>(std::max_element(v.begin(), v.end()) - v.begin());
    const std::size_t imin = static_cast<std::size_t>(std::min_element(v.begin(), v.end()) - v.begin());
    Extrema e{v[imax], f.grid().x(imax), v[imin], f.grid().x(imin)};
    const double xa = polish(f, imax, 1.0);
    const double va = interpolant(f, xa, 0);
    if (va > e.max) e.max = va, e.argmax = xa;
    const double xb = polish(f, imin, -1.0);
    const double vb = interpolant(f, xb, 0);
    if (vb < e.min) e.min = vb, e.argmin = xb;
    return e;
}

} // namespace fractrans
