#include "fractrans/field.hpp"

#include "fractrans/fft.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace fractrans {

Field Field::from_samples(const Grid& grid, std::vector<double> samples)
{
    if (samples.size() != grid.size()) throw std::invalid_argument("field: sample count does not match grid");
    auto st = std::make_shared<State>(grid);
    st->samples = std::move(samples);
    st->samples_given = true;
    return Field(std::move(st));
}

Field Field::from_spectrum(const Grid& grid, std::vector<Complex> spectrum)
{
    if (spectrum.size() != grid.spectrum_size()) throw std::invalid_argument("field: spectrum size does not match grid");
    spectrum.front().imag(0.0);
    spectrum.back().imag(0.0);
    auto st = std::make_shared<State>(grid);
    st->spectrum = std::move(spectrum);
    st->spectrum_given = true;
    return Field(std::move(st));
}

Field Field::constant(const Grid& grid, double c)
{
    return from_samples(grid, std::vector<double>(grid.size(), c));
}

const std::vector<double>& Field::samples() const
{
    if (!st_->samples_given) {
        std::call_once(st_->samples_once, [s = st_.get()] {
            s->samples.resize(s->grid.size());
            fft::inverse(s->spectrum, s->samples);
        });
    }
    return st_->samples;
}

const std::vector<Complex>& Field::spectrum() const
{
    if (!st_->spectrum_given) {
        std::call_once(st_->spectrum_once, [s = st_.get()] {
            s->spectrum.resize(s->grid.spectrum_size());
            fft::forward(s->samples, s->spectrum);
        });
    }
    return st_->spectrum;
}

double Field::sup_norm() const
{
    double m = 0.0;
    for (double v : samples()) m = std::max(m, std::abs(v));
    return m;
}

double Field::min() const { return *std::min_element(samples().begin(), samples().end()); }
double Field::max() const { return *std::max_element(samples().begin(), samples().end()); }

double Field::mean() const
{
    return spectrum()[0].real() / static_cast<double>(size());
}

bool Field::is_finite() const
{
    for (double v : samples())
        if (!std::isfinite(v)) return false;
    return true;
}

namespace {

void require_same_grid(const Field& a, const Field& b)
{
    if (a.grid() != b.grid()) throw std::invalid_argument("field: grid mismatch");
}

template <class Op>
Field combine(const Field& a, const Field& b, Op op)
{
    require_same_grid(a, b);
    const auto& x = a.samples();
    const auto& y = b.samples();
    std::vector<double> r(x.size());
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = op(x[i], y[i]);
    return Field::from_samples(a.grid(), std::move(r));
}

} // namespace

Field operator+(const Field& a, const Field& b) { return combine(a, b, [](double u, double v) { return u + v; }); }
Field operator-(const Field& a, const Field& b) { return combine(a, b, [](double u, double v) { return u - v; }); }
Field operator*(const Field& a, const Field& b) { return combine(a, b, [](double u, double v) { return u * v; }); }

Field operator-(const Field& a) { return -1.0 * a; }

Field operator*(double s, const Field& a)
{
    std::vector<double> r(a.samples());
    for (double& v : r) v *= s;
    return Field::from_samples(a.grid(), std::move(r));
}

Field pointwise(const Field& a, double (*fn)(double))
{
    std::vector<double> r(a.samples());
    for (double& v : r) v = fn(v);
    return Field::from_samples(a.grid(), std::move(r));
}

double integral(const Field& f)
{
    double s = 0.0;
    for (double v : f.samples()) s += v;
    return s * f.grid().spacing();
}

double inner(const Field& a, const Field& b)
{
    require_same_grid(a, b);
    const auto& x = a.samples();
    const auto& y = b.samples();
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
    return s * a.grid().spacing();
}

double l2_norm(const Field& f) { return std::sqrt(inner(f, f)); }

} // namespace fractrans
