#pragma once

#include "fractrans/grid.hpp"

#include <complex>
#include <memory>
#include <mutex>
#include <vector>

namespace fractrans {

using Complex = std::complex<double>;

// Real periodic field. Immutable once built; samples and half spectrum are
// kept in sync lazily, and copies share the same state.
//
// spectrum()[m] = sum_i samples()[i] * exp(-2 pi i m i / N), m = 0..N/2.
class Field {
public:
    static Field from_samples(const Grid& grid, std::vector<double> samples);
    static Field from_spectrum(const Grid& grid, std::vector<Complex> spectrum);
    static Field constant(const Grid& grid, double c);
    static Field zero(const Grid& grid) { return constant(grid, 0.0); }

    template <class F>
    static Field from_function(const Grid& grid, F&& f)
    {
        std::vector<double> v(grid.size());
        for (std::size_t i = 0; i < v.size(); ++i) v[i] = f(grid.x(i));
        return from_samples(grid, std::move(v));
    }

    const Grid& grid() const { return st_->grid; }
    std::size_t size() const { return st_->grid.size(); }
    const std::vector<double>& samples() const;
    const std::vector<Complex>& spectrum() const;
    double operator[](std::size_t i) const { return samples()[i]; }

    double sup_norm() const;
    double min() const;
    double max() const;
    double mean() const;
    bool is_finite() const;

private:
    struct State {
        explicit State(const Grid& g) : grid(g) {}
        Grid grid;
        bool samples_given = false;
        bool spectrum_given = false;
        mutable std::once_flag samples_once;
        mutable std::once_flag spectrum_once;
        mutable std::vector<double> samples;
        mutable std::vector<Complex> spectrum;
    };
    explicit Field(std::shared_ptr<const State> st) : st_(std::move(st)) {}
    std::shared_ptr<const State> st_;
};

Field operator+(const Field& a, const Field& b);
Field operator-(const Field& a, const Field& b);
Field operator-(const Field& a);
Field operator*(double s, const Field& a);
// pointwise product
Field operator*(const Field& a, const Field& b);
Field pointwise(const Field& a, double (*fn)(double));

// Trapezoid integral over the box (periodic sum times h).
double integral(const Field& f);
double l2_norm(const Field& f);
double inner(const Field& a, const Field& b);

} // namespace fractrans
