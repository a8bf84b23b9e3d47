#pragma once

#include "fractrans/field.hpp"

#include <vector>

namespace fractrans {

// w_beta(x) = (1 + x^2)^(-beta/2) and gamma_beta = sqrt(w_beta) sampled on a grid.
class WeightSpec {
public:
    WeightSpec(const Grid& grid, double beta);
    // w = 1 (beta = 0), for unweighted twins and test harnesses
    static WeightSpec uniform(const Grid& grid);

    double beta() const { return beta_; }
    const Grid& grid() const { return grid_; }
    const std::vector<double>& w() const { return w_; }
    const std::vector<double>& gamma() const { return gamma_; }
    Field w_field() const { return Field::from_samples(grid_, w_); }
    Field gamma_field() const { return Field::from_samples(grid_, gamma_); }

    static double value(double beta, double x);
    static double first_derivative(double beta, double x);
    static double second_derivative(double beta, double x);

private:
    WeightSpec(const Grid& grid, double beta, bool);
    Grid grid_;
    double beta_;
    std::vector<double> w_;
    std::vector<double> gamma_;
};

struct WeightedNorm {
    double p;
    double sobolev_order;
    double value;
};

// (trapezoid of |f|^p w)^(1/p)
double weighted_lp_norm(const Field& f, double p, const WeightSpec& w);
// trapezoid of f w
double weighted_integral(const Field& f, const WeightSpec& w);
// (|f|^2_{L2(w)} + |Lambda^s f|^2_{L2(w)})^(1/2), s in {1/2, 1}
double weighted_sobolev_norm(const Field& f, double s, const WeightSpec& w);
// |Lambda^s f|_{L^p(w)} for s in {0, 1/2, 1, 3/2}
WeightedNorm weighted_norm(const Field& f, double p, double s, const WeightSpec& w);

enum class RadiusLadder { Dyadic, Dense };

// Radii in grid cells: dyadic 1, 2, 4, ... up to N (radius 2L), or every cell count 1..N.
std::vector<std::size_t> radius_cells(const Grid& g, RadiusLadder ladder);

// Periodic window average of values over [x_i - m h, x_i + m h], trapezoid.
class WindowAverager {
public:
    explicit WindowAverager(std::vector<double> values);
    double average(std::size_t center, std::size_t m) const;

private:
    double range_sum(long lo, std::size_t count) const;
    std::vector<double> v_;
    std::vector<double> prefix_;
};

// Uncentered-radius maximal function, including the r -> 0 value |f(x)|.
Field maximal_function(const Field& f, RadiusLadder ladder = RadiusLadder::Dyadic);

double ap_constant(const WeightSpec& w, double p);

struct HedbergResult {
    double sup_ratio;
    double witness_x;
};
HedbergResult hedberg_check(const Field& f, double gamma, double delta);

enum class GnInequality { B1, B, B2 };
double gn_check(const Field& f, const WeightSpec& w, GnInequality which);

inline constexpr double ratio_floor = 1e-14;

} // namespace fractrans
