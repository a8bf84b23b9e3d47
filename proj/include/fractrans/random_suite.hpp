#pragma once

#include "fractrans/field.hpp"

#include <cstdint>
#include <random>
#include <vector>

namespace fractrans {

// Portable deterministic generator: mt19937_64 with hand-built transforms
// (standard distributions differ between library implementations).
class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}
    double uniform();                        // [0, 1)
    double uniform(double a, double b);      // [a, b)
    double normal();                         // standard normal, Box-Muller
    std::uint64_t next() { return eng_(); }

private:
    std::mt19937_64 eng_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

// Closed-form smooth function: sum of Gaussians plus a trigonometric
// polynomial in units of pi/L. Defined on the line so it can be sampled on
// any grid or handed to a quadrature oracle.
struct SmoothFunction {
    struct Gaussian {
        double amplitude, center, width;
    };
    struct Mode {
        int j;
        double a, b; // a cos(j pi (x+L)/L) + b sin(j pi (x+L)/L)
    };
    std::vector<Gaussian> bumps;
    std::vector<Mode> modes;
    double period_half = 1.0; // L of the trigonometric part

    double operator()(double x) const;
    // exact derivative of the given order
    double derivative(double x, int order) const;
    Field sample(const Grid& g) const;
};

// Localized random sum of 1..3 Gaussians, widths in [wmin, wmax], centers in
// [-cmax, cmax], amplitudes in [-1, 1] (or [0, 1] when nonnegative).
SmoothFunction random_bumps(Rng& rng, double wmin, double wmax, double cmax, bool nonnegative = false);

// Random trigonometric polynomial with modes 1 <= j <= jmax, mean zero,
// normally distributed coefficients.
SmoothFunction random_trig(Rng& rng, double half_length, int jmax);

// Standard suites used by verification and calibration.
std::vector<SmoothFunction> bump_suite(std::uint64_t seed, std::size_t count, bool nonnegative = false);
std::vector<SmoothFunction> trig_suite(std::uint64_t seed, std::size_t count, double half_length, int jmax);

} // namespace fractrans
