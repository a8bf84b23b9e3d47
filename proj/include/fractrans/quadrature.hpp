#pragma once

#include "fractrans/grid.hpp"

#include <functional>

namespace fractrans {

// Closed-form function on the line: value(x, n) is the n-th derivative.
using LineFunction = std::function<double(double, int)>;

struct OracleOptions {
    double near_radius = 1e-3; // Taylor-regularized below this distance
    double tolerance = 1e-10;   // relative error per subinterval
    // absolute error per subinterval; the paired differences cancel to about
    // 1e-16/s^2 relative, which caps what subdivision can achieve near s = 0
    double absolute = 1e-11;
    unsigned max_depth = 12;
};

// Hurwitz zeta sum_{n>=0} (n+a)^(-s), s > 1, a > 0.
double hurwitz_zeta(double s, double a);

// Closed-form constant of the singular-integral form of Lambda^alpha, 0 < alpha < 2.
double singular_constant(double alpha);

// Image sum over the nonzero periods: sum_{m != 0} |s + m P|^(-p), |s| <= P/2.
double periodic_image_kernel(double s, double p, double period);

// Singular-integral evaluation of Lambda^alpha f(x) for the 2L-periodic
// extension of f, with kernel constant c (pass 1 to get the bare integral).
double frac_lap_oracle(const LineFunction& f, double x, double alpha, double half_length, double c,
                       const OracleOptions& opt = {});

// Kernel constant matched to the spectral |k|^alpha on a centered Gaussian.
double calibrate_singular_constant(double alpha, const Grid& g, const OracleOptions& opt = {});

// (1/w)[Lambda^{1/2}, w] f(x) on the periodic box, with w = w_beta periodized.
double commutator_half_oracle(const LineFunction& f, double beta, double x, double half_length, double c0,
                              const OracleOptions& opt = {});

// (1/pi) PV int plateau(x-y)/(x-y) f(y) dy
double truncated_hilbert_oracle(const LineFunction& f, double x, const OracleOptions& opt = {});

// Adaptive Gauss-Kronrod on [a, b] split at the given interior breakpoints.
double integrate_pieces(const std::function<double(double)>& g, double a, double b, const OracleOptions& opt);

} // namespace fractrans
