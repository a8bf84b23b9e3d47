#pragma once

#include "fractrans/field.hpp"

#include <span>
#include <vector>

namespace fractrans {

enum class SymbolKind { Hilbert, FracLap, Derivative, HeatSemigroup };

// Diagonal Fourier multiplier over the half spectrum of a grid.
struct OperatorSymbol {
    SymbolKind kind;
    std::vector<Complex> multiplier;
};

// i sign(k), zero at k = 0 and at the Nyquist slot. With this sign d/dx H = -Lambda.
OperatorSymbol hilbert_symbol(const Grid& g);
// |k|^s for any s >= 0 (s = 0 gives the identity except the mean is kept).
OperatorSymbol frac_lap_symbol(const Grid& g, double s);
// (ik)^order; Nyquist zeroed for odd orders.
OperatorSymbol derivative_symbol(const Grid& g, int order);
// exp(-eps t k^2)
OperatorSymbol heat_symbol(const Grid& g, double t, double eps);

Field apply(const OperatorSymbol& sym, const Field& f);

Field hilbert(const Field& f);
// Lambda^alpha with alpha in (0, 2]; throws otherwise.
Field lambda_alpha(const Field& f, double alpha);
// Lambda^s for any s > 0 (used for higher norms).
Field lambda_power(const Field& f, double s);
Field derivative(const Field& f, int order = 1);
Field heat_semigroup(const Field& f, double t, double eps);
// Convolution with eta^{-1} phi(x/eta); requires 0 < eta < L/4.
Field mollify(const Field& f, double eta);

// 2/3 rule: zero every mode with |j| > N/3.
std::size_t dealias_cutoff(std::size_t n);
void dealias_inplace(std::span<Complex> spectrum, std::size_t n);
Field dealias(const Field& f);

// Spectral interpolation onto a grid with factor times more points.
Field upsample(const Field& f, std::size_t factor);

// Trigonometric interpolant (or its derivative) at an arbitrary point.
double interpolant(const Field& f, double x, int order = 0);

struct Extrema {
    double max, argmax, min, argmin;
};
// Extrema of the trigonometric interpolant, located by Newton steps from
// the extreme samples. Never below/above the sampled extremes.
Extrema refined_extrema(const Field& f);

} // namespace fractrans
