#pragma once

namespace fractrans {

// Classical bump exp(-1/(1-x^2)) on (-1,1), unnormalized.
double bump(double x);
// Integral of bump over (-1,1), computed once by adaptive quadrature.
double bump_mass();
// Unit-mass mollifier profile phi = bump / bump_mass.
double mollifier_profile(double x);

// Smooth monotone step: 0 for u <= 0, 1 for u >= 1, built from the running
// integral of the mollifier profile.
double smooth_step(double u);

// Even plateau cutoff: 1 on |x| <= 1, 0 on |x| >= 2, smooth in between.
// Serves both as the truncation cutoff psi and the Hilbert kernel cutoff.
double plateau(double x);

} // namespace fractrans
