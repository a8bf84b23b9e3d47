#pragma once

#include <complex>
#include <span>

namespace fractrans::fft {

using Complex = std::complex<double>;

// Unnormalized real-to-half-complex transform: out has n/2+1 entries.
void forward(std::span<const double> in, std::span<Complex> out);
// Inverse of forward including the 1/n factor. in must have n/2+1 entries.
void inverse(std::span<const Complex> in, std::span<double> out);

} // namespace fractrans::fft
