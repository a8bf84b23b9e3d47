#pragma once

#include "fractrans/field.hpp"
#include "fractrans/quadrature.hpp"
#include "fractrans/weights.hpp"

#include <functional>
#include <vector>

namespace fractrans {

enum class Region { Near, Intermediate, Far };

// Near: |x-y| < 2. Intermediate: |x-y| >= 2 and |x-y| <= max(|x|,|y|)/2.
// Far: |x-y| >= 2 and |x-y| > max(|x|,|y|)/2.
Region classify(double x, double y);

// (1/w) (Lambda^{1/2}(w f) - w Lambda^{1/2} f)
Field commutator_half(const Field& f, const WeightSpec& w);
// (1/gamma) (Lambda(gamma f) - gamma Lambda f), gamma = sqrt(w)
Field commutator_full(const Field& f, const WeightSpec& w);

// (1/pi) PV int plateau(x-y)/(x-y) f(y) dy on the grid: trapezoid in the
// offset s with f(x-s) - f(x+s) paired, s = 0 term from the spectral slope.
Field truncated_hilbert(const Field& f);

// Lambda w_beta(x) on the whole line; inside the box by adaptive quadrature,
// beyond it by a convergent series in 1/|y|. Requires |x| <= L/2.
double lambda_of_weight(const WeightSpec& w, double x, const OracleOptions& opt = {});

struct TruncationScaling {
    std::vector<double> radii;
    std::vector<double> norms;
    double slope;
};

// |Lambda^{1/2}(psi_R theta0) - psi_R Lambda^{1/2} theta0|_{L2(w)} over the
// radii with psi_R(x) = plateau(x/R), and the least-squares log-log slope.
TruncationScaling truncation_commutator_scaling(const Field& theta0, const WeightSpec& w, const std::vector<double>& radii);

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

// Largest |op f|_{L^p(w)} / |f|_{L^p(w)} over the given fields.
double empirical_norm(const std::function<Field(const Field&)>& op, const std::vector<Field>& fields, double p,
                      const WeightSpec& w);

} // namespace fractrans
