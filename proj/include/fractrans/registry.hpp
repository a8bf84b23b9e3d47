#pragma once

#include "fractrans/field.hpp"
#include "fractrans/weights.hpp"

#include <cstdint>
#include <filesystem>
#include <functional>
#include <string>
#include <vector>

namespace fractrans {

// Constants attached to one weight exponent.
struct WeightConstants {
    double beta = 0.0;
    double comm_half = 0.0;  // norm of w^{-1}[Lambda^{1/2}, w] on L2(w)
    double hilbert = 0.0;    // norm of H on L2(w)
    double l2_rate = 0.0;    // C in the weighted L2 inequality
    double c8 = 0.0;         // nonlinear constant of the weighted H^{1/2} inequality
    double smallness = 0.0;  // 1 / c8
};

// Empirical constants, measured once on a fixed grid and random family and
// frozen into a versioned file.
struct ConstantRegistry {
    static constexpr int current_version = 1;

    int version = current_version;
    double half_length = 50.0;
    std::size_t n = 4096;
    std::uint64_t seed = 0;
    std::size_t family_size = 0;
    double headroom = 2.0;
    std::vector<WeightConstants> weighted;
    double c1 = 0.0;  // unweighted H^1 inequality
    double c0 = 0.0;  // H^3 inequality

    // Throws std::out_of_range when beta was not calibrated.
    const WeightConstants& for_beta(double beta) const;
    // Weighted H^{1/2} runs with m0 in [0.5, 1) / c8 are labeled inconclusive.
    enum class Regime { Inside, Inconclusive, Outside };
    Regime regime(double beta, double m0) const;

    std::string to_json() const;
    static ConstantRegistry from_json(const std::string& text);
    static ConstantRegistry load(const std::filesystem::path& path);
};

// Largest singular value of op on L2, given its transpose, by power iteration.
double operator_norm(const std::function<Field(const Field&)>& op, const std::function<Field(const Field&)>& transpose,
                     const Grid& g, int iterations = 300, std::uint64_t seed = 7);
double commutator_half_norm(const WeightSpec& w, int iterations = 300);
double hilbert_weighted_norm(const WeightSpec& w, int iterations = 300);

// Nonlinear energy rate of theta divided by the matching bound, from exact
// inner products with the advection term. c8_ratios follows the order of weights.
std::vector<double> c8_ratios(const Field& theta, const std::vector<WeightSpec>& weights);
double c1_ratio(const Field& theta);
double c0_ratio(const Field& theta);

ConstantRegistry calibrate_constants(const Grid& g, const std::vector<double>& betas, std::uint64_t seed = 2024,
                                     std::size_t family_size = 120, double headroom = 2.0);

} // namespace fractrans
