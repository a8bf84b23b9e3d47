#include "fractrans/registry.hpp"

#include "fractrans/random_suite.hpp"
#include "fractrans/solver.hpp"
#include "fractrans/spectral.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace fractrans {

const WeightConstants& ConstantRegistry::for_beta(double beta) const
{
    for (const auto& c : weighted)
        if (std::abs(c.beta - beta) < 1e-12) return c;
    throw std::out_of_range("registry has no constants for beta = " + std::to_string(beta));
}

ConstantRegistry::Regime ConstantRegistry::regime(double beta, double m0) const
{
    const double s = for_beta(beta).smallness;
    if (m0 < 0.5 * s) return Regime::Inside;
    if (m0 < s) return Regime::Inconclusive;
    return Regime::Outside;
}

std::string ConstantRegistry::to_json() const
{
    nlohmann::ordered_json j;
    j["version"] = version;
    j["grid"] = {{"half_length", half_length}, {"n", n}};
    j["family"] = {{"seed", seed}, {"size", family_size}, {"headroom", headroom}};
    auto arr = nlohmann::ordered_json::array();
    for (const auto& c : weighted)
        arr.push_back({{"beta", c.beta},
                       {"comm_half", c.comm_half},
                       {"hilbert", c.hilbert},
                       {"l2_rate", c.l2_rate},
                       {"c8", c.c8},
                       {"smallness", c.smallness}});
    j["weighted"] = arr;
    j["c1"] = c1;
    j["c0"] = c0;
    return j.dump(2) + "\n";
}

ConstantRegistry ConstantRegistry::from_json(const std::string& text)
{
    const auto j = nlohmann::json::parse(text);
    ConstantRegistry r;
    r.version = j.at("version").get<int>();
    if (r.version != current_version)
        throw std::runtime_error("registry version " + std::to_string(r.version) + " is not supported");
    r.half_length = j.at("grid").at("half_length").get<double>();
    r.n = j.at("grid").at("n").get<std::size_t>();
    r.seed = j.at("family").at("seed").get<std::uint64_t>();
    r.family_size = j.at("family").at("size").get<std::size_t>();
    r.headroom = j.at("family").at("headroom").get<double>();
    for (const auto& c : j.at("weighted"))
        r.weighted.push_back({c.at("beta").get<double>(), c.at("comm_half").get<double>(), c.at("hilbert").get<double>(),
                              c.at("l2_rate").get<double>(), c.at("c8").get<double>(), c.at("smallness").get<double>()});
    r.c1 = j.at("c1").get<double>();
    r.c0 = j.at("c0").get<double>();
    return r;
}

ConstantRegistry ConstantRegistry::load(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open registry " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return from_json(ss.str());
}

double operator_norm(const std::function<Field(const Field&)>& op, const std::function<Field(const Field&)>& transpose,
                     const Grid& g, int iterations, std::uint64_t seed)
{
    Rng rng(seed);
    std::vector<double> v(g.size());
    for (double& x : v) x = rng.normal();
    Field f = Field::from_samples(g, std::move(v));
    f = (1.0 / l2_norm(f)) * f;
    double sigma2 = 0.0;
    for (int it = 0; it < iterations; ++it) {
        const Field next = transpose(op(f));
        sigma2 = inner(f, next);
        const double nn = l2_norm(next);
        if (nn == 0.0) return 0.0;
        f = (1.0 / nn) * next;
    }
    return std::sqrt(std::max(sigma2, 0.0));
}

namespace {

Field scale(const Field& f, const std::vector<double>& m)
{
    std::vector<double> v(f.samples());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] *= m[i];
    return Field::from_samples(f.grid(), std::move(v));
}

std::vector<double> power(const std::vector<double>& m, double p)
{
    std::vector<double> out(m.size());
    for (std::size_t i = 0; i < m.size(); ++i) out[i] = std::pow(m[i], p);
    return out;
}

double winner(const Field& a, const Field& b, const WeightSpec& w) { return weighted_integral(a * b, w); }

} // namespace

// In the variable g = w^{1/2} f the weighted commutator becomes
// B = w^{-1/2} L (w^{1/2} .) - w^{1/2} L (w^{-1/2} .), L = Lambda^{1/2}, and B^T = -B.
double commutator_half_norm(const WeightSpec& w, int iterations)
{
    const auto sq = power(w.w(), 0.5), isq = power(w.w(), -0.5);
    auto B = [&](const Field& f) {
        return scale(lambda_alpha(scale(f, sq), 0.5), isq) - scale(lambda_alpha(scale(f, isq), 0.5), sq);
    };
    auto Bt = [&](const Field& f) { return -B(f); };
    return operator_norm(B, Bt, w.grid(), iterations);
}

double hilbert_weighted_norm(const WeightSpec& w, int iterations)
{
    const auto sq = power(w.w(), 0.5), isq = power(w.w(), -0.5);
    auto B = [&](const Field& f) { return scale(hilbert(scale(f, isq)), sq); };
    auto Bt = [&](const Field& f) { return -scale(hilbert(scale(f, sq)), isq); };
    return operator_norm(B, Bt, w.grid(), iterations);
}

std::vector<double> c8_ratios(const Field& theta, const std::vector<WeightSpec>& weights)
{
    const double m = theta.sup_norm();
    const Field n = advection(theta, true);
    const Field th = lambda_alpha(theta, 0.5), nh = lambda_alpha(n, 0.5), l1 = lambda_alpha(theta, 1.0);
    std::vector<double> out;
    for (const auto& w : weights) {
        const double rate = 2.0 * winner(theta, n, w) + 2.0 * winner(th, nh, w);
        const double bound = winner(l1, l1, w) + winner(theta, theta, w) + winner(th, th, w);
        out.push_back(rate / (m * bound));
    }
    return out;
}

double c1_ratio(const Field& theta)
{
    const Field n = advection(theta, true);
    const Field l3 = lambda_alpha(theta, 1.5);
    return 2.0 * inner(lambda_alpha(theta, 1.0), lambda_alpha(n, 1.0)) / (2.0 * theta.sup_norm() * inner(l3, l3));
}

double c0_ratio(const Field& theta)
{
    const Field n = advection(theta, true);
    const Field d3 = derivative(theta, 3), l7 = lambda_power(theta, 3.5);
    const double rate = 2.0 * inner(theta, n) + 2.0 * inner(d3, derivative(n, 3));
    const double bound = inner(theta, theta) + inner(d3, d3) + 2.0 * inner(l7, l7);
    return rate / (theta.sup_norm() * bound);
}

ConstantRegistry calibrate_constants(const Grid& g, const std::vector<double>& betas, std::uint64_t seed,
                                     std::size_t family_size, double headroom)
{
    ConstantRegistry r;
    r.half_length = g.half_length();
    r.n = g.size();
    r.seed = seed;
    r.family_size = family_size;
    r.headroom = headroom;

    std::vector<WeightSpec> weights;
    for (double b : betas) weights.emplace_back(g, b);

    std::vector<double> c8(betas.size(), 0.0);
    double c1 = 0.0, c0 = 0.0;
    for (const auto& s : bump_suite(seed, family_size)) {
        const Field f = s.sample(g);
        const auto r8 = c8_ratios(f, weights);
        for (std::size_t i = 0; i < c8.size(); ++i) c8[i] = std::max(c8[i], r8[i]);
        c1 = std::max(c1, c1_ratio(f));
        c0 = std::max(c0, c0_ratio(f));
    }
    for (std::size_t i = 0; i < betas.size(); ++i) {
        WeightConstants c;
        c.beta = betas[i];
        c.comm_half = commutator_half_norm(weights[i]);
        c.hilbert = hilbert_weighted_norm(weights[i]);
        c.l2_rate = std::max(c.comm_half * c.comm_half, 0.5 * c.beta * c.hilbert);
        c.c8 = headroom * c8[i];
        c.smallness = c.c8 > 0.0 ? 1.0 / c.c8 : std::numeric_limits<double>::infinity();
        r.weighted.push_back(c);
    }
    r.c1 = headroom * c1;
    r.c0 = headroom * c0;
    return r;
}

} // namespace fractrans
