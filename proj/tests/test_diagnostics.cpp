#include "doctest.h"

#include "fractrans/diagnostics.hpp"
#include "fractrans/random_suite.hpp"
#include "fractrans/spectral.hpp"

#include <cmath>
#include <numbers>

using namespace fractrans;
using std::numbers::pi;

namespace {

const Grid& grid()
{
    static const Grid g(50.0, 1024);
    return g;
}

const ConstantRegistry& registry()
{
    static const ConstantRegistry r = calibrate_constants(grid(), {0.25, 0.5, 0.75}, 2024, 60);
    return r;
}

SolverConfig small_bump()
{
    SolverConfig c;
    c.t_end = 3.0;
    c.step.dt_max = 0.01;
    c.probe_interval = 0.05;
    c.initial = InitialData{DataFamily::Gaussian, 0.05, 3.0, 0.0, 1};
    return c;
}

} // namespace

TEST_CASE("record of the zero field")
{
    const std::vector<WeightSpec> w{WeightSpec(grid(), 0.5)};
    const DiagnosticsRecord r = record(Field::zero(grid()), 0.0, w);
    CHECK(r.sup_norm == 0.0);
    CHECK(r.weighted[0].l2 == 0.0);
    CHECK(r.weighted[0].h1 == 0.0);
    CHECK(r.weighted[0].dissip_3half == 0.0);
    CHECK(r.unweighted.h_half == 0.0);
    CHECK(r.d3_sq == 0.0);
    CHECK(r.cc_evaluated);
    CHECK(r.cc_slack == 0.0);
}

TEST_CASE("single mode ratio under the uniform weight")
{
    const int j = 9;
    const double k = j * pi / grid().half_length();
    const Field f = Field::from_function(grid(), [&](double x) { return std::cos(k * (x + 50.0)); });
    const DiagnosticsRecord r = record(f, 0.0, {WeightSpec::uniform(grid())});
    CHECK(r.weighted[0].h1 / r.weighted[0].l2 == doctest::Approx(k).epsilon(1e-8));
    CHECK(r.unweighted.h_half / r.unweighted.l2 == doctest::Approx(std::sqrt(k)).epsilon(1e-8));
    CHECK(r.d3_sq / (r.unweighted.l2 * r.unweighted.l2) == doctest::Approx(std::pow(k, 6)).epsilon(1e-8));
}

TEST_CASE("weighted norms are ordered in beta")
{
    for (const auto& s : bump_suite(5, 10)) {
        const Field f = s.sample(grid());
        const DiagnosticsRecord r = record(f, 0.0, {WeightSpec(grid(), 0.25), WeightSpec(grid(), 0.75)}, false);
        CHECK(r.weighted[0].l2 >= r.weighted[1].l2);
        CHECK(r.weighted[0].h_half >= r.weighted[1].h_half);
        CHECK(r.weighted[0].h1 >= r.weighted[1].h1);
        CHECK(r.unweighted.l2 >= r.weighted[0].l2);
    }
}

TEST_CASE("time derivative is exact on quartics over uneven times")
{
    const std::vector<double> t{0.0, 0.1, 0.25, 0.3, 0.5, 0.65, 0.9};
    std::vector<double> v;
    for (double s : t) v.push_back(1.0 + 2.0 * s - s * s + 0.5 * s * s * s * s);
    for (std::size_t i = 0; i < t.size(); ++i) {
        const double s = t[i];
        CHECK(time_derivative(t, v, i).value == doctest::Approx(2.0 - 2.0 * s + 2.0 * s * s * s).epsilon(1e-10));
    }
    std::vector<double> lin;
    for (double s : t) lin.push_back(3.0 * s);
    CHECK(time_derivative(t, lin, 3).err <= 1e-12);
}

TEST_CASE("Cordoba-Cordoba pointwise inequality")
{
    CHECK(cc_pointwise_check(Field::constant(grid(), 0.4)) == doctest::Approx(0.0).epsilon(1e-14));
    for (const auto& s : bump_suite(11, 20, true)) {
        const Field f = s.sample(grid());
        const DiagnosticsRecord r = record(f, 0.0, {});
        REQUIRE(r.cc_evaluated);
        CHECK(r.cc_slack >= -1e-6 * r.cc_scale);
    }
    const Field neg = Field::from_function(grid(), [](double x) { return std::exp(-x * x) - 0.1; });
    CHECK_THROWS_AS(cc_pointwise_check(neg), std::invalid_argument);
}

TEST_CASE("magic identity")
{
    const int j = 6;
    const double k = j * pi / grid().half_length();
    const Field s = Field::from_function(grid(), [&](double x) { return std::sin(k * (x + 50.0)); });
    MagicResult m = magic_identity_check(s);
    CHECK(m.sup_error <= 1e-12);
    CHECK(m.band_limited);
    CHECK(magic_identity_check(Field::zero(grid())).sup_error == 0.0);

    double worst = 0.0;
    for (const auto& f : trig_suite(3, 50, grid().half_length(), static_cast<int>(grid().size() / 4) - 1)) {
        const MagicResult r = magic_identity_check(f.sample(grid()));
        CHECK(r.band_limited);
        worst = std::max(worst, r.sup_error);
    }
    CHECK(worst <= 1e-8);

    const Field rough = Field::from_function(grid(), [](double x) { return std::abs(x) < 1.0 ? 1.0 - std::abs(x) - 0.02 : -0.02; });
    const Field rough0 = rough - Field::constant(grid(), rough.mean());
    CHECK_FALSE(magic_identity_check(rough0).band_limited);
    CHECK_THROWS_AS(magic_identity_check(Field::constant(grid(), 1.0)), std::invalid_argument);
}

TEST_CASE("Gronwall envelope counts")
{
    const std::vector<double> t{0.0, 1.0, 2.0, 3.0};
    CHECK(gronwall_envelope(t, {2.0, 2.0, 2.0, 2.0}, 0.0, 2.0) == 0);
    CHECK(gronwall_envelope(t, {2.0, 1.0, 0.5, 0.25}, 0.3, 2.0) == 0);
    CHECK(gronwall_envelope(t, {1.0, 1.5, 2.5, 4.0}, 0.1, 1.0) == 3);
    CHECK_THROWS_AS(gronwall_envelope(t, {1, 1, 1, 1}, -1.0, 1.0), std::invalid_argument);
}

TEST_CASE("registry operators and serialization")
{
    // H is an isometry and commutes with constants
    const WeightSpec u = WeightSpec::uniform(grid());
    CHECK(hilbert_weighted_norm(u) == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(commutator_half_norm(u) <= 1e-12);
    const ConstantRegistry& r = registry();
    REQUIRE(r.weighted.size() == 3);
    for (const auto& c : r.weighted) {
        CHECK(c.comm_half > 0.0);
        CHECK(c.hilbert >= 1.0 - 1e-6);
        CHECK(c.c8 > 0.0);
        CHECK(c.smallness == doctest::Approx(1.0 / c.c8));
    }
    CHECK(r.c1 > 0.0);
    CHECK(r.c0 > 0.0);
    MESSAGE(r.to_json());
    const ConstantRegistry back = ConstantRegistry::from_json(r.to_json());
    CHECK(back.to_json() == r.to_json());
    CHECK_THROWS_AS(r.for_beta(0.3), std::out_of_range);
    const double s = r.for_beta(0.5).smallness;
    CHECK(r.regime(0.5, 0.1 * s) == ConstantRegistry::Regime::Inside);
    CHECK(r.regime(0.5, 0.7 * s) == ConstantRegistry::Regime::Inconclusive);
    CHECK(r.regime(0.5, 2.0 * s) == ConstantRegistry::Regime::Outside);
    CHECK_THROWS(ConstantRegistry::from_json(R"({"version": 99})"));
}

TEST_CASE("residuals vanish on the zero trajectory")
{
    SolverConfig c = small_bump();
    c.initial.amplitude = 0.0;
    c.t_end = 0.5;
    const DiagnosedRun d = run_with_diagnostics(grid(), c, {}, registry());
    for (const auto& r : d.records) {
        CHECK(r.residuals.size() == 11);
        for (const auto& [id, v] : r.residuals) CHECK_MESSAGE(v.value == 0.0, id);
    }
}

TEST_CASE("linear evolution satisfies every residual with margin")
{
    SolverConfig c = small_bump();
    c.nonlinear = false;
    const DiagnosedRun d = run_with_diagnostics(grid(), c, {}, registry());
    for (const auto& r : d.records)
        for (const auto& [id, v] : r.residuals) {
            if (id == "cc_pointwise") continue;
            CHECK_MESSAGE(v.value <= 1e-6 * v.tolerance / residual_rel_tol, id << " t=" << r.t);
        }
}

TEST_CASE("small data critical run certifies the asserted residuals")
{
    const DiagnosedRun d = run_with_diagnostics(grid(), small_bump(), {}, registry());
    std::size_t asserted = 0;
    for (const auto& r : d.records)
        for (const auto& [id, v] : r.residuals)
            if (v.asserted) {
                ++asserted;
                CHECK_MESSAGE(v.ok(), id << " t=" << r.t << " value " << v.value << " tol " << v.tolerance);
            }
    CHECK(asserted == 11 * d.records.size());
}

TEST_CASE("residuals are stable under halving the probe cadence")
{
    SolverConfig c = small_bump();
    c.t_end = 1.0;
    c.probe_interval = 0.025;
    const DiagnosedRun fine = run_with_diagnostics(grid(), c, {}, registry());
    c.probe_interval = 0.05;
    const DiagnosedRun coarse = run_with_diagnostics(grid(), c, {}, registry());
    REQUIRE(fine.records.size() == 2 * coarse.records.size() - 1);
    for (std::size_t i = 2; i + 2 < coarse.records.size(); ++i) {
        const auto& a = coarse.records[i];
        const auto& b = fine.records[2 * i];
        REQUIRE(a.t == doctest::Approx(b.t));
        for (const auto& [id, v] : a.residuals) {
            if (id == "cc_pointwise") continue;
            const double dv = std::abs(v.value - b.residuals.at(id).value);
            CHECK_MESSAGE(dv <= 0.1 * std::max(v.tolerance, 1e-300), id << " t=" << a.t << " change " << dv << " tol " << v.tolerance);
        }
    }
}

TEST_CASE("hypothesis gating")
{
    SolverConfig c = small_bump();
    c.alpha = 0.6;
    c.t_end = 0.2;
    const DiagnosedRun d = run_with_diagnostics(grid(), c, {}, registry());
    for (const auto& [id, v] : d.records.back().residuals)
        if (id != "cc_pointwise") CHECK_MESSAGE(!v.asserted, id);

    c = small_bump();
    c.t_end = 0.2;
    c.initial.amplitude = 2.0 * registry().for_beta(0.5).smallness;
    const DiagnosedRun big = run_with_diagnostics(grid(), c, {}, registry());
    CHECK_FALSE(big.records.back().residuals.at("eqsob3_0.5").asserted);
}
