#include "doctest.h"

#include "fractrans/cutoff.hpp"
#include "fractrans/random_suite.hpp"
#include "fractrans/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

using namespace fractrans;
using std::numbers::pi;

namespace {

double sup_diff(const Field& a, const Field& b) { return (a - b).sup_norm(); }

const Grid& default_grid()
{
    static const Grid g(50.0, 4096);
    return g;
}

std::vector<Field> band_limited(std::size_t count, std::uint64_t seed)
{
    const Grid& g = default_grid();
    std::vector<Field> out;
    for (const auto& f : trig_suite(seed, count, g.half_length(), static_cast<int>(g.size() / 4) - 1))
        out.push_back(f.sample(g));
    return out;
}

} // namespace

TEST_CASE("grid validation and wavenumbers")
{
    CHECK_THROWS(Grid(50.0, 4095));
    CHECK_THROWS(Grid(50.0, 2 * 11 * 13));
    CHECK_THROWS(Grid(0.0, 64));
    Grid g(50.0, 4096);
    CHECK(g.spacing() * 4096 == 100.0);
    CHECK(g.wavenumber(1) == doctest::Approx(pi / 50.0));
    CHECK(g.mode_index(2048) == -2048);
    CHECK(g.wavenumber(2048) < 0.0);
    Grid g3(10.0, 96);
    CHECK(g3.spacing() == doctest::Approx(20.0 / 96));
}

TEST_CASE("samples and spectrum round trip")
{
    const Grid& g = default_grid();
    Rng rng(7);
    std::vector<double> v(g.size());
    for (double& x : v) x = rng.uniform(-1, 1);
    Field f = Field::from_samples(g, v);
    Field back = Field::from_spectrum(g, f.spectrum());
    double err = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) err = std::max(err, std::abs(back[i] - v[i]));
    CHECK(err <= 1e-12 * f.sup_norm());
}

TEST_CASE("hilbert on single modes and constants")
{
    const Grid& g = default_grid();
    const double k = pi / g.half_length();
    Field s = Field::from_function(g, [k](double x) { return std::sin(k * x); });
    Field c = Field::from_function(g, [k](double x) { return std::cos(k * x); });
    CHECK(sup_diff(hilbert(s), c) < 1e-12);
    CHECK(sup_diff(hilbert(c), -1.0 * s) < 1e-12);
    CHECK(hilbert(Field::constant(g, 3.5)).sup_norm() < 1e-14);
}

TEST_CASE("operator identities on band-limited fields")
{
    for (const Field& f : band_limited(50, 11)) {
        Field lf = lambda_alpha(f, 1.0);
        Field dx = derivative(f);
        CHECK((derivative(hilbert(f)) + lf).sup_norm() <= 1e-10 * lf.sup_norm());
        CHECK(sup_diff(hilbert(lf), dx) <= 1e-10 * dx.sup_norm());
        const double n0 = l2_norm(f);
        CHECK(std::abs(l2_norm(hilbert(f)) - n0) <= 1e-10 * n0);
        CHECK((hilbert(hilbert(f)) + f).sup_norm() <= 1e-10 * f.sup_norm());
    }
}

TEST_CASE("fractional powers compose")
{
    const auto fields = band_limited(10, 12);
    const double pairs[][2] = {{0.5, 0.5}, {0.25, 1.5}, {1.0, 1.0}, {0.3, 0.7}};
    for (const Field& f : fields)
        for (const auto& p : pairs) {
            Field lhs = lambda_alpha(lambda_alpha(f, p[0]), p[1]);
            Field rhs = lambda_alpha(f, p[0] + p[1]);
            CHECK(sup_diff(lhs, rhs) <= 1e-10 * rhs.sup_norm());
        }
}

TEST_CASE("lambda_alpha on modes, constants and bad exponents")
{
    const Grid& g = default_grid();
    const double k = pi / g.half_length();
    Field s = Field::from_function(g, [k](double x) { return std::sin(k * x); });
    for (double a : {0.25, 1.0, 1.7, 2.0}) {
        Field ls = lambda_alpha(s, a);
        CHECK(std::abs(ls.spectrum()[1] - std::pow(k, a) * s.spectrum()[1]) <= 1e-14 * std::abs(ls.spectrum()[1]));
        // roundoff in the other slots is amplified by |k_max|^a
        CHECK(sup_diff(ls, std::pow(k, a) * s) < 1e-10);
        CHECK(lambda_alpha(Field::constant(g, -2.0), a).sup_norm() == 0.0);
    }
    CHECK_THROWS(lambda_alpha(s, 0.0));
    CHECK_THROWS(lambda_alpha(s, 2.5));
    CHECK_THROWS(lambda_alpha(s, -1.0));
}

TEST_CASE("heat semigroup")
{
    const Grid& g = default_grid();
    Field f = bump_suite(3, 1)[0].sample(g);
    Field same = heat_semigroup(f, 0.0, 0.3);
    CHECK(same.samples() == f.samples());
    CHECK(sup_diff(heat_semigroup(Field::constant(g, 2.0), 5.0, 0.1), Field::constant(g, 2.0)) < 1e-14);

    const double k = 3 * pi / g.half_length();
    Field s = Field::from_function(g, [k](double x) { return std::sin(k * x); });
    const double t = 0.7, eps = 0.2;
    CHECK(sup_diff(heat_semigroup(s, t, eps), std::exp(-eps * t * k * k) * s) < 1e-13);

    for (const Field& r : band_limited(5, 13)) {
        Field ab = heat_semigroup(heat_semigroup(r, 0.3, 0.01), 0.5, 0.01);
        Field c = heat_semigroup(r, 0.8, 0.01);
        CHECK(sup_diff(ab, c) <= 1e-10 * r.sup_norm());
    }
    CHECK(heat_semigroup(f, 2.0, 0.5).sup_norm() <= f.sup_norm() + 1e-10);
    CHECK_THROWS(heat_semigroup(f, -1.0, 0.1));
}

TEST_CASE("mollifier")
{
    const Grid& g = default_grid();
    Field c = mollify(Field::constant(g, 1.7), 0.25);
    CHECK(sup_diff(c, Field::constant(g, 1.7)) < 1e-10);

    Field pos = Field::from_function(g, [](double x) { return x > -1 && x < 2 ? 1.0 : 0.0; });
    Field mp = mollify(pos, 0.125);
    CHECK(mp.min() >= -1e-12);
    CHECK(mp.sup_norm() <= pos.sup_norm() + 1e-12);
    CHECK(std::abs(mp.mean() - pos.mean()) < 1e-10);

    Field f = bump_suite(5, 1)[0].sample(g);
    double prev = 1e300;
    // decreasing eta must bring the mollified field closer to f
    for (double eta : {0.5, 0.25, 0.125}) {
        const double d = l2_norm(mollify(f, eta) - f);
        CHECK(d < prev);
        prev = d;
    }
    CHECK_THROWS(mollify(f, 12.5));
    CHECK_THROWS(mollify(f, 0.0));
}

TEST_CASE("mollifier profile is a unit-mass bump")
{
    // closed-form mass of exp(-1/(1-x^2)) on (-1,1)
    CHECK(bump_mass() == doctest::Approx(0.443993816168079).epsilon(1e-13));
    CHECK(mollifier_profile(1.0) == 0.0);
    CHECK(plateau(0.9) == 1.0);
    CHECK(plateau(-2.0) == 0.0);
    CHECK(plateau(1.5) == doctest::Approx(0.5).epsilon(1e-12));
    double prev = 1.0;
    for (double x = 1.0; x <= 2.0; x += 0.01) {
        const double v = plateau(x);
        CHECK(v <= prev + 1e-15);
        CHECK(v == doctest::Approx(plateau(-x)).epsilon(1e-15));
        prev = v;
    }
}

TEST_CASE("dealiasing")
{
    const Grid& g = default_grid();
    Field bl = trig_suite(21, 1, g.half_length(), static_cast<int>(g.size() / 3))[0].sample(g);
    CHECK(dealias(bl).spectrum() == bl.spectrum());

    const double k = pi * (g.size() / 2 - 1) / g.half_length();
    Field hi = Field::from_function(g, [k](double x) { return std::cos(k * x); });
    CHECK(dealias(hi).sup_norm() < 1e-12);

    Rng rng(5);
    std::vector<Complex> spec(g.spectrum_size());
    for (auto& c : spec) c = Complex(rng.normal(), rng.normal());
    Field r = Field::from_spectrum(g, spec);
    Field once = dealias(r);
    CHECK(dealias(once).spectrum() == once.spectrum());
}

TEST_CASE("spectral upsampling interpolates")
{
    Grid g(40.0, 512);
    auto f = bump_suite(9, 1)[0];
    Field fine = upsample(f.sample(g), 4);
    double err = 0.0;
    for (std::size_t i = 0; i < fine.size(); ++i) err = std::max(err, std::abs(fine[i] - f(fine.grid().x(i))));
    CHECK(err < 1e-10);
}
