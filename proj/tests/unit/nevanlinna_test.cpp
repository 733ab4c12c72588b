#include <cmath>
#include <numbers>

#include <doctest.h>

#include <fermat3/errors.hpp>
#include <fermat3/nevanlinna.hpp>

using namespace fermat3;

namespace
{

const Lattice &lat = equianharmonic_lattice();

MeromorphicEvaluator rational_test_function()
{
    return rational_evaluator([](cd z) { return (z * z + 1.0) / (z - 2.0); }, {{cd(2.0), 1}}, "rational");
}

// N(r, wp) from an independent enumeration of the lattice.
double wp_counting_oracle(double r)
{
    const double w = std::abs(lat.omega1);
    const int k = int(std::ceil(2 * r / w)) + 2;
    double sum = 2 * std::log(r);
    for (int m = -k; m <= k; ++m) {
        for (int n = -k; n <= k; ++n) {
            const double d = std::abs(double(m) * lat.omega1 + double(n) * lat.omega2);
            if ((m != 0 || n != 0) && d <= r) {
                sum += 2 * std::log(r / d);
            }
        }
    }
    return sum;
}

double brute_force_proximity(const MeromorphicEvaluator &f, double r, int nodes)
{
    double sum = 0;
    for (int k = 0; k < nodes; ++k) {
        const double t = 2 * std::numbers::pi * (k + 0.5) / nodes;
        sum += std::max(0.0, std::log(std::abs(f.evaluate(std::polar(r, t)))));
    }
    return sum / nodes;
}

NevanlinnaCurve synthetic_curve(const std::vector<double> &radii, auto T)
{
    NevanlinnaCurve curve;
    for (double r : radii) {
        curve.samples.push_back({r, T(r), 0.0, T(r)});
    }
    return curve;
}

std::vector<double> linear_grid(double lo, double hi, int count)
{
    std::vector<double> out;
    for (int i = 0; i < count; ++i) {
        out.push_back(lo + (hi - lo) * i / (count - 1));
    }
    return out;
}

} // namespace

TEST_CASE("proximity of e^z is r / pi")
{
    const auto f = exp_evaluator();
    for (double r : {0.5, 1.0, 5.0, 20.0, 60.0}) {
        CHECK(std::abs(proximity(f, r) - r / std::numbers::pi) <= 1e-3 * std::max(1.0, r / std::numbers::pi));
        CHECK(counting(f, r) == 0.0);
    }
}

TEST_CASE("constants")
{
    CHECK(proximity(constant_evaluator(cd(std::exp(2.0))), 3.0) == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(proximity(constant_evaluator(cd(0.5)), 3.0) == 0.0);
    CHECK(counting(constant_evaluator(cd(7.0)), 3.0) == 0.0);
}

TEST_CASE("counting function examples")
{
    const auto rat = rational_test_function();
    CHECK(counting(rat, 1.0) == 0.0);
    CHECK(counting(rat, 2.0) == doctest::Approx(0.0));
    CHECK(counting(rat, 8.0) == doctest::Approx(std::log(4.0)).epsilon(1e-14));

    const auto wp = wp_evaluator(lat);
    CHECK(counting(wp, 1.0) == doctest::Approx(0.0));
    CHECK(counting(wp, 2.0) == doctest::Approx(2 * std::log(2.0)).epsilon(1e-14));
    for (double r : {4.0, 9.5, 15.0}) {
        CHECK(counting(wp, r) == doctest::Approx(wp_counting_oracle(r)).epsilon(1e-12));
    }
}

TEST_CASE("proximity of wp against a dense midpoint rule")
{
    const auto wp = wp_evaluator(lat);
    for (double r : {4.0, 10.0}) {
        const double adaptive = proximity(wp, r);
        const double dense = brute_force_proximity(wp, r, 1 << 18);
        CHECK(std::abs(adaptive - dense) <= 1e-4 * std::max(1.0, dense));
    }
}

TEST_CASE("circles through a pole are rejected")
{
    const auto wp = wp_evaluator(lat);
    const double w = std::abs(lat.omega1);
    CHECK_THROWS_AS(proximity(wp, w), CircleNearPole);
    CHECK_THROWS_AS(proximity(rational_test_function(), 2.0), CircleNearPole);

    const auto curve = characteristic_curve(wp, {2.0, w, 5.0});
    REQUIRE(curve.samples.size() == 2);
    CHECK(curve.samples[0].r == 2.0);
    CHECK(curve.samples[1].r == 5.0);
    REQUIRE_FALSE(curve.notes.empty());
    CHECK(curve.notes.front().find("removed") != std::string::npos);
}

TEST_CASE("characteristic curves")
{
    SUBCASE("e^z")
    {
        const auto curve = characteristic_curve(exp_evaluator(), {3.0, 1.0, 2.0});
        REQUIRE(curve.samples.size() == 3);
        CHECK(curve.samples[0].r == 1.0);
        for (const auto &s : curve.samples) {
            CHECK(s.N == 0.0);
            CHECK(s.T == doctest::Approx(s.r / std::numbers::pi).epsilon(1e-3));
        }
        CHECK(curve.notes.empty());
    }
    SUBCASE("rational function")
    {
        const auto curve = characteristic_curve(rational_test_function(), {1.0, 4.0, 16.0, 64.0});
        REQUIRE(curve.samples.size() == 4);
        for (const auto &s : curve.samples) {
            CHECK(s.T == doctest::Approx(s.m + s.N));
        }
        // Degree two: f ~ z at infinity and one finite pole, so T(r) = 2 log r + O(1).
        CHECK(std::abs(curve.samples[3].T - 2 * std::log(64.0)) <= 1.0);
        CHECK(curve.samples[3].T >= curve.samples[2].T);
    }
    SUBCASE("T(r, wp) is close to pi r^2 / A")
    {
        const auto curve = characteristic_curve(wp_evaluator(lat), {10.0, 14.0, 20.0});
        const auto ratios = wp_asymptotic_check(curve, lat);
        REQUIRE(ratios.size() == 3);
        for (const auto &s : ratios) {
            CHECK(s.ratio == doctest::Approx(1.0).epsilon(0.02));
        }
        CHECK(ratios_in_band(ratios));
    }
}

TEST_CASE("ratio helpers")
{
    const auto radii = linear_grid(4, 20, 9);
    const auto exact = synthetic_curve(radii, [](double r) { return std::numbers::pi * r * r / lat.area; });
    const auto ratios = wp_asymptotic_check(exact, lat);
    for (const auto &s : ratios) {
        CHECK(s.ratio == doctest::Approx(1.0).epsilon(1e-14));
    }
    CHECK(ratios_in_band(ratios));
    CHECK(ratio_trend_non_increasing(ratios));

    const std::vector<RatioSample> outside{{8, 0.5}, {10, 0.9}, {12, 1.2}};
    CHECK_FALSE(ratios_in_band(outside));
    CHECK(ratios_in_band(outside, 10.0, 0.85, 1.25));
    CHECK(ratios_in_band({}, 10.0));

    const std::vector<RatioSample> decaying{{4, 0.8}, {6, 0.9}, {8, 0.95}, {10, 0.97}, {12, 0.99}};
    CHECK(ratio_trend_non_increasing(decaying));
    const std::vector<RatioSample> drifting{{4, 1.0}, {6, 1.0}, {8, 1.0}, {10, 1.1}, {12, 1.2}, {14, 1.3}};
    CHECK_FALSE(ratio_trend_non_increasing(drifting));
    CHECK(ratio_trend_non_increasing(drifting, 0.2));
}

TEST_CASE("order estimates")
{
    SUBCASE("synthetic power laws")
    {
        const auto radii = linear_grid(2, 30, 12);
        for (double rho : {0.5, 1.0, 2.0, 3.0}) {
            const auto est = order_estimate(synthetic_curve(radii, [&](double r) { return 0.3 * std::pow(r, rho); }));
            CHECK(est.rho_hat == doctest::Approx(rho).epsilon(1e-10));
            CHECK(est.fit_quality == doctest::Approx(1.0));
            CHECK(est.fit_range.first >= 16.0);
            CHECK(est.fit_range.second == 30.0);
        }
    }
    SUBCASE("e^z and wp")
    {
        const auto grid = linear_grid(4, 40, 12);
        const auto e = order_estimate(characteristic_curve(exp_evaluator(), grid));
        CHECK(e.rho_hat == doctest::Approx(1.0).epsilon(0.02));
        const auto p = order_estimate(characteristic_curve(wp_evaluator(lat), linear_grid(4, 30, 12)));
        CHECK(p.rho_hat >= 1.8);
        CHECK(p.rho_hat <= 2.2);
    }
    SUBCASE("rational function on a logarithmic grid")
    {
        std::vector<double> grid;
        for (int k = 0; k <= 12; ++k) {
            grid.push_back(std::pow(10.0, 2.0 + 0.5 * k));
        }
        const auto est = order_estimate(characteristic_curve(rational_test_function(), grid));
        CHECK(est.rho_hat >= -0.1);
        CHECK(est.rho_hat <= 0.1);
    }
    SUBCASE("degenerate inputs")
    {
        const auto zero = order_estimate(characteristic_curve(constant_evaluator(0.5), linear_grid(1, 10, 8)));
        CHECK(zero.rho_hat == 0.0);
        CHECK_FALSE(zero.notes.empty());
        CHECK_THROWS_AS(order_estimate(characteristic_curve(exp_evaluator(), {1, 2, 3})), std::invalid_argument);
    }
}

TEST_CASE("lemma checks")
{
    SUBCASE("shift of e^z")
    {
        const cd c(1, 1);
        const auto report = lemma_checks(exp_evaluator(), ShiftParams{c}, linear_grid(2, 40, 10));
        CHECK(report.mode == "shift");
        CHECK(report.max_abs_difference <= std::abs(c.real()) / std::numbers::pi + 1.0);
        CHECK(report.statistic <= 10.0);
        CHECK(report.rho_hat == doctest::Approx(1.0).epsilon(0.02));
    }
    SUBCASE("shift of wp by a period")
    {
        const auto report = lemma_checks(wp_evaluator(lat), ShiftParams{lat.omega1}, linear_grid(4, 16, 7));
        CHECK(report.max_abs_difference <= 1e-6 * std::max(1.0, report.base.back().T));
    }
    SUBCASE("wp squared")
    {
        const auto report =
            lemma_checks(wp_evaluator(lat), PolynomialCompParams{{0.0, 0.0, 1.0}}, linear_grid(12, 24, 7));
        CHECK(report.mode == "polynomial_comp");
        CHECK(report.statistic <= 0.15);
        REQUIRE(report.base.size() == report.transformed.size());

        // Lower-order terms move T only by O(1).
        const auto mixed =
            lemma_checks(wp_evaluator(lat), PolynomialCompParams{{1.0, 1.0, 1.0}}, linear_grid(12, 24, 7));
        CHECK(mixed.statistic > 0.0);
        CHECK(mixed.statistic <= 0.15);
    }
    SUBCASE("zero leading coefficient")
    {
        CHECK_THROWS_AS(lemma_checks(exp_evaluator(), PolynomialCompParams{{1.0, 0.0}}, linear_grid(1, 5, 6)),
                        std::invalid_argument);
    }
}

TEST_CASE("pole bookkeeping probe")
{
    CHECK(probe_pole_bookkeeping(wp_evaluator(lat), 10.0).empty());
    CHECK(probe_pole_bookkeeping(rational_test_function(), 10.0).empty());
    // Declares a pole that e^z does not have.
    auto bogus = exp_evaluator();
    bogus.known_poles = [](double r) { return r >= 1 ? std::vector<Pole>{{cd(1.0), 1}} : std::vector<Pole>{}; };
    CHECK(probe_pole_bookkeeping(bogus, 5.0).size() == 1);
}

TEST_CASE("shifted and polynomial evaluators carry poles")
{
    const auto wp = wp_evaluator(lat);
    const auto moved = shifted(wp, cd(0.5, 0.25));
    for (const auto &p : moved.known_poles(6.0)) {
        CHECK(std::abs(p.point) <= 6.0);
    }
    const auto squared = polynomial_in(wp, {1.0, 0.0, 1.0});
    const auto poles = squared.known_poles(4.0);
    REQUIRE_FALSE(poles.empty());
    CHECK(poles.front().multiplicity == 4);
    const cd z(0.3, 0.4);
    const cd p = wp.evaluate(z);
    CHECK(std::abs(squared.evaluate(z) - (1.0 + p * p)) <= 1e-12 * std::abs(p * p));
}
