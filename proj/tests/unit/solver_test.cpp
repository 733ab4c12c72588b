#include <cmath>
#include <numbers>
#include <random>

#include <doctest.h>

#include <fermat3/errors.hpp>
#include <fermat3/solver.hpp>

#include "instances.hpp"

using namespace fermat3;

namespace
{

const cd two_pi_i(0, 2 * std::numbers::pi);

EquationInstance make(std::array<cd, 3> a, std::array<cd, 3> b, cd alpha = 1.0, cd beta = 0.0, cd c = cd(1, 0.5))
{
    return EquationInstance::make(a, b, alpha, beta, c);
}

bool equal_up_to_cube_root(cd x, cd y, double tol)
{
    for (int k = 0; k < 3; ++k) {
        if (std::abs(x - y * std::polar(1.0, 2 * std::numbers::pi * k / 3)) <= tol * std::abs(y)) {
            return true;
        }
    }
    return false;
}

} // namespace

TEST_CASE("instance construction rejects c = 0")
{
    CHECK_THROWS_AS(make({1, 0, 0}, {0, 1, 0}, 1.0, 0.0, 0.0), AssumptionViolated);
}

TEST_CASE("validate_rank")
{
    CHECK(validate_rank(make({1, 0, 0}, {0, 1, 0})));
    CHECK_FALSE(validate_rank(make({1, 1, 1}, {2, 2, 2})));
    CHECK(validate_rank(make({1, 0, 0}, {0, 0, 1})));
    CHECK_FALSE(validate_rank(make({0, 0, 0}, {0, 0, 0})));
    // Proportional up to rounding.
    const cd k(0.3, -1.7);
    CHECK_FALSE(validate_rank(make({0.1, 0.7, 1.3}, {0.1 * k, 0.7 * k, 1.3 * k})));
}

TEST_CASE("classify")
{
    CHECK(classify(make({1, 0, 0}, {0, 1, 0})) == CaseTag::Case2);
    CHECK(classify(make({1, 0, 0}, {0, 0, 1})) == CaseTag::Case1);
    CHECK(classify(make({0, 1, 0}, {0, 0, 1})) == CaseTag::Case3);
    CHECK_THROWS_AS(classify(make({1, 1, 1}, {2, 2, 2})), AssumptionViolated);
}

TEST_CASE("case partition is total and exclusive on random instances")
{
    std::mt19937_64 rng(8);
    for (int i = 0; i < 300; ++i) {
        CHECK(classify(testing::random_case1(rng)) == CaseTag::Case1);
        CHECK(classify(testing::random_case2(rng)) == CaseTag::Case2);
        CHECK(classify(testing::random_case3(rng)) == CaseTag::Case3);
    }
    // Generic instances: exactly one predicate holds.
    for (int i = 0; i < 300; ++i) {
        const std::array<cd, 3> a{testing::random_complex(rng), testing::random_complex(rng), testing::random_complex(rng)};
        const std::array<cd, 3> b{testing::random_complex(rng), testing::random_complex(rng), testing::random_complex(rng)};
        const auto inst = make(a, b);
        const auto m = minors(inst);
        const double tol = minor_tolerance(inst);
        const bool p1 = std::abs(m.m01) <= tol && std::abs(m.m12) <= tol;
        const bool p2 = std::abs(m.m01) > tol && std::abs(m.m12) <= tol;
        const bool p3 = std::abs(m.m12) > tol;
        CHECK(int(p1) + int(p2) + int(p3) == 1);
        const auto tag = classify(inst);
        CHECK((tag == CaseTag::Case1) == p1);
        CHECK((tag == CaseTag::Case2) == p2);
        CHECK((tag == CaseTag::Case3) == p3);
    }
}

TEST_CASE("Fermat pair validation")
{
    CHECK_NOTHROW(FermatPair::make(1.0, 0.0));
    const double half = std::pow(0.5, 1.0 / 3.0);
    CHECK_NOTHROW(FermatPair::make(half, half));
    CHECK_THROWS_AS(FermatPair::make(1.0, 0.1), std::invalid_argument);
}

TEST_CASE("forward constants")
{
    SUBCASE("shift specialization with e^{alpha c} = 1")
    {
        const auto fwd = forward_constants(make({1, 0, 0}, {0, 1, 0}, 1.0, 0.0, two_pi_i));
        CHECK(std::abs(fwd.mu - 1.0) <= 1e-15);
        CHECK(std::abs(fwd.nu - std::exp(two_pi_i / 3.0)) <= 1e-15);
        REQUIRE(fwd.amp_A);
        const cd A = *fwd.amp_A;
        CHECK(std::abs(A * A * A * (1.0 + std::exp(two_pi_i)) - 1.0) <= 1e-12);
        CHECK(equal_up_to_cube_root(A, std::pow(2.0, -1.0 / 3.0), 1e-12));
    }
    SUBCASE("differential specialization at alpha = 3")
    {
        const auto fwd = forward_constants(make({1, 0, 0}, {0, 0, 1}, 3.0, 0.0, 0.7));
        CHECK(fwd.mu == cd(1));
        CHECK(fwd.nu == cd(1));
        REQUIRE(fwd.amp_A);
        CHECK(std::abs(*fwd.amp_A - std::pow(2.0, -1.0 / 3.0)) <= 1e-15);
        REQUIRE(fwd.pair);
        CHECK(fwd.pair->residual() <= 1e-15);
    }
    SUBCASE("mu^3 + nu^3 = 0 has no amplitude")
    {
        // nu = alpha / 3 = -1 = -mu
        const auto inst = make({1, 0, 0}, {0, 0, 1}, -3.0, 0.0, 0.7);
        const auto fwd = forward_constants(inst);
        CHECK_FALSE(fwd.amp_A);
        CHECK_FALSE(fwd.pair);
        CHECK_THROWS_AS(paper_formula_crosscheck(inst), std::invalid_argument);
        CandidateSolution sol;
        sol.case_tag = CaseTag::Case1;
        sol.amp_A = 1.0;
        sol.mu = fwd.mu;
        sol.nu = fwd.nu;
        CHECK(verify_solution(inst, sol, 16).verdict == Verdict::NoExponentialSolution);
    }
}

TEST_CASE("closed-form amplitudes per case")
{
    SUBCASE("case 2 recovers the shift-equation amplitude")
    {
        const cd alpha = 1.0, c = cd(0.4, 0.9);
        const auto inst = make({1, 0, 0}, {0, 1, 0}, alpha, 0.0, c);
        // Any A with A^3 (1 + e^{alpha c}) = 1, paired as (A, A e^{alpha c / 3}).
        const cd A = 1.0 / std::pow(1.0 + std::exp(alpha * c), 1.0 / 3.0);
        const auto sol = solve_theorem(inst, FermatPair::make(A, A * std::exp(alpha * c / 3.0)));
        CHECK(sol.case_tag == CaseTag::Case2);
        CHECK(std::abs(sol.amp_A - A) <= 1e-14);
        CHECK(std::abs(sol.amp_A * sol.amp_A * sol.amp_A * (1.0 + std::exp(alpha * c)) - 1.0) <= 1e-12);
        CHECK(sol.free_C == cd(0));
    }
    SUBCASE("case 3 with a = (0,1,0), b = (0,0,1)")
    {
        const cd alpha(0.8, 0.3);
        const auto inst = make({0, 1, 0}, {0, 0, 1}, alpha, 0.0, cd(1, 0.5));
        const auto fwd = forward_constants(inst);
        const auto sol = solve_theorem(inst, *fwd.pair);
        CHECK(sol.rate_D == cd(0));
        CHECK(std::abs(sol.amp_A - 3.0 * fwd.pair->c1 / alpha) <= 1e-14);
        CHECK(std::abs(sol.amp_A - *fwd.amp_A) <= 1e-14);
    }
    SUBCASE("case 1 with a = (1,0,0), b = (0,0,1)")
    {
        const cd alpha(1.3, -0.4);
        const auto inst = make({1, 0, 0}, {0, 0, 1}, alpha);
        const double half = std::pow(0.5, 1.0 / 3.0);
        const auto sol = solve_theorem(inst, FermatPair::make(half, half));
        CHECK(sol.amp_A == cd(half));
        const auto fwd = forward_constants(inst);
        const auto forward_sol = solve_theorem(inst, *fwd.pair);
        const cd A = forward_sol.amp_A;
        CHECK(std::abs(A * A * A * (1.0 + alpha * alpha * alpha / 27.0) - 1.0) <= 1e-12);
    }
    SUBCASE("degenerate case 3")
    {
        CHECK_THROWS_AS(solve_theorem(make({0, 1, 0}, {0, 0, 1}, 0.0), FermatPair{1, 0}), DegenerateCase3);
    }
    SUBCASE("rank violation")
    {
        CHECK_THROWS_AS(solve_theorem(make({1, 1, 1}, {2, 2, 2}), FermatPair{1, 0}), AssumptionViolated);
    }
}

TEST_CASE("closed forms agree with the forward substitution")
{
    std::mt19937_64 rng(2024);
    for (int i = 0; i < 200; ++i) {
        CHECK(paper_formula_crosscheck(testing::random_case1(rng)) <= 1e-10);
        CHECK(paper_formula_crosscheck(testing::random_case2(rng)) <= 1e-10);
        CHECK(paper_formula_crosscheck(testing::random_case3(rng)) <= 1e-10);
    }
    CHECK(paper_formula_crosscheck(make({1, 0, 0}, {0, 0, 1}, cd(0.5, 0.2))) <= 1e-12);
}

TEST_CASE("C-freedom")
{
    SUBCASE("generic shift/derivative instance is not free")
    {
        const auto check = c_freedom_check(make({0, 1, 0}, {0, 0, 1}), 0.0);
        CHECK_FALSE(check.free);
        CHECK(check.residual_a == doctest::Approx(1.0));
        CHECK(check.residual_b == 0.0);
    }
    SUBCASE("constructed instance is free")
    {
        // a = (2,1,0), b = (1,0,1): D = -1; e^{-c} = -(a0 + a2 D)/a1 = -2.
        const cd c = -std::log(cd(-2.0));
        const auto inst = make({2, 1, 0}, {1, 0, 1}, 1.0, 0.0, c);
        CHECK(classify(inst) == CaseTag::Case3);
        const auto fwd = forward_constants(inst);
        const auto sol = solve_theorem(inst, *fwd.pair, 1.0);
        CHECK(std::abs(sol.rate_D + 1.0) <= 1e-15);
        CHECK(sol.c_freedom);
        CHECK(sol.free_C == cd(1));
        CHECK(verify_solution(inst, sol, 32).verdict == Verdict::Exact);
    }
    SUBCASE("the two residual vectors are proportional in case 3")
    {
        std::mt19937_64 rng(77);
        for (int i = 0; i < 500; ++i) {
            const auto inst = testing::random_case3(rng);
            const auto m = minors(inst);
            const cd rate = (inst.a(1) * inst.b(0) - inst.a(0) * inst.b(1)) / m.m12;
            const cd w = std::exp(rate * inst.shift_c);
            const cd ra = inst.a(0) + inst.a(1) * w + inst.a(2) * rate;
            const cd rb = inst.b(0) + inst.b(1) * w + inst.b(2) * rate;
            const double size = inst.scale() * inst.scale() * std::max({1.0, std::abs(w), std::abs(rate)});
            CHECK(std::abs(inst.b(1) * ra - inst.a(1) * rb) <= 1e-10 * size);
        }
    }
}

TEST_CASE("verify_solution")
{
    SUBCASE("shift specialization is exact")
    {
        const auto inst = make({1, 0, 0}, {0, 1, 0}, 1.0, 0.0, two_pi_i);
        const auto fwd = forward_constants(inst);
        const auto sol = solve_theorem(inst, *fwd.pair);
        const auto report = verify_solution(inst, sol, 64);
        CHECK(report.verdict == Verdict::Exact);
        CHECK(report.max_rel_residual <= 1e-9);
        CHECK(report.grid.size() == 128);
    }
    SUBCASE("C = 1 without freedom fails unless C = 0")
    {
        const auto inst = make({0, 1, 0}, {0, 0, 1}, 1.0, 0.0, cd(1, 0.5));
        const auto fwd = forward_constants(inst);
        auto sol = solve_theorem(inst, *fwd.pair, 1.0);
        CHECK_FALSE(sol.c_freedom);
        CHECK(sol.free_C == cd(0));
        CHECK(sol.notes.front().find("residual_a") != std::string::npos);
        CHECK(verify_solution(inst, sol, 32).verdict == Verdict::Exact);
        sol.free_C = 1.0;
        const auto report = verify_solution(inst, sol, 32);
        CHECK(report.verdict == Verdict::FailsUnlessCZero);
        CHECK(report.constraint_flags.at("residual_a") == doctest::Approx(1.0));

        // Symbolic expansion oracle: with P = A mu E + 1, Q = A nu E the
        // surviving cross terms are 3 (A mu E)^2 + 3 A mu E + 1.
        for (cd z : {cd(0.3, 0.1), cd(-1.0, 2.0), cd(2.5, -0.5)}) {
            const cd E = std::exp((inst.alpha * z + inst.beta) / 3.0);
            const cd x = sol.amp_A * sol.mu * E;
            const cd expected = E * E * E + 3.0 * x * x + 3.0 * x + 1.0;
            CHECK(std::abs(equation_lhs(inst, sol, z) - expected) <= 1e-12 * std::abs(expected));
        }
    }
    SUBCASE("perturbed amplitude is not exact")
    {
        const auto inst = make({1, 0, 0}, {0, 1, 0}, 1.0, 0.0, two_pi_i);
        auto sol = solve_theorem(inst, *forward_constants(inst).pair);
        sol.amp_A *= 1.01;
        const auto report = verify_solution(inst, sol, 32);
        CHECK(report.verdict == Verdict::Inexact);
        CHECK(report.max_rel_residual > 1e-3);
    }
    SUBCASE("fresh grid disjoint from the default one")
    {
        std::mt19937_64 rng(5);
        for (int i = 0; i < 50; ++i) {
            for (const auto &inst : {testing::random_case1(rng), testing::random_case2(rng), testing::random_case3(rng)}) {
                const auto sol = solve_theorem(inst, *forward_constants(inst).pair);
                const auto first = verify_solution(inst, sol, 64);
                REQUIRE(first.verdict == Verdict::Exact);
                const auto fresh = verify_solution(inst, sol, 37, SampleGrid{{2.0, 3.5}, 0.37});
                CHECK(fresh.max_rel_residual <= 1e-8);
            }
        }
    }
    SUBCASE("large rates rescale the grid")
    {
        const auto inst = make({1, 0, 0}, {0, 1, 0}, 200.0, 0.0, cd(0, 0.01));
        const auto sol = solve_theorem(inst, *forward_constants(inst).pair);
        const auto report = verify_solution(inst, sol, 16);
        CHECK_FALSE(report.diagnostics.empty());
        CHECK(report.verdict == Verdict::Exact);
    }
    SUBCASE("grid size floor")
    {
        const auto inst = make({1, 0, 0}, {0, 1, 0});
        CHECK_THROWS_AS(verify_solution(inst, CandidateSolution{}, 8), std::invalid_argument);
    }
}

TEST_CASE("differential specialization f^3 + f'^3 = e^{alpha z + beta}")
{
    const cd alpha = 3.0, beta(0.2, -0.1);
    const auto inst = make({1, 0, 0}, {0, 0, 1}, alpha, beta, 0.9);
    const auto sol = solve_theorem(inst, *forward_constants(inst).pair);
    CHECK(equal_up_to_cube_root(sol.amp_A, std::pow(2.0, -1.0 / 3.0), 1e-12));
    CHECK(verify_solution(inst, sol, 64).verdict == Verdict::Exact);
    // Independent check: f' from central differences.
    const auto f = [&](cd z) { return sol.amp_A * std::exp((alpha * z + beta) / 3.0); };
    const double h = 1e-5;
    for (cd z : {cd(0.1, 0.2), cd(-0.7, 0.4), cd(0.5, -1.1)}) {
        const cd df = (f(z + h) - f(z - h)) / (2 * h);
        const cd lhs = f(z) * f(z) * f(z) + df * df * df;
        CHECK(std::abs(lhs - std::exp(alpha * z + beta)) <= 1e-8 * std::abs(std::exp(alpha * z + beta)));
    }
}

TEST_CASE("scaling both rows by a cube root of unity")
{
    const cd lambda = std::polar(1.0, 2 * std::numbers::pi / 3);
    std::mt19937_64 rng(99);
    for (int i = 0; i < 50; ++i) {
        const auto inst = testing::random_case3(rng);
        auto scaled = inst;
        scaled.coeffs *= lambda;
        const auto base = forward_constants(inst);
        const auto moved = forward_constants(scaled);
        CHECK(equal_up_to_cube_root(*moved.amp_A * lambda, *base.amp_A, 1e-12));

        const auto sol = solve_theorem(inst, *base.pair);
        CHECK(verify_solution(scaled, sol, 32).verdict == Verdict::Exact);
        auto doubled = inst;
        doubled.coeffs *= 2.0;
        CHECK(verify_solution(doubled, sol, 32).verdict != Verdict::Exact);
    }
}
