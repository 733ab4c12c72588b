#ifndef FERMAT3_SOLVER_HPP
#define FERMAT3_SOLVER_HPP

#include <array>
#include <complex>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include <fermat3/elliptic.hpp>

namespace fermat3
{

// Row 0 holds (a0, a1, a2), row 1 holds (b0, b1, b2).
using CoefficientMatrix = Eigen::Matrix<cd, 2, 3>;

// {a0 f + a1 f(z+c) + a2 f'}^3 + {b0 f + b1 f(z+c) + b2 f'}^3 = exp(alpha z + beta)
struct EquationInstance {
    CoefficientMatrix coeffs = CoefficientMatrix::Zero();
    cd alpha = 0;
    cd beta = 0;
    cd shift_c = 1;

    // Throws AssumptionViolated when c == 0.
    static EquationInstance make(const std::array<cd, 3> &a, const std::array<cd, 3> &b, cd alpha, cd beta,
                                 cd shift_c);

    cd a(int j) const
    {
        return coeffs(0, j);
    }
    cd b(int j) const
    {
        return coeffs(1, j);
    }
    // Largest coefficient magnitude.
    double scale() const;
};

// The three 2x2 minors driving the case split.
struct Minors {
    cd m01; // a0 b1 - a1 b0
    cd m12; // b1 a2 - a1 b2
    cd m02; // a0 b2 - a2 b0
};

Minors minors(const EquationInstance &inst);

// Tolerance for "minor == 0": 1e-12 * scale^2 (minors are quadratic in the
// coefficients). Exact zeros are always zero.
double minor_tolerance(const EquationInstance &inst);

struct FermatPair {
    cd c0;
    cd c1;

    // Throws std::invalid_argument unless |c0^3 + c1^3 - 1| <= 1e-10.
    static FermatPair make(cd c0, cd c1);
    double residual() const
    {
        return std::abs(c0 * c0 * c0 + c1 * c1 * c1 - 1.0);
    }
};

enum class CaseTag { Case1, Case2, Case3 };

std::string to_string(CaseTag tag);

// f(z) = A exp((alpha z + beta) / 3) + C exp(D z)
struct CandidateSolution {
    CaseTag case_tag = CaseTag::Case2;
    cd amp_A = 0;
    cd free_C = 0;
    cd rate_D = 0;
    FermatPair pair{1, 0};
    cd mu = 0;
    cd nu = 0;
    bool c_freedom = false;
    std::vector<std::string> notes;
};

struct ForwardConstants {
    cd mu;
    cd nu;
    std::optional<cd> amp_A;
    std::optional<FermatPair> pair;
};

struct CFreedom {
    bool free;
    double residual_a;
    double residual_b;
};

enum class Verdict { Exact, FailsUnlessCZero, NoExponentialSolution, Inexact };

std::string to_string(Verdict verdict);

struct VerificationReport {
    std::vector<cd> grid;
    double max_abs_residual = 0;
    double max_rel_residual = 0;
    std::map<std::string, double> constraint_flags;
    Verdict verdict = Verdict::Inexact;
    std::vector<std::string> diagnostics;
};

// Circles on which the residual is sampled.
struct SampleGrid {
    std::vector<double> radii{1.0, 5.0};
    // Angular offset of the first sample, as a fraction of the spacing.
    double phase = 0.0;
};

inline constexpr double exact_relative_tolerance = 1e-8;

bool validate_rank(const EquationInstance &inst);

// Throws AssumptionViolated on rank deficiency.
CaseTag classify(const EquationInstance &inst);

// mu = a0 + a1 exp(alpha c / 3) + a2 alpha / 3 and nu likewise; when
// mu^3 + nu^3 != 0, A is the principal (mu^3 + nu^3)^{-1/3} and the pair is
// (A mu, A nu).
ForwardConstants forward_constants(const EquationInstance &inst);

// Case-dependent closed forms for A (and D in case 3) in terms of the pair.
// A nonzero requested_C is kept only when the C-freedom condition holds.
// Throws AssumptionViolated or DegenerateCase3.
CandidateSolution solve_theorem(const EquationInstance &inst, const FermatPair &pair, cd requested_C = 0);

// Relative gap between the closed-form A of the instance's case and the
// forward A. Throws std::invalid_argument if no forward pair exists.
double paper_formula_crosscheck(const EquationInstance &inst);

CFreedom c_freedom_check(const EquationInstance &inst, cd rate_D);

// Samples L(z) - exp(alpha z + beta) on grid_size points per circle.
VerificationReport verify_solution(const EquationInstance &inst, const CandidateSolution &sol, int grid_size,
                                   const SampleGrid &grid = {});

// Left-hand side of the equation at z for the candidate (exposed for tests).
cd equation_lhs(const EquationInstance &inst, const CandidateSolution &sol, cd z);

} // namespace fermat3

#endif
