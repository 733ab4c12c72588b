#include <fermat3/solver.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include <fermat3/errors.hpp>

namespace fermat3
{

namespace
{

bool is_zero(cd value, double tol)
{
    return value == cd(0) || std::abs(value) <= tol;
}

cd principal_cbrt(cd z)
{
    if (z == cd(0)) {
        return 0;
    }
    return std::polar(std::cbrt(std::abs(z)), std::arg(z) / 3.0);
}

std::string format_complex(cd z)
{
    std::ostringstream oss;
    oss.precision(17);
    oss << z.real() << (z.imag() < 0 ? "-" : "+") << std::abs(z.imag()) << "i";
    return oss.str();
}

// Both residuals of the C-freedom condition as complex numbers.
std::pair<cd, cd> freedom_residuals(const EquationInstance &inst, cd rate_D)
{
    const cd w = std::exp(rate_D * inst.shift_c);
    return {inst.a(0) + inst.a(1) * w + inst.a(2) * rate_D, inst.b(0) + inst.b(1) * w + inst.b(2) * rate_D};
}

} // namespace

EquationInstance EquationInstance::make(const std::array<cd, 3> &a, const std::array<cd, 3> &b, cd alpha, cd beta,
                                        cd shift_c)
{
    if (shift_c == cd(0)) {
        throw AssumptionViolated("the shift c must be nonzero");
    }
    EquationInstance inst;
    for (int j = 0; j < 3; ++j) {
        inst.coeffs(0, j) = a[static_cast<std::size_t>(j)];
        inst.coeffs(1, j) = b[static_cast<std::size_t>(j)];
    }
    inst.alpha = alpha;
    inst.beta = beta;
    inst.shift_c = shift_c;
    return inst;
}

double EquationInstance::scale() const
{
    return coeffs.cwiseAbs().maxCoeff();
}

Minors minors(const EquationInstance &inst)
{
    return {inst.a(0) * inst.b(1) - inst.a(1) * inst.b(0), inst.b(1) * inst.a(2) - inst.a(1) * inst.b(2),
            inst.a(0) * inst.b(2) - inst.a(2) * inst.b(0)};
}

double minor_tolerance(const EquationInstance &inst)
{
    const double s = inst.scale();
    return 1e-12 * s * s;
}

FermatPair FermatPair::make(cd c0, cd c1)
{
    FermatPair pair{c0, c1};
    if (!(pair.residual() <= 1e-10)) {
        std::ostringstream oss;
        oss << "(c0, c1) = (" << format_complex(c0) << ", " << format_complex(c1)
            << ") violates c0^3 + c1^3 = 1: residual " << pair.residual();
        throw std::invalid_argument(oss.str());
    }
    return pair;
}

std::string to_string(CaseTag tag)
{
    switch (tag) {
    case CaseTag::Case1:
        return "Case1";
    case CaseTag::Case2:
        return "Case2";
    case CaseTag::Case3:
        return "Case3";
    }
    return "unknown";
}

std::string to_string(Verdict verdict)
{
    switch (verdict) {
    case Verdict::Exact:
        return "Exact";
    case Verdict::FailsUnlessCZero:
        return "FailsUnlessCZero";
    case Verdict::NoExponentialSolution:
        return "NoExponentialSolution";
    case Verdict::Inexact:
        return "Inexact";
    }
    return "unknown";
}

bool validate_rank(const EquationInstance &inst)
{
    const auto m = minors(inst);
    const double tol = minor_tolerance(inst);
    return !(is_zero(m.m01, tol) && is_zero(m.m12, tol) && is_zero(m.m02, tol));
}

CaseTag classify(const EquationInstance &inst)
{
    if (!validate_rank(inst)) {
        throw AssumptionViolated("coefficient matrix has rank < 2");
    }
    const auto m = minors(inst);
    const double tol = minor_tolerance(inst);
    if (!is_zero(m.m12, tol)) {
        return CaseTag::Case3;
    }
    if (!is_zero(m.m01, tol)) {
        return CaseTag::Case2;
    }
    if (is_zero(m.m02, tol)) {
        throw ConsistencyError("case 1 requires a0 b2 - a2 b0 != 0");
    }
    return CaseTag::Case1;
}

ForwardConstants forward_constants(const EquationInstance &inst)
{
    const cd shift_factor = std::exp(inst.alpha * inst.shift_c / 3.0);
    const cd slope = inst.alpha / 3.0;
    ForwardConstants out;
    out.mu = inst.a(0) + inst.a(1) * shift_factor + inst.a(2) * slope;
    out.nu = inst.b(0) + inst.b(1) * shift_factor + inst.b(2) * slope;
    const cd sum = out.mu * out.mu * out.mu + out.nu * out.nu * out.nu;
    const double size = std::max(std::abs(out.mu), std::abs(out.nu));
    if (is_zero(sum, 1e-12 * size * size * size)) {
        return out;
    }
    const cd amp = 1.0 / principal_cbrt(sum);
    out.amp_A = amp;
    out.pair = FermatPair{amp * out.mu, amp * out.nu};
    return out;
}

CFreedom c_freedom_check(const EquationInstance &inst, cd rate_D)
{
    const auto [ra, rb] = freedom_residuals(inst, rate_D);
    const double size = inst.scale() * std::max({1.0, std::abs(std::exp(rate_D * inst.shift_c)), std::abs(rate_D)});
    const double tol = 1e-10 * size;
    return {std::abs(ra) <= tol && std::abs(rb) <= tol, std::abs(ra), std::abs(rb)};
}

CandidateSolution solve_theorem(const EquationInstance &inst, const FermatPair &pair, cd requested_C)
{
    CandidateSolution sol;
    sol.case_tag = classify(inst);
    sol.pair = pair;
    const auto fwd = forward_constants(inst);
    sol.mu = fwd.mu;
    sol.nu = fwd.nu;
    const auto m = minors(inst);
    const cd c0 = pair.c0, c1 = pair.c1;

    switch (sol.case_tag) {
    case CaseTag::Case1:
        sol.amp_A = (inst.b(2) * c0 - inst.a(2) * c1) / m.m02;
        break;
    case CaseTag::Case2:
        sol.amp_A = (inst.b(1) * c0 - inst.a(1) * c1) / m.m01;
        break;
    case CaseTag::Case3: {
        sol.rate_D = (inst.a(1) * inst.b(0) - inst.a(0) * inst.b(1)) / m.m12 + cd(0.0);
        const cd gap = inst.alpha - 3.0 * sol.rate_D;
        if (std::abs(gap) <= 1e-12) {
            std::ostringstream oss;
            oss << "case 3 with alpha = 3D (D = " << format_complex(sol.rate_D)
                << "): the amplitude formula is undefined";
            throw DegenerateCase3(oss.str());
        }
        sol.amp_A = 3.0 * (inst.b(1) * c0 - inst.a(1) * c1) / (m.m12 * gap);
        const auto freedom = c_freedom_check(inst, sol.rate_D);
        sol.c_freedom = freedom.free;
        break;
    }
    }

    if (requested_C != cd(0)) {
        if (sol.c_freedom) {
            sol.free_C = requested_C;
        } else {
            const auto [ra, rb] = freedom_residuals(inst, sol.rate_D);
            std::ostringstream oss;
            oss << "requested C = " << format_complex(requested_C)
                << " rejected: C exp(Dz) does not cancel (residual_a = " << std::abs(ra)
                << ", residual_b = " << std::abs(rb) << "); emitting the C = 0 member";
            sol.notes.push_back(oss.str());
        }
    }

    const double s = std::sqrt(3.0) / 2.0;
    sol.notes.push_back("alternate amplitudes (other cube roots): " + format_complex(sol.amp_A * cd(-0.5, s)) + ", "
                        + format_complex(sol.amp_A * cd(-0.5, -s)));
    return sol;
}

double paper_formula_crosscheck(const EquationInstance &inst)
{
    const auto fwd = forward_constants(inst);
    if (!fwd.pair || !fwd.amp_A) {
        throw std::invalid_argument("instance has mu^3 + nu^3 = 0; no forward pair to cross-check");
    }
    const auto sol = solve_theorem(inst, *fwd.pair);
    return std::abs(sol.amp_A - *fwd.amp_A) / std::abs(*fwd.amp_A);
}

cd equation_lhs(const EquationInstance &inst, const CandidateSolution &sol, cd z)
{
    const cd shifted = z + inst.shift_c;
    const cd exp_here = std::exp((inst.alpha * z + inst.beta) / 3.0);
    const cd exp_there = std::exp((inst.alpha * shifted + inst.beta) / 3.0);
    const cd hom_here = sol.free_C == cd(0) ? cd(0) : sol.free_C * std::exp(sol.rate_D * z);
    const cd hom_there = sol.free_C == cd(0) ? cd(0) : sol.free_C * std::exp(sol.rate_D * shifted);

    Eigen::Vector3cd basis;
    basis << sol.amp_A * exp_here + hom_here, sol.amp_A * exp_there + hom_there,
        sol.amp_A * (inst.alpha / 3.0) * exp_here + sol.rate_D * hom_here;
    const Eigen::Vector2cd rows = inst.coeffs * basis;
    return rows(0) * rows(0) * rows(0) + rows(1) * rows(1) * rows(1);
}

namespace
{

struct ResidualSweep {
    double max_abs = 0;
    double max_rel = 0;
};

ResidualSweep sweep(const EquationInstance &inst, const CandidateSolution &sol, const std::vector<cd> &points)
{
    ResidualSweep out;
    for (cd z : points) {
        const cd rhs = std::exp(inst.alpha * z + inst.beta);
        const double err = std::abs(equation_lhs(inst, sol, z) - rhs);
        out.max_abs = std::max(out.max_abs, err);
        out.max_rel = std::max(out.max_rel, err / std::abs(rhs));
    }
    return out;
}

} // namespace

VerificationReport verify_solution(const EquationInstance &inst, const CandidateSolution &sol, int grid_size,
                                   const SampleGrid &grid)
{
    if (grid_size < 16) {
        throw std::invalid_argument("verification grid needs at least 16 points per circle");
    }
    if (grid.radii.empty()) {
        throw std::invalid_argument("verification grid needs at least one radius");
    }
    VerificationReport report;

    // Keep every exponent (including the cubes) well inside double range.
    std::vector<double> radii = grid.radii;
    const double r_max = *std::max_element(radii.begin(), radii.end());
    const double rate = std::max(std::abs(inst.alpha), 3.0 * std::abs(sol.rate_D));
    constexpr double exponent_budget = 600.0;
    const double budget = exponent_budget - std::abs(inst.beta.real());
    if (rate * (r_max + std::abs(inst.shift_c)) > budget) {
        const double allowed = budget / rate - std::abs(inst.shift_c);
        if (!(allowed > 0)) {
            throw std::overflow_error("exponentials overflow for every sampling radius; shrink alpha, D or c");
        }
        for (auto &r : radii) {
            r *= allowed / r_max;
        }
        std::ostringstream oss;
        oss << "grid rescaled by " << allowed / r_max << " to avoid overflow of the exponentials";
        report.diagnostics.push_back(oss.str());
    }

    for (double r : radii) {
        for (int k = 0; k < grid_size; ++k) {
            const double theta = 2.0 * std::numbers::pi * (k + grid.phase) / grid_size;
            report.grid.push_back(std::polar(r, theta));
        }
    }

    const auto [ra, rb] = freedom_residuals(inst, sol.rate_D);
    report.constraint_flags["residual_a"] = std::abs(ra);
    report.constraint_flags["residual_b"] = std::abs(rb);
    report.constraint_flags["fermat_pair"] = sol.pair.residual();
    report.constraint_flags["pair_c0_vs_A_mu"] = std::abs(sol.pair.c0 - sol.amp_A * sol.mu);
    report.constraint_flags["pair_c1_vs_A_nu"] = std::abs(sol.pair.c1 - sol.amp_A * sol.nu);

    const auto full = sweep(inst, sol, report.grid);
    report.max_abs_residual = full.max_abs;
    report.max_rel_residual = full.max_rel;
    if (full.max_rel <= exact_relative_tolerance) {
        report.verdict = Verdict::Exact;
        return report;
    }

    if (sol.free_C != cd(0) && !sol.c_freedom) {
        auto reduced = sol;
        reduced.free_C = 0;
        const auto retry = sweep(inst, reduced, report.grid);
        report.constraint_flags["c_zero_max_rel_residual"] = retry.max_rel;
        if (retry.max_rel <= exact_relative_tolerance) {
            report.verdict = Verdict::FailsUnlessCZero;
            report.diagnostics.push_back("candidate is exact only with C = 0 (residual_a = "
                                         + std::to_string(std::abs(ra)) + ")");
            return report;
        }
    }

    const auto fwd = forward_constants(inst);
    report.verdict = fwd.amp_A ? Verdict::Inexact : Verdict::NoExponentialSolution;
    return report;
}

} // namespace fermat3
