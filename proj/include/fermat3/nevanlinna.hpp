#ifndef FERMAT3_NEVANLINNA_HPP
#define FERMAT3_NEVANLINNA_HPP

#include <complex>
#include <functional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <fermat3/elliptic.hpp>

namespace fermat3
{

struct Pole {
    cd point;
    int multiplicity;
};

// A meromorphic function given by point evaluation plus analytically known
// poles. known_poles(r) must return every pole with |p| <= r.
struct MeromorphicEvaluator {
    std::function<cd(cd)> evaluate;
    std::function<std::vector<Pole>(double)> known_poles;
    std::string label;
    // Radii passing closer than this to a pole are rejected.
    double circle_margin = 0;
};

MeromorphicEvaluator exp_evaluator();
MeromorphicEvaluator constant_evaluator(cd value);
// wp on the given lattice, with circle margin 0.005 |omega1|.
MeromorphicEvaluator wp_evaluator(const Lattice &lattice);
// A rational function numerator / prod (z - pole) with the listed poles.
MeromorphicEvaluator rational_evaluator(std::function<cd(cd)> evaluate, std::vector<Pole> poles, std::string label);
// f(z + c), with poles moved to p - c.
MeromorphicEvaluator shifted(const MeromorphicEvaluator &f, cd c);
// sum_j coeffs[j] f^j with constant coefficients; pole orders scale by the degree.
MeromorphicEvaluator polynomial_in(const MeromorphicEvaluator &f, std::vector<cd> coeffs);

struct ProximityOptions {
    double rel_tol = 1e-4;
    double abs_tol = 1e-8;
    long max_points = 1L << 22;
};

// m(r, f) = (1 / 2pi) int log+ |f(r e^{it})| dt by trapezoid refinement
// starting at n_theta nodes. Throws CircleNearPole and QuadratureError.
double proximity(const MeromorphicEvaluator &f, double r, int n_theta = 256, const ProximityOptions &options = {});

// N(r, f) = n(0) log r + sum_{0 < |p| <= r} mult * log(r / |p|).
double counting(const MeromorphicEvaluator &f, double r);

struct CurveSample {
    double r;
    double m;
    double N;
    double T;
};

struct NevanlinnaCurve {
    std::vector<CurveSample> samples;
    std::vector<std::string> notes;
};

// T = m + N on each admissible radius, sorted by r. Rejected radii and
// monotonicity violations are recorded in notes.
NevanlinnaCurve characteristic_curve(const MeromorphicEvaluator &f, std::vector<double> r_grid, int n_theta = 256,
                                     const ProximityOptions &options = {});

struct RatioSample {
    double r;
    double ratio;
};

// ratio(r) = T(r, wp) A / (pi r^2).
std::vector<RatioSample> wp_asymptotic_check(const NevanlinnaCurve &curve, const Lattice &lattice);

// All ratios at r >= r_from lie in [lo, hi].
bool ratios_in_band(const std::vector<RatioSample> &ratios, double r_from = 10.0, double lo = 0.85, double hi = 1.15);

// The 3-point moving average of |ratio - 1| never rises by more than slack.
bool ratio_trend_non_increasing(const std::vector<RatioSample> &ratios, double slack = 0.02);

struct OrderEstimate {
    double rho_hat;
    std::pair<double, double> fit_range;
    double fit_quality;
    std::vector<std::string> notes;
};

// Least-squares slope of log T against log r over the upper half of the
// samples (by r). Needs at least six samples.
OrderEstimate order_estimate(const NevanlinnaCurve &curve);

struct ShiftParams {
    cd shift;
};

struct PolynomialCompParams {
    // Constant coefficients a_0..a_p, a_p != 0.
    std::vector<cd> coeffs;
};

using LemmaParams = std::variant<ShiftParams, PolynomialCompParams>;

struct LemmaReport {
    std::string mode;
    // shift: max |T(r, f_c) - T(r, f)| / r^{rho - 1 + 0.1};
    // polynomial_comp: max |T(r, A_f) - p T(r, f)| / T(r, f) over the top half.
    double statistic = 0;
    // shift: max |T(r, f_c) - T(r, f)|.
    double max_abs_difference = 0;
    double rho_hat = 0;
    std::vector<CurveSample> base;
    std::vector<CurveSample> transformed;
    std::vector<std::string> diagnostics;
};

inline constexpr double lemma_epsilon = 0.1;

LemmaReport lemma_checks(const MeromorphicEvaluator &f, const LemmaParams &params, const std::vector<double> &r_grid,
                         int n_theta = 256);

// Evaluates f just off each declared pole up to radius r and reports poles
// where |f| is not large.
std::vector<std::string> probe_pole_bookkeeping(const MeromorphicEvaluator &f, double r, std::size_t max_poles = 32);

} // namespace fermat3

#endif
