#include <fermat3/nevanlinna.hpp>

#include <algorithm>
#include <cmath>
#include <future>
#include <numbers>
#include <optional>
#include <sstream>
#include <stdexcept>

#include <Eigen/Dense>

#include <fermat3/errors.hpp>

namespace fermat3
{

MeromorphicEvaluator exp_evaluator()
{
    return {[](cd z) { return std::exp(z); }, [](double) { return std::vector<Pole>{}; }, "exp", 0.0};
}

MeromorphicEvaluator constant_evaluator(cd value)
{
    std::ostringstream label;
    label << "constant " << value;
    return {[value](cd) { return value; }, [](double) { return std::vector<Pole>{}; }, label.str(), 0.0};
}

MeromorphicEvaluator wp_evaluator(const Lattice &lattice)
{
    const auto settings = EvaluationSettings::defaults(lattice);
    return {[lattice, settings](cd z) { return wp_eval(z, lattice, settings).p; },
            [lattice](double r) {
                std::vector<Pole> poles;
                for (const auto &lp : enumerate_poles(r, lattice)) {
                    poles.push_back({lp.point, lp.multiplicity});
                }
                return poles;
            },
            "wp", 0.005 * lattice.min_period()};
}

MeromorphicEvaluator rational_evaluator(std::function<cd(cd)> evaluate, std::vector<Pole> poles, std::string label)
{
    return {std::move(evaluate),
            [poles = std::move(poles)](double r) {
                std::vector<Pole> inside;
                std::copy_if(poles.begin(), poles.end(), std::back_inserter(inside),
                             [r](const Pole &p) { return std::abs(p.point) <= r; });
                return inside;
            },
            std::move(label), 0.0};
}

MeromorphicEvaluator shifted(const MeromorphicEvaluator &f, cd c)
{
    auto eval = f.evaluate;
    auto poles = f.known_poles;
    std::ostringstream label;
    label << f.label << "(z + " << c << ")";
    return {[eval, c](cd z) { return eval(z + c); },
            [poles, c](double r) {
                std::vector<Pole> out;
                for (const auto &p : poles(r + std::abs(c))) {
                    const cd moved = p.point - c;
                    if (std::abs(moved) <= r) {
                        out.push_back({moved, p.multiplicity});
                    }
                }
                return out;
            },
            label.str(), f.circle_margin};
}

MeromorphicEvaluator polynomial_in(const MeromorphicEvaluator &f, std::vector<cd> coeffs)
{
    if (coeffs.size() < 2 || coeffs.back() == cd(0)) {
        throw std::invalid_argument("polynomial composition needs degree >= 1 with nonzero leading coefficient");
    }
    const int degree = static_cast<int>(coeffs.size()) - 1;
    auto eval = f.evaluate;
    auto poles = f.known_poles;
    return {[eval, coeffs](cd z) {
                const cd v = eval(z);
                cd acc = 0;
                for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) {
                    acc = acc * v + *it;
                }
                return acc;
            },
            [poles, degree](double r) {
                auto out = poles(r);
                for (auto &p : out) {
                    p.multiplicity *= degree;
                }
                return out;
            },
            "poly_deg" + std::to_string(degree) + "(" + f.label + ")", f.circle_margin};
}

namespace
{

double log_plus_abs(const MeromorphicEvaluator &f, double r, double theta)
{
    const cd z = std::polar(r, theta);
    cd v;
    try {
        v = f.evaluate(z);
    } catch (const PoleProximity &e) {
        std::ostringstream oss;
        oss << "circle |z| = " << r << " of " << f.label << " hits a pole: " << e.what();
        throw CircleNearPole(oss.str(), r, e.lattice_point());
    }
    const double a = std::abs(v);
    if (!std::isfinite(a)) {
        std::ostringstream oss;
        oss << "non-finite value of " << f.label << " at " << z;
        throw CircleNearPole(oss.str(), r, z);
    }
    return a > 1.0 ? std::log(a) : 0.0;
}

} // namespace

double proximity(const MeromorphicEvaluator &f, double r, int n_theta, const ProximityOptions &options)
{
    if (!(r > 0)) {
        throw std::invalid_argument("proximity needs r > 0");
    }
    if (n_theta < 256) {
        throw std::invalid_argument("proximity needs at least 256 angular nodes");
    }
    if (f.circle_margin > 0) {
        for (const auto &p : f.known_poles(r + f.circle_margin)) {
            if (std::abs(std::abs(p.point) - r) < f.circle_margin) {
                std::ostringstream oss;
                oss << "circle |z| = " << r << " passes within " << f.circle_margin << " of the pole " << p.point
                    << " of " << f.label;
                throw CircleNearPole(oss.str(), r, p.point);
            }
        }
    }

    const double two_pi = 2.0 * std::numbers::pi;
    long n = n_theta;
    double sum = 0;
    for (long k = 0; k < n; ++k) {
        sum += log_plus_abs(f, r, two_pi * static_cast<double>(k) / static_cast<double>(n));
    }
    double estimate = sum / static_cast<double>(n);
    int settled = 0;
    while (n < options.max_points) {
        // New nodes are the midpoints of the current ones.
        double fresh = 0;
        for (long k = 0; k < n; ++k) {
            fresh += log_plus_abs(f, r, two_pi * (static_cast<double>(k) + 0.5) / static_cast<double>(n));
        }
        sum += fresh;
        n *= 2;
        const double refined = sum / static_cast<double>(n);
        const bool close = std::abs(refined - estimate) < std::max(options.rel_tol * std::abs(refined), options.abs_tol);
        estimate = refined;
        settled = close ? settled + 1 : 0;
        // Two agreeing refinements in a row guard against a lucky first match.
        if (settled >= 2) {
            return estimate;
        }
    }
    std::ostringstream oss;
    oss << "proximity of " << f.label << " at r = " << r << " did not settle with " << n << " nodes";
    throw QuadratureError(oss.str());
}

double counting(const MeromorphicEvaluator &f, double r)
{
    double total = 0;
    for (const auto &p : f.known_poles(r)) {
        const double modulus = std::abs(p.point);
        if (modulus == 0.0) {
            total += p.multiplicity * std::log(r);
        } else if (modulus <= r) {
            total += p.multiplicity * std::log(r / modulus);
        }
    }
    return total;
}

NevanlinnaCurve characteristic_curve(const MeromorphicEvaluator &f, std::vector<double> r_grid, int n_theta,
                                     const ProximityOptions &options)
{
    std::sort(r_grid.begin(), r_grid.end());
    r_grid.erase(std::unique(r_grid.begin(), r_grid.end()), r_grid.end());

    struct Outcome {
        std::optional<CurveSample> sample;
        std::string note;
    };
    std::vector<std::future<Outcome>> jobs;
    jobs.reserve(r_grid.size());
    for (double r : r_grid) {
        jobs.push_back(std::async(std::launch::async, [&f, r, n_theta, &options]() -> Outcome {
            try {
                const double m = proximity(f, r, n_theta, options);
                const double N = counting(f, r);
                return {CurveSample{r, m, N, m + N}, {}};
            } catch (const CircleNearPole &e) {
                return {std::nullopt, std::string("r = ") + std::to_string(r) + " removed: " + e.what()};
            }
        }));
    }

    NevanlinnaCurve curve;
    for (auto &job : jobs) {
        auto outcome = job.get();
        if (outcome.sample) {
            curve.samples.push_back(*outcome.sample);
        } else {
            curve.notes.push_back(std::move(outcome.note));
        }
    }
    for (std::size_t i = 1; i < curve.samples.size(); ++i) {
        const auto &prev = curve.samples[i - 1];
        const auto &cur = curve.samples[i];
        if (cur.T < prev.T - 1e-6) {
            std::ostringstream oss;
            oss << "T decreases from " << prev.T << " at r = " << prev.r << " to " << cur.T << " at r = " << cur.r;
            curve.notes.push_back(oss.str());
        }
    }
    return curve;
}

std::vector<RatioSample> wp_asymptotic_check(const NevanlinnaCurve &curve, const Lattice &lattice)
{
    std::vector<RatioSample> out;
    out.reserve(curve.samples.size());
    for (const auto &s : curve.samples) {
        out.push_back({s.r, s.T * lattice.area / (std::numbers::pi * s.r * s.r)});
    }
    return out;
}

bool ratios_in_band(const std::vector<RatioSample> &ratios, double r_from, double lo, double hi)
{
    return std::all_of(ratios.begin(), ratios.end(),
                       [&](const RatioSample &s) { return s.r < r_from || (s.ratio >= lo && s.ratio <= hi); });
}

bool ratio_trend_non_increasing(const std::vector<RatioSample> &ratios, double slack)
{
    std::vector<double> dev;
    dev.reserve(ratios.size());
    for (const auto &s : ratios) {
        dev.push_back(std::abs(s.ratio - 1.0));
    }
    if (dev.size() < 3) {
        for (std::size_t i = 1; i < dev.size(); ++i) {
            if (dev[i] > dev[i - 1] + slack) {
                return false;
            }
        }
        return true;
    }
    std::vector<double> avg;
    for (std::size_t i = 0; i + 2 < dev.size(); ++i) {
        avg.push_back((dev[i] + dev[i + 1] + dev[i + 2]) / 3.0);
    }
    for (std::size_t i = 1; i < avg.size(); ++i) {
        if (avg[i] > avg[i - 1] + slack) {
            return false;
        }
    }
    return true;
}

OrderEstimate order_estimate(const NevanlinnaCurve &curve)
{
    std::vector<CurveSample> positive;
    std::copy_if(curve.samples.begin(), curve.samples.end(), std::back_inserter(positive),
                 [](const CurveSample &s) { return s.T > 0; });
    std::sort(positive.begin(), positive.end(), [](const auto &a, const auto &b) { return a.r < b.r; });

    OrderEstimate est{0.0, {0.0, 0.0}, 1.0, {}};
    if (positive.empty()) {
        if (!curve.samples.empty()) {
            est.fit_range = {curve.samples.front().r, curve.samples.back().r};
        }
        est.notes.push_back("T <= 0 on every sample: bounded function, order 0");
        return est;
    }
    if (positive.size() < 6) {
        throw std::invalid_argument("order estimate needs at least six samples with T > 0");
    }

    const std::size_t first = positive.size() / 2;
    const auto count = static_cast<Eigen::Index>(positive.size() - first);
    Eigen::MatrixXd design(count, 2);
    Eigen::VectorXd target(count);
    for (Eigen::Index i = 0; i < count; ++i) {
        const auto &s = positive[first + static_cast<std::size_t>(i)];
        design(i, 0) = 1.0;
        design(i, 1) = std::log(s.r);
        target(i) = std::log(s.T);
    }
    const Eigen::Vector2d fit = design.colPivHouseholderQr().solve(target);
    const Eigen::VectorXd residual = target - design * fit;
    const double ss_res = residual.squaredNorm();
    const double ss_tot = (target.array() - target.mean()).square().sum();

    est.rho_hat = fit(1);
    est.fit_range = {positive[first].r, positive.back().r};
    est.fit_quality = ss_tot > 0 ? std::clamp(1.0 - ss_res / ss_tot, 0.0, 1.0) : 1.0;
    if (est.rho_hat < 0) {
        std::ostringstream oss;
        oss << "negative fitted slope " << est.rho_hat << " clamped to 0";
        est.notes.push_back(oss.str());
        est.rho_hat = 0;
    }
    return est;
}

std::vector<std::string> probe_pole_bookkeeping(const MeromorphicEvaluator &f, double r, std::size_t max_poles)
{
    constexpr double offset = 1e-2;
    std::vector<std::string> out;
    auto poles = f.known_poles(r);
    if (poles.size() > max_poles) {
        poles.resize(max_poles);
    }
    for (const auto &p : poles) {
        const cd z = p.point + std::polar(offset, 0.3);
        double size = 0;
        try {
            size = std::abs(f.evaluate(z));
        } catch (const PoleProximity &) {
            continue;
        } catch (const PoleOfParametrization &) {
            continue;
        }
        // A pole of order m gives |f| ~ offset^-m; ask for half of that exponent.
        const double expected = std::pow(offset, -0.5 * p.multiplicity);
        if (!(size >= expected)) {
            std::ostringstream oss;
            oss << "declared pole " << p.point << " (multiplicity " << p.multiplicity << ") of " << f.label
                << " looks regular: |f| = " << size << " at distance " << offset;
            out.push_back(oss.str());
        }
    }
    return out;
}

namespace
{

struct Paired {
    std::vector<CurveSample> base;
    std::vector<CurveSample> other;
};

// Keeps the radii admissible on both curves.
Paired pair_up(const NevanlinnaCurve &a, const NevanlinnaCurve &b)
{
    Paired out;
    std::size_t j = 0;
    for (const auto &s : a.samples) {
        while (j < b.samples.size() && b.samples[j].r < s.r) {
            ++j;
        }
        if (j < b.samples.size() && b.samples[j].r == s.r) {
            out.base.push_back(s);
            out.other.push_back(b.samples[j]);
        }
    }
    return out;
}

} // namespace

LemmaReport lemma_checks(const MeromorphicEvaluator &f, const LemmaParams &params, const std::vector<double> &r_grid,
                         int n_theta)
{
    LemmaReport report;
    const auto base_curve = characteristic_curve(f, r_grid, n_theta);
    const double r_max = r_grid.empty() ? 0.0 : *std::max_element(r_grid.begin(), r_grid.end());

    if (const auto *shift = std::get_if<ShiftParams>(&params)) {
        report.mode = "shift";
        const auto g = shifted(f, shift->shift);
        const auto other_curve = characteristic_curve(g, r_grid, n_theta);
        report.diagnostics = probe_pole_bookkeeping(g, r_max);
        const auto paired = pair_up(base_curve, other_curve);
        report.rho_hat = order_estimate(base_curve).rho_hat;
        const double exponent = report.rho_hat - 1.0 + lemma_epsilon;
        for (std::size_t i = 0; i < paired.base.size(); ++i) {
            const double diff = std::abs(paired.other[i].T - paired.base[i].T);
            report.max_abs_difference = std::max(report.max_abs_difference, diff);
            report.statistic = std::max(report.statistic, diff / std::pow(paired.base[i].r, exponent));
        }
        report.base = paired.base;
        report.transformed = paired.other;
    } else {
        const auto &poly = std::get<PolynomialCompParams>(params);
        report.mode = "polynomial_comp";
        const auto g = polynomial_in(f, poly.coeffs);
        const double degree = static_cast<double>(poly.coeffs.size() - 1);
        const auto other_curve = characteristic_curve(g, r_grid, n_theta);
        report.diagnostics = probe_pole_bookkeeping(g, r_max);
        const auto paired = pair_up(base_curve, other_curve);
        if (paired.base.size() >= 6) {
            report.rho_hat = order_estimate(base_curve).rho_hat;
        }
        for (std::size_t i = paired.base.size() / 2; i < paired.base.size(); ++i) {
            const double diff = std::abs(paired.other[i].T - degree * paired.base[i].T);
            report.max_abs_difference = std::max(report.max_abs_difference, diff);
            report.statistic = std::max(report.statistic, diff / paired.base[i].T);
        }
        report.base = paired.base;
        report.transformed = paired.other;
    }
    for (const auto &note : base_curve.notes) {
        report.diagnostics.push_back(note);
    }
    return report;
}

} // namespace fermat3
