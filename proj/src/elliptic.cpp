#include <fermat3/elliptic.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include <fermat3/errors.hpp>
#include <fermat3/quadrature.hpp>

namespace fermat3
{

namespace
{

// Nonzero Laurent coefficients sit at k = 3, 6, 9, ... because g2 = 0.
constexpr int max_supported_terms = 100;

const std::vector<double> &coefficient_table()
{
    static const std::vector<double> table = laurent_coefficients(3 * max_supported_terms + 1);
    return table;
}

// Direct Laurent evaluation, valid for |u| well inside the radius of
// convergence |omega1|.
WpValue laurent_eval(cd u, const EvaluationSettings &settings)
{
    const auto &c = coefficient_table();
    const int terms = std::min(settings.max_terms, max_supported_terms);
    const cd w = u * u;
    const cd w3 = w * w * w;
    cd p = 1.0 / w;
    cd dp = -2.0 / (u * w);
    // pw = w^{3j - 1}
    cd pw = w * w;
    const double leading = std::abs(p);
    for (int j = 1; j <= terms; ++j) {
        const double ck = c[3 * j];
        const cd term = ck * pw;
        p += term;
        dp += (6.0 * j - 2.0) * term / u;
        if (std::abs(term) <= settings.series_tolerance * std::max(std::abs(p), leading)) {
            return {p, dp};
        }
        pw *= w3;
    }
    std::ostringstream oss;
    oss << "Laurent series for wp did not converge at u = " << u << " within " << terms << " terms";
    throw SeriesNonConvergence(oss.str());
}

} // namespace

std::vector<double> laurent_coefficients(int count)
{
    std::vector<double> c(static_cast<std::size_t>(std::max(count, 4)), 0.0);
    // c2 = g2 / 20 = 0, c3 = g3 / 28.
    c[3] = 1.0 / 28.0;
    for (std::size_t k = 4; k < c.size(); ++k) {
        double s = 0;
        for (std::size_t m = 2; m + 2 <= k; ++m) {
            s += c[m] * c[k - m];
        }
        c[k] = 3.0 * s / (static_cast<double>(2 * k + 1) * static_cast<double>(k - 3));
    }
    c.resize(static_cast<std::size_t>(count));
    return c;
}

double real_branch_point()
{
    return std::cbrt(0.25);
}

Lattice compute_lattice()
{
    const double e1 = real_branch_point();
    // t = e1 + s^2 removes the endpoint singularity, s = u / (1 - u) maps
    // [0, inf) onto [0, 1):
    // int_{e1}^inf dt / sqrt(4t^3 - 1) = int_0^1 du / ((1-u)^2 sqrt(t^2 + t e1 + e1^2)).
    const auto integrand = [e1](double u) {
        const double s = u / (1.0 - u);
        const double t = e1 + s * s;
        const double one_minus = 1.0 - u;
        return 1.0 / (one_minus * one_minus * std::sqrt(t * t + t * e1 + e1 * e1));
    };
    const auto q = integrate_gk15(integrand, 0.0, 1.0, 1e-16, 1e-15);
    const double period = 2.0 * q.value;

    Lattice lattice;
    lattice.omega1 = cd(period, 0.0);
    lattice.omega2 = lattice.omega1 * std::polar(1.0, std::numbers::pi / 3);
    lattice.area = std::abs((std::conj(lattice.omega1) * lattice.omega2).imag());

    // Self-check of the period: wp' vanishes at the half period, where the
    // bare Laurent series still converges quickly (|u| = |omega1| / 2).
    auto settings = EvaluationSettings::defaults(lattice);
    const auto half = laurent_eval(lattice.omega1 / 2.0, settings);
    const double residual = std::abs(half.p_prime) + std::abs(half.p - e1);
    if (!(residual < 1e-10)) {
        std::ostringstream oss;
        oss << "period self-check failed: omega1 = " << period << ", quadrature error estimate " << q.error_estimate
            << ", |wp'(omega1/2)| + |wp(omega1/2) - e1| = " << residual;
        throw QuadratureError(oss.str());
    }
    return lattice;
}

const Lattice &equianharmonic_lattice()
{
    static const Lattice lattice = compute_lattice();
    return lattice;
}

std::array<double, 2> lattice_coordinates(cd z, const Lattice &lattice)
{
    // Solve z = x omega1 + y omega2 using Im(conj(a) b) as the 2D cross product.
    const auto cross = [](cd a, cd b) { return (std::conj(a) * b).imag(); };
    const double det = cross(lattice.omega1, lattice.omega2);
    return {cross(z, lattice.omega2) / det, cross(lattice.omega1, z) / det};
}

CellReduction reduce_to_cell(cd z, const Lattice &lattice)
{
    const auto [x, y] = lattice_coordinates(z, lattice);
    const double m = std::floor(x + 0.5);
    const double n = std::floor(y + 0.5);
    const cd z_red = z - m * lattice.omega1 - n * lattice.omega2;
    return {z_red, static_cast<long>(m), static_cast<long>(n)};
}

cd nearest_lattice_point(cd z, const Lattice &lattice)
{
    const auto red = reduce_to_cell(z, lattice);
    cd best_offset = 0;
    double best = std::abs(red.z_red);
    for (int i = -1; i <= 1; ++i) {
        for (int j = -1; j <= 1; ++j) {
            const cd offset = static_cast<double>(i) * lattice.omega1 + static_cast<double>(j) * lattice.omega2;
            const double d = std::abs(red.z_red - offset);
            if (d < best) {
                best = d;
                best_offset = offset;
            }
        }
    }
    return static_cast<double>(red.m) * lattice.omega1 + static_cast<double>(red.n) * lattice.omega2 + best_offset;
}

WpValue wp_eval(cd z, const Lattice &lattice, const EvaluationSettings &settings)
{
    const cd pole = nearest_lattice_point(z, lattice);
    const cd u = z - pole;
    if (std::abs(u) < settings.pole_guard) {
        std::ostringstream oss;
        oss << "wp evaluation at " << z << " is within " << settings.pole_guard << " of the lattice point " << pole;
        throw PoleProximity(oss.str(), pole);
    }
    if (std::abs(u) <= 0.45 * lattice.min_period()) {
        return laurent_eval(u, settings);
    }
    // Duplication: wp(2v) = 9 wp(v)^4 / wp'(v)^2 - 2 wp(v), using wp'' = 6 wp^2.
    const auto half = laurent_eval(u / 2.0, settings);
    const cd p = half.p, q = half.p_prime;
    const cd p3 = p * p * p;
    const cd q2 = q * q;
    return {9.0 * p3 * p / q2 - 2.0 * p, 18.0 * p3 / q - 54.0 * p3 * p3 / (q2 * q) - q};
}

WpValue wp_eval(cd z, const Lattice &lattice)
{
    return wp_eval(z, lattice, EvaluationSettings::defaults(lattice));
}

std::vector<LatticePole> enumerate_poles(double radius, const Lattice &lattice)
{
    std::vector<LatticePole> poles;
    if (!(radius > 0)) {
        return poles;
    }
    // |mu omega1 + nu omega2| >= (sqrt(3)/2) |omega1| max(|mu|, |nu|) on this lattice.
    const long bound = static_cast<long>(std::ceil(radius / (0.5 * std::sqrt(3.0) * lattice.min_period()))) + 1;
    for (long mu = -bound; mu <= bound; ++mu) {
        for (long nu = -bound; nu <= bound; ++nu) {
            const cd point = static_cast<double>(mu) * lattice.omega1 + static_cast<double>(nu) * lattice.omega2;
            if (std::abs(point) <= radius) {
                poles.push_back({point, 2});
            }
        }
    }
    std::sort(poles.begin(), poles.end(), [](const LatticePole &a, const LatticePole &b) {
        const double ra = std::abs(a.point), rb = std::abs(b.point);
        if (ra != rb) {
            return ra < rb;
        }
        return std::arg(a.point) < std::arg(b.point);
    });
    return poles;
}

std::vector<cd> find_zeros_in_cell(const Lattice &lattice, const EvaluationSettings &settings)
{
    constexpr int seeds_per_side = 8;
    const double scale = lattice.min_period();
    std::vector<cd> zeros;
    for (int i = 0; i < seeds_per_side; ++i) {
        for (int j = 0; j < seeds_per_side; ++j) {
            const double x = (i + 0.5) / seeds_per_side - 0.5;
            const double y = (j + 0.5) / seeds_per_side - 0.5;
            cd z = x * lattice.omega1 + y * lattice.omega2;
            bool converged = false;
            try {
                for (int it = 0; it < 60; ++it) {
                    const auto v = wp_eval(z, lattice, settings);
                    if (std::abs(v.p_prime) < 1e-12) {
                        break;
                    }
                    const cd step = v.p / v.p_prime;
                    z -= step;
                    if (std::abs(step) < 1e-15 * scale) {
                        converged = true;
                        break;
                    }
                }
                if (!converged) {
                    converged = std::abs(wp_eval(z, lattice, settings).p) <= 1e-13;
                }
            } catch (const PoleProximity &) {
                converged = false;
            }
            if (!converged) {
                continue;
            }
            const cd candidate = reduce_to_cell(z, lattice).z_red;
            if (std::abs(wp_eval(candidate, lattice, settings).p) > 1e-12) {
                continue;
            }
            const bool seen = std::any_of(zeros.begin(), zeros.end(), [&](cd w) {
                const cd d = candidate - w;
                return std::abs(d - nearest_lattice_point(d, lattice)) < 1e-7 * scale;
            });
            if (!seen) {
                zeros.push_back(candidate);
            }
        }
    }
    if (zeros.size() != 2) {
        std::ostringstream oss;
        oss << "expected two zeros of wp in the fundamental cell, found " << zeros.size();
        throw ConsistencyError(oss.str());
    }
    for (cd z : zeros) {
        const auto v = wp_eval(z, lattice, settings);
        if (std::abs(v.p_prime) < 0.5) {
            std::ostringstream oss;
            oss << "zero of wp at " << z << " is not simple: |wp'| = " << std::abs(v.p_prime);
            throw ConsistencyError(oss.str());
        }
    }
    std::sort(zeros.begin(), zeros.end(), [](cd a, cd b) { return a.imag() > b.imag(); });
    return zeros;
}

} // namespace fermat3
