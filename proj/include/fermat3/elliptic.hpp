#ifndef FERMAT3_ELLIPTIC_HPP
#define FERMAT3_ELLIPTIC_HPP

#include <array>
#include <complex>
#include <limits>
#include <vector>

namespace fermat3
{

using cd = std::complex<double>;

// Period lattice of the Weierstrass function normalized by (wp')^2 = 4 wp^3 - 1
// (invariants g2 = 0, g3 = 1). omega1 is the real period and
// omega2 = omega1 * exp(i pi / 3).
struct Lattice {
    cd omega1;
    cd omega2;
    // Area of the fundamental parallelogram spanned by omega1, omega2.
    double area = 0;

    std::array<cd, 3> half_periods() const
    {
        return {omega1 / 2.0, omega2 / 2.0, (omega1 + omega2) / 2.0};
    }
    // Smallest nonzero lattice vector length; equals |omega1| here.
    double min_period() const
    {
        return std::abs(omega1);
    }
};

struct EvaluationSettings {
    // Relative size below which Laurent terms are dropped.
    double series_tolerance = std::numeric_limits<double>::epsilon();
    // Cap on the number of nonzero Laurent terms.
    int max_terms = 40;
    // Minimum distance to the nearest lattice point.
    double pole_guard = 0;

    static EvaluationSettings defaults(const Lattice &lattice)
    {
        EvaluationSettings s;
        s.pole_guard = 1e-3 * lattice.min_period();
        return s;
    }
};

struct WpValue {
    cd p;
    cd p_prime;
};

struct CellReduction {
    cd z_red;
    long m;
    long n;
};

struct LatticePole {
    cd point;
    int multiplicity;
};

// Real root of 4 t^3 - 1, i.e. wp(omega1 / 2).
double real_branch_point();

// Builds the lattice from the real period 2 * int_{e1}^inf dt / sqrt(4t^3 - 1),
// evaluated by adaptive quadrature. Throws QuadratureError on failure.
Lattice compute_lattice();

// Process-wide copy of compute_lattice(), built once on first use.
const Lattice &equianharmonic_lattice();

// Real coordinates (x, y) with z = x * omega1 + y * omega2.
std::array<double, 2> lattice_coordinates(cd z, const Lattice &lattice);

// z = z_red + m * omega1 + n * omega2, with both lattice coordinates of
// z_red in [-1/2, 1/2).
CellReduction reduce_to_cell(cd z, const Lattice &lattice);

// Lattice point closest to z.
cd nearest_lattice_point(cd z, const Lattice &lattice);

// wp(z) and wp'(z). Throws PoleProximity if z lies within settings.pole_guard
// of a lattice point and SeriesNonConvergence if the Laurent series does not
// settle within settings.max_terms.
WpValue wp_eval(cd z, const Lattice &lattice, const EvaluationSettings &settings);
WpValue wp_eval(cd z, const Lattice &lattice);

// Laurent coefficients c_k of wp(z) = z^-2 + sum_{k>=2} c_k z^{2k-2}, for
// k = 0..count-1 (entries 0 and 1 are unused and zero).
std::vector<double> laurent_coefficients(int count);

// Lattice points of modulus <= radius, each a double pole of wp, sorted by
// modulus then argument.
std::vector<LatticePole> enumerate_poles(double radius, const Lattice &lattice);

// The two (simple) zeros of wp in the fundamental cell, found by Newton
// iteration from a seed grid. Throws ConsistencyError unless exactly two
// distinct zeros are found.
std::vector<cd> find_zeros_in_cell(const Lattice &lattice, const EvaluationSettings &settings);

} // namespace fermat3

#endif
