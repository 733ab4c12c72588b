#ifndef FERMAT3_QUADRATURE_HPP
#define FERMAT3_QUADRATURE_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <queue>
#include <sstream>
#include <vector>

#include <fermat3/errors.hpp>

namespace fermat3
{

struct QuadratureResult {
    double value;
    double error_estimate;
    std::size_t intervals;
};

namespace detail
{

// Gauss-Kronrod 7-15 nodes on [-1, 1] (positive half, node 0 last).
inline constexpr std::array<double, 8> gk15_nodes
    = {0.991455371120812639206854697526329, 0.949107912342758524526189684047851, 0.864864423359769072789712788640926,
       0.741531185599394439863864773280788, 0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
       0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> gk15_weights
    = {0.022935322010529224963732008058970, 0.063092092629978553290700663189204, 0.104790010322250183839876322541518,
       0.140653259715525918745189590510238, 0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
       0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
// Gauss 7-point weights for the odd-indexed Kronrod nodes (1, 3, 5, 7).
inline constexpr std::array<double, 4> g7_weights
    = {0.129484966168869693270611432679082, 0.279705391489276667901467771423780, 0.381830050505118944950369775488975,
       0.417959183673469387755102040816327};

struct Segment {
    double a, b, value, error;
    bool operator<(const Segment &other) const
    {
        return error < other.error;
    }
};

template <typename F>
Segment gk15_segment(const F &f, double a, double b)
{
    const double center = 0.5 * (a + b), half = 0.5 * (b - a);
    const double fc = f(center);
    double kronrod = fc * gk15_weights[7];
    double gauss = fc * g7_weights[3];
    for (std::size_t i = 0; i < 7; ++i) {
        const double dx = half * gk15_nodes[i];
        const double sum = f(center - dx) + f(center + dx);
        kronrod += gk15_weights[i] * sum;
        if (i % 2 == 1) {
            gauss += g7_weights[i / 2] * sum;
        }
    }
    return {a, b, kronrod * half, std::abs((kronrod - gauss) * half)};
}

} // namespace detail

// Globally adaptive Gauss-Kronrod quadrature of a real integrand on [a, b].
// Bisects the segment with the largest error estimate until the summed
// estimate drops below max(abs_tol, rel_tol * |value|).
template <typename F>
QuadratureResult integrate_gk15(const F &f, double a, double b, double abs_tol = 1e-15, double rel_tol = 1e-14,
                                std::size_t max_intervals = 2000)
{
    std::priority_queue<detail::Segment> heap;
    heap.push(detail::gk15_segment(f, a, b));
    double value = heap.top().value, error = heap.top().error;
    while (error > std::max(abs_tol, rel_tol * std::abs(value))) {
        if (heap.size() >= max_intervals) {
            std::ostringstream oss;
            oss << "adaptive quadrature on [" << a << ", " << b << "] did not converge: value " << value
                << ", error estimate " << error << " after " << heap.size() << " intervals";
            throw QuadratureError(oss.str());
        }
        const auto worst = heap.top();
        heap.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        const auto left = detail::gk15_segment(f, worst.a, mid);
        const auto right = detail::gk15_segment(f, mid, worst.b);
        heap.push(left);
        heap.push(right);
        value += left.value + right.value - worst.value;
        error += left.error + right.error - worst.error;
    }
    // Re-sum to shed the drift of the running updates.
    std::vector<detail::Segment> segments;
    segments.reserve(heap.size());
    while (!heap.empty()) {
        segments.push_back(heap.top());
        heap.pop();
    }
    std::sort(segments.begin(), segments.end(), [](const auto &x, const auto &y) { return x.a < y.a; });
    double total = 0, total_error = 0;
    for (const auto &s : segments) {
        total += s.value;
        total_error += s.error;
    }
    return {total, total_error, segments.size()};
}

} // namespace fermat3

#endif
