#include <fermat3/fermat_curve.hpp>

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include <fermat3/errors.hpp>

namespace fermat3
{

PolynomialH::PolynomialH(Eigen::VectorXcd coefficients) : m_coefficients(std::move(coefficients))
{
    if (m_coefficients.size() == 0) {
        throw std::invalid_argument("polynomial h needs at least one coefficient");
    }
    if (m_coefficients.size() > 1 && m_coefficients(m_coefficients.size() - 1) == cd(0)) {
        throw std::invalid_argument("leading coefficient of h must be nonzero");
    }
}

PolynomialH::PolynomialH(std::initializer_list<cd> coefficients)
    : PolynomialH(Eigen::VectorXcd::Map(coefficients.begin(), static_cast<Eigen::Index>(coefficients.size())))
{
}

PolynomialH PolynomialH::identity()
{
    return PolynomialH{cd(0), cd(1)};
}

cd PolynomialH::operator()(cd z) const
{
    cd acc = 0;
    for (Eigen::Index k = m_coefficients.size() - 1; k >= 0; --k) {
        acc = acc * z + m_coefficients(k);
    }
    return acc;
}

CubeRootOfUnity::CubeRootOfUnity(int index) : m_index(index)
{
    if (index < 0 || index > 2) {
        throw std::invalid_argument("cube root of unity index must be 0, 1 or 2");
    }
}

cd CubeRootOfUnity::eta() const
{
    // Exact real parts keep |eta^3 - 1| at rounding level.
    const double s = 0.5 * std::numbers::sqrt3;
    switch (m_index) {
    case 1:
        return {-0.5, s};
    case 2:
        return {-0.5, -s};
    default:
        return {1.0, 0.0};
    }
}

const CubeRootOfUnity &CubeRootOfUnity::one()
{
    static const CubeRootOfUnity unit(0);
    return unit;
}

FermatValues gross_pair_n3(cd z, const Lattice &lattice, const EvaluationSettings &settings)
{
    const auto v = wp_eval(z, lattice, settings);
    if (std::abs(v.p) < parametrization_zero_guard) {
        std::ostringstream oss;
        oss << "wp(" << z << ") = " << v.p << " is within the zero guard; f and g have a pole there";
        throw PoleOfParametrization(oss.str(), z);
    }
    const cd x = v.p_prime / std::numbers::sqrt3;
    const cd denom = 2.0 * v.p;
    return {(1.0 + x) / denom, (1.0 - x) / denom};
}

FermatValues gross_pair_n3(cd z, const Lattice &lattice)
{
    return gross_pair_n3(z, lattice, EvaluationSettings::defaults(lattice));
}

FermatValues gross_pair_n2(cd w)
{
    const cd w2 = w * w;
    const cd denom = 1.0 + w2;
    if (std::abs(denom) == 0.0) {
        std::ostringstream oss;
        oss << "Gross n = 2 parametrization is undefined at w = " << w;
        throw DegenerateParameter(oss.str());
    }
    return {2.0 * w / denom, (1.0 - w2) / denom};
}

FermatValues baker_compose(const PolynomialH &h, const CubeRootOfUnity &eta, cd z, const Lattice &lattice,
                           const EvaluationSettings &settings)
{
    const auto fg = gross_pair_n3(h(z), lattice, settings);
    return {fg.f, eta.eta() * fg.g};
}

FermatValues baker_compose(const PolynomialH &h, const CubeRootOfUnity &eta, cd z, const Lattice &lattice)
{
    return baker_compose(h, eta, z, lattice, EvaluationSettings::defaults(lattice));
}

cd baker_second_via_reflection(const PolynomialH &h, const CubeRootOfUnity &eta, cd z, const Lattice &lattice,
                               const EvaluationSettings &settings)
{
    return eta.eta() * gross_pair_n3(-h(z), lattice, settings).f;
}

IdentityResiduals identity_residuals(cd F, const WpValue &wp_at_h)
{
    const cd p = wp_at_h.p;
    const cd cubic = p * p * p - (3.0 * F * F * p * p - 3.0 * F * p + 1.0);
    const cd relation = wp_at_h.p_prime - std::numbers::sqrt3 * (2.0 * F * p - 1.0);
    return {std::abs(cubic), std::abs(relation)};
}

} // namespace fermat3
