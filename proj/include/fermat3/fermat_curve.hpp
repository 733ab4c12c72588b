#ifndef FERMAT3_FERMAT_CURVE_HPP
#define FERMAT3_FERMAT_CURVE_HPP

#include <complex>
#include <vector>

#include <Eigen/Dense>

#include <fermat3/elliptic.hpp>

namespace fermat3
{

// Polynomial inner function h(z), coefficients in ascending degree.
class PolynomialH
{
public:
    explicit PolynomialH(Eigen::VectorXcd coefficients);
    PolynomialH(std::initializer_list<cd> coefficients);

    static PolynomialH identity();

    const Eigen::VectorXcd &coefficients() const
    {
        return m_coefficients;
    }
    int degree() const
    {
        return static_cast<int>(m_coefficients.size()) - 1;
    }
    cd operator()(cd z) const;

private:
    Eigen::VectorXcd m_coefficients;
};

class CubeRootOfUnity
{
public:
    explicit CubeRootOfUnity(int index = 0);

    int index() const
    {
        return m_index;
    }
    cd eta() const;

    static const CubeRootOfUnity &one();

private:
    int m_index;
};

struct FermatValues {
    cd f;
    cd g;
};

struct IdentityResiduals {
    double cubic_residual;
    double relation_residual;
};

// |wp| below this is treated as a pole of f, g.
inline constexpr double parametrization_zero_guard = 1e-6;

// Gross pair f = (1 + wp'/sqrt3) / (2 wp), g = (1 - wp'/sqrt3) / (2 wp),
// satisfying f^3 + g^3 = 1. Throws PoleOfParametrization near zeros of wp and
// PoleProximity near lattice points.
FermatValues gross_pair_n3(cd z, const Lattice &lattice, const EvaluationSettings &settings);
FermatValues gross_pair_n3(cd z, const Lattice &lattice);

// Rational pair f = 2w / (1 + w^2), g = (1 - w^2) / (1 + w^2) with
// f^2 + g^2 = 1. Throws DegenerateParameter at w = +-i.
FermatValues gross_pair_n2(cd w);

// F = f(h(z)), G = eta g(h(z)).
FermatValues baker_compose(const PolynomialH &h, const CubeRootOfUnity &eta, cd z, const Lattice &lattice,
                           const EvaluationSettings &settings);
FermatValues baker_compose(const PolynomialH &h, const CubeRootOfUnity &eta, cd z, const Lattice &lattice);

// The alternative form eta * f(-h(z)) of the second Baker component.
cd baker_second_via_reflection(const PolynomialH &h, const CubeRootOfUnity &eta, cd z, const Lattice &lattice,
                               const EvaluationSettings &settings);

// cubic_residual = |wp^3 - (3F^2 wp^2 - 3F wp + 1)|,
// relation_residual = |wp' - sqrt3 (2F wp - 1)|, both at wp_at_h.
IdentityResiduals identity_residuals(cd F, const WpValue &wp_at_h);

} // namespace fermat3

#endif
