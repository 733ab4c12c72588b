#ifndef FERMAT3_ERRORS_HPP
#define FERMAT3_ERRORS_HPP

#include <complex>
#include <stdexcept>
#include <string>

namespace fermat3
{

// Evaluation point too close to a lattice point (a pole of wp).
class PoleProximity : public std::domain_error
{
public:
    PoleProximity(const std::string &what, std::complex<double> lattice_point)
        : std::domain_error(what), m_lattice_point(lattice_point)
    {
    }
    std::complex<double> lattice_point() const
    {
        return m_lattice_point;
    }

private:
    std::complex<double> m_lattice_point;
};

// Point where wp vanishes, i.e. a pole of the Gross parametrization.
class PoleOfParametrization : public std::domain_error
{
public:
    PoleOfParametrization(const std::string &what, std::complex<double> point)
        : std::domain_error(what), m_point(point)
    {
    }
    std::complex<double> point() const
    {
        return m_point;
    }

private:
    std::complex<double> m_point;
};

class CircleNearPole : public std::domain_error
{
public:
    CircleNearPole(const std::string &what, double radius, std::complex<double> pole)
        : std::domain_error(what), m_radius(radius), m_pole(pole)
    {
    }
    double radius() const
    {
        return m_radius;
    }
    std::complex<double> pole() const
    {
        return m_pole;
    }

private:
    double m_radius;
    std::complex<double> m_pole;
};

struct SeriesNonConvergence : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct QuadratureError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ConsistencyError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DegenerateParameter : std::domain_error {
    using std::domain_error::domain_error;
};

// Rank or c != 0 assumption of the equation does not hold.
struct AssumptionViolated : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Case 3 with alpha == 3D: the amplitude formula divides by zero.
struct DegenerateCase3 : std::domain_error {
    using std::domain_error::domain_error;
};

} // namespace fermat3

#endif
