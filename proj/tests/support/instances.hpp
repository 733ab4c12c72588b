#ifndef FERMAT3_TESTS_INSTANCES_HPP
#define FERMAT3_TESTS_INSTANCES_HPP

#include <random>

#include <fermat3/solver.hpp>

#include "sampling.hpp"

namespace fermat3::testing
{

inline EquationInstance with_random_parameters(std::array<cd, 3> a, std::array<cd, 3> b, std::mt19937_64 &rng)
{
    const cd alpha = random_complex(rng, 1.5);
    const cd beta = random_complex(rng, 1.0);
    cd shift = random_complex(rng, 1.5);
    if (std::abs(shift) < 0.05) {
        shift += 0.5;
    }
    return EquationInstance::make(a, b, alpha, beta, shift);
}

// b1 a2 - a1 b2 == 0 with b1 = k a1, b2 = k a2; a0 b1 - a1 b0 generic.
inline EquationInstance random_case2(std::mt19937_64 &rng)
{
    const std::array<cd, 3> a{random_complex(rng, 2.0), random_complex(rng, 2.0), random_complex(rng, 2.0)};
    const cd k = random_complex(rng, 1.0);
    const std::array<cd, 3> b{random_complex(rng, 2.0), k * a[1], k * a[2]};
    return with_random_parameters(a, b, rng);
}

inline EquationInstance random_case3(std::mt19937_64 &rng)
{
    while (true) {
        const std::array<cd, 3> a{random_complex(rng, 2.0), random_complex(rng, 2.0), random_complex(rng, 2.0)};
        const std::array<cd, 3> b{random_complex(rng, 2.0), random_complex(rng, 2.0), random_complex(rng, 2.0)};
        auto inst = with_random_parameters(a, b, rng);
        const auto m = minors(inst);
        if (std::abs(m.m12) < 1e-3) {
            continue;
        }
        const cd rate = (a[1] * b[0] - a[0] * b[1]) / m.m12;
        if (std::abs(inst.alpha - 3.0 * rate) < 1e-6) {
            continue;
        }
        // Keep e^{alpha c / 3} and e^{Dc} moderate.
        if (std::abs(rate) > 20) {
            continue;
        }
        return inst;
    }
}

// a1 = b1 = 0 makes both case-split minors vanish.
inline EquationInstance random_case1(std::mt19937_64 &rng)
{
    const std::array<cd, 3> a{random_complex(rng, 2.0), 0.0, random_complex(rng, 2.0)};
    const std::array<cd, 3> b{random_complex(rng, 2.0), 0.0, random_complex(rng, 2.0)};
    return with_random_parameters(a, b, rng);
}

} // namespace fermat3::testing

#endif
