#pragma once

#include "homkit/scalar.hpp"

#include <random>

namespace homkit
{

using Rng = std::mt19937_64;

/// p/q with q uniform in 1..max_den and |p/q| <= bound.
inline Rational random_rational(Rng &rng, int bound = 2, int max_den = 4)
{
    int q = std::uniform_int_distribution<int>(1, max_den)(rng);
    int p = std::uniform_int_distribution<int>(-bound * q, bound * q)(rng);
    Rational r(p, q);
    r.canonicalize();
    return r;
}

} // namespace homkit
