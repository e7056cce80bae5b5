#pragma once

#include <cstdint>
#include <random>

#include "psr/symtensor.hpp"

namespace psr {

using Rng = std::mt19937_64;

Vec random_unit(Rng& rng, int n);
Vec random_gaussian(Rng& rng, int n);
// Independent standard normal monomial coefficients.
SymCubic random_cubic(Rng& rng, int n);

} // namespace psr
