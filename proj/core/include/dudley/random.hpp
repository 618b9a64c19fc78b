#pragma once

#include <cstdint>
#include <random>

#include "dudley/geometry.hpp"

namespace dudley {

using Rng = std::mt19937_64;

/// Derives an independent stream seed from (seed, stream) with splitmix64.
std::uint64_t split_seed(std::uint64_t seed, std::uint64_t stream);

/// Uniform point on the unit sphere S^{dim-1}: a normalized isotropic
/// Gaussian vector.
Vector random_unit(Rng& rng, std::size_t dim);

/// Same as random_unit, written into an existing vector of the right size.
void random_unit(Rng& rng, Vector& out);

}  // namespace dudley
