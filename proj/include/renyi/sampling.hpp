#pragma once

#include "renyi/barrier.hpp"
#include "renyi/random.hpp"

namespace renyi {

/// Random interior point of a cone. boundary_bias in [0, 1) pushes samples
/// toward the boundary: matrix condition numbers grow to about 10^(1 + 4·bias)
/// and the epigraph/hypograph slack shrinks by up to a factor 10^(-6·bias).
Vector sample_interior_point(const ConeKind& cone, Rng& rng, double boundary_bias = 0.0);

/// Gaussian direction in the vectorized layout of a cone.
Vector sample_direction(const ConeKind& cone, Rng& rng);

}  // namespace renyi
