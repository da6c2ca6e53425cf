#pragma once

#include <cstddef>
#include <cstdint>

#include "shapekit/complex.hpp"

namespace shapekit {

/// A random finite simplicial set: cells are attached one at a time along
/// randomly chosen maps from the boundary of a simplex into what exists so far.
/// Deterministic in the seed.
Complex random_complex(std::uint64_t seed, int max_dim = 3, std::size_t max_cells = 30);

}  // namespace shapekit
