#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

#include "pla/types.hpp"

namespace pla {

// Synthetic streams at unit spacing, t = 0..n-1. All are deterministic;
// random_walk is deterministic given its seed.

std::vector<InputTuple> generate_constant(std::size_t n, double value);
std::vector<InputTuple> generate_ramp(std::size_t n, double start, double slope);
// 0, amplitude, 0, amplitude, ... — incompressible beyond pairs when
// amplitude > 2 * epsilon.
std::vector<InputTuple> generate_alternating(std::size_t n, double amplitude);
// y_0 = 0; y_i = y_{i-1} + step * N(0, 1).
std::vector<InputTuple> generate_random_walk(std::size_t n, double step,
                                             std::uint64_t seed);

// Parses "kind:N[:params...]": constant:N:VALUE, ramp:N:START:SLOPE,
// alternating:N:AMPLITUDE, random_walk:N:STEP. Throws BadParams on unknown
// kinds, wrong arity, or malformed numbers.
std::vector<InputTuple> generate_from_spec(std::string_view spec,
                                           std::uint64_t seed);

}  // namespace pla
