#pragma once

#include <compare>
#include <cstdint>

namespace symrl {

// Discrete state-action key used by the symmetry detector. `state` is the
// environment's packed discrete-state index (row-major cell index for the
// grid world, base-L digits of the discretized 4-tuple for cart-pole);
// environments expose the packing and unpacking.
struct SAKey {
  std::int32_t state = 0;
  std::int32_t action = 0;

  auto operator<=>(const SAKey&) const = default;
};

}  // namespace symrl
