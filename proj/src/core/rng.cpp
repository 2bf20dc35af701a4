#include "flee/core/rng.hpp"

#include <algorithm>

namespace flee {

std::uint64_t Rng::below(std::uint64_t n) noexcept {
  if (n <= 1) return 0;
  // Largest multiple of n that fits; values at or above it are rejected.
  const std::uint64_t limit = UINT64_MAX - (UINT64_MAX % n + 1) % n;
  std::uint64_t x = next();
  while (x > limit) x = next();
  return x % n;
}

double Rng::uniform(double lo, double hi) noexcept {
  if (lo == hi) return lo;
  return std::clamp(lo + (hi - lo) * unit_closed(), lo, hi);
}

}  // namespace flee
