#pragma once

#include <cstdint>
#include <span>
#include <string_view>
#include <utility>

namespace flee {

/// SplitMix64 finalizer. Bijective on 64-bit words.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// FNV-1a over the bytes of a purpose label.
constexpr std::uint64_t hash_label(std::string_view label) noexcept {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (char c : label) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  return h;
}

/// Sub-seed for (master seed, purpose, index). All randomness in the toolkit
/// is derived through this function so results do not depend on the order in
/// which independent streams are consumed.
constexpr std::uint64_t derive_seed(std::uint64_t master, std::string_view purpose,
                                    std::uint64_t index = 0) noexcept {
  return mix64(mix64(master ^ hash_label(purpose)) + mix64(index + 0x9e3779b97f4a7c15ULL));
}

/// Counter-based SplitMix64 stream: the k-th output is mix64(seed + k * gamma),
/// so the stream is fully determined by its seed.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) noexcept : state_(seed) {}

  std::uint64_t next() noexcept {
    state_ += 0x9e3779b97f4a7c15ULL;
    return mix64(state_);
  }

  /// Uniform integer in [0, n). Unbiased (rejection on the top remainder).
  std::uint64_t below(std::uint64_t n) noexcept;

  /// Uniform real in the closed interval [0, 1].
  double unit_closed() noexcept {
    return static_cast<double>(next() >> 11) * (1.0 / 9007199254740991.0);
  }

  /// Uniform real in [lo, hi], both ends reachable.
  double uniform(double lo, double hi) noexcept;

  template <class T>
  void shuffle(std::span<T> items) noexcept {
    for (std::size_t i = items.size(); i > 1; --i) {
      std::size_t j = static_cast<std::size_t>(below(i));
      std::swap(items[i - 1], items[j]);
    }
  }

 private:
  std::uint64_t state_;
};

}  // namespace flee
