#pragma once

#include <cstdint>
#include <string_view>

namespace scpsim {

// Counter-based random stream. The output at step t is a pure function of
// (key, t), so a stream can be split into independent child streams keyed by
// operation labels and indices, and results never depend on which worker
// thread consumed which stream.
class RandomStream {
 public:
  static RandomStream root(std::uint64_t master_seed) {
    return RandomStream(mix(master_seed ^ 0x243f6a8885a308d3ull));
  }

  RandomStream derive(std::string_view label) const {
    return RandomStream(mix(key_ ^ fnv1a(label)));
  }

  RandomStream derive(std::uint64_t index) const {
    return RandomStream(mix(key_ ^ mix(index ^ 0x452821e638d01377ull)));
  }

  std::uint64_t next_u64() { return mix(key_ ^ mix(counter_++)); }

  // Uniform in [0, 1).
  double next_unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // Uniform k-bit value, 0 <= k <= 63.
  std::uint64_t next_bits(int k) {
    if (k <= 0) return 0;
    return next_u64() >> (64 - k);
  }

  bool next_bernoulli(double p) { return next_unit() < p; }

  // Uniform in [0, bound).
  std::uint64_t next_below(std::uint64_t bound) {
    // Bounded rejection keeps the distribution exact.
    const std::uint64_t limit = bound * (~std::uint64_t{0} / bound);
    std::uint64_t v = next_u64();
    while (v >= limit) v = next_u64();
    return v % bound;
  }

 private:
  explicit RandomStream(std::uint64_t key) : key_(key) {}

  static std::uint64_t mix(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ull;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  static std::uint64_t fnv1a(std::string_view s) {
    std::uint64_t h = 1469598103934665603ull;
    for (char c : s) {
      h ^= static_cast<unsigned char>(c);
      h *= 1099511628211ull;
    }
    return h;
  }

  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace scpsim
