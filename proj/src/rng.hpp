#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace fcair {

/// Seeded random source with hand-rolled draw functions.  std::mt19937_64 is
/// fully pinned by the standard, but the std distributions and std::shuffle
/// are not; everything that must be reproducible across platforms goes
/// through this wrapper instead.
class Rng {
 public:
  explicit Rng(uint64_t seed) : engine_(seed) {}

  uint64_t next_u64() { return engine_(); }

  /// Uniform index in [0, n).  Modulo bias is irrelevant at our scales.
  std::size_t next_index(std::size_t n) {
    return static_cast<std::size_t>(engine_() % static_cast<uint64_t>(n));
  }

  /// Uniform double in [0, 1) with 53 random bits.
  double next_unit() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  /// Fisher-Yates shuffle driven by next_index.
  template <typename T>
  void shuffle(std::vector<T>& values) {
    for (std::size_t i = values.size(); i > 1; --i) {
      std::size_t j = next_index(i);
      std::swap(values[i - 1], values[j]);
    }
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace fcair
