#pragma once

#include <array>
#include <cstdint>
#include <span>

namespace artifact_audit {

// xoshiro256** seeded through splitmix64. The exact sequence is part of the
// model-reproducibility contract: changing it changes every trained model.
class Rng {
 public:
  explicit Rng(uint64_t seed);

  uint64_t next();

  // 53-bit uniform in [0, 1).
  double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  // Uniform integer in [0, bound) by rejection, so no modulo bias.
  uint64_t below(uint64_t bound);

  template <typename T>
  void shuffle(std::span<T> items) {
    for (size_t i = items.size(); i > 1; --i) {
      size_t j = static_cast<size_t>(below(i));
      std::swap(items[i - 1], items[j]);
    }
  }

 private:
  std::array<uint64_t, 4> s_;
};

uint64_t splitmix64(uint64_t& state);

}  // namespace artifact_audit
