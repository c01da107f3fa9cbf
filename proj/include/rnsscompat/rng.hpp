#pragma once

#include <cmath>
#include <cstdint>
#include <utility>

#include "rnsscompat/units.hpp"

namespace rnsscompat {

// Counter-based generator: output i is a pure function of (seed, stream, i),
// so any sample can be regenerated independently and results do not depend
// on the standard library's distribution implementations.
class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::uint64_t stream) : key_(mix(seed ^ mix(stream + 0x632BE59BD9B4E019ull))) {}

  std::uint64_t at(std::uint64_t counter) const { return mix(key_ + counter * 0x9E3779B97F4A7C15ull); }
  std::uint64_t next() { return at(counter_++); }

  // Uniform in (0, 1]; never returns zero.
  double uniform() { return (static_cast<double>(next() >> 11) + 1.0) * 0x1.0p-53; }

  bool coin() { return (next() >> 63) != 0; }

  // Pair of independent standard normals (Box-Muller).
  std::pair<double, double> gaussian_pair() {
    const double r = std::sqrt(-2.0 * std::log(uniform()));
    const double phase = 2.0 * kPi * uniform();
    return {r * std::cos(phase), r * std::sin(phase)};
  }

  std::uint64_t counter() const { return counter_; }
  void seek(std::uint64_t counter) { counter_ = counter; }

  // SplitMix64 finalizer.
  static std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace rnsscompat
