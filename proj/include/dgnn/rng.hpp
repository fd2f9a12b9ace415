#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace dgnn {

// Deterministic random source. The mt19937_64 engine is fully specified by
// the standard; the distributions are hand-rolled here because the std ones
// are implementation-defined and would break cross-toolchain reproducibility.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t next_u64() { return gen_(); }

  // Uniform in [0, 1).
  double uniform01() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  // Standard normal via Box-Muller (stateless, one value per two draws).
  double normal();

  double normal(double mean, double stddev) { return mean + stddev * normal(); }

  bool bernoulli(double p) { return uniform01() < p; }

  // Uniform integer in [0, n).
  int below(int n);

  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (int i = static_cast<int>(v.size()) - 1; i > 0; --i) {
      std::swap(v[i], v[below(i + 1)]);
    }
  }

  // Decorrelated child stream for a named purpose.
  Rng fork(std::uint64_t stream_id) const;

 private:
  std::mt19937_64 gen_;
};

// splitmix64 finalizer; used for seed derivation.
std::uint64_t mix_u64(std::uint64_t x);

}  // namespace dgnn
