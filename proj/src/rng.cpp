#include "dgnn/rng.hpp"

#include <cmath>

namespace dgnn {

double Rng::normal() {
  // u1 in (0, 1] so the log is finite.
  const double u1 = 1.0 - uniform01();
  const double u2 = uniform01();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

int Rng::below(int n) {
  // Rejection sampling, no modulo bias.
  const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % static_cast<std::uint64_t>(n));
  std::uint64_t x;
  do {
    x = gen_();
  } while (x >= limit);
  return static_cast<int>(x % static_cast<std::uint64_t>(n));
}

Rng Rng::fork(std::uint64_t stream_id) const {
  Rng copy = *this;
  const std::uint64_t salt = copy.gen_();
  return Rng(mix_u64(salt ^ mix_u64(stream_id + 0x9e3779b97f4a7c15ULL)));
}

std::uint64_t mix_u64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace dgnn
