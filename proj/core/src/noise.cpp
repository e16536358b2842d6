#include "radsim/noise.hpp"

#include <cmath>
#include <random>

namespace radsim {

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream) noexcept {
  std::uint64_t z = base + 0x9E3779B97F4A7C15ull * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

void add_complex_noise(std::span<Complex> data, double variance, std::uint64_t seed) {
  if (variance <= 0.0) return;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, std::sqrt(variance / 2.0));
  for (auto& c : data) {
    const double re = gauss(rng);
    const double im = gauss(rng);
    c += Complex(re, im);
  }
}

}  // namespace radsim
