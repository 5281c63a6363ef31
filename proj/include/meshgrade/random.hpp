#ifndef MESHGRADE_RANDOM_HPP
#define MESHGRADE_RANDOM_HPP

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

// Seeded randomness used across training, fold assignment and synthesis.
// The engine is std::mt19937_64 (bit-exact output mandated by the standard);
// all mappings from raw 64-bit draws to values are implemented here so that
// identical seeds give identical results independent of the standard
// library's distribution implementations.

namespace meshgrade {

using Rng = std::mt19937_64;

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Independent stream for a salted sub-task (per fold, per mesh, ...).
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t salt) {
  return splitmix64(seed ^ splitmix64(salt));
}

// Uniform double in [0, 1) with 53 random bits.
inline double uniform_unit(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline double uniform_real(Rng& rng, double lo, double hi) {
  return lo + uniform_unit(rng) * (hi - lo);
}

// Unbiased integer in [0, n) via Lemire's multiply-shift with rejection.
inline std::uint64_t uniform_index(Rng& rng, std::uint64_t n) {
  unsigned __int128 m = static_cast<unsigned __int128>(rng()) * n;
  auto low = static_cast<std::uint64_t>(m);
  if (low < n) {
    const std::uint64_t threshold = -n % n;
    while (low < threshold) {
      m = static_cast<unsigned __int128>(rng()) * n;
      low = static_cast<std::uint64_t>(m);
    }
  }
  return static_cast<std::uint64_t>(m >> 64);
}

// Standard normal via Box-Muller; consumes two draws per value.
inline double normal_unit(Rng& rng) {
  double u1 = uniform_unit(rng);
  while (u1 <= 0.0) u1 = uniform_unit(rng);
  const double u2 = uniform_unit(rng);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

template <class T>
void shuffle_in_place(std::vector<T>& values, Rng& rng) {
  for (std::size_t i = values.size(); i > 1; --i) {
    const std::size_t j = static_cast<std::size_t>(uniform_index(rng, i));
    std::swap(values[i - 1], values[j]);
  }
}

}  // namespace meshgrade

#endif
