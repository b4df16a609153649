#pragma once

#include <cstdint>
#include <random>

namespace posenc {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Derives an independent stream seed from a master seed and a tag.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t tag) {
  return splitmix64(master ^ splitmix64(tag));
}

/// Uniform double in [0, 1) with 53 random bits; identical across platforms
/// unlike std::uniform_real_distribution.
inline double unit_uniform(std::mt19937_64& gen) {
  return static_cast<double>(gen() >> 11) * 0x1.0p-53;
}

/// Uniform integer in [0, n) by rejection, platform-independent.
inline std::uint64_t uniform_index(std::mt19937_64& gen, std::uint64_t n) {
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
  std::uint64_t v;
  do v = gen();
  while (v >= limit);
  return v % n;
}

/// Fisher-Yates with uniform_index, so shuffles are reproducible everywhere.
template <typename It>
void shuffle(It first, It last, std::mt19937_64& gen) {
  const auto n = static_cast<std::uint64_t>(last - first);
  for (std::uint64_t i = n; i > 1; --i) {
    const auto j = uniform_index(gen, i);
    std::swap(first[i - 1], first[j]);
  }
}

}  // namespace posenc
