#pragma once

#include <random>

#include "posenc/ingest.hpp"
#include "posenc/rng.hpp"

// Random feature sequence with `real` unpadded rows out of `len`.
inline posenc::FeatureSequence toy_sequence(std::size_t len, std::size_t real, std::size_t features,
                                            std::size_t classes, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  posenc::FeatureSequence s{posenc::Matrix(len, features), std::vector<int>(len, -1),
                            std::vector<std::uint8_t>(len, 0), std::vector<std::uint8_t>(len, 1)};
  for (std::size_t t = 0; t < real; ++t) {
    for (auto& v : s.features.row(t)) v = 2.0 * posenc::unit_uniform(gen) - 1.0;
    s.labels[t] = static_cast<int>(posenc::uniform_index(gen, classes));
    s.mask[t] = 1;
  }
  return s;
}
