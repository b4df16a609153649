#pragma once

// Frozen desk-scale settings for the end-to-end acceptance criteria. They were
// calibrated once (see README) and must not be tuned per run.

#include <cstddef>
#include <cstdint>

namespace acceptance {

inline constexpr std::uint64_t kSeeds[] = {1, 2, 3, 4, 5};
inline constexpr std::size_t kFolds = 5;
inline constexpr std::size_t kChunkLen = 100;
inline constexpr double kSelfWeight = 0.5;

// Random walks and skip-gram
inline constexpr std::size_t kWalksPerNode = 50;
inline constexpr std::size_t kWalkLength = 40;
inline constexpr std::size_t kDimension = 16;
inline constexpr std::size_t kSkipGramEpochs = 5;

// Tagger budget shared by every encoder
inline constexpr std::size_t kHidden = 8;
inline constexpr std::size_t kMaxEpochs = 5;
inline constexpr double kLearningRate = 1e-3;
inline constexpr double kDropout = 0.2;
inline constexpr std::size_t kUpsample = 1;

// Criterion 6
inline constexpr double kMinGain = 0.10;
inline constexpr double kMinAccuracy = 0.85;
inline constexpr double kMaxSeconds = 15 * 60;

// Criterion 8
inline constexpr double kDownsampleInterval = 60.0;
inline constexpr std::size_t kSampledUpsample = 8;

}  // namespace acceptance
