#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "posenc/embedding.hpp"
#include "posenc/matrix.hpp"
#include "posenc/timecodec.hpp"

namespace posenc {

enum class Marker { kBegin, kEnd };

struct Annotation {
  std::string activity;
  Marker marker = Marker::kBegin;
};

/// One line of a CASAS-style log: `date time sensor status [activity marker]`.
struct EventRecord {
  Timestamp timestamp;
  std::string sensor_id;
  std::string status;
  std::optional<Annotation> annotation;
  std::size_t line = 0;  // 1-based source line, 0 when synthesised
};

struct MalformedLine {
  std::size_t line;
  std::string reason;
};

struct ParseResult {
  std::vector<EventRecord> records;
  std::vector<MalformedLine> malformed;
};

/// Parses a whitespace-separated log. Blank lines and lines starting with '#'
/// are skipped. Bad lines are collected; if more than `max_bad_fraction` of
/// the non-blank lines are bad the whole parse fails with DataError.
ParseResult parse_log(std::istream& in, int default_year, double max_bad_fraction = 0.1);

std::string serialize_event(const EventRecord& e);

inline constexpr int kUnknownResident = -1;

struct LabeledEvent {
  EventRecord event;
  int resident = kUnknownResident;  // index into the resident list
};

struct LabelResult {
  std::vector<LabeledEvent> events;
  std::vector<std::string> warnings;
};

/// Resident tag of an activity such as "R1_Wandering" -> "R1"; empty when the
/// activity carries no `<tag>_` prefix.
std::string resident_tag(const std::string& activity);

/// Span labelling. `begin` opens a span for the tagged resident and `end`
/// closes it; an event is attributed to the resident named on its own
/// annotation, otherwise to the most recently opened span still active, else
/// unknown. Unmatched `end` markers and unknown tags produce warnings.
LabelResult label_events(const std::vector<EventRecord>& records,
                         const std::vector<std::string>& residents);

struct SamplingConfig {
  double downsample_interval = 60.0;                // seconds, 0 disables
  std::map<std::string, std::string> home_sensors;  // resident -> sensor id
  std::size_t upsample_factor = 8;
};

/// Keeps only the first of each run of a resident's events at their home
/// sensor while successive events stay within the interval of the last kept
/// one. Any event of that resident at another sensor ends the run. Throws
/// DataError when a home sensor is not in `known_sensors` or a resident is
/// not in `residents`.
std::vector<LabeledEvent> downsample(const std::vector<LabeledEvent>& events,
                                     const SamplingConfig& cfg,
                                     const std::vector<std::string>& residents,
                                     const std::set<std::string>& known_sensors);

/// Sorted list of sensor ids, defining the one-hot slot order.
struct SensorVocab {
  std::vector<std::string> ids;

  static SensorVocab from_events(const std::vector<LabeledEvent>& events);
  std::size_t size() const { return ids.size(); }
  /// Throws DataError on an unknown id.
  std::size_t index_of(const std::string& id) const;
};

/// ON / OPEN / nonzero numeric readings map to 1, everything else to 0.
double status_value(const std::string& status);

/// Rows of time vector (6) + one-hot sensor + status (1) + positional vector.
struct FeatureTable {
  Matrix features;
  std::vector<int> labels;
  std::vector<std::string> sensors;
  // Rows counted by evaluate(); all ones from build_features.
  std::vector<std::uint8_t> scored;
};

std::size_t feature_width(std::size_t vocab_size, const PositionalEncoder& encoder);

FeatureTable build_features(const std::vector<LabeledEvent>& events,
                            const PositionalEncoder& encoder, const SensorVocab& vocab);

/// A fixed-length slice of rows. Padding sits at the tail and has mask 0.
struct FeatureSequence {
  Matrix features;
  std::vector<int> labels;
  std::vector<std::uint8_t> mask;
  std::vector<std::uint8_t> scored;

  std::size_t chunk_len() const { return labels.size(); }
  /// Number of real (unpadded) rows.
  std::size_t length() const;
};

/// Consecutive non-overlapping chunks; the last one is zero-padded.
/// Throws ConfigError when chunk_len < 1.
std::vector<FeatureSequence> chunk(const FeatureTable& rows, std::size_t chunk_len);

/// Each chunk repeated `factor` times then shuffled with `seed`.
/// Throws ConfigError when factor < 1.
std::vector<FeatureSequence> upsample_training(const std::vector<FeatureSequence>& chunks,
                                               std::size_t factor, std::uint64_t seed);

}  // namespace posenc
