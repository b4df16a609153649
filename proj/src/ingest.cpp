#include "posenc/ingest.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <istream>
#include <random>
#include <sstream>

#include "posenc/error.hpp"
#include "posenc/rng.hpp"

namespace posenc {

ParseResult parse_log(std::istream& in, int default_year, double max_bad_fraction) {
  if (!in) throw DataError("event log stream is unreadable");
  ParseResult out;
  std::string line;
  std::size_t lineno = 0;
  std::size_t nonblank = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream ss(line);
    std::vector<std::string> tok;
    for (std::string t; ss >> t;) tok.push_back(std::move(t));
    if (tok.empty() || tok[0][0] == '#') continue;
    ++nonblank;
    if (tok.size() != 4 && tok.size() != 6) {
      out.malformed.push_back({lineno, "expected 4 or 6 fields, got " + std::to_string(tok.size())});
      continue;
    }
    EventRecord rec;
    rec.line = lineno;
    try {
      rec.timestamp = parse_timestamp(tok[0], tok[1], default_year);
    } catch (const DataError& e) {
      out.malformed.push_back({lineno, e.what()});
      continue;
    }
    rec.sensor_id = tok[2];
    rec.status = tok[3];
    if (tok.size() == 6) {
      Annotation a{tok[4], Marker::kBegin};
      if (tok[5] == "begin")
        a.marker = Marker::kBegin;
      else if (tok[5] == "end")
        a.marker = Marker::kEnd;
      else {
        out.malformed.push_back({lineno, "annotation marker must be begin/end, got '" + tok[5] + "'"});
        continue;
      }
      rec.annotation = std::move(a);
    }
    out.records.push_back(std::move(rec));
  }
  if (in.bad()) throw DataError("error while reading event log");
  if (nonblank > 0 &&
      static_cast<double>(out.malformed.size()) > max_bad_fraction * static_cast<double>(nonblank)) {
    std::ostringstream msg;
    msg << out.malformed.size() << " of " << nonblank << " lines malformed";
    for (std::size_t k = 0; k < std::min<std::size_t>(5, out.malformed.size()); ++k)
      msg << "; line " << out.malformed[k].line << ": " << out.malformed[k].reason;
    throw DataError(msg.str());
  }
  return out;
}

std::string serialize_event(const EventRecord& e) {
  std::string s = format_timestamp(e.timestamp) + " " + e.sensor_id + " " + e.status;
  if (e.annotation)
    s += " " + e.annotation->activity +
         (e.annotation->marker == Marker::kBegin ? " begin" : " end");
  return s;
}

std::string resident_tag(const std::string& activity) {
  const auto pos = activity.find('_');
  if (pos == std::string::npos || pos == 0) return {};
  return activity.substr(0, pos);
}

LabelResult label_events(const std::vector<EventRecord>& records,
                         const std::vector<std::string>& residents) {
  LabelResult out;
  out.events.reserve(records.size());
  std::vector<int> active;  // open spans, most recent last
  for (const auto& rec : records) {
    int own = kUnknownResident;
    if (rec.annotation) {
      const std::string tag = resident_tag(rec.annotation->activity);
      auto it = std::find(residents.begin(), residents.end(), tag);
      if (it == residents.end()) {
        out.warnings.push_back("line " + std::to_string(rec.line) + ": activity '" +
                               rec.annotation->activity + "' has no known resident tag");
      } else {
        const int r = static_cast<int>(it - residents.begin());
        auto pos = std::find(active.begin(), active.end(), r);
        if (rec.annotation->marker == Marker::kBegin) {
          if (pos != active.end()) active.erase(pos);
          active.push_back(r);
          own = r;
        } else if (pos == active.end()) {
          out.warnings.push_back("line " + std::to_string(rec.line) + ": end of '" +
                                 rec.annotation->activity + "' without a matching begin");
        } else {
          active.erase(pos);
          own = r;
        }
      }
    }
    const int label = own != kUnknownResident ? own
                      : active.empty()        ? kUnknownResident
                                              : active.back();
    out.events.push_back({rec, label});
  }
  return out;
}

std::vector<LabeledEvent> downsample(const std::vector<LabeledEvent>& events,
                                     const SamplingConfig& cfg,
                                     const std::vector<std::string>& residents,
                                     const std::set<std::string>& known_sensors) {
  if (cfg.downsample_interval < 0.0) throw ConfigError("downsample interval must be >= 0");
  std::vector<std::string> home(residents.size());
  for (const auto& [resident, sensor] : cfg.home_sensors) {
    auto it = std::find(residents.begin(), residents.end(), resident);
    if (it == residents.end()) throw DataError("home sensor given for unknown resident '" + resident + "'");
    if (!known_sensors.count(sensor)) throw DataError("home sensor '" + sensor + "' is unknown");
    home[static_cast<std::size_t>(it - residents.begin())] = sensor;
  }
  if (cfg.downsample_interval == 0.0) return events;

  struct RunState {
    bool active = false;
    double last_kept = 0.0;
  };
  std::vector<RunState> run(residents.size());
  std::vector<LabeledEvent> out;
  out.reserve(events.size());
  for (const auto& ev : events) {
    if (ev.resident == kUnknownResident) {
      out.push_back(ev);
      continue;
    }
    const auto r = static_cast<std::size_t>(ev.resident);
    if (home[r].empty()) {
      out.push_back(ev);
      continue;
    }
    auto& st = run[r];
    if (ev.event.sensor_id != home[r]) {
      st.active = false;
      out.push_back(ev);
      continue;
    }
    const double t = ev.event.timestamp.epoch_seconds();
    if (st.active && t - st.last_kept <= cfg.downsample_interval) continue;
    st.active = true;
    st.last_kept = t;
    out.push_back(ev);
  }
  return out;
}

SensorVocab SensorVocab::from_events(const std::vector<LabeledEvent>& events) {
  std::set<std::string> ids;
  for (const auto& e : events) ids.insert(e.event.sensor_id);
  return {std::vector<std::string>(ids.begin(), ids.end())};
}

std::size_t SensorVocab::index_of(const std::string& id) const {
  auto it = std::lower_bound(ids.begin(), ids.end(), id);
  if (it == ids.end() || *it != id) throw DataError("sensor '" + id + "' is not in the vocabulary");
  return static_cast<std::size_t>(it - ids.begin());
}

double status_value(const std::string& status) {
  std::string up = status;
  std::transform(up.begin(), up.end(), up.begin(),
                 [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
  if (up == "ON" || up == "OPEN") return 1.0;
  double v = 0.0;
  auto [p, ec] = std::from_chars(status.data(), status.data() + status.size(), v);
  if (ec == std::errc() && p == status.data() + status.size()) return v != 0.0 ? 1.0 : 0.0;
  return 0.0;
}

std::size_t feature_width(std::size_t vocab_size, const PositionalEncoder& encoder) {
  return 6 + vocab_size + 1 + encoding_width(encoder);
}

FeatureTable build_features(const std::vector<LabeledEvent>& events,
                            const PositionalEncoder& encoder, const SensorVocab& vocab) {
  const std::size_t width = feature_width(vocab.size(), encoder);
  const std::size_t pos_offset = 6 + vocab.size() + 1;
  FeatureTable out{Matrix(events.size(), width), {}, {}, {}};
  out.labels.reserve(events.size());
  std::map<std::string, std::vector<double>> cache;
  for (std::size_t i = 0; i < events.size(); ++i) {
    const auto& ev = events[i].event;
    auto row = out.features.row(i);
    const auto tv = encode_timestamp(ev.timestamp);
    std::copy(tv.begin(), tv.end(), row.begin());
    row[6 + vocab.index_of(ev.sensor_id)] = 1.0;
    row[6 + vocab.size()] = status_value(ev.status);
    auto it = cache.find(ev.sensor_id);
    if (it == cache.end()) it = cache.emplace(ev.sensor_id, encode(encoder, ev.sensor_id)).first;
    if (it->second.size() != width - pos_offset)
      throw DataError("positional vector for '" + ev.sensor_id + "' has the wrong width");
    std::copy(it->second.begin(), it->second.end(), row.begin() + static_cast<std::ptrdiff_t>(pos_offset));
    out.labels.push_back(events[i].resident);
    out.sensors.push_back(ev.sensor_id);
  }
  out.scored.assign(events.size(), 1);
  return out;
}

std::size_t FeatureSequence::length() const {
  return static_cast<std::size_t>(std::count(mask.begin(), mask.end(), std::uint8_t{1}));
}

std::vector<FeatureSequence> chunk(const FeatureTable& rows, std::size_t chunk_len) {
  if (chunk_len < 1) throw ConfigError("chunk length must be >= 1");
  const std::size_t n = rows.labels.size();
  const std::size_t width = rows.features.cols();
  std::vector<FeatureSequence> out;
  for (std::size_t start = 0; start < n; start += chunk_len) {
    const std::size_t len = std::min(chunk_len, n - start);
    FeatureSequence seq{Matrix(chunk_len, width), std::vector<int>(chunk_len, kUnknownResident),
                        std::vector<std::uint8_t>(chunk_len, 0),
                        std::vector<std::uint8_t>(chunk_len, 0)};
    for (std::size_t t = 0; t < len; ++t) {
      const auto src = rows.features.row(start + t);
      std::copy(src.begin(), src.end(), seq.features.row(t).begin());
      seq.labels[t] = rows.labels[start + t];
      seq.mask[t] = 1;
      seq.scored[t] = rows.scored.empty() ? 1 : rows.scored[start + t];
    }
    out.push_back(std::move(seq));
  }
  return out;
}

std::vector<FeatureSequence> upsample_training(const std::vector<FeatureSequence>& chunks,
                                               std::size_t factor, std::uint64_t seed) {
  if (factor < 1) throw ConfigError("upsample factor must be >= 1");
  std::vector<FeatureSequence> out;
  out.reserve(chunks.size() * factor);
  for (std::size_t k = 0; k < factor; ++k) out.insert(out.end(), chunks.begin(), chunks.end());
  std::mt19937_64 gen(derive_seed(seed, 0x5550));
  shuffle(out.begin(), out.end(), gen);
  return out;
}

}  // namespace posenc
