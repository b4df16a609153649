#pragma once

#include <cstdint>
#include <iosfwd>
#include <limits>
#include <map>
#include <string>
#include <vector>

#include "posenc/geometry.hpp"
#include "posenc/ingest.hpp"
#include "posenc/timecodec.hpp"

namespace posenc {

struct ScheduleEntry {
  int start_sod = 0;  // second of day, inclusive
  int end_sod = 0;    // exclusive
  std::string target;
};

struct DwellSpec {
  double mean = 30.0;  // seconds; +inf keeps the resident in place forever
  double stddev = 0.0;
};

/// Movement script of one simulated resident. Outside schedule windows the
/// resident cycles through `route`; inside a window it heads for the window's
/// target along shortest paths and stays there until the window closes.
struct ResidentScript {
  std::string resident_id;
  std::vector<std::string> route;
  std::vector<ScheduleEntry> schedule;
  DwellSpec dwell;
  std::map<std::string, DwellSpec> dwell_at;  // per-POI overrides
  double fidget_period = 0.0;  // seconds between motions while dwelling, 0 = none
  std::size_t start_index = 0;
  std::uint64_t rng_seed = 0;
};

/// Off-the-shelf motion sensor: after a report it stays silent for
/// `detection_interval` seconds, then reports ON again if anything moved in the
/// meantime, otherwise OFF.
struct SensorModel {
  double detection_interval = 0.0;
  double p_fail = 0.0;
  std::map<std::string, double> p_fail_at;
};

struct SimRun {
  double duration = 86400.0;
  std::vector<ResidentScript> scripts;
  SensorModel sensors;
  double speed = 1.0;  // distance units per second
  Timestamp start{2009, 2, 2, 0, 0, 0, 0};
  std::uint64_t seed = 0;
};

struct SimOutput {
  std::vector<std::string> residents;
  std::vector<EventRecord> events;  // annotated, time-ordered
  std::vector<int> truth;           // resident index per event
};

/// Discrete-event simulation of the scripted residents on the graph. Throws
/// DataError when a script names an unknown POI or takes a route step that is
/// not an edge, and ConfigError on an invalid run description.
SimOutput simulate(const AccessibilityGraph& graph, const SimRun& run);

void write_log(std::ostream& out, const SimOutput& sim);
/// timestamp,sensor,resident
void write_truth_csv(std::ostream& out, const SimOutput& sim);

struct Fixture {
  std::string name;
  LayoutMap map;
  SimRun run;
  std::map<std::string, std::string> home_sensors;
};

/// Built-in reproducible fixtures: "square4", "cycle8", "office9".
/// Throws ConfigError on an unknown name.
Fixture make_fixture(const std::string& name);

std::vector<std::string> fixture_names();

}  // namespace posenc
