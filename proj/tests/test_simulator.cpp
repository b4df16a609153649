#include <doctest.h>

#include <cmath>
#include <limits>
#include <sstream>

#include "posenc/error.hpp"
#include "posenc/ingest.hpp"
#include "posenc/simulator.hpp"

using namespace posenc;

namespace {

AccessibilityGraph fixture_graph(const Fixture& f) { return complete_graph_prune(f.map); }

// Two POIs 5 units apart, no walls.
AccessibilityGraph pair_graph() {
  LayoutMap m;
  m.pois = {{"A", Point{{0.0, 0.0}}}, {"B", Point{{5.0, 0.0}}}};
  return complete_graph_prune(m);
}

std::vector<double> times_at(const SimOutput& s, const std::string& sensor, const char* status) {
  std::vector<double> t;
  for (const auto& e : s.events)
    if (e.sensor_id == sensor && e.status == status) t.push_back(e.timestamp.epoch_seconds());
  return t;
}

}  // namespace

TEST_CASE("square4 residents visit their routes in order") {
  auto f = make_fixture("square4");
  f.run.duration = 6 * 3600.0;
  const auto g = fixture_graph(f);
  const auto sim = simulate(g, f.run);
  REQUIRE(sim.events.size() > 100);
  for (std::size_t r = 0; r < f.run.scripts.size(); ++r) {
    const auto& route = f.run.scripts[r].route;
    std::vector<std::string> seen;
    for (std::size_t i = 0; i < sim.events.size(); ++i)
      if (sim.truth[i] == static_cast<int>(r) &&
          (seen.empty() || seen.back() != sim.events[i].sensor_id))
        seen.push_back(sim.events[i].sensor_id);
    REQUIRE(seen.size() > 10);
    for (std::size_t i = 0; i + 1 < seen.size(); ++i) {
      const auto k = static_cast<std::size_t>(
          std::find(route.begin(), route.end(), seen[i]) - route.begin());
      REQUIRE(k < route.size());
      CHECK(route[(k + 1) % route.size()] == seen[i + 1]);
    }
  }
}

TEST_CASE("motion inside the detection interval is not reported on its own") {
  const auto g = pair_graph();
  SimRun run;
  run.duration = 100.0;
  run.sensors.detection_interval = 20.0;
  const DwellSpec forever{std::numeric_limits<double>::infinity(), 0.0};
  run.scripts = {ResidentScript{"R1", {"A"}, {}, forever, {}, 0.0, 0, 1},
                 ResidentScript{"R2", {"B", "A"}, {}, forever, {{"B", {0.0, 0.0}}}, 0.0, 0, 2}};
  const auto sim = simulate(g, run);
  const double t0 = run.start.epoch_seconds();
  const auto on = times_at(sim, "A", "ON");
  REQUIRE(on.size() == 2);
  CHECK(on[0] - t0 == doctest::Approx(0.0));
  CHECK(on[1] - t0 == doctest::Approx(20.0));  // the pending motion at t = 5, reported late
  const auto off = times_at(sim, "A", "OFF");
  REQUIRE(off.size() == 1);
  CHECK(off[0] - t0 == doctest::Approx(40.0));
}

TEST_CASE("a resident who never leaves keeps triggering at the detection interval") {
  const auto g = pair_graph();
  SimRun run;
  run.duration = 500.0;
  run.sensors.detection_interval = 20.0;
  run.scripts = {ResidentScript{
      "R1", {"A"}, {}, {std::numeric_limits<double>::infinity(), 0.0}, {}, 3.0, 0, 1}};
  const auto sim = simulate(g, run);
  const auto on = times_at(sim, "A", "ON");
  CHECK(on.size() >= 20);
  for (std::size_t i = 0; i + 1 < on.size(); ++i) CHECK(on[i + 1] - on[i] >= 20.0 - 1e-6);
  CHECK(times_at(sim, "A", "OFF").empty());
}

TEST_CASE("zero detection interval emits only ON events") {
  auto f = make_fixture("square4");
  f.run.duration = 3600.0;
  for (const auto& e : simulate(fixture_graph(f), f.run).events) CHECK(e.status == "ON");
}

TEST_CASE("simulation is deterministic and its log round-trips") {
  auto f = make_fixture("cycle8");
  f.run.duration = 86400.0;
  f.run.sensors.detection_interval = 15.0;
  f.run.sensors.p_fail = 0.05;
  const auto g = fixture_graph(f);
  const auto a = simulate(g, f.run);
  const auto b = simulate(g, f.run);
  std::ostringstream la, lb;
  write_log(la, a);
  write_log(lb, b);
  CHECK(la.str() == lb.str());
  f.run.seed += 1;
  std::ostringstream lc;
  write_log(lc, simulate(g, f.run));
  CHECK(lc.str() != la.str());

  std::istringstream in(la.str());
  const auto parsed = parse_log(in, 2009);
  CHECK(parsed.malformed.empty());
  REQUIRE(parsed.records.size() == a.events.size());
  for (std::size_t i = 0; i + 1 < parsed.records.size(); ++i)
    CHECK(parsed.records[i].timestamp.epoch_seconds() <= parsed.records[i + 1].timestamp.epoch_seconds());

  const auto labelled = label_events(parsed.records, a.residents);
  std::size_t agree = 0;
  for (std::size_t i = 0; i < a.truth.size(); ++i) agree += labelled.events[i].resident == a.truth[i];
  CHECK(static_cast<double>(agree) >= 0.99 * static_cast<double>(a.truth.size()));
}

TEST_CASE("truth csv") {
  auto f = make_fixture("square4");
  f.run.duration = 600.0;
  const auto sim = simulate(fixture_graph(f), f.run);
  std::ostringstream os;
  write_truth_csv(os, sim);
  std::istringstream is(os.str());
  std::string line;
  std::getline(is, line);
  CHECK(line == "timestamp,sensor,resident");
  std::size_t rows = 0;
  while (std::getline(is, line)) {
    CHECK(line.rfind(format_timestamp(sim.events[rows].timestamp), 0) == 0);
    ++rows;
  }
  CHECK(rows == sim.events.size());
}

TEST_CASE("schedule windows send residents to their target") {
  auto f = make_fixture("square4");
  f.run.duration = 86400.0;
  f.run.scripts.resize(1);
  f.run.scripts[0].schedule = {{3600, 7200, "M3"}};
  const auto sim = simulate(fixture_graph(f), f.run);
  const double t0 = f.run.start.epoch_seconds();
  for (const auto& e : sim.events) {
    const double t = e.timestamp.epoch_seconds() - t0;
    if (t >= 3700 && t < 7200) CHECK(e.sensor_id == "M3");
  }
}

TEST_CASE("fixtures") {
  const auto c = make_fixture("cycle8");
  const auto g = fixture_graph(c);
  CHECK(g.size() == 8);
  CHECK(g.edge_count() == 8);
  for (std::size_t k = 0; k < 8; ++k) CHECK(g.has_edge(k, (k + 1) % 8));

  const auto o = make_fixture("office9");
  CHECK(o.map.pois.size() == 9);
  CHECK(o.home_sensors.size() == 3);
  CHECK(connected_components(fixture_graph(o)).size() == 1);

  CHECK(fixture_names().size() == 3);
  CHECK_THROWS_AS(make_fixture("mansion"), ConfigError);
}

TEST_CASE("invalid scripts") {
  auto f = make_fixture("square4");
  const auto g = fixture_graph(f);
  f.run.scripts[0].route = {"M1", "M3"};  // blocked diagonal
  CHECK_THROWS_AS(simulate(g, f.run), DataError);
  f.run.scripts[0].route = {"M1", "M9"};
  CHECK_THROWS_AS(simulate(g, f.run), DataError);
  f = make_fixture("square4");
  f.run.duration = 0.0;
  CHECK_THROWS_AS(simulate(g, f.run), ConfigError);
  f = make_fixture("square4");
  f.run.sensors.p_fail = 1.0;
  CHECK_THROWS_AS(simulate(g, f.run), ConfigError);
}
