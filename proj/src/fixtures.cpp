#include <cmath>
#include <numbers>

#include "posenc/error.hpp"
#include "posenc/simulator.hpp"

namespace posenc {

namespace {

Point pt(double x, double y) { return Point{{x, y}}; }
Segment seg(double x1, double y1, double x2, double y2) { return {pt(x1, y1), pt(x2, y2)}; }

// Unit square scaled by 10 with one short wall across the centre, so both
// diagonals are blocked and residents must walk around the sides.
Fixture square4() {
  Fixture f;
  f.name = "square4";
  f.map.pois = {{"M1", pt(0, 0)}, {"M2", pt(10, 0)}, {"M3", pt(10, 10)}, {"M4", pt(0, 10)}};
  f.map.obstacles = {seg(4, 5, 6, 5)};
  ResidentScript r1{"R1", {"M1", "M4", "M3", "M2"}, {}, {20.0, 5.0}, {}, 0.0, 0, 1};
  ResidentScript r2{"R2", {"M1", "M2", "M3", "M4"}, {}, {20.0, 5.0}, {}, 0.0, 2, 2};
  f.run.duration = 86400.0;
  f.run.scripts = {r1, r2};
  f.run.seed = 4;
  return f;
}

// Eight POIs on a ring of radius 10. Spokes from the centre out to radius 9
// at every POI angle block all chords while leaving the ring edges open.
Fixture cycle8() {
  Fixture f;
  f.name = "cycle8";
  for (int k = 0; k < 8; ++k) {
    const double a = k * std::numbers::pi / 4.0;
    f.map.pois.push_back({"M" + std::to_string(k + 1), pt(10.0 * std::cos(a), 10.0 * std::sin(a))});
    f.map.obstacles.push_back(seg(0, 0, 9.0 * std::cos(a), 9.0 * std::sin(a)));
  }
  ResidentScript r1{"R1", {"M1", "M8", "M7", "M6", "M5", "M4", "M3", "M2"}, {}, {120.0, 60.0}, {},
                    0.0, 0, 11};
  ResidentScript r2{"R2", {"M1", "M2", "M3", "M4", "M5", "M6", "M7", "M8"}, {}, {120.0, 60.0}, {},
                    0.0, 4, 12};
  f.run.duration = 10 * 86400.0;
  f.run.scripts = {r1, r2};
  f.run.seed = 8;
  return f;
}

// Corridor office: entrance and four corridor sensors on y = 0, three
// cubicles (home sensors H1..H3) and a kitchen behind walls with doorways.
// Residents mostly sit at their cubicle, where they keep triggering the home
// sensor, and occasionally walk a loop through the corridor.
Fixture office9() {
  Fixture f;
  f.name = "office9";
  f.map.pois = {{"ENT", pt(0, 0)},  {"C1", pt(10, 0)},  {"C2", pt(20, 0)},
                {"C3", pt(30, 0)},  {"C4", pt(40, 0)},  {"H1", pt(10, 8)},
                {"H2", pt(20, 8)},  {"H3", pt(20, -8)}, {"KIT", pt(30, 8)}};
  f.map.obstacles = {
      // north wall with doorways at x = 10, 20, 30
      seg(-2, 4, 8, 4), seg(12, 4, 18, 4), seg(22, 4, 28, 4), seg(32, 4, 45, 4),
      // south wall with a doorway at x = 20
      seg(-2, -4, 18, -4), seg(22, -4, 45, -4),
      // partitions between the northern rooms
      seg(15, 4, 15, 12), seg(25, 4, 25, 12)};
  const DwellSpec at_home{1000.0, 300.0};
  const DwellSpec passing{10.0, 4.0};
  ResidentScript r1{"R1", {"H1", "C1", "ENT", "C1"}, {}, passing, {{"H1", at_home}}, 24.0, 0, 21};
  ResidentScript r2{"R2", {"H2", "C2", "C3", "KIT", "C3", "C2"}, {}, passing, {{"H2", at_home}},
                    24.0, 0, 22};
  ResidentScript r3{"R3", {"H3", "C2", "C1", "ENT", "C1", "C2"}, {}, passing, {{"H3", at_home}},
                    24.0, 0, 23};
  f.run.duration = 5 * 86400.0;
  f.run.scripts = {r1, r2, r3};
  f.run.seed = 9;
  f.home_sensors = {{"R1", "H1"}, {"R2", "H2"}, {"R3", "H3"}};
  return f;
}

}  // namespace

std::vector<std::string> fixture_names() { return {"square4", "cycle8", "office9"}; }

Fixture make_fixture(const std::string& name) {
  if (name == "square4") return square4();
  if (name == "cycle8") return cycle8();
  if (name == "office9") return office9();
  throw ConfigError("unknown fixture '" + name + "'");
}

}  // namespace posenc
