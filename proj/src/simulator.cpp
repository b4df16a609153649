#include "posenc/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <ostream>
#include <queue>
#include <random>

#include "posenc/error.hpp"
#include "posenc/rng.hpp"

namespace posenc {

namespace {

constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();

enum class Kind { kArrive, kFidget, kDepart, kCheck };

struct QueuedEvent {
  double time;
  std::uint64_t seq;
  Kind kind;
  std::size_t who;  // resident for movement events, sensor for checks
  std::size_t poi;
  std::uint64_t token;
  bool operator>(const QueuedEvent& o) const {
    return time != o.time ? time > o.time : seq > o.seq;
  }
};

struct Resident {
  const ResidentScript* script = nullptr;
  std::vector<std::size_t> route;
  std::size_t route_pos = 0;
  std::size_t at = kNone;
  std::uint64_t token = 0;
  double leave_at = 0.0;
  std::mt19937_64 gen;
};

struct SensorState {
  bool blocked = false;
  bool pending = false;
  int pending_resident = 0;
  int last_resident = 0;
  std::mt19937_64 gen;
};

struct Emitted {
  double time;
  std::size_t sensor;
  bool on;
  int resident;
};

// Next hop along shortest paths (Floyd-Warshall on edge lengths).
std::vector<std::vector<std::size_t>> next_hops(const AccessibilityGraph& g) {
  const std::size_t n = g.size();
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<std::vector<double>> d(n, std::vector<double>(n, inf));
  std::vector<std::vector<std::size_t>> nxt(n, std::vector<std::size_t>(n, kNone));
  for (std::size_t i = 0; i < n; ++i) {
    d[i][i] = 0.0;
    nxt[i][i] = i;
    for (std::size_t j = 0; j < n; ++j)
      if (g.has_edge(i, j)) {
        d[i][j] = g.dist(i, j);
        nxt[i][j] = j;
      }
  }
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (d[i][k] + d[k][j] < d[i][j]) {
          d[i][j] = d[i][k] + d[k][j];
          nxt[i][j] = nxt[i][k];
        }
  return nxt;
}

double normal(std::mt19937_64& gen) {
  const double u1 = 1.0 - unit_uniform(gen);
  const double u2 = unit_uniform(gen);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

class Simulation {
 public:
  Simulation(const AccessibilityGraph& g, const SimRun& run) : g_(g), run_(run) {
    if (!(run.duration > 0.0)) throw ConfigError("simulation duration must be > 0");
    if (run.scripts.empty()) throw ConfigError("simulation needs at least one resident script");
    if (!(run.speed > 0.0)) throw ConfigError("movement speed must be > 0");
    const auto& sm = run.sensors;
    if (sm.detection_interval < 0.0) throw ConfigError("detection interval must be >= 0");
    auto check_p = [](double p) {
      if (!(p >= 0.0 && p < 1.0)) throw ConfigError("sensor failure probability must lie in [0, 1)");
    };
    check_p(sm.p_fail);
    for (const auto& [id, p] : sm.p_fail_at) {
      g.index_of(id);
      check_p(p);
    }
    hops_ = next_hops(g);
    start_sod_ = run.start.hour * 3600 + run.start.minute * 60 + run.start.second;

    sensors_.resize(g.size());
    for (std::size_t s = 0; s < g.size(); ++s)
      sensors_[s].gen.seed(derive_seed(run.seed, 0x53454e00 + s));

    for (std::size_t r = 0; r < run.scripts.size(); ++r) {
      const auto& sc = run.scripts[r];
      if (sc.route.empty()) throw ConfigError("resident '" + sc.resident_id + "' has an empty route");
      Resident res;
      res.script = &sc;
      for (const auto& id : sc.route) res.route.push_back(g.index_of(id));
      for (std::size_t k = 0; res.route.size() > 1 && k < res.route.size(); ++k) {
        const std::size_t a = res.route[k];
        const std::size_t b = res.route[(k + 1) % res.route.size()];
        if (a != b && !g.has_edge(a, b))
          throw DataError("route of '" + sc.resident_id + "' steps from " + g.node_ids[a] + " to " +
                          g.node_ids[b] + " without an edge");
      }
      for (const auto& e : sc.schedule) {
        const std::size_t t = g.index_of(e.target);
        for (std::size_t p : res.route)
          if (hops_[p][t] == kNone || hops_[t][p] == kNone)
            throw DataError("schedule target " + e.target + " of '" + sc.resident_id +
                            "' is unreachable from its route");
        if (e.start_sod < 0 || e.end_sod > 86400 || e.start_sod >= e.end_sod)
          throw ConfigError("schedule window of '" + sc.resident_id + "' is invalid");
      }
      if (sc.start_index >= res.route.size())
        throw ConfigError("start index of '" + sc.resident_id + "' is outside its route");
      res.route_pos = sc.start_index;
      res.gen.seed(derive_seed(run.seed ^ splitmix64(sc.rng_seed), 0x52455300 + r));
      residents_.push_back(std::move(res));
    }
  }

  SimOutput run() {
    for (std::size_t r = 0; r < residents_.size(); ++r)
      push(0.0, Kind::kArrive, r, residents_[r].route[residents_[r].route_pos]);
    while (!queue_.empty()) {
      const QueuedEvent ev = queue_.top();
      queue_.pop();
      if (ev.time >= run_.duration) break;
      switch (ev.kind) {
        case Kind::kArrive: arrive(ev.who, ev.poi, ev.time); break;
        case Kind::kFidget: fidget(ev.who, ev.token, ev.time); break;
        case Kind::kDepart: depart(ev.who, ev.token, ev.time); break;
        case Kind::kCheck: check(ev.who, ev.time); break;
      }
    }
    return finish();
  }

 private:
  void push(double t, Kind k, std::size_t who, std::size_t poi = 0, std::uint64_t token = 0) {
    queue_.push({t, seq_++, k, who, poi, token});
  }

  int sod_at(double t) const {
    const auto s = static_cast<long long>(std::floor(t)) + start_sod_;
    return static_cast<int>(s % 86400);
  }

  const ScheduleEntry* active_window(const Resident& r, double t) const {
    const int sod = sod_at(t);
    for (const auto& e : r.script->schedule)
      if (sod >= e.start_sod && sod < e.end_sod) return &e;
    return nullptr;
  }

  double sample_dwell(Resident& r, std::size_t poi) {
    DwellSpec spec = r.script->dwell;
    if (auto it = r.script->dwell_at.find(g_.node_ids[poi]); it != r.script->dwell_at.end())
      spec = it->second;
    if (std::isinf(spec.mean)) return spec.mean;
    return std::max(0.0, spec.mean + spec.stddev * normal(r.gen));
  }

  void begin_dwell(std::size_t who, double t) {
    auto& r = residents_[who];
    ++r.token;
    double stay;
    const ScheduleEntry* win = active_window(r, t);
    if (win && g_.index_of(win->target) == r.at)
      stay = static_cast<double>(win->end_sod - sod_at(t)) - (t - std::floor(t));
    else
      stay = sample_dwell(r, r.at);
    r.leave_at = t + stay;
    const double fp = r.script->fidget_period;
    if (fp > 0.0 && t + fp < r.leave_at) push(t + fp, Kind::kFidget, who, r.at, r.token);
    if (std::isfinite(r.leave_at)) push(r.leave_at, Kind::kDepart, who, r.at, r.token);
  }

  void arrive(std::size_t who, std::size_t poi, double t) {
    auto& r = residents_[who];
    r.at = poi;
    if (r.route[r.route_pos] != poi && r.route[(r.route_pos + 1) % r.route.size()] == poi &&
        !active_window(r, t))
      r.route_pos = (r.route_pos + 1) % r.route.size();
    motion(poi, static_cast<int>(who), t);
    begin_dwell(who, t);
  }

  void fidget(std::size_t who, std::uint64_t token, double t) {
    auto& r = residents_[who];
    if (token != r.token) return;
    motion(r.at, static_cast<int>(who), t);
    const double next = t + r.script->fidget_period;
    if (next < r.leave_at) push(next, Kind::kFidget, who, r.at, token);
  }

  void depart(std::size_t who, std::uint64_t token, double t) {
    auto& r = residents_[who];
    if (token != r.token) return;
    std::size_t goal;
    if (const ScheduleEntry* win = active_window(r, t)) {
      goal = g_.index_of(win->target);
    } else if (r.route[r.route_pos] != r.at) {
      goal = r.route[r.route_pos];  // returning to the route after a window
    } else {
      goal = r.route[(r.route_pos + 1) % r.route.size()];
    }
    if (goal == r.at) {
      begin_dwell(who, t);
      return;
    }
    const std::size_t next = hops_[r.at][goal];
    const double travel = g_.dist(r.at, next) / run_.speed;
    ++r.token;
    push(t + travel, Kind::kArrive, who, next);
  }

  void motion(std::size_t sensor, int resident, double t) {
    auto& s = sensors_[sensor];
    double p = run_.sensors.p_fail;
    if (auto it = run_.sensors.p_fail_at.find(g_.node_ids[sensor]); it != run_.sensors.p_fail_at.end())
      p = it->second;
    if (p > 0.0 && unit_uniform(s.gen) < p) return;
    const double interval = run_.sensors.detection_interval;
    if (interval == 0.0) {
      emitted_.push_back({t, sensor, true, resident});
      return;
    }
    s.last_resident = resident;
    if (!s.blocked) {
      emitted_.push_back({t, sensor, true, resident});
      s.blocked = true;
      s.pending = false;
      push(t + interval, Kind::kCheck, sensor);
    } else {
      s.pending = true;
      s.pending_resident = resident;
    }
  }

  void check(std::size_t sensor, double t) {
    auto& s = sensors_[sensor];
    if (s.pending) {
      emitted_.push_back({t, sensor, true, s.pending_resident});
      s.pending = false;
      push(t + run_.sensors.detection_interval, Kind::kCheck, sensor);
    } else {
      emitted_.push_back({t, sensor, false, s.last_resident});
      s.blocked = false;
    }
  }

  SimOutput finish() {
    SimOutput out;
    for (const auto& r : residents_) out.residents.push_back(r.script->resident_id);
    const double t0 = run_.start.epoch_seconds();
    for (std::size_t i = 0; i < emitted_.size(); ++i) {
      const auto& e = emitted_[i];
      EventRecord rec;
      rec.timestamp = Timestamp::from_epoch_seconds(t0 + e.time);
      rec.sensor_id = g_.node_ids[e.sensor];
      rec.status = e.on ? "ON" : "OFF";
      const bool first = i == 0 || emitted_[i - 1].resident != e.resident;
      const bool last = i + 1 == emitted_.size() || emitted_[i + 1].resident != e.resident;
      const std::string activity = out.residents[static_cast<std::size_t>(e.resident)] + "_Sim";
      if (first)
        rec.annotation = Annotation{activity, Marker::kBegin};
      else if (last)
        rec.annotation = Annotation{activity, Marker::kEnd};
      out.events.push_back(std::move(rec));
      out.truth.push_back(e.resident);
    }
    return out;
  }

  const AccessibilityGraph& g_;
  const SimRun& run_;
  std::vector<std::vector<std::size_t>> hops_;
  int start_sod_ = 0;
  std::vector<Resident> residents_;
  std::vector<SensorState> sensors_;
  std::priority_queue<QueuedEvent, std::vector<QueuedEvent>, std::greater<>> queue_;
  std::uint64_t seq_ = 0;
  std::vector<Emitted> emitted_;
};

}  // namespace

SimOutput simulate(const AccessibilityGraph& graph, const SimRun& run) {
  return Simulation(graph, run).run();
}

void write_log(std::ostream& out, const SimOutput& sim) {
  for (const auto& e : sim.events) out << serialize_event(e) << '\n';
}

void write_truth_csv(std::ostream& out, const SimOutput& sim) {
  out << "timestamp,sensor,resident\n";
  for (std::size_t i = 0; i < sim.events.size(); ++i)
    out << format_timestamp(sim.events[i].timestamp) << ',' << sim.events[i].sensor_id << ','
        << sim.residents[static_cast<std::size_t>(sim.truth[i])] << '\n';
}

}  // namespace posenc
