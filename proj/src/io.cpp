#include "posenc/io.hpp"

#include <cstdio>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "posenc/error.hpp"

namespace posenc::io {

namespace {

Point point_from(const json& j, const char* x, const char* y) {
  return Point{{j.at(x).get<double>(), j.at(y).get<double>()}};
}

json flat(const Matrix& m) { return json(std::vector<double>(m.flat().begin(), m.flat().end())); }

Matrix square_from(const json& arr, std::size_t n, const char* what) {
  const auto v = arr.get<std::vector<double>>();
  if (v.size() != n * n) throw DataError(std::string(what) + " must hold n*n values");
  Matrix m(n, n);
  std::copy(v.begin(), v.end(), m.data());
  return m;
}

json edges_of(const AccessibilityGraph& g) {
  json edges = json::array();
  for (std::size_t i = 0; i < g.size(); ++i)
    for (std::size_t j = i + 1; j < g.size(); ++j)
      if (g.has_edge(i, j))
        edges.push_back({{"a", g.node_ids[i]}, {"b", g.node_ids[j]}, {"dist", g.dist(i, j)}});
  return edges;
}

void fill_from(std::span<double> dst, const json& src, const char* what) {
  const auto v = src.get<std::vector<double>>();
  if (v.size() != dst.size())
    throw DataError(std::string("checkpoint tensor ") + what + " has the wrong size");
  std::copy(v.begin(), v.end(), dst.begin());
}

}  // namespace

LayoutMap layout_from_json(const json& j) {
  try {
    LayoutMap map;
    for (const auto& p : j.at("pois")) {
      Poi poi;
      poi.id = p.at("id").get<std::string>();
      if (p.contains("coords"))
        poi.point.coords = p.at("coords").get<std::vector<double>>();
      else
        poi.point = point_from(p, "x", "y");
      map.pois.push_back(std::move(poi));
    }
    if (j.contains("obstacles"))
      for (const auto& o : j.at("obstacles")) {
        if (o.contains("a"))
          map.obstacles.push_back({Point{o.at("a").get<std::vector<double>>()},
                                   Point{o.at("b").get<std::vector<double>>()}});
        else
          map.obstacles.push_back({point_from(o, "x1", "y1"), point_from(o, "x2", "y2")});
      }
    if (j.contains("manual_edges"))
      for (const auto& e : j.at("manual_edges")) {
        if (e.is_array())
          map.manual_edges.emplace_back(e.at(0).get<std::string>(), e.at(1).get<std::string>());
        else
          map.manual_edges.emplace_back(e.at("a").get<std::string>(), e.at("b").get<std::string>());
      }
    validate(map);
    return map;
  } catch (const json::exception& e) {
    throw DataError(std::string("malformed layout: ") + e.what());
  }
}

json layout_to_json(const LayoutMap& map) {
  json pois = json::array();
  for (const auto& p : map.pois) {
    if (p.point.dim() == 2)
      pois.push_back({{"id", p.id}, {"x", p.point[0]}, {"y", p.point[1]}});
    else
      pois.push_back({{"id", p.id}, {"coords", p.point.coords}});
  }
  json obstacles = json::array();
  for (const auto& o : map.obstacles)
    obstacles.push_back({{"x1", o.a[0]}, {"y1", o.a[1]}, {"x2", o.b[0]}, {"y2", o.b[1]}});
  json manual = json::array();
  for (const auto& [a, b] : map.manual_edges) manual.push_back({a, b});
  return {{"pois", pois}, {"obstacles", obstacles}, {"manual_edges", manual}};
}

json graph_to_json(const AccessibilityGraph& g) {
  json points = json::array();
  for (const auto& p : g.points) points.push_back(p.coords);
  return {{"node_ids", g.node_ids}, {"points", points}, {"dist", flat(g.dist)},
          {"edges", edges_of(g)}};
}

AccessibilityGraph graph_from_json(const json& j) {
  try {
    AccessibilityGraph g;
    g.node_ids = j.at("node_ids").get<std::vector<std::string>>();
    g.dist = square_from(j.at("dist"), g.node_ids.size(), "dist");
    if (j.contains("points"))
      for (const auto& p : j.at("points")) g.points.push_back(Point{p.get<std::vector<double>>()});
    return g;
  } catch (const json::exception& e) {
    throw DataError(std::string("malformed graph: ") + e.what());
  }
}

json apg_to_json(const AccessibilityGraph& g, const AccessProbabilityGraph& apg) {
  json j = graph_to_json(g);
  j["trans"] = flat(apg.trans);
  j["self_weight"] = apg.self_weight;
  j["isolated"] = apg.isolated;
  return j;
}

AccessProbabilityGraph apg_from_json(const json& j) {
  try {
    AccessProbabilityGraph apg;
    apg.node_ids = j.at("node_ids").get<std::vector<std::string>>();
    apg.trans = square_from(j.at("trans"), apg.node_ids.size(), "trans");
    apg.self_weight = j.at("self_weight").get<double>();
    if (j.contains("isolated")) apg.isolated = j.at("isolated").get<std::vector<std::string>>();
    return apg;
  } catch (const json::exception& e) {
    throw DataError(std::string("malformed APG: ") + e.what());
  }
}

json embeddings_to_json(const NodeEmbeddings& e) {
  json vectors = json::array();
  for (std::size_t i = 0; i < e.vectors.rows(); ++i) {
    const auto r = e.vectors.row(i);
    vectors.push_back(std::vector<double>(r.begin(), r.end()));
  }
  return {{"node_ids", e.node_ids}, {"dimension", e.dimension()}, {"vectors", vectors}};
}

NodeEmbeddings embeddings_from_json(const json& j) {
  try {
    NodeEmbeddings e;
    e.node_ids = j.at("node_ids").get<std::vector<std::string>>();
    const auto d = j.at("dimension").get<std::size_t>();
    const auto& vecs = j.at("vectors");
    if (vecs.size() != e.node_ids.size()) throw DataError("embedding count does not match node_ids");
    e.vectors = Matrix(e.node_ids.size(), d);
    for (std::size_t i = 0; i < vecs.size(); ++i) {
      const auto v = vecs[i].get<std::vector<double>>();
      if (v.size() != d) throw DataError("embedding " + e.node_ids[i] + " has the wrong dimension");
      std::copy(v.begin(), v.end(), e.vectors.row(i).begin());
    }
    return e;
  } catch (const json::exception& ex) {
    throw DataError(std::string("malformed embeddings: ") + ex.what());
  }
}

void write_embeddings_csv(std::ostream& out, const NodeEmbeddings& e) {
  out << "id";
  for (std::size_t c = 0; c < e.dimension(); ++c) out << ",v" << c;
  out << '\n' << std::setprecision(17);
  for (std::size_t i = 0; i < e.node_ids.size(); ++i) {
    out << e.node_ids[i];
    for (double v : e.vectors.row(i)) out << ',' << v;
    out << '\n';
  }
}

void write_chunks_jsonl(std::ostream& out, const std::vector<FeatureSequence>& chunks) {
  for (const auto& c : chunks) {
    json rows = json::array();
    for (std::size_t t = 0; t < c.chunk_len(); ++t) {
      const auto r = c.features.row(t);
      rows.push_back(std::vector<double>(r.begin(), r.end()));
    }
    json line = {{"features", rows}, {"labels", c.labels}, {"mask", c.mask}};
    out << line.dump() << '\n';
  }
}

std::vector<FeatureSequence> read_chunks_jsonl(std::istream& in) {
  std::vector<FeatureSequence> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    try {
      const json j = json::parse(line);
      FeatureSequence s;
      s.labels = j.at("labels").get<std::vector<int>>();
      s.mask = j.at("mask").get<std::vector<std::uint8_t>>();
      const auto& rows = j.at("features");
      const std::size_t width = rows.empty() ? 0 : rows[0].size();
      s.features = Matrix(rows.size(), width);
      for (std::size_t t = 0; t < rows.size(); ++t) {
        const auto v = rows[t].get<std::vector<double>>();
        if (v.size() != width) throw DataError("ragged feature rows");
        std::copy(v.begin(), v.end(), s.features.row(t).begin());
      }
      s.scored.assign(s.labels.size(), 1);
      out.push_back(std::move(s));
    } catch (const json::exception& e) {
      throw DataError("chunk line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  return out;
}

json checkpoint_to_json(const LstmParams& p, const json& config) {
  auto vec = [](std::span<const double> s) { return std::vector<double>(s.begin(), s.end()); };
  return {{"format", "posenc-lstm"},
          {"version", kCheckpointVersion},
          {"config", config},
          {"dims", {{"hidden", p.hidden}, {"input", p.input}, {"classes", p.classes}}},
          {"gate_order", {"input", "forget", "output", "cell"}},
          {"params",
           {{"fwd_w", vec(p.fwd.w.flat())},
            {"fwd_b", p.fwd.b},
            {"bwd_w", vec(p.bwd.w.flat())},
            {"bwd_b", p.bwd.b},
            {"w_tag", vec(p.w_tag.flat())},
            {"b_tag", p.b_tag}}}};
}

LstmParams checkpoint_from_json(const json& j) {
  try {
    if (j.at("format") != "posenc-lstm") throw DataError("not a posenc-lstm checkpoint");
    if (j.at("version").get<int>() != kCheckpointVersion)
      throw DataError("unsupported checkpoint version " + j.at("version").dump());
    const auto& d = j.at("dims");
    LstmParams p = LstmParams::zeros(d.at("hidden").get<std::size_t>(),
                                     d.at("input").get<std::size_t>(),
                                     d.at("classes").get<std::size_t>());
    const auto& q = j.at("params");
    fill_from(p.fwd.w.flat(), q.at("fwd_w"), "fwd_w");
    fill_from(p.fwd.b, q.at("fwd_b"), "fwd_b");
    fill_from(p.bwd.w.flat(), q.at("bwd_w"), "bwd_w");
    fill_from(p.bwd.b, q.at("bwd_b"), "bwd_b");
    fill_from(p.w_tag.flat(), q.at("w_tag"), "w_tag");
    fill_from(p.b_tag, q.at("b_tag"), "b_tag");
    return p;
  } catch (const json::exception& e) {
    throw DataError(std::string("malformed checkpoint: ") + e.what());
  }
}

json report_to_json(const EvalReport& r, const std::vector<std::string>& classes) {
  return {{"accuracy", r.accuracy}, {"precision", r.precision}, {"recall", r.recall},
          {"f1", r.f1},             {"total", r.total},         {"classes", classes},
          {"confusion", r.confusion}};
}

EvalReport report_from_json(const json& j) {
  try {
    EvalReport r;
    r.accuracy = j.at("accuracy").get<double>();
    r.precision = j.at("precision").get<double>();
    r.recall = j.at("recall").get<double>();
    r.f1 = j.at("f1").get<double>();
    r.total = j.at("total").get<std::size_t>();
    r.confusion = j.at("confusion").get<std::vector<std::vector<std::size_t>>>();
    return r;
  } catch (const json::exception& e) {
    throw DataError(std::string("malformed report: ") + e.what());
  }
}

json load_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open '" + path.string() + "'");
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw DataError("'" + path.string() + "' is not valid JSON: " + e.what());
  }
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write '" + path.string() + "'");
  out << text;
  if (!out) throw DataError("write to '" + path.string() + "' failed");
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

std::string file_digest(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot read '" + path.string() + "'");
  std::uint64_t h = 0xcbf29ce484222325ULL;
  char buf[1 << 14];
  while (in.read(buf, sizeof buf) || in.gcount() > 0) {
    for (std::streamsize i = 0; i < in.gcount(); ++i) {
      h ^= static_cast<unsigned char>(buf[i]);
      h *= 0x100000001b3ULL;
    }
  }
  char hex[17];
  std::snprintf(hex, sizeof hex, "%016llx", static_cast<unsigned long long>(h));
  return hex;
}

}  // namespace posenc::io
