#include <doctest.h>

#include <sstream>

#include "paper_example.hpp"
#include "posenc/config.hpp"
#include "posenc/error.hpp"
#include "posenc/graph.hpp"
#include "posenc/io.hpp"
#include "posenc/simulator.hpp"
#include "toy.hpp"

using namespace posenc;
using io::json;

TEST_CASE("layout round trip") {
  const auto f = make_fixture("office9");
  LayoutMap m = f.map;
  m.manual_edges = {{"H1", "H2"}};
  const LayoutMap back = io::layout_from_json(io::layout_to_json(m));
  REQUIRE(back.pois.size() == m.pois.size());
  for (std::size_t i = 0; i < m.pois.size(); ++i) {
    CHECK(back.pois[i].id == m.pois[i].id);
    CHECK(back.pois[i].point == m.pois[i].point);
  }
  REQUIRE(back.obstacles.size() == m.obstacles.size());
  CHECK(back.obstacles[3].b == m.obstacles[3].b);
  CHECK(back.manual_edges == m.manual_edges);
}

TEST_CASE("layout accepts both point spellings") {
  const auto j = json::parse(R"({"pois": [{"id": "A", "x": 0, "y": 1}, {"id": "B", "coords": [2, 3]}],
    "obstacles": [{"x1": 0, "y1": 0, "x2": 1, "y2": 1}], "manual_edges": [{"a": "A", "b": "B"}]})");
  const auto m = io::layout_from_json(j);
  CHECK(m.pois[1].point == Point{{2.0, 3.0}});
  CHECK(m.manual_edges.front().second == "B");
  CHECK_THROWS_AS(io::layout_from_json(json::parse(R"({"pois": [{"x": 0}]})")), DataError);
}

TEST_CASE("graph, apg and embedding round trips") {
  const auto g = four_node_graph();
  const auto apg = apg_from_ag(g, 0.5);
  const auto g2 = io::graph_from_json(io::graph_to_json(g));
  CHECK(g2.node_ids == g.node_ids);
  CHECK(g2.dist == g.dist);
  const auto apg2 = io::apg_from_json(io::apg_to_json(g, apg));
  CHECK(apg2.trans == apg.trans);
  CHECK(apg2.self_weight == 0.5);

  NodeEmbeddings e{{"a", "b"}, Matrix(2, 3)};
  e.vectors(1, 2) = 0.1 + 0.2;
  const auto e2 = io::embeddings_from_json(io::embeddings_to_json(e));
  CHECK(e2.vectors == e.vectors);
  CHECK(e2.node_ids == e.node_ids);
  std::ostringstream csv;
  io::write_embeddings_csv(csv, e);
  CHECK(csv.str().rfind("id,v0,v1,v2\n", 0) == 0);
}

TEST_CASE("chunk jsonl round trip") {
  std::vector<FeatureSequence> chunks{toy_sequence(6, 4, 3, 2, 1), toy_sequence(6, 6, 3, 2, 2)};
  std::stringstream ss;
  io::write_chunks_jsonl(ss, chunks);
  const auto back = io::read_chunks_jsonl(ss);
  REQUIRE(back.size() == 2);
  for (std::size_t i = 0; i < 2; ++i) {
    CHECK(back[i].features == chunks[i].features);
    CHECK(back[i].labels == chunks[i].labels);
    CHECK(back[i].mask == chunks[i].mask);
  }
}

TEST_CASE("checkpoint round trip") {
  const auto p = LstmParams::init(3, 4, 2, 9);
  const json j = io::checkpoint_to_json(p, json{{"seed", 1}});
  CHECK(j.at("format") == "posenc-lstm");
  CHECK(io::checkpoint_from_json(j) == p);
  json bad = j;
  bad["version"] = 99;
  CHECK_THROWS_AS(io::checkpoint_from_json(bad), DataError);
}

TEST_CASE("report round trip") {
  const auto r = make_report({{3, 1}, {2, 4}});
  const auto back = io::report_from_json(io::report_to_json(r, {"R1", "R2"}));
  CHECK(back.accuracy == r.accuracy);
  CHECK(back.f1 == r.f1);
  CHECK(back.confusion == r.confusion);
}

TEST_CASE("config parsing") {
  const auto c = config_from_json(json::parse(R"({"seed": 7, "logs": ["a.log"], "encoder": "none"})"),
                                  "/base");
  CHECK(c.seed == 7);
  CHECK(c.logs.front() == std::filesystem::path("/base/a.log"));
  CHECK(c.encoders == std::vector<std::string>{"none"});
  CHECK(c.walk.rng_seed != c.skipgram.rng_seed);
  CHECK(c.train.upsample_factor == c.sampling.upsample_factor);
  CHECK(config_from_json(json{{"seed", 7}}).train.rng_seed == c.train.rng_seed);

  CHECK_THROWS_AS(config_from_json(json::object()), ConfigError);
  CHECK_THROWS_AS(config_from_json(json{{"seed", 1}, {"colour", "red"}}), ConfigError);
  CHECK_THROWS_AS(config_from_json(json{{"seed", 1}, {"walk", {{"steps", 3}}}}), ConfigError);
  CHECK_THROWS_AS(config_from_json(json{{"seed", 1}, {"encoder", "fourier"}}), ConfigError);
  CHECK_THROWS_AS(config_from_json(json{{"seed", 1}, {"encoder", "none"}, {"encoders", {"none"}}}),
                  ConfigError);
  CHECK_THROWS_AS(config_from_json(json{{"seed", 1}, {"folds", 1}}), ConfigError);
  CHECK_THROWS_AS(config_from_json(json{{"seed", "x"}}), ConfigError);
  CHECK_THROWS_AS(load_config("/nonexistent/config.json"), ConfigError);
}

TEST_CASE("overrides") {
  json j{{"seed", 1}};
  apply_override(j, "train.hidden=16");
  apply_override(j, "fixture=cycle8");
  apply_override(j, "encoders=[\"none\",\"node2vec\"]");
  const auto c = config_from_json(j);
  CHECK(c.train.hidden == 16);
  CHECK(c.fixture == "cycle8");
  CHECK(c.encoders.size() == 2);
  CHECK_THROWS_AS(apply_override(j, "novalue"), ConfigError);
}

TEST_CASE("resolved config echo parses back to itself") {
  json j{{"seed", 3}, {"fixture", "square4"}, {"simulate", {{"duration", 600}}}};
  const auto c = config_from_json(j);
  const json echo = config_to_json(c);
  CHECK(config_to_json(config_from_json(echo)) == echo);
}

TEST_CASE("json files") {
  CHECK_THROWS_AS(io::load_json("/nonexistent/x.json"), ConfigError);
  const auto dir = std::filesystem::temp_directory_path() / "posenc_io_test";
  std::filesystem::remove_all(dir);
  io::write_text(dir / "sub" / "bad.json", "{ nope");
  CHECK_THROWS_AS(io::load_json(dir / "sub" / "bad.json"), DataError);
  io::write_text(dir / "a.txt", "a");
  CHECK(io::file_digest(dir / "a.txt") == "af63dc4c8601ec8c");  // FNV-1a 64 of "a"
  std::filesystem::remove_all(dir);
}
