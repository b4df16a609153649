#include "commands.hpp"

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>

#include "posenc/error.hpp"
#include "posenc/io.hpp"
#include "posenc/pipeline.hpp"
#include "posenc/rng.hpp"
#include "posenc/simulator.hpp"
#include "svg.hpp"

namespace posenc::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr std::uint64_t kSplitTag = 0x7a1;
constexpr std::uint64_t kFoldTag = 0xc5;

void require_file(const fs::path& p, const char* what) {
  if (!fs::is_regular_file(p))
    throw ConfigError(std::string(what) + " '" + p.string() + "' does not exist");
}

void echo_config(const RunConfig& cfg, const std::string& command) {
  io::write_text(cfg.output_dir / (command + ".config.json"), io::dump(config_to_json(cfg)));
}

std::string text_of(void (*writer)(std::ostream&, const SimOutput&), const SimOutput& sim) {
  std::ostringstream s;
  writer(s, sim);
  return s.str();
}

Fixture fixture_for(const RunConfig& cfg) {
  Fixture fx = make_fixture(cfg.fixture);
  fx.run.seed = cfg.seed;
  if (cfg.simulate.duration) fx.run.duration = *cfg.simulate.duration;
  if (cfg.simulate.detection_interval)
    fx.run.sensors.detection_interval = *cfg.simulate.detection_interval;
  if (cfg.simulate.p_fail) fx.run.sensors.p_fail = *cfg.simulate.p_fail;
  if (cfg.simulate.speed) fx.run.speed = *cfg.simulate.speed;
  return fx;
}

LayoutMap load_layout(const RunConfig& cfg) {
  if (!cfg.layout.empty()) {
    require_file(cfg.layout, "layout");
    return io::layout_from_json(io::load_json(cfg.layout));
  }
  if (!cfg.fixture.empty()) return make_fixture(cfg.fixture).map;
  throw ConfigError("config names neither a 'layout' file nor a 'fixture'");
}

void warn_components(const GraphBuild& g, std::ostream& out) {
  for (const auto& id : g.apg.isolated)
    out << "WARN node " << id << " has no edges; it gets a self-loop of probability 1\n";
  if (g.components.size() < 2) return;
  out << "WARN graph has " << g.components.size() << " connected components:";
  for (const auto& comp : g.components) {
    out << " {";
    for (std::size_t k = 0; k < comp.size(); ++k)
      out << (k ? "," : "") << g.ag.node_ids[comp[k]];
    out << '}';
  }
  out << '\n';
}

json summary_json(const GraphBuild& g) {
  json comps = json::array();
  for (const auto& comp : g.components) {
    json ids = json::array();
    for (auto i : comp) ids.push_back(g.ag.node_ids[i]);
    comps.push_back(ids);
  }
  return {{"nodes", g.ag.size()},
          {"edges", g.ag.edge_count()},
          {"components", g.components.size()},
          {"component_members", comps},
          {"isolated", g.apg.isolated}};
}

EmbedResult embeddings_for(const RunConfig& cfg, const GraphBuild& g, std::ostream& out) {
  if (!cfg.embeddings.empty()) {
    require_file(cfg.embeddings, "embeddings");
    EmbedResult r;
    r.embeddings = io::embeddings_from_json(io::load_json(cfg.embeddings));
    return r;
  }
  EmbedResult r = embed_graph(g.apg, cfg.walk, cfg.skipgram);
  if (!r.unseen.empty()) {
    out << "WARN nodes never visited by a walk:";
    for (const auto& id : r.unseen) out << ' ' << id;
    out << '\n';
  }
  return r;
}

void write_embeddings(const RunConfig& cfg, const EmbedResult& r) {
  json j = io::embeddings_to_json(r.embeddings);
  j["shape"] = {r.embeddings.node_ids.size(), r.embeddings.dimension()};
  io::write_text(cfg.output_dir / "embeddings.json", io::dump(j));
  std::ostringstream csv;
  io::write_embeddings_csv(csv, r.embeddings);
  io::write_text(cfg.output_dir / "embeddings.csv", csv.str());
}

// Events ready for feature extraction, plus what the encoders need.
struct Prepared {
  LayoutMap map;
  std::vector<std::string> residents;
  std::vector<LabeledEvent> events;
  std::set<std::string> home_sensors;
};

Prepared prepare(const RunConfig& cfg, std::ostream& out) {
  Prepared p;
  p.map = load_layout(cfg);
  std::vector<EventRecord> records;
  SamplingConfig sampling = cfg.sampling;
  if (!cfg.logs.empty()) {
    for (const auto& path : cfg.logs) {
      require_file(path, "log");
      std::ifstream in(path);
      ParseResult parsed = parse_log(in, cfg.year);
      if (!parsed.malformed.empty())
        out << "WARN " << path.string() << ": skipped " << parsed.malformed.size()
            << " malformed lines\n";
      records.insert(records.end(), parsed.records.begin(), parsed.records.end());
    }
  } else if (!cfg.fixture.empty()) {
    const Fixture fx = fixture_for(cfg);
    const GraphBuild g = build_graph(fx.map, cfg.self_weight);
    records = simulate(g.ag, fx.run).events;
    if (sampling.home_sensors.empty()) sampling.home_sensors = fx.home_sensors;
  } else {
    throw ConfigError("config names neither 'logs' nor a 'fixture' to simulate");
  }
  if (records.empty()) throw DataError("no events to train on");

  p.residents = cfg.residents.empty() ? residents_in(records) : cfg.residents;
  if (p.residents.empty()) throw DataError("no resident annotations found in the logs");
  std::set<std::string> known;
  for (const auto& poi : p.map.pois) known.insert(poi.id);
  for (const auto& r : records) known.insert(r.sensor_id);
  std::vector<std::string> warnings;
  p.events = prepare_events(records, p.residents, sampling, known, &warnings);
  for (const auto& w : warnings) out << "WARN " << w << '\n';
  for (const auto& [res, sensor] : sampling.home_sensors) p.home_sensors.insert(sensor);
  return p;
}

// chunks.jsonl plus chunks.csv: chunk,split,rows,real_rows,labelled_rows
void write_chunk_export(const fs::path& dir, const std::vector<FeatureSequence>& chunks,
                        const std::vector<std::size_t>& order, std::size_t n_valid) {
  std::vector<const char*> split(chunks.size(), "train");
  for (std::size_t k = 0; k < n_valid; ++k) split[order[k]] = "valid";
  std::ostringstream jsonl, index;
  io::write_chunks_jsonl(jsonl, chunks);
  index << "chunk,split,rows,real_rows,labelled_rows\n";
  for (std::size_t i = 0; i < chunks.size(); ++i) {
    std::size_t labelled = 0;
    for (std::size_t t = 0; t < chunks[i].chunk_len(); ++t)
      labelled += chunks[i].mask[t] && chunks[i].labels[t] >= 0;
    index << i << ',' << split[i] << ',' << chunks[i].chunk_len() << ',' << chunks[i].length()
          << ',' << labelled << '\n';
  }
  io::write_text(dir / "chunks.jsonl", jsonl.str());
  io::write_text(dir / "chunks.csv", index.str());
}

std::string report_csv(const EvalReport& r) {
  std::ostringstream o;
  o.precision(17);
  o << "metric,value\n";
  for (const auto& m : metric_names()) o << m << ',' << metric_value(r, m) << '\n';
  return o.str();
}

json fold_json(const FoldResult& f, const std::vector<std::string>& classes) {
  return {{"report", io::report_to_json(f.report, classes)},
          {"best_epoch", f.best_epoch},
          {"test_chunks", f.test_chunks},
          {"train_chunks", f.train_chunks},
          {"valid_chunks", f.valid_chunks}};
}

std::string run_label(const json& hyper) {
  std::ostringstream o;
  o << hyper.value("encoder", std::string("?"));
  if (hyper.value("encoder", std::string()) == "node2vec")
    o << " d=" << hyper.value("dimension", 0) << " win=" << hyper.value("window_size", 0);
  o << " T=" << hyper.value("downsample_interval", 0.0);
  return o.str();
}

}  // namespace

void write_manifest(const fs::path& run_dir) {
  std::vector<fs::path> files;
  for (const auto& e : fs::recursive_directory_iterator(run_dir))
    if (e.is_regular_file() && e.path().filename() != "manifest.json")
      files.push_back(fs::relative(e.path(), run_dir));
  std::sort(files.begin(), files.end());
  json list = json::array();
  for (const auto& f : files)
    list.push_back({{"path", f.generic_string()},
                    {"bytes", fs::file_size(run_dir / f)},
                    {"fnv1a64", io::file_digest(run_dir / f)}});
  io::write_text(run_dir / "manifest.json", io::dump({{"artifacts", list}}));
}

int cmd_build_graph(const RunConfig& cfg, std::ostream& out) {
  const LayoutMap map = load_layout(cfg);
  const GraphBuild g = build_graph(map, cfg.self_weight);
  io::write_text(cfg.output_dir / "graph.json", io::dump(io::graph_to_json(g.ag)));
  io::write_text(cfg.output_dir / "apg.json", io::dump(io::apg_to_json(g.ag, g.apg)));
  io::write_text(cfg.output_dir / "graph_summary.json", io::dump(summary_json(g)));
  echo_config(cfg, "build-graph");
  write_manifest(cfg.output_dir);
  out << "nodes " << g.ag.size() << " edges " << g.ag.edge_count() << " components "
      << g.components.size() << '\n';
  warn_components(g, out);
  return 0;
}

int cmd_embed(const RunConfig& cfg, std::ostream& out) {
  const LayoutMap map = load_layout(cfg);
  const GraphBuild g = build_graph(map, cfg.self_weight);
  warn_components(g, out);
  const EmbedResult r = embed_graph(g.apg, cfg.walk, cfg.skipgram);
  write_embeddings(cfg, r);
  io::write_text(cfg.output_dir / "walk_stats.json",
                 io::dump({{"num_walks", r.num_walks},
                           {"walk_length", cfg.walk.walk_length},
                           {"max_total_variation", r.max_tv},
                           {"unseen", r.unseen}}));
  echo_config(cfg, "embed");
  write_manifest(cfg.output_dir);
  out << "embeddings " << r.embeddings.node_ids.size() << " x " << r.embeddings.dimension()
      << " max_total_variation " << r.max_tv << '\n';
  return 0;
}

int cmd_simulate(const RunConfig& cfg, std::ostream& out) {
  if (cfg.fixture.empty()) throw ConfigError("simulate needs a 'fixture'");
  const Fixture fx = fixture_for(cfg);
  const GraphBuild g = build_graph(fx.map, cfg.self_weight);
  const SimOutput sim = simulate(g.ag, fx.run);
  io::write_text(cfg.output_dir / "sim.log", text_of(write_log, sim));
  io::write_text(cfg.output_dir / "sim_truth.csv", text_of(write_truth_csv, sim));
  io::write_text(cfg.output_dir / "sim_layout.json", io::dump(io::layout_to_json(fx.map)));
  io::write_text(cfg.output_dir / "sim_home_sensors.json", io::dump(json(fx.home_sensors)));
  echo_config(cfg, "simulate");
  write_manifest(cfg.output_dir);
  out << "events " << sim.events.size() << " residents " << sim.residents.size() << '\n';
  return 0;
}

int cmd_train(const RunConfig& cfg, std::ostream& out) {
  const Prepared p = prepare(cfg, out);
  const SensorVocab vocab = SensorVocab::from_events(p.events);
  std::optional<EmbedResult> emb;
  for (const auto& name : cfg.encoders) {
    const NodeEmbeddings* e = nullptr;
    if (name == "node2vec") {
      if (!emb) emb = embeddings_for(cfg, build_graph(p.map, cfg.self_weight), out);
      e = &emb->embeddings;
    }
    const PositionalEncoder enc = make_encoder(name, p.map, e, cfg.rooms);
    const auto chunks = make_chunks(p.events, enc, vocab, cfg.chunk_len);
    if (chunks.size() < 2) throw DataError("training needs at least two chunks");

    std::vector<std::size_t> order(chunks.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::mt19937_64 gen(derive_seed(cfg.seed, kSplitTag));
    shuffle(order.begin(), order.end(), gen);
    const std::size_t n_valid = std::max<std::size_t>(1, chunks.size() / 4);
    std::vector<FeatureSequence> train_set, valid_set;
    for (std::size_t k = 0; k < order.size(); ++k)
      (k < n_valid ? valid_set : train_set).push_back(chunks[order[k]]);

    const fs::path dir = cfg.output_dir / ("train_" + name);
    write_chunk_export(dir, chunks, order, n_valid);

    const TrainResult tr = train(train_set, valid_set, p.residents.size(), cfg.train);
    const EvalReport report = evaluate(valid_set, tr.params);
    json ckpt_cfg = config_to_json(cfg);
    ckpt_cfg["encoder"] = name;
    ckpt_cfg["residents"] = p.residents;
    ckpt_cfg["sensor_vocab"] = vocab.ids;
    io::write_text(dir / "checkpoint.json", io::checkpoint_to_json(tr.params, ckpt_cfg).dump() + "\n");
    json rj = io::report_to_json(report, p.residents);
    rj["best_epoch"] = tr.best_epoch;
    rj["best_valid_loss"] = tr.best_valid_loss;
    io::write_text(dir / "report.json", io::dump(rj));
    io::write_text(dir / "report.csv", report_csv(report));
    std::ostringstream curve;
    curve.precision(17);
    curve << "epoch,train_loss,valid_loss\n";
    for (const auto& e : tr.curve)
      curve << e.epoch << ',' << e.train_loss << ',' << e.valid_loss << '\n';
    io::write_text(dir / "curve.csv", curve.str());
    out << name << " accuracy " << report.accuracy << " f1 " << report.f1 << " best_epoch "
        << tr.best_epoch << '\n';
  }
  echo_config(cfg, "train");
  write_manifest(cfg.output_dir);
  return 0;
}

int cmd_crossval(const RunConfig& cfg, std::ostream& out) {
  const Prepared p = prepare(cfg, out);
  const SensorVocab vocab = SensorVocab::from_events(p.events);
  std::optional<EmbedResult> emb;
  std::map<std::string, CvResult> runs;
  for (const auto& name : cfg.encoders) {
    const NodeEmbeddings* e = nullptr;
    if (name == "node2vec") {
      if (!emb) {
        emb = embeddings_for(cfg, build_graph(p.map, cfg.self_weight), out);
        if (cfg.embeddings.empty()) write_embeddings(cfg, *emb);
      }
      e = &emb->embeddings;
    }
    const PositionalEncoder enc = make_encoder(name, p.map, e, cfg.rooms);
    const auto chunks = make_chunks(p.events, enc, vocab, cfg.chunk_len);
    CvResult cv = cross_validate(chunks, cfg.folds, p.residents.size(), cfg.train,
                                 derive_seed(cfg.seed, kFoldTag), cfg.jobs);

    json folds = json::array();
    for (const auto& f : cv.folds) folds.push_back(fold_json(f, p.residents));
    json agg = json::object();
    for (const auto& [m, s] : cv.aggregate)
      agg[m] = {{"mean", s.mean}, {"stddev", s.stddev}, {"min", s.min}, {"max", s.max}};
    const json hyper = {{"encoder", name},
                        {"dimension", cfg.skipgram.dimension},
                        {"window_size", cfg.skipgram.window_size},
                        {"chunk_len", cfg.chunk_len},
                        {"folds", cfg.folds},
                        {"downsample_interval", cfg.sampling.downsample_interval},
                        {"upsample_factor", cfg.sampling.upsample_factor},
                        {"hidden", cfg.train.hidden}};
    const fs::path dir = cfg.output_dir / ("crossval_" + name);
    io::write_text(dir / "cv_report.json",
                   io::dump({{"hyperparameters", hyper},
                             {"classes", p.residents},
                             {"aggregate", agg},
                             {"folds", folds}}));
    io::write_text(dir / "folds.csv", folds_csv({{name, cv}}));
    out << name << " accuracy " << cv.aggregate.at("accuracy").mean << " +- "
        << cv.aggregate.at("accuracy").stddev << " f1 " << cv.aggregate.at("f1").mean << '\n';
    runs.emplace(name, std::move(cv));
  }
  if (runs.size() > 1) io::write_text(cfg.output_dir / "comparison.csv", comparison_csv(runs));
  echo_config(cfg, "crossval");
  write_manifest(cfg.output_dir);
  return 0;
}

int cmd_report(const fs::path& run_dir, std::ostream& out) {
  if (!fs::is_directory(run_dir))
    throw ConfigError("run directory '" + run_dir.string() + "' does not exist");
  std::vector<fs::path> found;
  for (const auto& e : fs::recursive_directory_iterator(run_dir))
    if (e.is_regular_file() && e.path().filename() == "cv_report.json") found.push_back(e.path());
  std::sort(found.begin(), found.end());
  if (found.empty())
    throw DataError("no cross-validation reports under '" + run_dir.string() + "'");

  std::ostringstream csv;
  csv.precision(17);
  csv << "run,encoder,fold,accuracy,precision,recall,f1,best_epoch,test_events\n";
  std::vector<std::string> labels;
  std::map<std::string, std::vector<double>> means;
  const fs::path plots = run_dir / "report";
  for (std::size_t k = 0; k < found.size(); ++k) {
    const json j = io::load_json(found[k]);
    const std::string run = fs::relative(found[k].parent_path(), run_dir).generic_string();
    const json& hyper = j.at("hyperparameters");
    const auto classes = j.at("classes").get<std::vector<std::string>>();
    std::vector<std::vector<std::size_t>> total(classes.size(),
                                                std::vector<std::size_t>(classes.size(), 0));
    std::size_t f = 0;
    for (const auto& fold : j.at("folds")) {
      const EvalReport r = io::report_from_json(fold.at("report"));
      csv << run << ',' << hyper.at("encoder").get<std::string>() << ',' << f++ << ','
          << r.accuracy << ',' << r.precision << ',' << r.recall << ',' << r.f1 << ','
          << fold.at("best_epoch").get<std::size_t>() << ',' << r.total << '\n';
      for (std::size_t a = 0; a < total.size() && a < r.confusion.size(); ++a)
        for (std::size_t b = 0; b < total.size() && b < r.confusion[a].size(); ++b)
          total[a][b] += r.confusion[a][b];
    }
    const std::string label = run_label(hyper);
    labels.push_back(label);
    for (const auto& m : metric_names())
      means[m].push_back(j.at("aggregate").at(m).at("mean").get<double>());
    std::string stem = run;
    std::replace(stem.begin(), stem.end(), '/', '_');
    io::write_text(plots / ("confusion_" + stem + ".svg"),
                   heat_grid_svg("Confusion matrix, " + label, classes, total));
  }
  std::vector<Series> series;
  for (const auto& m : metric_names()) series.push_back({m, means[m]});
  io::write_text(plots / "metrics.svg", line_chart_svg("Mean CV metrics per run", labels, series));
  io::write_text(plots / "folds.csv", csv.str());
  write_manifest(run_dir);
  out << "runs " << found.size() << " report " << (plots / "folds.csv").string() << '\n';
  return 0;
}

}  // namespace posenc::cli
