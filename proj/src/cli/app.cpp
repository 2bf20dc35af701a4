#include "flee/cli/app.hpp"

#include <CLI11.hpp>
#include <iostream>
#include <optional>
#include <set>

#include "flee/cli/config.hpp"
#include "flee/core/error.hpp"
#include "flee/core/io.hpp"
#include "flee/datagen/generator.hpp"
#include "flee/evalkit/harness.hpp"
#include "flee/evalkit/metrics.hpp"
#include "flee/fedsim/federation.hpp"
#include "flee/flowgraph/ingest.hpp"
#include "flee/flowgraph/statistics.hpp"
#include "flee/neural/checkpoint.hpp"

namespace flee::cli {
namespace {

namespace fs = std::filesystem;
using ojson = nlohmann::ordered_json;

// Flags shared by every subcommand, plus per-command overrides of config values.
struct Flags {
  std::optional<std::string> config;
  std::optional<std::uint64_t> seed;
  bool dry_run = false;
  std::optional<std::string> output_dir;
  std::optional<std::string> nodes, flows, adjacency, corpus, eval_corpus, checkpoint;
  std::optional<double> noise;
  std::optional<std::size_t> count;
  std::optional<std::string> name;
  std::optional<std::string> mode;
  std::optional<std::size_t> epochs;
  std::optional<std::size_t> sync_every;
  std::optional<std::string> weights;
  std::optional<double> lr;
  std::optional<std::string> optimizer;
  std::optional<std::string> mask;
  std::optional<std::string> silo;
  bool export_json = false;
  bool silo_scores = false;
  bool whole_inputs = false;
  bool force = false;
  std::vector<std::string> preds;
  std::vector<std::string> labels;
  std::optional<std::string> truth;
};

struct Context {
  RunConfig cfg;
  std::string digest;
  std::string command;
  bool dry_run = false;
  std::ostream* out = nullptr;

  fs::path output(const std::string& file) const { return fs::path(cfg.paths.output_dir) / file; }

  ojson metadata() const {
    ojson m;
    m["command"] = command;
    m["config_digest"] = digest;
    m["effective_config"] = effective_config_json(cfg);
    return m;
  }

  void write(const fs::path& path, const std::string& bytes) const {
    fs::create_directories(path.parent_path());
    write_file_atomic(path, bytes);
  }

  // CSV outputs carry their metadata in a `<file>.meta.json` sidecar.
  void write_csv(const std::string& file, const std::string& csv, ojson extra = ojson::object()) const {
    write(output(file), csv);
    ojson m = metadata();
    for (auto& [k, v] : extra.items()) m[k] = v;
    write(output(file + ".meta.json"), m.dump(2) + "\n");
  }

  void write_json(const std::string& file, ojson body) const {
    body["metadata"] = metadata();
    write(output(file), body.dump(2) + "\n");
  }
};

std::string require_path(const std::string& value, const char* what) {
  if (value.empty()) fail(ErrorKind::BadConfig, std::string("missing --") + what + " (or [paths] " + what + ")");
  return value;
}

std::string file_digest(const std::string& path) { return hex32(crc32(read_text_file(path))); }

FlowGraph load_graph(const RunConfig& cfg) {
  return ingest_graph(require_path(cfg.paths.nodes, "nodes"), require_path(cfg.paths.flows, "flows"));
}

AdjacencyMap load_adjacency(const RunConfig& cfg, const FlowGraph& g) {
  return ingest_adjacency(require_path(cfg.paths.adjacency, "adjacency"), &g);
}

std::vector<LabeledGraph> load_corpus(const std::string& dir, const std::vector<NodeRecord>& nodes) {
  try {
    return read_corpus(dir, nodes);
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::SchemaViolation, dir + "/manifest.json: " + e.what());
  }
}

SiloAssignment assignment_of(const std::vector<NodeRecord>& nodes) {
  return SiloAssignment::from_graph(FlowGraph(nodes, {}));
}

// ---- subcommands ----

void cmd_ingest(const Context& ctx) {
  const FlowGraph g = load_graph(ctx.cfg);
  std::size_t adjacency_pairs = 0;
  if (!ctx.cfg.paths.adjacency.empty()) {
    const auto table = read_csv(ctx.cfg.paths.adjacency, {"a", "b"});
    (void)load_adjacency(ctx.cfg, g);
    adjacency_pairs = table.rows.size();
  }
  *ctx.out << "ingest: " << g.node_count() << " nodes, " << g.n_edges() << " edges\n";
  if (ctx.dry_run) return;
  ctx.write_csv("nodes.csv", nodes_to_csv(g));
  ctx.write_csv("flows.csv", flows_to_csv(g));
  ojson body;
  body["nodes"] = g.node_count();
  body["edges"] = g.n_edges();
  body["adjacency_pairs"] = adjacency_pairs;
  body["graph_digest"] = hex32(crc32(nodes_to_csv(g) + flows_to_csv(g)));
  ctx.write_json("ingest.json", body);
}

void cmd_stats(const Context& ctx, const std::optional<std::string>& silo) {
  const FlowGraph g = load_graph(ctx.cfg);
  const auto assignment = SiloAssignment::from_graph(g);
  ojson body;
  const auto whole = graph_statistics(g);
  body["whole"] = ojson::parse(statistics_to_json(whole));
  *ctx.out << "whole: average degree " << format_double(whole.average_degree) << "\n";
  std::vector<Region> regions;
  if (silo) {
    regions.push_back(parse_region(*silo));
  } else {
    regions.assign(kAllRegions.begin(), kAllRegions.end());
  }
  for (Region r : regions) {
    const FlowGraph sub = extract_silo(g, assignment, r);
    if (sub.node_count() == 0) continue;
    const auto s = graph_statistics(sub);
    body["silos"][std::string(to_string(r))] = ojson::parse(statistics_to_json(s));
    *ctx.out << to_string(r) << ": average degree " << format_double(s.average_degree) << "\n";
  }
  body["input_digest"] = hex32(crc32(nodes_to_csv(g) + flows_to_csv(g)));
  if (!ctx.dry_run) ctx.write_json("stats.json", body);
}

void cmd_resilience(const Context& ctx, bool silo_scores) {
  const FlowGraph g = load_graph(ctx.cfg);
  const AdjacencyMap adj = load_adjacency(ctx.cfg, g);
  const OracleConfig oracle = ctx.cfg.oracle.resolved(g);
  const auto rows = resilience(g, adj, oracle);
  *ctx.out << "resilience: " << rows.size() << " nodes, distance_ref " << format_double(*oracle.distance_ref) << "\n";
  if (ctx.dry_run) return;
  ojson extra;
  extra["distance_ref"] = *oracle.distance_ref;
  ctx.write_csv("resilience.csv", resilience_to_csv(rows), extra);
  if (silo_scores) {
    ctx.write_csv("resilience_silo.csv",
                  gnn::predictions_to_csv(eval::silo_oracle_scores(g, adj, oracle, SiloAssignment::from_graph(g))),
                  extra);
  }
}

void cmd_generate(const Context& ctx, const std::optional<std::string>& name) {
  const FlowGraph g0 = load_graph(ctx.cfg);
  const AdjacencyMap adj = load_adjacency(ctx.cfg, g0);
  GeneratorConfig gen;
  gen.noise_ratio = ctx.cfg.generator.noise;
  gen.count = ctx.cfg.generator.count;
  gen.seed = ctx.cfg.seed;
  gen.validate();
  const std::string dir = name ? *name : "noise" + format_double(gen.noise_ratio);
  *ctx.out << "generate: " << gen.count << " graphs, " << perturbation_rounds(g0.n_edges(), gen.noise_ratio)
           << " rounds each -> corpus/" << dir << "\n";
  if (ctx.dry_run) return;
  const auto graphs = generate(g0, gen);
  write_corpus(ctx.output("corpus") / dir, g0, graphs, adj, ctx.cfg.oracle, gen, ctx.digest);
}

void cmd_train(const Context& ctx, bool export_json) {
  const auto nodes = ingest_nodes(require_path(ctx.cfg.paths.nodes, "nodes"));
  const auto corpus = load_corpus(require_path(ctx.cfg.paths.corpus, "corpus"), nodes);
  const auto& m = ctx.cfg.model;
  if (ctx.cfg.mode == Mode::Federated) {
    fed::FederationConfig fc;
    fc.total_epochs = m.epochs;
    fc.sync_every = ctx.cfg.federation.sync_every;
    fc.weights = ctx.cfg.federation.weights;
    fc.seed = ctx.cfg.seed;
    fc.validate();
  }
  *ctx.out << "train: " << to_string(ctx.cfg.mode) << ", " << corpus.size() << " graphs, " << m.epochs
           << " epochs, mask " << m.mask.name() << "\n";
  if (ctx.dry_run) return;

  eval::ExperimentSetup setup;
  setup.train_set = corpus;
  setup.assignment = assignment_of(nodes);
  setup.dims = m.dims();
  setup.optimizer = m.optimizer;
  setup.learning_rate = m.learning_rate;
  setup.epochs = m.epochs;
  setup.sync_every = ctx.cfg.federation.sync_every;
  setup.weights = ctx.cfg.federation.weights;
  setup.seed = ctx.cfg.seed;

  nn::ModelParams params;
  ojson log;
  log["mode"] = std::string(to_string(ctx.cfg.mode));
  log["mask"] = m.mask.name();
  log["corpus_graphs"] = corpus.size();
  if (ctx.cfg.mode == Mode::Central) {
    params = nn::ModelParams::init(setup.dims, setup.seed);
    auto opt = nn::OptimizerState::make(m.optimizer, m.learning_rate, params.net);
    gnn::TrainOptions options;
    options.epochs = m.epochs;
    options.seed = ctx.cfg.seed;
    auto outcome = gnn::train(std::move(params), corpus, opt, m.mask, options);
    params = std::move(outcome.params);
    log["loss_history"] = outcome.loss_history;
    *ctx.out << "final epoch loss " << format_double(outcome.loss_history.back()) << "\n";
  } else {
    auto result = eval::train_federated(setup, m.mask);
    params = std::move(result.global);
    log["rounds"] = result.rounds.size();
    ctx.write(ctx.output("federation_log.jsonl"), fed::round_logs_to_jsonl(result.rounds));
    *ctx.out << "federation: " << result.rounds.size() << " rounds\n";
  }
  log["parameter_digest"] = hex32(nn::parameter_digest(params));
  ctx.write(ctx.output("model.ckpt"), [&] {
    const auto bytes = nn::serialize_checkpoint(params);
    return std::string(bytes.begin(), bytes.end());
  }());
  ctx.write_json("train_log.json", log);
  if (export_json) ctx.write(ctx.output("model.json"), nn::checkpoint_to_json(params));
}

void cmd_predict(const Context& ctx, bool whole_inputs) {
  const FlowGraph g = load_graph(ctx.cfg);
  const auto params = nn::load_checkpoint(require_path(ctx.cfg.paths.checkpoint, "checkpoint"));
  const gnn::FeatureMask mask(params.mask_bits);
  const bool silo_inputs = ctx.cfg.mode == Mode::Federated && ctx.cfg.federation.silo_inputs && !whole_inputs;
  *ctx.out << "predict: " << g.node_count() << " nodes, mask " << mask.name() << ", "
           << (silo_inputs ? "silo" : "whole") << "-graph inputs\n";
  if (ctx.dry_run) return;
  const auto scores = silo_inputs ? fed::predict_on_silos(params, g, SiloAssignment::from_graph(g), mask)
                                  : gnn::forward_graph(params, g, mask);
  ojson extra;
  extra["mask"] = mask.name();
  extra["inputs"] = silo_inputs ? "silo" : "whole";
  extra["parameter_digest"] = hex32(nn::parameter_digest(params));
  extra["dataset_digest"] = hex32(crc32(nodes_to_csv(g) + flows_to_csv(g)));
  ctx.write_csv("predictions.csv", gnn::predictions_to_csv(scores), extra);
}

// Digest recorded next to an input file: its sidecar, else a corpus manifest.
std::optional<std::string> recorded_digest(const std::string& path) {
  for (const fs::path& candidate : {fs::path(path + ".meta.json"), fs::path(path).parent_path() / "manifest.json"}) {
    std::error_code ec;
    if (!fs::exists(candidate, ec)) continue;
    try {
      const auto j = nlohmann::json::parse(read_text_file(candidate));
      if (j.contains("config_digest")) return j["config_digest"].get<std::string>();
    } catch (const nlohmann::json::exception&) {
      fail(ErrorKind::SchemaViolation, candidate.string() + ": unreadable metadata");
    }
  }
  return std::nullopt;
}

void cmd_evaluate(const Context& ctx, const Flags& f) {
  if (f.preds.empty()) fail(ErrorKind::BadConfig, "evaluate needs at least one --pred");
  if (!f.truth) fail(ErrorKind::BadConfig, "evaluate needs --truth");
  if (!f.labels.empty() && f.labels.size() != f.preds.size()) {
    fail(ErrorKind::BadConfig, "--label must be given once per --pred");
  }
  std::map<std::string, std::string> digests;
  for (const auto& p : f.preds) {
    if (auto d = recorded_digest(p)) digests[p] = *d;
  }
  if (auto d = recorded_digest(*f.truth)) digests[*f.truth] = *d;
  std::set<std::string> distinct;
  for (const auto& [p, d] : digests) distinct.insert(d);
  if (distinct.size() > 1 && !f.force) {
    std::string detail = "inputs come from different configs:";
    for (const auto& [p, d] : digests) detail += " " + fs::path(p).filename().string() + "=" + d;
    fail(ErrorKind::DigestMismatch, detail + " (use --force to evaluate anyway)");
  }

  const auto truth = read_scores_csv(*f.truth);
  std::vector<std::string> names;
  std::vector<eval::ErrorStats> errors;
  std::vector<eval::RankReport> ranks;
  ojson body;
  std::string diff_csv = "node";
  std::vector<std::map<std::string, double>> diffs;
  for (std::size_t i = 0; i < f.preds.size(); ++i) {
    const std::string name = f.labels.empty() ? fs::path(f.preds[i]).stem().string() : f.labels[i];
    const auto pred = read_scores_csv(f.preds[i]);
    const auto es = eval::error_stats(pred, truth);
    const auto rr = eval::rank_report(pred, truth);
    names.push_back(name);
    errors.push_back(es);
    ranks.push_back(rr);
    diffs.push_back(eval::relative_difference(pred, truth));
    diff_csv += "," + name;
    ojson e;
    e["name"] = name;
    e["error_stats"] = {{"count", es.count}, {"mean", es.mean}, {"std", es.std}, {"min", es.min}, {"p25", es.p25},
                        {"p50", es.p50},     {"p75", es.p75},   {"max", es.max}};
    e["rank_report"] = {{"coincidence_top10", rr.coincidence_10}, {"coincidence_top30", rr.coincidence_30},
                        {"coincidence_top50", rr.coincidence_50}, {"pearson_r", rr.pearson},
                        {"spearman_rho", rr.spearman}};
    e["input_digest"] = file_digest(f.preds[i]);
    if (auto it = digests.find(f.preds[i]); it != digests.end()) e["config_digest"] = it->second;
    body["evaluations"].push_back(e);
    *ctx.out << name << ": mean abs error " << format_double(es.mean) << ", spearman "
             << format_double(rr.spearman) << "\n";
  }
  diff_csv += "\n";
  for (const auto& [node, t] : truth) {
    diff_csv += node;
    for (const auto& d : diffs) diff_csv += "," + format_double(d.at(node));
    diff_csv += "\n";
  }
  body["truth_digest"] = file_digest(*f.truth);
  body["conventions"] = {{"std", "sample (n - 1)"},
                         {"percentiles", "linear interpolation"},
                         {"top_k", "k = round(f * N), at least 1; ties broken by ascending node id"},
                         {"spearman_ties", "average ranks"},
                         {"difference", "pred - truth"}};
  body["forced"] = f.force && distinct.size() > 1;
  if (ctx.dry_run) return;
  ctx.write_json("eval_report.json", body);
  ctx.write_csv("tables34.csv", eval::error_table_csv(names, errors));
  ctx.write_csv("tables56.csv", eval::rank_table_csv(names, ranks));
  ctx.write_csv("differences.csv", diff_csv);
}

void cmd_ablate(const Context& ctx) {
  const auto nodes = ingest_nodes(require_path(ctx.cfg.paths.nodes, "nodes"));
  const auto train_set = load_corpus(require_path(ctx.cfg.paths.corpus, "corpus"), nodes);
  const auto eval_set = load_corpus(require_path(ctx.cfg.paths.eval_corpus, "eval-corpus"), nodes);
  const auto& m = ctx.cfg.model;
  fed::FederationConfig fc;
  fc.total_epochs = m.epochs;
  fc.sync_every = ctx.cfg.federation.sync_every;
  fc.validate();
  *ctx.out << "ablate: 8 masks x 2 modes, " << train_set.size() << " training graphs, " << eval_set.size()
           << " evaluation graphs\n";
  if (ctx.dry_run) return;

  eval::ExperimentSetup setup;
  setup.train_set = train_set;
  setup.eval_set = eval_set;
  setup.assignment = assignment_of(nodes);
  setup.dims = m.dims();
  setup.optimizer = m.optimizer;
  setup.learning_rate = m.learning_rate;
  setup.epochs = m.epochs;
  setup.sync_every = ctx.cfg.federation.sync_every;
  setup.weights = ctx.cfg.federation.weights;
  setup.seed = ctx.cfg.seed;
  const auto masks = gnn::ablation_masks();
  const auto cells = eval::ablation_grid(eval::make_ablation_trainer(setup), masks);
  ojson body;
  for (const auto& c : cells) {
    body["cells"].push_back({{"mask", c.mask.name()},
                             {"mode", std::string(eval::to_string(c.mode))},
                             {"mean", c.stats.mean},
                             {"std", c.stats.std},
                             {"min", c.stats.min},
                             {"p25", c.stats.p25},
                             {"p50", c.stats.p50},
                             {"p75", c.stats.p75},
                             {"max", c.stats.max}});
    *ctx.out << c.mask.name() << "_" << eval::to_string(c.mode) << ": mean " << format_double(c.stats.mean) << "\n";
  }
  ctx.write_json("ablation.json", body);
  ctx.write_csv("table7.csv", eval::table7_csv(cells));
}

// ---- wiring ----

void add_common(CLI::App* sub, Flags& f) {
  sub->add_option("--config", f.config, "INI config file");
  sub->add_option("--seed", f.seed, "master seed (overrides [run] seed)");
  sub->add_flag("--dry-run", f.dry_run, "validate inputs without writing");
  sub->add_option("--output-dir", f.output_dir, "directory receiving every output");
}

void add_graph_inputs(CLI::App* sub, Flags& f, bool adjacency) {
  sub->add_option("--nodes", f.nodes, "nodes.csv");
  sub->add_option("--flows", f.flows, "flows.csv");
  if (adjacency) sub->add_option("--adjacency", f.adjacency, "adjacency.csv");
}

void add_training(CLI::App* sub, Flags& f) {
  sub->add_option("--mode", f.mode, "central or federated");
  sub->add_option("--epochs", f.epochs, "total training epochs");
  sub->add_option("--sync-every", f.sync_every, "local epochs per federation round");
  sub->add_option("--weights", f.weights, "uniform, by_node_count or by_sample_count");
  sub->add_option("--lr", f.lr, "learning rate");
  sub->add_option("--optimizer", f.optimizer, "adam or sgd");
}

RunConfig base_config(const Flags& f) {
  RunConfig cfg = f.config ? load_config(*f.config) : RunConfig{};
  if (f.seed) cfg.seed = *f.seed;
  return cfg;
}

void apply_overrides(RunConfig& cfg, const Flags& f) {
  auto set = [](std::string& dst, const std::optional<std::string>& src) {
    if (src) dst = *src;
  };
  set(cfg.paths.nodes, f.nodes);
  set(cfg.paths.flows, f.flows);
  set(cfg.paths.adjacency, f.adjacency);
  set(cfg.paths.corpus, f.corpus);
  set(cfg.paths.eval_corpus, f.eval_corpus);
  set(cfg.paths.checkpoint, f.checkpoint);
  set(cfg.paths.output_dir, f.output_dir);
  if (f.noise) cfg.generator.noise = *f.noise;
  if (f.count) cfg.generator.count = *f.count;
  if (f.mode) cfg.mode = parse_mode(*f.mode);
  if (f.epochs) cfg.model.epochs = *f.epochs;
  if (f.sync_every) cfg.federation.sync_every = *f.sync_every;
  if (f.weights) cfg.federation.weights = fed::parse_weight_policy(*f.weights);
  if (f.lr) cfg.model.learning_rate = *f.lr;
  if (f.optimizer) cfg.model.optimizer = nn::parse_optimizer(*f.optimizer);
  if (f.mask) cfg.model.mask = gnn::FeatureMask::parse(*f.mask);
  cfg.validate();
}

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::BadConfig:
      return kExitBadFlags;
    case ErrorKind::InternalInvariant:
      return kExitInternal;
    default:
      return kExitDataError;
  }
}

void report(std::ostream& err, std::string_view kind, int code, std::string_view message) {
  ojson line;
  line["error"] = kind;
  line["exit"] = code;
  line["message"] = message;
  err << line.dump() << "\n";
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Food-flow resilience toolkit: oracle, graph augmentation, GNN training and evaluation", "flee"};
  app.require_subcommand(1);
  Flags f;

  auto* ingest = app.add_subcommand("ingest", "validate and canonicalize a flow graph");
  add_graph_inputs(ingest, f, true);
  auto* stats = app.add_subcommand("stats", "graph statistics for the whole graph and each silo");
  add_graph_inputs(stats, f, false);
  stats->add_option("--silo", f.silo, "restrict the silo report to one region");
  auto* res = app.add_subcommand("resilience", "entropy-based resilience scores");
  add_graph_inputs(res, f, true);
  res->add_flag("--silo-scores", f.silo_scores, "also score each node on its silo sub-graph");
  auto* gen = app.add_subcommand("generate", "perturbed graph corpus with oracle labels");
  add_graph_inputs(gen, f, true);
  gen->add_option("--noise", f.noise, "noise ratio r");
  gen->add_option("--count", f.count, "number of graphs");
  gen->add_option("--name", f.name, "corpus name under <output-dir>/corpus");
  auto* train = app.add_subcommand("train", "train a model centrally or by federation");
  train->add_option("--nodes", f.nodes, "nodes.csv");
  train->add_option("--corpus", f.corpus, "corpus directory");
  add_training(train, f);
  train->add_option("--mask", f.mask, "kept features, e.g. VAT, VT, NONE");
  train->add_flag("--export-json", f.export_json, "also write the checkpoint as JSON");
  auto* predict = app.add_subcommand("predict", "score a graph with a trained model");
  add_graph_inputs(predict, f, false);
  predict->add_option("--checkpoint", f.checkpoint, "model checkpoint");
  predict->add_option("--mode", f.mode, "federated models read silo sub-graphs");
  predict->add_flag("--whole-inputs", f.whole_inputs, "feed federated models the whole graph");
  auto* evaluate = app.add_subcommand("evaluate", "error and rank metrics against a truth file");
  evaluate->add_option("--pred", f.preds, "predictions or scores CSV (repeatable)")->take_all();
  evaluate->add_option("--label", f.labels, "column name per --pred (repeatable)")->take_all();
  evaluate->add_option("--truth", f.truth, "truth scores CSV");
  evaluate->add_flag("--force", f.force, "accept inputs produced under different configs");
  auto* ablate = app.add_subcommand("ablate", "missing-feature ablation grid");
  ablate->add_option("--nodes", f.nodes, "nodes.csv");
  ablate->add_option("--corpus", f.corpus, "training corpus directory");
  ablate->add_option("--eval-corpus", f.eval_corpus, "evaluation corpus directory");
  add_training(ablate, f);

  for (auto* sub : {ingest, stats, res, gen, train, predict, evaluate, ablate}) add_common(sub, f);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help(app.get_subcommands().empty() ? "" : app.get_subcommands().front()->get_name());
    return kExitOk;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    report(err, "BadFlags", kExitBadFlags, e.what());
    return kExitBadFlags;
  }

  try {
    Context ctx;
    ctx.cfg = base_config(f);
    ctx.digest = config_digest(ctx.cfg);
    apply_overrides(ctx.cfg, f);
    ctx.dry_run = f.dry_run;
    ctx.out = &out;
    ctx.command = app.get_subcommands().front()->get_name();
    const auto& cmd = ctx.command;
    if (cmd == "ingest") cmd_ingest(ctx);
    else if (cmd == "stats") cmd_stats(ctx, f.silo);
    else if (cmd == "resilience") cmd_resilience(ctx, f.silo_scores);
    else if (cmd == "generate") cmd_generate(ctx, f.name);
    else if (cmd == "train") cmd_train(ctx, f.export_json);
    else if (cmd == "predict") cmd_predict(ctx, f.whole_inputs);
    else if (cmd == "evaluate") cmd_evaluate(ctx, f);
    else if (cmd == "ablate") cmd_ablate(ctx);
    if (ctx.dry_run) out << "dry run: nothing written\n";
    return kExitOk;
  } catch (const Error& e) {
    const int code = exit_code_for(e.kind());
    report(err, to_string(e.kind()), code, e.what());
    return code;
  } catch (const std::filesystem::filesystem_error& e) {
    report(err, "Io", kExitDataError, e.what());
    return kExitDataError;
  } catch (const std::exception& e) {
    report(err, "InternalInvariant", kExitInternal, e.what());
    return kExitInternal;
  }
}

}  // namespace flee::cli
