#include "flee/cli/config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <set>
#include <sstream>

#include "flee/core/error.hpp"
#include "flee/core/io.hpp"

namespace flee::cli {

namespace pt = boost::property_tree;

nn::ModelDims ModelSection::dims() const {
  nn::ModelDims d;
  d.message = {kMessageDim};
  d.message.insert(d.message.end(), hidden.begin(), hidden.end());
  d.message.push_back(latent);
  return d;
}

void RunConfig::validate() const {
  oracle.validate();
  if (!(model.learning_rate >= 0.0)) fail(ErrorKind::BadConfig, "model.learning_rate must be >= 0");
  if (model.epochs == 0) fail(ErrorKind::BadConfig, "model.epochs must be positive");
  if (model.latent == 0) fail(ErrorKind::BadConfig, "model.latent must be positive");
  for (auto h : model.hidden) {
    if (h == 0) fail(ErrorKind::BadConfig, "model.hidden widths must be positive");
  }
  if (federation.sync_every == 0) fail(ErrorKind::BadConfig, "federation.sync_every must be positive");
  if (!(generator.noise >= 0.0 && generator.noise <= 1.0)) fail(ErrorKind::BadConfig, "generator.noise must lie in [0, 1]");
}

std::string_view to_string(Mode mode) { return mode == Mode::Central ? "central" : "federated"; }

Mode parse_mode(std::string_view text) {
  if (text == "central") return Mode::Central;
  if (text == "federated") return Mode::Federated;
  fail(ErrorKind::BadConfig, "mode must be central or federated, got '" + std::string(text) + "'");
}

namespace {

double to_real(const std::string& key, const std::string& text) {
  double v = 0.0;
  if (!parse_double(text, v)) fail(ErrorKind::BadConfig, key + ": not a number: '" + text + "'");
  return v;
}

std::size_t to_count(const std::string& key, const std::string& text) {
  std::size_t pos = 0;
  unsigned long long v = 0;
  try {
    v = std::stoull(text, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (pos == 0 || pos != text.size() || text.front() == '-') {
    fail(ErrorKind::BadConfig, key + ": not a non-negative integer: '" + text + "'");
  }
  return static_cast<std::size_t>(v);
}

bool to_bool(const std::string& key, const std::string& text) {
  if (text == "true" || text == "1" || text == "yes") return true;
  if (text == "false" || text == "0" || text == "no") return false;
  fail(ErrorKind::BadConfig, key + ": not a boolean: '" + text + "'");
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, sep)) {
    const auto b = item.find_first_not_of(' ');
    const auto e = item.find_last_not_of(' ');
    parts.push_back(b == std::string::npos ? std::string() : item.substr(b, e - b + 1));
  }
  return parts;
}

// "01+02,03,04,05,06,07,08": groups separated by commas, members by '+'.
CommodityGrouping parse_groups(const std::string& text) {
  CommodityGrouping g;
  for (const auto& part : split(text, ',')) {
    std::vector<int> members;
    for (const auto& m : split(part, '+')) members.push_back(static_cast<int>(to_count("oracle.groups", m)));
    g.groups.push_back(std::move(members));
  }
  g.validate();
  return g;
}

std::string groups_to_string(const CommodityGrouping& g) {
  std::string out;
  for (std::size_t i = 0; i < g.groups.size(); ++i) {
    if (i) out += ',';
    for (std::size_t j = 0; j < g.groups[i].size(); ++j) {
      if (j) out += '+';
      out += (g.groups[i][j] < 10 ? "0" : "") + std::to_string(g.groups[i][j]);
    }
  }
  return out;
}

}  // namespace

RunConfig load_config(const std::filesystem::path& path) {
  const std::string text = read_text_file(path);
  pt::ptree tree;
  try {
    std::istringstream in(text);
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    fail(ErrorKind::BadConfig, path.string() + ": " + e.message() + " at line " + std::to_string(e.line()));
  }

  RunConfig cfg;
  for (const auto& [section, body] : tree) {
    if (body.empty() && !body.data().empty()) fail(ErrorKind::BadConfig, "key outside a section: " + section);
    for (const auto& [key, node] : body) {
      const std::string name = section + "." + key;
      const std::string value = node.data();
      if (section == "paths") {
        if (key == "nodes") cfg.paths.nodes = value;
        else if (key == "flows") cfg.paths.flows = value;
        else if (key == "adjacency") cfg.paths.adjacency = value;
        else if (key == "corpus") cfg.paths.corpus = value;
        else if (key == "eval_corpus") cfg.paths.eval_corpus = value;
        else if (key == "checkpoint") cfg.paths.checkpoint = value;
        else if (key == "output_dir") cfg.paths.output_dir = value;
        else fail(ErrorKind::BadConfig, "unknown key " + name);
      } else if (section == "oracle") {
        if (key == "distance_ref") {
          if (value == "auto") cfg.oracle.distance_ref.reset();
          else cfg.oracle.distance_ref = to_real(name, value);
        } else if (key == "nonadjacent_discount") {
          cfg.oracle.nonadjacent_discount = to_real(name, value);
        } else if (key == "direction") {
          if (value == "import") cfg.oracle.direction = FlowDirection::Import;
          else if (value == "export") cfg.oracle.direction = FlowDirection::Export;
          else fail(ErrorKind::BadConfig, name + " must be import or export");
        } else if (key == "groups") {
          cfg.oracle.grouping = parse_groups(value);
        } else {
          fail(ErrorKind::BadConfig, "unknown key " + name);
        }
      } else if (section == "model") {
        if (key == "hidden") {
          cfg.model.hidden.clear();
          for (const auto& w : split(value, ',')) cfg.model.hidden.push_back(to_count(name, w));
        } else if (key == "latent") cfg.model.latent = to_count(name, value);
        else if (key == "learning_rate") cfg.model.learning_rate = to_real(name, value);
        else if (key == "optimizer") cfg.model.optimizer = nn::parse_optimizer(value);
        else if (key == "epochs") cfg.model.epochs = to_count(name, value);
        else if (key == "mask") cfg.model.mask = gnn::FeatureMask::parse(value);
        else fail(ErrorKind::BadConfig, "unknown key " + name);
      } else if (section == "federation") {
        if (key == "sync_every") cfg.federation.sync_every = to_count(name, value);
        else if (key == "weights") cfg.federation.weights = fed::parse_weight_policy(value);
        else if (key == "silo_inputs") cfg.federation.silo_inputs = to_bool(name, value);
        else fail(ErrorKind::BadConfig, "unknown key " + name);
      } else if (section == "generator") {
        if (key == "noise") cfg.generator.noise = to_real(name, value);
        else if (key == "count") cfg.generator.count = to_count(name, value);
        else fail(ErrorKind::BadConfig, "unknown key " + name);
      } else if (section == "run") {
        if (key == "seed") cfg.seed = to_count(name, value);
        else if (key == "mode") cfg.mode = parse_mode(value);
        else fail(ErrorKind::BadConfig, "unknown key " + name);
      } else {
        fail(ErrorKind::BadConfig, "unknown section [" + section + "]");
      }
    }
  }
  cfg.validate();
  return cfg;
}

nlohmann::ordered_json effective_config_json(const RunConfig& cfg) {
  nlohmann::ordered_json j;
  j["oracle"]["distance_ref"] =
      cfg.oracle.distance_ref ? nlohmann::ordered_json(*cfg.oracle.distance_ref) : nlohmann::ordered_json("auto");
  j["oracle"]["nonadjacent_discount"] = cfg.oracle.nonadjacent_discount;
  j["oracle"]["direction"] = cfg.oracle.direction == FlowDirection::Import ? "import" : "export";
  j["oracle"]["groups"] = groups_to_string(cfg.oracle.grouping);
  j["model"]["hidden"] = cfg.model.hidden;
  j["model"]["latent"] = cfg.model.latent;
  j["model"]["learning_rate"] = cfg.model.learning_rate;
  j["model"]["optimizer"] = std::string(nn::to_string(cfg.model.optimizer));
  j["model"]["epochs"] = cfg.model.epochs;
  j["model"]["mask"] = cfg.model.mask.name();
  j["federation"]["sync_every"] = cfg.federation.sync_every;
  j["federation"]["weights"] = std::string(fed::to_string(cfg.federation.weights));
  j["federation"]["silo_inputs"] = cfg.federation.silo_inputs;
  j["generator"]["noise"] = cfg.generator.noise;
  j["generator"]["count"] = cfg.generator.count;
  j["run"]["seed"] = cfg.seed;
  j["run"]["mode"] = std::string(to_string(cfg.mode));
  return j;
}

std::string config_digest(const RunConfig& cfg) { return hex32(crc32(effective_config_json(cfg).dump())); }

}  // namespace flee::cli
