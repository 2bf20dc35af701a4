#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "flee/eegnn/model.hpp"
#include "flee/fedsim/federation.hpp"
#include "flee/neural/optimizer.hpp"
#include "flee/oracle/resilience.hpp"

namespace flee::cli {

struct PathsSection {
  std::string nodes;
  std::string flows;
  std::string adjacency;
  std::string corpus;
  std::string eval_corpus;
  std::string checkpoint;
  std::string output_dir = ".";
};

struct ModelSection {
  std::vector<std::size_t> hidden{64};
  std::size_t latent = 32;
  double learning_rate = 1e-3;
  nn::OptimizerKind optimizer = nn::OptimizerKind::Adam;
  std::size_t epochs = 100;
  gnn::FeatureMask mask = gnn::FeatureMask::all();

  nn::ModelDims dims() const;
};

struct FederationSection {
  std::size_t sync_every = 10;
  fed::WeightPolicy weights = fed::WeightPolicy::BySampleCount;
  bool silo_inputs = true;  // evaluation-time inputs of federated models
};

struct GeneratorSection {
  double noise = 0.1;
  std::size_t count = 500;
};

enum class Mode { Central, Federated };

struct RunConfig {
  PathsSection paths;
  OracleConfig oracle;
  ModelSection model;
  FederationSection federation;
  GeneratorSection generator;
  std::uint64_t seed = 0;
  Mode mode = Mode::Central;

  /// Throws BadConfig.
  void validate() const;
};

/// INI file with sections [paths], [oracle], [model], [federation],
/// [generator] and [run]. Unknown keys are rejected. Throws MissingFile,
/// BadConfig.
RunConfig load_config(const std::filesystem::path& path);

/// Everything except [paths], in a fixed key order.
nlohmann::ordered_json effective_config_json(const RunConfig& cfg);
/// CRC-32 of the serialized effective config, as 8 hex digits.
std::string config_digest(const RunConfig& cfg);

std::string_view to_string(Mode mode);
Mode parse_mode(std::string_view text);

}  // namespace flee::cli
