#pragma once

#include <functional>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "flee/eegnn/model.hpp"
#include "flee/flowgraph/silo.hpp"
#include "flee/oracle/resilience.hpp"

namespace flee::eval {

/// Distribution summary of absolute errors. Percentiles interpolate linearly
/// between order statistics at rank q (n - 1); std is the sample (n - 1) form.
struct ErrorStats {
  std::size_t count = 0;
  double mean = 0.0;
  double std = 0.0;
  double min = 0.0;
  double p25 = 0.0;
  double p50 = 0.0;
  double p75 = 0.0;
  double max = 0.0;
};

/// Throws EmptyInput.
ErrorStats describe(std::span<const double> values);
/// Linear-interpolation percentile of already sorted values, q in [0, 1].
double percentile_sorted(std::span<const double> sorted, double q);

/// Statistics of |pred - truth| over nodes. Throws KeyMismatch.
ErrorStats error_stats(const std::map<std::string, double>& pred, const std::map<std::string, double>& truth);

/// pred - truth per node. Throws KeyMismatch.
std::map<std::string, double> relative_difference(const std::map<std::string, double>& pred,
                                                  const std::map<std::string, double>& truth);

/// Node ids of the k highest scores; ties go to the smaller id.
std::vector<std::string> top_k(const std::map<std::string, double>& scores, std::size_t k);

/// |top_k(pred) & top_k(truth)| / k with k = round(fraction * N), at least 1.
/// Throws EmptyInput, KeyMismatch, BadConfig (fraction outside (0, 1]).
double coincidence_top(const std::map<std::string, double>& pred, const std::map<std::string, double>& truth,
                       double fraction);

/// Product-moment correlation. Throws LengthMismatch, EmptyInput (n < 2), ZeroVariance.
double pearson_r(std::span<const double> x, std::span<const double> y);
/// Pearson on average-tie ranks.
double spearman_rho(std::span<const double> x, std::span<const double> y);
/// 1-based ranks, ties share their average rank.
std::vector<double> average_ranks(std::span<const double> x);

struct RankReport {
  double coincidence_10 = 0.0;
  double coincidence_30 = 0.0;
  double coincidence_50 = 0.0;
  double pearson = 0.0;
  double spearman = 0.0;
};

RankReport rank_report(const std::map<std::string, double>& pred, const std::map<std::string, double>& truth);

/// Oracle scores where each node sees only its own silo's sub-graph.
std::map<std::string, double> silo_oracle_scores(const FlowGraph& g, const AdjacencyMap& adj, const OracleConfig& cfg,
                                                 const SiloAssignment& assignment);

/// Pools |pred - truth| over several graphs before summarizing.
class ErrorPool {
 public:
  void add(const std::map<std::string, double>& pred, const std::map<std::string, double>& truth);
  ErrorStats stats() const { return describe(errors_); }
  std::size_t size() const { return errors_.size(); }

 private:
  std::vector<double> errors_;
};

enum class TrainingMode { Central, Federated };
std::string_view to_string(TrainingMode mode);

struct AblationCell {
  gnn::FeatureMask mask;
  TrainingMode mode = TrainingMode::Central;
  ErrorStats stats;
};

/// Trains and evaluates one model per (mask, mode); returns stats.
using AblationTrainer = std::function<ErrorStats(gnn::FeatureMask, TrainingMode)>;

/// One cell per mask per mode, masks in the given order, central before
/// federated. Throws BadConfig unless the masks are the eight subsets of {V,T,A}.
std::vector<AblationCell> ablation_grid(const AblationTrainer& trainer,
                                        std::span<const gnn::FeatureMask> masks);

/// statistic rows (mean, std, min, 25%, 50%, 75%, max) x labelled columns.
std::string error_table_csv(const std::vector<std::string>& labels, const std::vector<ErrorStats>& columns);
/// coincidence@10/30/50, pearson_r, spearman_rho rows x labelled columns.
std::string rank_table_csv(const std::vector<std::string>& labels, const std::vector<RankReport>& columns);
/// Ablation table: columns <MASK>_<CT|FL> in grid order.
std::string table7_csv(const std::vector<AblationCell>& cells);

}  // namespace flee::eval
