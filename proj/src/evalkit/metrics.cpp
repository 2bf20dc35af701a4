#include "flee/evalkit/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "flee/core/error.hpp"
#include "flee/core/io.hpp"

namespace flee::eval {

double percentile_sorted(std::span<const double> sorted, double q) {
  if (sorted.empty()) fail(ErrorKind::EmptyInput, "percentile of no values");
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  if (frac == 0.0) return sorted[lo];
  return sorted[lo] + (sorted[hi] - sorted[lo]) * frac;
}

ErrorStats describe(std::span<const double> values) {
  if (values.empty()) fail(ErrorKind::EmptyInput, "no values to describe");
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  ErrorStats s;
  s.count = sorted.size();
  double sum = 0.0;
  for (double v : values) sum += v;
  s.mean = sum / static_cast<double>(s.count);
  if (s.count > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - s.mean) * (v - s.mean);
    s.std = std::sqrt(ss / static_cast<double>(s.count - 1));
  }
  s.min = sorted.front();
  s.max = sorted.back();
  s.p25 = percentile_sorted(sorted, 0.25);
  s.p50 = percentile_sorted(sorted, 0.50);
  s.p75 = percentile_sorted(sorted, 0.75);
  // Keep mean inside [min, max] despite summation rounding.
  s.mean = std::clamp(s.mean, s.min, s.max);
  return s;
}

namespace {

void require_same_keys(const std::map<std::string, double>& a, const std::map<std::string, double>& b) {
  if (a.size() != b.size() || !std::equal(a.begin(), a.end(), b.begin(),
                                          [](const auto& x, const auto& y) { return x.first == y.first; })) {
    fail(ErrorKind::KeyMismatch, "prediction and truth cover different nodes");
  }
}

}  // namespace

ErrorStats error_stats(const std::map<std::string, double>& pred, const std::map<std::string, double>& truth) {
  require_same_keys(pred, truth);
  std::vector<double> errs;
  errs.reserve(pred.size());
  for (auto p = pred.begin(), t = truth.begin(); p != pred.end(); ++p, ++t) errs.push_back(std::abs(p->second - t->second));
  return describe(errs);
}

std::map<std::string, double> relative_difference(const std::map<std::string, double>& pred,
                                                  const std::map<std::string, double>& truth) {
  require_same_keys(pred, truth);
  std::map<std::string, double> out;
  for (auto p = pred.begin(), t = truth.begin(); p != pred.end(); ++p, ++t) out.emplace(p->first, p->second - t->second);
  return out;
}

std::vector<std::string> top_k(const std::map<std::string, double>& scores, std::size_t k) {
  std::vector<std::pair<std::string, double>> items(scores.begin(), scores.end());
  std::stable_sort(items.begin(), items.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  std::vector<std::string> out;
  for (std::size_t i = 0; i < std::min(k, items.size()); ++i) out.push_back(items[i].first);
  return out;
}

double coincidence_top(const std::map<std::string, double>& pred, const std::map<std::string, double>& truth,
                       double fraction) {
  if (pred.empty()) fail(ErrorKind::EmptyInput, "coincidence over no nodes");
  require_same_keys(pred, truth);
  if (!(fraction > 0.0 && fraction <= 1.0)) fail(ErrorKind::BadConfig, "fraction must lie in (0, 1]");
  const auto k = std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(fraction * static_cast<double>(pred.size()))));
  const auto a = top_k(pred, k);
  const auto b = top_k(truth, k);
  const std::set<std::string> sa(a.begin(), a.end());
  std::size_t hit = 0;
  for (const auto& id : b) hit += sa.count(id);
  return static_cast<double>(hit) / static_cast<double>(k);
}

double pearson_r(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) fail(ErrorKind::LengthMismatch, "pearson_r over unequal lengths");
  if (x.size() < 2) fail(ErrorKind::EmptyInput, "pearson_r needs at least two points");
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - mx;
    const double dy = y[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (!(sxx > 0.0) || !(syy > 0.0)) fail(ErrorKind::ZeroVariance, "pearson_r of a constant vector");
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

std::vector<double> average_ranks(std::span<const double> x) {
  std::vector<std::size_t> order(x.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return x[a] < x[b]; });
  std::vector<double> ranks(x.size());
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j + 1 < order.size() && x[order[j + 1]] == x[order[i]]) ++j;
    const double avg = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = avg;
    i = j + 1;
  }
  return ranks;
}

double spearman_rho(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) fail(ErrorKind::LengthMismatch, "spearman_rho over unequal lengths");
  const auto rx = average_ranks(x);
  const auto ry = average_ranks(y);
  return pearson_r(rx, ry);
}

RankReport rank_report(const std::map<std::string, double>& pred, const std::map<std::string, double>& truth) {
  require_same_keys(pred, truth);
  RankReport r;
  r.coincidence_10 = coincidence_top(pred, truth, 0.1);
  r.coincidence_30 = coincidence_top(pred, truth, 0.3);
  r.coincidence_50 = coincidence_top(pred, truth, 0.5);
  std::vector<double> x, y;
  for (const auto& [k, v] : pred) x.push_back(v);
  for (const auto& [k, v] : truth) y.push_back(v);
  r.pearson = pearson_r(x, y);
  r.spearman = spearman_rho(x, y);
  return r;
}

std::map<std::string, double> silo_oracle_scores(const FlowGraph& g, const AdjacencyMap& adj, const OracleConfig& cfg,
                                                 const SiloAssignment& assignment) {
  std::map<std::string, double> out;
  for (Region r : kAllRegions) {
    const FlowGraph silo = extract_silo(g, assignment, r);
    if (silo.node_count() == 0) continue;
    for (const auto& [node, s] : resilience_scores(silo, adj, cfg)) out.emplace(node, s);
  }
  return out;
}

void ErrorPool::add(const std::map<std::string, double>& pred, const std::map<std::string, double>& truth) {
  require_same_keys(pred, truth);
  for (auto p = pred.begin(), t = truth.begin(); p != pred.end(); ++p, ++t) {
    errors_.push_back(std::abs(p->second - t->second));
  }
}

std::string_view to_string(TrainingMode mode) { return mode == TrainingMode::Central ? "CT" : "FL"; }

std::vector<AblationCell> ablation_grid(const AblationTrainer& trainer, std::span<const gnn::FeatureMask> masks) {
  std::set<std::uint32_t> seen;
  for (auto m : masks) seen.insert(m.bits());
  if (masks.size() != 8 || seen.size() != 8) fail(ErrorKind::BadConfig, "ablation needs the eight subsets of {V,T,A}");
  std::vector<AblationCell> cells;
  for (auto m : masks) {
    for (TrainingMode mode : {TrainingMode::Central, TrainingMode::Federated}) {
      cells.push_back(AblationCell{m, mode, trainer(m, mode)});
    }
  }
  return cells;
}

namespace {

std::string join_row(const std::string& label, const std::vector<double>& values) {
  std::string row = label;
  for (double v : values) row += ',' + format_double(v);
  return row + '\n';
}

std::string header_row(const std::string& first, const std::vector<std::string>& labels) {
  std::string row = first;
  for (const auto& l : labels) row += ',' + l;
  return row + '\n';
}

}  // namespace

std::string error_table_csv(const std::vector<std::string>& labels, const std::vector<ErrorStats>& cols) {
  auto pick = [&](auto member) {
    std::vector<double> v;
    for (const auto& c : cols) v.push_back(c.*member);
    return v;
  };
  std::string out = header_row("statistic", labels);
  out += join_row("mean", pick(&ErrorStats::mean));
  out += join_row("std", pick(&ErrorStats::std));
  out += join_row("min", pick(&ErrorStats::min));
  out += join_row("25%", pick(&ErrorStats::p25));
  out += join_row("50%", pick(&ErrorStats::p50));
  out += join_row("75%", pick(&ErrorStats::p75));
  out += join_row("max", pick(&ErrorStats::max));
  return out;
}

std::string rank_table_csv(const std::vector<std::string>& labels, const std::vector<RankReport>& cols) {
  auto pick = [&](auto member) {
    std::vector<double> v;
    for (const auto& c : cols) v.push_back(c.*member);
    return v;
  };
  std::string out = header_row("metric", labels);
  out += join_row("coincidence_top10", pick(&RankReport::coincidence_10));
  out += join_row("coincidence_top30", pick(&RankReport::coincidence_30));
  out += join_row("coincidence_top50", pick(&RankReport::coincidence_50));
  out += join_row("pearson_r", pick(&RankReport::pearson));
  out += join_row("spearman_rho", pick(&RankReport::spearman));
  return out;
}

std::string table7_csv(const std::vector<AblationCell>& cells) {
  std::vector<std::string> labels;
  std::vector<ErrorStats> cols;
  for (const auto& c : cells) {
    labels.push_back(c.mask.name() + "_" + std::string(to_string(c.mode)));
    cols.push_back(c.stats);
  }
  return error_table_csv(labels, cols);
}

}  // namespace flee::eval
