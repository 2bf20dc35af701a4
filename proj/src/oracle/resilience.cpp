#include "flee/oracle/resilience.hpp"

#include <algorithm>
#include <cmath>

#include "flee/core/error.hpp"
#include "flee/core/io.hpp"

namespace flee {

CommodityGrouping CommodityGrouping::singletons() {
  CommodityGrouping g;
  for (int c = 1; c <= kCommodityCount; ++c) g.groups.push_back({c});
  return g;
}

void CommodityGrouping::validate() const {
  std::array<int, kCommodityCount> seen{};
  for (const auto& group : groups) {
    if (group.empty()) fail(ErrorKind::BadConfig, "empty commodity group");
    for (int c : group) {
      if (c < 1 || c > kCommodityCount) fail(ErrorKind::BadConfig, "commodity " + std::to_string(c) + " not in 1..8");
      if (seen[static_cast<std::size_t>(c - 1)]++) fail(ErrorKind::BadConfig, "commodity " + std::to_string(c) + " grouped twice");
    }
  }
  for (int c = 0; c < kCommodityCount; ++c) {
    if (!seen[static_cast<std::size_t>(c)]) fail(ErrorKind::BadConfig, "commodity " + std::to_string(c + 1) + " ungrouped");
  }
}

std::array<std::size_t, kCommodityCount> CommodityGrouping::slot_to_group() const {
  std::array<std::size_t, kCommodityCount> map{};
  for (std::size_t a = 0; a < groups.size(); ++a) {
    for (int c : groups[a]) map[static_cast<std::size_t>(c - 1)] = a;
  }
  return map;
}

void OracleConfig::validate() const {
  if (distance_ref && !(*distance_ref > 0.0)) fail(ErrorKind::BadConfig, "distance_ref must be > 0");
  if (!(nonadjacent_discount > 0.0 && nonadjacent_discount <= 1.0)) {
    fail(ErrorKind::BadConfig, "nonadjacent_discount must lie in (0, 1]");
  }
  grouping.validate();
}

OracleConfig OracleConfig::resolved(const FlowGraph& g) const {
  OracleConfig out = *this;
  if (!out.distance_ref) {
    double sum = 0.0;
    for (const auto& e : g.edges()) sum += e.avg_miles;
    const double mean = g.n_edges() > 0 ? sum / static_cast<double>(g.n_edges()) : 0.0;
    out.distance_ref = mean > 0.0 ? mean : 1.0;
  }
  out.validate();
  return out;
}

double discounted_flow_value(const FlowEdge& edge, const AdjacencyMap& adj, const OracleConfig& cfg) {
  if (!cfg.distance_ref) fail(ErrorKind::BadConfig, "distance_ref unresolved");
  const double w_dist = std::exp(-edge.avg_miles / *cfg.distance_ref);
  const double w_adj = adj.adjacent(edge.source, edge.dest) ? 1.0 : cfg.nonadjacent_discount;
  return edge.value * edge.tonnage * w_dist * w_adj;
}

namespace {

// Natural-log Shannon entropy of the normalized distribution.
double entropy(std::span<const double> weights, double total) {
  // Equal positive shares have entropy log(m) exactly; summing m rounded terms
  // would miss it by an ulp and turn a perfectly spread supplier set into a
  // tiny positive concentration.
  std::size_t positive = 0;
  bool equal = true;
  double first = 0.0;
  for (double w : weights) {
    if (!(w > 0.0)) continue;
    if (positive++ == 0) first = w;
    else if (w != first) equal = false;
  }
  if (equal && positive > 0) return std::log(static_cast<double>(positive));
  double h = 0.0;
  for (double w : weights) {
    if (w > 0.0) {
      const double p = w / total;
      h -= p * std::log(p);
    }
  }
  return h;
}

double sum_of(std::span<const double> xs) {
  double s = 0.0;
  for (double x : xs) s += x;
  return s;
}

}  // namespace

double commodity_dependence(std::span<const double> shares, std::size_t category_count) {
  const double total = sum_of(shares);
  if (!(total > 0.0)) fail(ErrorKind::AllZeroShares, "commodity shares sum to zero");
  if (category_count <= 1) return 1.0;
  const double d = 1.0 - entropy(shares, total) / std::log(static_cast<double>(category_count));
  return std::clamp(d, 0.0, 1.0);
}

double supplier_concentration(std::span<const double> partner_values, std::size_t possible_partners) {
  const double total = sum_of(partner_values);
  if (!(total > 0.0)) fail(ErrorKind::NoFlowsInGroup, "no partner value in group");
  if (possible_partners <= 1) return 1.0;
  const double d = 1.0 - entropy(partner_values, total) / std::log(static_cast<double>(possible_partners));
  return std::clamp(d, 0.0, 1.0);
}

std::vector<OracleBreakdown> resilience(const FlowGraph& g, const AdjacencyMap& adj, const OracleConfig& cfg_in) {
  const OracleConfig cfg = cfg_in.resolved(g);
  const auto slot_group = cfg.grouping.slot_to_group();
  const std::size_t n_groups = cfg.grouping.groups.size();
  const std::size_t n = g.node_count();
  const std::size_t possible_partners = n > 0 ? n - 1 : 0;

  // Discounted value per (node, partner, commodity slot).
  struct Flow {
    std::size_t partner;
    std::size_t slot;
    double value;
  };
  std::vector<std::vector<Flow>> flows(n);
  for (const auto& e : g.edges()) {
    const std::size_t s = g.node_index(e.source);
    const std::size_t d = g.node_index(e.dest);
    const bool import = cfg.direction == FlowDirection::Import;
    flows[import ? d : s].push_back({import ? s : d, e.commodity.slot(), discounted_flow_value(e, adj, cfg)});
  }

  std::vector<OracleBreakdown> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    auto& b = out[i];
    b.node = g.nodes()[i].id;
    b.group_values.assign(n_groups, 0.0);

    // Canonical accumulation order: partner index, then commodity slot.
    auto& fl = flows[i];
    std::sort(fl.begin(), fl.end(), [](const Flow& x, const Flow& y) {
      return x.partner != y.partner ? x.partner < y.partner : x.slot < y.slot;
    });

    std::vector<double> group_sum(n_groups, 0.0);
    std::vector<std::vector<double>> partner_sum(n_groups, std::vector<double>(n, 0.0));
    for (const auto& f : fl) {
      b.flow_values[{g.nodes()[f.partner].id, static_cast<int>(f.slot + 1)}] = f.value;
      const std::size_t a = slot_group[f.slot];
      group_sum[a] += f.value;
      partner_sum[a][f.partner] += f.value;
    }
    b.total_value = sum_of(group_sum);
    if (!(b.total_value > 0.0)) {
      b.degenerate = true;
      b.score = 0.0;
      b.commodity_dependence = 1.0;
      continue;
    }
    b.commodity_dependence = commodity_dependence(group_sum, n_groups);
    double weighted = 0.0;
    for (std::size_t a = 0; a < n_groups; ++a) {
      if (group_sum[a] > 0.0) {
        b.group_values[a] = supplier_concentration(partner_sum[a], possible_partners) * group_sum[a];
      }
      weighted += b.group_values[a];
    }
    const double fraction = weighted / b.total_value;
    b.score = std::clamp(1.0 - b.commodity_dependence * fraction, 0.0, 1.0);
  }
  return out;
}

std::map<std::string, double> resilience_scores(const FlowGraph& g, const AdjacencyMap& adj, const OracleConfig& cfg) {
  std::map<std::string, double> scores;
  for (const auto& b : resilience(g, adj, cfg)) scores.emplace(b.node, b.score);
  return scores;
}

std::string resilience_to_csv(const std::vector<OracleBreakdown>& rows) {
  std::string out = "node,score,dependence,total_value,degenerate\n";
  for (const auto& b : rows) {
    out += b.node + ',' + format_double(b.score) + ',' + format_double(b.commodity_dependence) + ',' +
           format_double(b.total_value) + ',' + (b.degenerate ? "1" : "0") + '\n';
  }
  return out;
}

std::map<std::string, double> read_scores_csv(const std::string& path) {
  const std::string text = read_text_file(path);
  const auto header_end = text.find('\n');
  const std::string header = text.substr(0, header_end);
  std::vector<std::string> expected;
  if (header.rfind("node,score,dependence", 0) == 0) {
    expected = {"node", "score", "dependence", "total_value", "degenerate"};
  } else {
    expected = {"node", "score"};
  }
  const auto table = read_csv(path, expected);
  std::map<std::string, double> scores;
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    double v = 0.0;
    if (!parse_double(table.rows[i][1], v)) {
      fail(ErrorKind::SchemaViolation, path + ": row " + std::to_string(table.line_numbers[i]) + ", column score");
    }
    if (!scores.emplace(table.rows[i][0], v).second) {
      fail(ErrorKind::SchemaViolation, path + ": duplicate node " + table.rows[i][0]);
    }
  }
  return scores;
}

}  // namespace flee
