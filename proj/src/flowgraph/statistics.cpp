#include "flee/flowgraph/statistics.hpp"

#include <algorithm>
#include <deque>
#include <limits>
#include <map>

#include <json.hpp>

#include "flee/core/error.hpp"

namespace flee {

MergedDigraph MergedDigraph::from(const FlowGraph& g) {
  MergedDigraph m;
  m.n = g.node_count();
  std::vector<std::map<std::size_t, double>> arcs(m.n);
  for (const auto& e : g.edges()) {
    const std::size_t s = g.node_index(e.source);
    const std::size_t d = g.node_index(e.dest);
    if (s == d) continue;
    arcs[s][d] += e.value;
  }
  m.out.resize(m.n);
  m.in.resize(m.n);
  m.out_weight.resize(m.n);
  for (std::size_t s = 0; s < m.n; ++s) {
    for (const auto& [d, w] : arcs[s]) {
      m.out[s].push_back(d);
      m.out_weight[s].push_back(w);
      m.in[d].push_back(s);
      ++m.arc_count;
    }
  }
  for (auto& v : m.in) std::sort(v.begin(), v.end());
  return m;
}

namespace {

constexpr std::size_t kUnreached = std::numeric_limits<std::size_t>::max();

// BFS distances following `adj`.
std::vector<std::size_t> bfs(const std::vector<std::vector<std::size_t>>& adj, std::size_t src) {
  std::vector<std::size_t> dist(adj.size(), kUnreached);
  std::deque<std::size_t> queue{src};
  dist[src] = 0;
  while (!queue.empty()) {
    const std::size_t u = queue.front();
    queue.pop_front();
    for (std::size_t v : adj[u]) {
      if (dist[v] == kUnreached) {
        dist[v] = dist[u] + 1;
        queue.push_back(v);
      }
    }
  }
  return dist;
}

/// Unit-capacity residual network with Edmonds-Karp augmentation.
class UnitFlow {
 public:
  explicit UnitFlow(std::size_t n) : head_(n, kNone) {}

  void add_arc(std::size_t u, std::size_t v) {
    arcs_.push_back({v, 1, head_[u]});
    head_[u] = arcs_.size() - 1;
    arcs_.push_back({u, 0, head_[v]});
    head_[v] = arcs_.size() - 1;
  }

  std::size_t max_flow(std::size_t s, std::size_t t) {
    std::size_t flow = 0;
    std::vector<std::size_t> via(head_.size());
    while (true) {
      std::fill(via.begin(), via.end(), kNone);
      std::deque<std::size_t> queue{s};
      via[s] = kNone - 1;
      while (!queue.empty() && via[t] == kNone) {
        const std::size_t u = queue.front();
        queue.pop_front();
        for (std::size_t a = head_[u]; a != kNone; a = arcs_[a].next) {
          if (arcs_[a].cap > 0 && via[arcs_[a].to] == kNone) {
            via[arcs_[a].to] = a;
            queue.push_back(arcs_[a].to);
          }
        }
      }
      if (via[t] == kNone) return flow;
      for (std::size_t v = t; v != s;) {
        const std::size_t a = via[v];
        arcs_[a].cap -= 1;
        arcs_[a ^ 1].cap += 1;
        v = arcs_[a ^ 1].to;
      }
      ++flow;
    }
  }

 private:
  static constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();
  struct Arc {
    std::size_t to;
    int cap;
    std::size_t next;
  };
  std::vector<std::size_t> head_;
  std::vector<Arc> arcs_;
};

}  // namespace

std::vector<double> closeness_centrality(const MergedDigraph& g) {
  // Incoming distances, scaled by the reachable fraction (Wasserman-Faust).
  std::vector<double> c(g.n, 0.0);
  if (g.n < 2) return c;
  for (std::size_t u = 0; u < g.n; ++u) {
    const auto dist = bfs(g.in, u);
    std::size_t reach = 0;
    std::size_t total = 0;
    for (std::size_t v = 0; v < g.n; ++v) {
      if (dist[v] != kUnreached) {
        ++reach;
        total += dist[v];
      }
    }
    if (total > 0) {
      const double r1 = static_cast<double>(reach - 1);
      c[u] = (r1 / static_cast<double>(total)) * (r1 / static_cast<double>(g.n - 1));
    }
  }
  return c;
}

std::vector<double> betweenness_centrality(const MergedDigraph& g) {
  // Brandes accumulation on the unweighted digraph.
  std::vector<double> cb(g.n, 0.0);
  for (std::size_t s = 0; s < g.n; ++s) {
    std::vector<std::size_t> order;
    std::vector<std::vector<std::size_t>> preds(g.n);
    std::vector<double> sigma(g.n, 0.0);
    std::vector<std::size_t> dist(g.n, kUnreached);
    sigma[s] = 1.0;
    dist[s] = 0;
    std::deque<std::size_t> queue{s};
    while (!queue.empty()) {
      const std::size_t v = queue.front();
      queue.pop_front();
      order.push_back(v);
      for (std::size_t w : g.out[v]) {
        if (dist[w] == kUnreached) {
          dist[w] = dist[v] + 1;
          queue.push_back(w);
        }
        if (dist[w] == dist[v] + 1) {
          sigma[w] += sigma[v];
          preds[w].push_back(v);
        }
      }
    }
    std::vector<double> delta(g.n, 0.0);
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
      const std::size_t w = *it;
      for (std::size_t v : preds[w]) delta[v] += sigma[v] / sigma[w] * (1.0 + delta[w]);
      if (w != s) cb[w] += delta[w];
    }
  }
  if (g.n > 2) {
    const double scale = 1.0 / (static_cast<double>(g.n - 1) * static_cast<double>(g.n - 2));
    for (auto& x : cb) x *= scale;
  } else {
    std::fill(cb.begin(), cb.end(), 0.0);
  }
  return cb;
}

std::size_t local_node_connectivity(const MergedDigraph& g, std::size_t s, std::size_t t) {
  // Split v into v_in = 2v and v_out = 2v+1 joined by a unit arc.
  UnitFlow net(2 * g.n);
  for (std::size_t v = 0; v < g.n; ++v) net.add_arc(2 * v, 2 * v + 1);
  for (std::size_t u = 0; u < g.n; ++u) {
    for (std::size_t v : g.out[u]) net.add_arc(2 * u + 1, 2 * v);
  }
  return net.max_flow(2 * s + 1, 2 * t);
}

std::size_t local_edge_connectivity(const MergedDigraph& g, std::size_t s, std::size_t t) {
  UnitFlow net(g.n);
  for (std::size_t u = 0; u < g.n; ++u) {
    for (std::size_t v : g.out[u]) net.add_arc(u, v);
  }
  return net.max_flow(s, t);
}

std::size_t edge_connectivity(const MergedDigraph& g) {
  if (g.n < 2) return 0;
  // Every minimum cut separates node 0 from some v in one direction.
  std::size_t best = std::numeric_limits<std::size_t>::max();
  for (std::size_t v = 1; v < g.n && best > 0; ++v) {
    best = std::min(best, local_edge_connectivity(g, 0, v));
    best = std::min(best, local_edge_connectivity(g, v, 0));
  }
  return best;
}

StatisticsReport graph_statistics(const FlowGraph& g) {
  if (g.node_count() == 0) fail(ErrorKind::EmptyGraph, "graph has no nodes");
  const auto m = MergedDigraph::from(g);
  StatisticsReport r;
  r.node_count = m.n;
  r.arc_count = m.arc_count;
  const double n = static_cast<double>(m.n);

  double weight_total = 0.0;
  for (std::size_t u = 0; u < m.n; ++u) {
    for (double w : m.out_weight[u]) weight_total += w;
  }
  r.average_degree = 2.0 * static_cast<double>(m.arc_count) / n;
  // Each arc's weight counts once at its tail (out) and once at its head (in).
  r.average_weighted_degree = 2.0 * weight_total / n;
  r.average_degree_centrality = m.n > 1 ? r.average_degree / (n - 1.0) : 0.0;

  double sum = 0.0;
  for (double c : closeness_centrality(m)) sum += c;
  r.average_closeness_centrality = sum / n;

  sum = 0.0;
  for (double b : betweenness_centrality(m)) sum += b;
  r.average_betweenness_centrality = sum / n;

  if (m.n > 1) {
    std::size_t total = 0;
    for (std::size_t s = 0; s < m.n; ++s) {
      for (std::size_t t = 0; t < m.n; ++t) {
        if (s != t) total += local_node_connectivity(m, s, t);
      }
    }
    r.average_node_connectivity = static_cast<double>(total) / (n * (n - 1.0));
  }
  r.edge_connectivity = edge_connectivity(m);
  return r;
}

std::string statistics_to_json(const StatisticsReport& r) {
  nlohmann::ordered_json j;
  j["node_count"] = r.node_count;
  j["arc_count"] = r.arc_count;
  j["average_degree"] = r.average_degree;
  j["average_weighted_degree"] = r.average_weighted_degree;
  j["average_degree_centrality"] = r.average_degree_centrality;
  j["average_closeness_centrality"] = r.average_closeness_centrality;
  j["average_betweenness_centrality"] = r.average_betweenness_centrality;
  j["average_node_connectivity"] = r.average_node_connectivity;
  j["edge_connectivity"] = r.edge_connectivity;
  j["conventions"] = {
      {"arcs", "commodity edges merged into one arc per ordered (origin, dest) pair"},
      {"self_loops", "excluded from degree, centrality and connectivity"},
      {"degree", "in-degree + out-degree over merged arcs"},
      {"weighted_degree", "sum of per-commodity value over incident merged arcs, in + out"},
      {"degree_centrality", "degree / (n - 1)"},
      {"closeness", "directed, unweighted, incoming distances; unreachable pairs excluded and the score "
                    "scaled by (reachable - 1) / (n - 1)"},
      {"betweenness", "directed, unweighted, normalized by 1 / ((n - 1)(n - 2))"},
      {"node_connectivity", "mean over ordered pairs of unit-capacity max-flow with unit node capacities "
                            "(internally vertex-disjoint paths)"},
      {"edge_connectivity", "minimum over ordered pairs of unit-capacity arc max-flow"},
  };
  return j.dump(2) + "\n";
}

}  // namespace flee
