#include <doctest.h>

#include <cmath>
#include <cstring>

#include "flee/core/error.hpp"
#include "flee/oracle/resilience.hpp"
#include "support.hpp"

using namespace flee;
using test::edge;
using test::node;

namespace {

OracleConfig with_ref(double ref) {
  OracleConfig c;
  c.distance_ref = ref;
  return c;
}

const OracleBreakdown& row(const std::vector<OracleBreakdown>& rows, const std::string& id) {
  for (const auto& r : rows) {
    if (r.node == id) return r;
  }
  FAIL("node missing");
  return rows.front();
}

}  // namespace

TEST_CASE("discounted_flow_value") {
  AdjacencyMap adj;
  adj.add("AA", "BB");
  const auto cfg = with_ref(100.0);
  CHECK(discounted_flow_value(edge("AA", "BB", 1, 10, 2, 0), adj, cfg) == 20.0);
  CHECK(discounted_flow_value(edge("AA", "CC", 1, 10, 1, 100), adj, cfg) ==
        doctest::Approx(10.0 * std::exp(-1.0) * 0.8).epsilon(1e-15));
  CHECK(discounted_flow_value(edge("AA", "CC", 1, 0, 7, 3), adj, cfg) == 0.0);
  CHECK(discounted_flow_value(edge("CC", "CC", 1, 3, 1, 0), adj, cfg) == 3.0);  // a state is adjacent to itself
}

TEST_CASE("commodity_dependence") {
  std::vector<double> one{0, 0, 5, 0, 0, 0, 0, 0};
  CHECK(commodity_dependence(one, 8) == 1.0);
  std::vector<double> uniform(8, 3.0);
  CHECK(commodity_dependence(uniform, 8) == 0.0);
  std::vector<double> half{1, 1, 0, 0, 0, 0, 0, 0};
  CHECK(commodity_dependence(half, 8) == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
  std::vector<double> zero(8, 0.0);
  try {
    commodity_dependence(zero, 8);
    FAIL("expected AllZeroShares");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::AllZeroShares);
  }
}

TEST_CASE("supplier_concentration") {
  std::vector<double> single{0, 7, 0};
  CHECK(supplier_concentration(single, 3) == 1.0);
  std::vector<double> even{2, 2, 2};
  CHECK(supplier_concentration(even, 3) == 0.0);
  std::vector<double> skew{0.75, 0.25};
  const double h = -(0.75 * std::log(0.75) + 0.25 * std::log(0.25));
  CHECK(supplier_concentration(skew, 2) == doctest::Approx(1.0 - h / std::log(2.0)).epsilon(1e-15));
  CHECK(supplier_concentration(skew, 1) == 1.0);
  std::vector<double> none{0, 0};
  try {
    supplier_concentration(none, 2);
    FAIL("expected NoFlowsInGroup");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NoFlowsInGroup);
  }
}

TEST_CASE("single supplier of a single commodity scores exactly 0") {
  const FlowGraph g({node("AA"), node("BB"), node("CC")}, {edge("BB", "AA", 4, 12, 3, 40)});
  const auto rows = resilience(g, AdjacencyMap{}, with_ref(100.0));
  CHECK(row(rows, "AA").score == 0.0);
  CHECK_FALSE(row(rows, "AA").degenerate);
}

TEST_CASE("uniform eight groups split over several suppliers scores exactly 1") {
  std::vector<NodeRecord> nodes{node("AA"), node("BB"), node("CC"), node("DD")};
  std::vector<FlowEdge> edges;
  for (int c = 1; c <= 8; ++c) {
    edges.push_back(edge("BB", "AA", c, 10, 2, 0));
    edges.push_back(edge("CC", "AA", c, 10, 2, 0));
  }
  AdjacencyMap adj;
  adj.add("AA", "BB");
  adj.add("AA", "CC");
  const auto rows = resilience(FlowGraph(nodes, edges), adj, with_ref(50.0));
  CHECK(row(rows, "AA").commodity_dependence == 0.0);
  CHECK(row(rows, "AA").score == 1.0);
}

TEST_CASE("nodes without inflow are degenerate") {
  const FlowGraph g({node("AA"), node("BB")}, {edge("AA", "BB", 1, 1, 1, 1)});
  const auto rows = resilience(g, AdjacencyMap{}, with_ref(1.0));
  CHECK(row(rows, "AA").degenerate);
  CHECK(row(rows, "AA").score == 0.0);
  CHECK_FALSE(row(rows, "BB").degenerate);
}

TEST_CASE("golden 3-node, 2-commodity trace") {
  // Reference values were computed independently from the formula definitions.
  const FlowGraph g({node("AA"), node("BB"), node("CC")},
                    {edge("BB", "AA", 1, 10, 2, 50), edge("CC", "AA", 1, 5, 4, 100), edge("CC", "AA", 2, 3, 1, 0),
                     edge("AA", "AA", 2, 2, 1, 20), edge("BB", "CC", 3, 1, 1, 1)});
  AdjacencyMap adj;
  adj.add("AA", "BB");
  const auto rows = resilience(g, adj, with_ref(100.0));
  const auto& a = row(rows, "AA");
  CHECK(a.total_value == doctest::Approx(22.05414575915171).epsilon(1e-13));
  CHECK(a.commodity_dependence == doctest::Approx(0.7710839711000624).epsilon(1e-13));
  CHECK(a.group_values[0] + a.group_values[1] == doctest::Approx(1.6986228677671598).epsilon(1e-13));
  CHECK(a.group_values[0] == doctest::Approx(0.08847963428999195 * (20 * std::exp(-0.5) + 20 * std::exp(-1.0) * 0.8)).epsilon(1e-13));
  CHECK(a.score == doctest::Approx(0.9406106733589641).epsilon(1e-13));
  CHECK(a.flow_values.at({"CC", 2}) == doctest::Approx(2.4).epsilon(1e-15));
  CHECK(row(rows, "CC").score == 0.0);
  CHECK(row(rows, "BB").degenerate);

  const auto csv = resilience_to_csv(rows);
  CHECK(csv.rfind("node,score,dependence,total_value,degenerate\nAA,", 0) == 0);
}

TEST_CASE("scores stay in [0, 1] and the weighted fraction in [0, total]") {
  Rng rng(31);
  for (int trial = 0; trial < 500; ++trial) {
    const auto g = test::random_graph(rng, {2 + rng.below(7), rng.below(60)});
    AdjacencyMap adj;
    for (std::size_t i = 0; i + 1 < g.node_count(); i += 2) adj.add(g.nodes()[i].id, g.nodes()[i + 1].id);
    for (const auto& b : resilience(g, adj, OracleConfig{})) {
      REQUIRE(b.score >= 0.0);
      REQUIRE(b.score <= 1.0);
      double s = 0.0;
      for (double v : b.group_values) s += v;
      REQUIRE(s >= 0.0);
      REQUIRE(s <= b.total_value * (1.0 + 1e-12));
      if (!b.degenerate) {
        CHECK(b.score == doctest::Approx(1.0 - b.commodity_dependence * s / b.total_value).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("scaling every value by k leaves scores unchanged") {
  Rng rng(32);
  for (int trial = 0; trial < 100; ++trial) {
    const auto g = test::random_graph(rng, {6, 30});
    const auto cfg = with_ref(500.0);
    const auto base = resilience_scores(g, AdjacencyMap{}, cfg);
    for (double k : {0.25, 2.0, 1024.0, 3.0, 0.1, 7.77}) {
      auto edges = g.edges();
      for (auto& e : edges) e.value *= k;
      const auto scaled = resilience_scores(g.with_edges(edges), AdjacencyMap{}, cfg);
      const bool pow2 = std::ldexp(1.0, std::ilogb(k)) == k;
      for (const auto& [id, s] : base) {
        if (pow2) {
          CHECK(std::memcmp(&s, &scaled.at(id), sizeof(double)) == 0);
        } else {
          CHECK(scaled.at(id) == doctest::Approx(s).epsilon(1e-12));
        }
      }
    }
  }
}

TEST_CASE("splitting a single-supplier group between two suppliers never lowers R") {
  Rng rng(33);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<NodeRecord> nodes{node("AA"), node("BB"), node("CC"), node("DD")};
    std::vector<FlowEdge> edges;
    for (int c = 1; c <= 8; ++c) {
      if (rng.below(2)) edges.push_back(edge("DD", "AA", c, rng.uniform(1, 100), 1, 0));
    }
    const int c = 1 + static_cast<int>(rng.below(8));
    std::erase_if(edges, [&](const FlowEdge& e) { return e.commodity.value() == c; });
    const double v = rng.uniform(1, 100);
    auto single = edges;
    single.push_back(edge("BB", "AA", c, v, 1, 0));
    auto split = edges;
    split.push_back(edge("BB", "AA", c, v / 2, 1, 0));
    split.push_back(edge("CC", "AA", c, v / 2, 1, 0));
    const auto cfg = with_ref(1.0);
    const double r1 = resilience_scores(FlowGraph(nodes, single), AdjacencyMap{}, cfg).at("AA");
    const double r2 = resilience_scores(FlowGraph(nodes, split), AdjacencyMap{}, cfg).at("AA");
    CHECK(r2 >= r1);
  }
}

TEST_CASE("removing all inflow makes a node degenerate") {
  Rng rng(34);
  const auto g = test::random_graph(rng, {5, 40});
  auto edges = g.edges();
  std::erase_if(edges, [](const FlowEdge& e) { return e.dest == "AA"; });
  const auto rows = resilience(g.with_edges(edges), AdjacencyMap{}, OracleConfig{});
  CHECK(row(rows, "AA").degenerate);
  CHECK(row(rows, "AA").score == 0.0);
}

TEST_CASE("export direction uses outbound flows") {
  const FlowGraph g({node("AA"), node("BB"), node("CC")}, {edge("AA", "BB", 1, 1, 1, 0)});
  OracleConfig cfg = with_ref(1.0);
  cfg.direction = FlowDirection::Export;
  const auto rows = resilience(g, AdjacencyMap{}, cfg);
  CHECK_FALSE(row(rows, "AA").degenerate);
  CHECK(row(rows, "BB").degenerate);
}

TEST_CASE("grouping and config validation") {
  CommodityGrouping g{{{1, 2}, {3, 4, 5, 6, 7, 8}}};
  CHECK_NOTHROW(g.validate());
  CommodityGrouping missing{{{1, 2, 3}}};
  CHECK_THROWS_AS(missing.validate(), Error);
  CommodityGrouping twice{{{1, 2}, {2, 3, 4, 5, 6, 7, 8}}};
  CHECK_THROWS_AS(twice.validate(), Error);
  OracleConfig bad;
  bad.nonadjacent_discount = 0.0;
  CHECK_THROWS_AS(bad.validate(), Error);
  bad.nonadjacent_discount = 0.5;
  bad.distance_ref = -1.0;
  CHECK_THROWS_AS(bad.validate(), Error);
}

TEST_CASE("grouped commodities pool their values") {
  // Two commodities in one group from one supplier: D = 1, d = 1 -> R = 0.
  const FlowGraph g({node("AA"), node("BB"), node("CC")},
                    {edge("BB", "AA", 1, 5, 1, 0), edge("BB", "AA", 2, 5, 1, 0)});
  OracleConfig cfg = with_ref(1.0);
  CHECK(resilience_scores(g, AdjacencyMap{}, cfg).at("AA") > 0.0);
  cfg.grouping = CommodityGrouping{{{1, 2}, {3}, {4}, {5}, {6}, {7}, {8}}};
  CHECK(resilience_scores(g, AdjacencyMap{}, cfg).at("AA") == 0.0);
}
