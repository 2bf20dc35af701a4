#include <doctest.h>

#include <algorithm>
#include <map>
#include <set>
#include <tuple>

#include <json.hpp>

#include "flee/core/error.hpp"
#include "flee/core/io.hpp"
#include "flee/datagen/generator.hpp"
#include "flee/flowgraph/ingest.hpp"
#include "support.hpp"

using namespace flee;
using test::edge;
using test::node;

namespace {

using Triple = std::tuple<std::string, std::string, int>;

std::multiset<Triple> triples(const FlowGraph& g) {
  std::multiset<Triple> out;
  for (const auto& e : g.edges()) out.insert({e.source, e.dest, e.commodity.value()});
  return out;
}

FlowGraph sample_graph() {
  return ingest_graph(test::kSampleDir + "/nodes.csv", test::kSampleDir + "/flows.csv");
}

}  // namespace

TEST_CASE("op_add adds one edge with a fresh triple") {
  const FlowGraph g({node("AA"), node("BB")}, {edge("AA", "BB", 1, 5, 5, 5)});
  Rng rng(1);
  const auto ranges = AttributeRanges::of(g);
  for (int i = 0; i < 50; ++i) {
    const auto h = op_add(g, ranges, rng);
    REQUIRE(h.n_edges() == 2);
    CHECK(triples(h).count({"AA", "BB", 1}) == 1);
  }
}

TEST_CASE("op_add on a saturated triple space") {
  std::vector<FlowEdge> edges;
  for (int c = 1; c <= 8; ++c) edges.push_back(edge("AA", "AA", c, 1, 1, 1));
  const FlowGraph g({node("AA")}, edges);
  Rng rng(1);
  try {
    op_add(g, AttributeRanges::of(g), rng);
    FAIL("expected SaturatedTripleSpace");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::SaturatedTripleSpace);
  }
}

TEST_CASE("op_add samples attributes inside the source ranges") {
  const auto g = sample_graph();
  const auto r = AttributeRanges::of(g);
  Rng rng(2);
  for (int i = 0; i < 10000; ++i) {
    const auto h = op_add(g, r, rng);
    const auto& e = h.edges().back();
    REQUIRE(e.value >= r.v_min);
    REQUIRE(e.value <= r.v_max);
    REQUIRE(e.tonnage >= r.t_min);
    REQUIRE(e.tonnage <= r.t_max);
    REQUIRE(e.avg_miles >= r.a_min);
    REQUIRE(e.avg_miles <= r.a_max);
  }
}

TEST_CASE("op_remove") {
  Rng rng(3);
  const FlowGraph one({node("AA"), node("BB")}, {edge("AA", "BB", 1, 5, 5, 5)});
  CHECK(op_remove(one, rng).n_edges() == 0);
  try {
    op_remove(op_remove(one, rng), rng);
    FAIL("expected EmptyEdgeSet");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::EmptyEdgeSet);
  }

  const auto g = sample_graph();
  const auto h = op_remove(g, rng);
  CHECK(h.n_edges() == 99);
  auto before = triples(g), after = triples(h);
  std::vector<Triple> gone;
  std::set_difference(before.begin(), before.end(), after.begin(), after.end(), std::back_inserter(gone));
  REQUIRE(gone.size() == 1);
  CHECK(after.count(gone[0]) == 0);
}

TEST_CASE("op_remove picks edges uniformly") {
  Rng seed_rng(4);
  const auto g = test::random_graph(seed_rng, {4, 10});
  Rng rng(5);
  std::map<Triple, int> removed;
  const int trials = 100000;
  for (int i = 0; i < trials; ++i) {
    const auto before = triples(g), after = triples(op_remove(g, rng));
    std::vector<Triple> gone;
    std::set_difference(before.begin(), before.end(), after.begin(), after.end(), std::back_inserter(gone));
    ++removed[gone.at(0)];
  }
  CHECK(removed.size() == 10);
  for (const auto& [t, k] : removed) CHECK(std::abs(k / double(trials) - 0.1) <= 0.01);
}

TEST_CASE("op_change keeps the triple multiset") {
  Rng rng(6);
  const FlowGraph one({node("AA"), node("BB")}, {edge("AA", "BB", 1, 5, 5, 5)});
  const auto h = op_change(one, AttributeRanges{1, 9, 1, 9, 1, 9}, rng);
  CHECK(triples(h) == triples(one));
  CHECK(h.edges()[0].value >= 1);
  CHECK(h.edges()[0].value <= 9);

  const FlowGraph pinned({node("AA"), node("BB")}, {edge("AA", "BB", 1, 5, 2, 3), edge("BB", "AA", 2, 5, 4, 6)});
  const auto r = AttributeRanges::of(pinned);
  CHECK(r.v_min == 5);
  CHECK(r.v_max == 5);
  for (int i = 0; i < 20; ++i) {
    const auto c = op_change(pinned, r, rng);
    for (const auto& e : c.edges()) CHECK(e.value == 5.0);
  }

  const auto g = sample_graph();
  CHECK(triples(op_change(g, AttributeRanges::of(g), rng)) == triples(g));
}

TEST_CASE("perturbation_rounds floors r n / 3") {
  CHECK(perturbation_rounds(100, 0.3) == 10);
  CHECK(perturbation_rounds(100, 0.1) == 3);
  CHECK(perturbation_rounds(100, 0.5) == 16);
  CHECK(perturbation_rounds(100, 0.0) == 0);
  for (int k = 0; k <= 100; ++k) {
    for (std::size_t n = 0; n <= 300; n += 7) {
      CHECK(perturbation_rounds(n, k / 100.0) == static_cast<std::size_t>(k) * n / 300);
    }
  }
}

TEST_CASE("generate conserves the edge count and counts every operation") {
  const auto g0 = sample_graph();
  for (double r : {0.1, 0.3, 0.5, 1.0}) {
    GeneratorConfig cfg{r, 5, 17};
    std::vector<MutationCounts> counts;
    const auto graphs = generate(g0, cfg, &counts);
    REQUIRE(graphs.size() == 5);
    const auto rounds = perturbation_rounds(100, r);
    for (std::size_t k = 0; k < graphs.size(); ++k) {
      CHECK(graphs[k].n_edges() == 100);
      CHECK(counts[k].adds == rounds);
      CHECK(counts[k].removes == rounds);
      CHECK(counts[k].changes == rounds);
    }
  }
}

TEST_CASE("generate with r = 0 reproduces the source graph") {
  const auto g0 = sample_graph();
  for (const auto& g : generate(g0, GeneratorConfig{0.0, 3, 1})) CHECK(flows_to_csv(g) == flows_to_csv(g0));
}

TEST_CASE("generate is deterministic per (seed, index)") {
  const auto g0 = sample_graph();
  const auto a = generate(g0, GeneratorConfig{0.3, 4, 9});
  const auto b = generate(g0, GeneratorConfig{0.3, 4, 9});
  for (std::size_t k = 0; k < a.size(); ++k) CHECK(flows_to_csv(a[k]) == flows_to_csv(b[k]));
  CHECK(flows_to_csv(a[0]) != flows_to_csv(a[1]));
  // Index k of a longer corpus is the same graph.
  CHECK(flows_to_csv(generate_one(g0, GeneratorConfig{0.3, 1, 9}, 3)) == flows_to_csv(a[3]));
  CHECK(flows_to_csv(generate(g0, GeneratorConfig{0.3, 1, 10})[0]) != flows_to_csv(a[0]));
}

TEST_CASE("generated attributes stay within the frozen source ranges") {
  const auto g0 = sample_graph();
  const auto r = AttributeRanges::of(g0);
  for (const auto& g : generate(g0, GeneratorConfig{1.0, 10, 3})) {
    for (const auto& e : g.edges()) {
      REQUIRE(e.value >= r.v_min);
      REQUIRE(e.value <= r.v_max);
      REQUIRE(e.avg_miles >= r.a_min);
      REQUIRE(e.avg_miles <= r.a_max);
    }
  }
}

TEST_CASE("config validation") {
  CHECK_THROWS_AS(GeneratorConfig({-0.1, 1, 0}).validate(), Error);
  CHECK_THROWS_AS(GeneratorConfig({1.1, 1, 0}).validate(), Error);
  CHECK_THROWS_AS(GeneratorConfig({0.1, 0, 0}).validate(), Error);
}

TEST_CASE("corpus round-trips through disk with a manifest") {
  const auto g0 = sample_graph();
  const auto adj = ingest_adjacency(test::kSampleDir + "/adjacency.csv", &g0);
  const GeneratorConfig cfg{0.1, 3, 5};
  const auto graphs = generate(g0, cfg);
  const auto dir = test::scratch_dir("corpus");
  write_corpus(dir, g0, graphs, adj, OracleConfig{}, cfg, "abcd1234");
  const auto corpus = read_corpus(dir, g0.nodes());
  REQUIRE(corpus.size() == 3);
  const auto ref = OracleConfig{}.resolved(g0);
  for (std::size_t k = 0; k < 3; ++k) {
    CHECK(flows_to_csv(corpus[k].graph) == flows_to_csv(graphs[k]));
    const auto labels = resilience_scores(graphs[k], adj, ref);
    for (const auto& [id, s] : labels) CHECK(corpus[k].labels.at(id) == s);
  }
  const auto m = nlohmann::json::parse(read_text_file(dir / "manifest.json"));
  CHECK(m["count"] == 3);
  CHECK(m["seed"] == 5);
  CHECK(m["config_digest"] == "abcd1234");
  CHECK(m["generator_version"] == std::string(kGeneratorVersion));
  CHECK(m.contains("source_graph_digest"));
}
