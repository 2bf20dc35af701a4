#include <doctest.h>

#include <algorithm>
#include <map>

#include "flee/core/error.hpp"
#include "flee/core/io.hpp"
#include "flee/flowgraph/features.hpp"
#include "flee/flowgraph/ingest.hpp"
#include "flee/flowgraph/silo.hpp"
#include "support.hpp"

using namespace flee;
using test::edge;
using test::kind_of;
using test::node;

namespace {

const char* kTwoNodes = "id,lat,lon,region\nAL,32.8,-86.8,South\nGA,32.6,-83.4,South\n";

}  // namespace

TEST_CASE("ingest: two AL->GA commodity rows") {
  const auto dir = test::scratch_dir("ingest_ok");
  test::write_text(dir / "nodes.csv", kTwoNodes);
  test::write_text(dir / "flows.csv",
                   "origin,dest,sctg,value,tons,avg_miles\nAL,GA,03,145,197,249\nAL,GA,07,1497,613,152\n");
  const auto g = ingest_graph(dir / "nodes.csv", dir / "flows.csv");
  CHECK(g.node_count() == 2);
  CHECK(g.n_edges() == 2);
  CHECK(g.has_flow("AL", "GA", CommodityCode(3)));
  CHECK_FALSE(g.has_flow("GA", "AL", CommodityCode(3)));
}

TEST_CASE("ingest: empty flows file gives an edgeless graph") {
  const auto dir = test::scratch_dir("ingest_empty");
  test::write_text(dir / "nodes.csv", kTwoNodes);
  test::write_text(dir / "flows.csv", "origin,dest,sctg,value,tons,avg_miles\n");
  const auto g = ingest_graph(dir / "nodes.csv", dir / "flows.csv");
  CHECK(g.node_count() == 2);
  CHECK(g.n_edges() == 0);
}

TEST_CASE("ingest: rejects malformed input with the right error kind") {
  const auto dir = test::scratch_dir("ingest_bad");
  test::write_text(dir / "nodes.csv", kTwoNodes);
  auto flows = [&](const std::string& rows) {
    test::write_text(dir / "flows.csv", "origin,dest,sctg,value,tons,avg_miles\n" + rows);
    return [&] { ingest_graph(dir / "nodes.csv", dir / "flows.csv"); };
  };
  CHECK(kind_of(flows("AL,GA,03,1,1,1\nAL,GA,03,2,2,2\n")) == ErrorKind::DuplicateFlow);
  CHECK(kind_of(flows("AL,GA,09,1,1,1\n")) == ErrorKind::SchemaViolation);
  CHECK(kind_of(flows("AL,GA,00,1,1,1\n")) == ErrorKind::SchemaViolation);
  CHECK(kind_of(flows("AL,GA,3,1,1,1\n")) == ErrorKind::SchemaViolation);
  CHECK(kind_of(flows("AL,GA,03,-1,1,1\n")) == ErrorKind::SchemaViolation);
  CHECK(kind_of(flows("AL,GA,03,abc,1,1\n")) == ErrorKind::SchemaViolation);
  CHECK(kind_of(flows("AL,TX,03,1,1,1\n")) == ErrorKind::UnknownNode);
  CHECK(kind_of([&] { ingest_graph(dir / "nope.csv", dir / "flows.csv"); }) == ErrorKind::MissingFile);

  test::write_text(dir / "flows.csv", "origin,dest,sctg,value,tons,avg_miles\n");
  test::write_text(dir / "n2.csv", "id,lat,lon,region\nAL,95,-86.8,South\n");
  CHECK(kind_of([&] { ingest_graph(dir / "n2.csv", dir / "flows.csv"); }) == ErrorKind::SchemaViolation);
  test::write_text(dir / "n3.csv", "id,lat,lon,region\nAL,32,-86.8,Southwest\n");
  CHECK(kind_of([&] { ingest_graph(dir / "n3.csv", dir / "flows.csv"); }) == ErrorKind::SchemaViolation);
  test::write_text(dir / "n4.csv", "id,lat,lon,region\nal,32,-86.8,South\n");
  CHECK(kind_of([&] { ingest_graph(dir / "n4.csv", dir / "flows.csv"); }) == ErrorKind::SchemaViolation);
  test::write_text(dir / "n5.csv", "id,lat,lon,region\nAL,32,-86.8,South\nAL,33,-86.8,South\n");
  CHECK(kind_of([&] { ingest_graph(dir / "n5.csv", dir / "flows.csv"); }) == ErrorKind::SchemaViolation);
}

TEST_CASE("commodity codes outside 1..8 are rejected") {
  CHECK_THROWS_AS(CommodityCode(0), Error);
  CHECK_THROWS_AS(CommodityCode(9), Error);
  CHECK(CommodityCode(8).slot() == 7);
}

TEST_CASE("canonical CSV round-trips byte-identically") {
  const auto g = ingest_graph(test::kSampleDir + "/nodes.csv", test::kSampleDir + "/flows.csv");
  CHECK(g.node_count() == 51);
  CHECK(g.n_edges() == 100);
  const auto dir = test::scratch_dir("roundtrip");
  write_file_atomic(dir / "nodes.csv", nodes_to_csv(g));
  write_file_atomic(dir / "flows.csv", flows_to_csv(g));
  const auto g2 = ingest_graph(dir / "nodes.csv", dir / "flows.csv");
  CHECK(nodes_to_csv(g2) == nodes_to_csv(g));
  CHECK(flows_to_csv(g2) == flows_to_csv(g));

  // Shuffled input rows serialize to the same canonical text.
  auto edges = g.edges();
  Rng rng(4);
  rng.shuffle(std::span<FlowEdge>(edges));
  CHECK(flows_to_csv(g.with_edges(edges)) == flows_to_csv(g));
}

TEST_CASE("adjacency is symmetric and reflexive") {
  AdjacencyMap adj;
  adj.add("AL", "GA");
  CHECK(adj.adjacent("AL", "GA"));
  CHECK(adj.adjacent("GA", "AL"));
  CHECK(adj.adjacent("TX", "TX"));
  CHECK_FALSE(adj.adjacent("AL", "TX"));
  const auto g = ingest_graph(test::kSampleDir + "/nodes.csv", test::kSampleDir + "/flows.csv");
  const auto sample = ingest_adjacency(test::kSampleDir + "/adjacency.csv", &g);
  CHECK(sample.adjacent("CA", "OR"));
  CHECK_FALSE(sample.adjacent("CA", "TX"));
}

TEST_CASE("edge features pack all commodities of a source") {
  const FlowGraph g({node("AL"), node("GA")},
                    {edge("AL", "GA", 3, 145, 197, 249), edge("AL", "GA", 7, 1497, 613, 152)});
  const auto f = build_edge_features(g, "GA");
  REQUIRE(f.size() == 1);
  CHECK(g.nodes()[f[0].neighbor].id == "AL");
  EdgeFeatureVector expect{};
  expect[6] = 145;
  expect[7] = 197;
  expect[8] = 249;
  expect[18] = 1497;
  expect[19] = 613;
  expect[20] = 152;
  CHECK(f[0].features == expect);
  CHECK(build_edge_features(g, "AL").empty());
  CHECK_THROWS_AS(build_edge_features(g, "TX"), Error);
}

TEST_CASE("edge features are ordered by ascending source id and include self-loops") {
  const FlowGraph g({node("CC"), node("BB"), node("AA")},
                    {edge("BB", "CC", 1, 1, 1, 1), edge("CC", "CC", 2, 2, 2, 2), edge("AA", "CC", 1, 3, 3, 3)});
  const auto f = build_edge_features(g, "CC");
  REQUIRE(f.size() == 3);
  CHECK(g.nodes()[f[0].neighbor].id == "AA");
  CHECK(g.nodes()[f[1].neighbor].id == "BB");
  CHECK(g.nodes()[f[2].neighbor].id == "CC");
}

TEST_CASE("every inbound (source, commodity) flow appears exactly once in the features") {
  Rng rng(8);
  for (int trial = 0; trial < 50; ++trial) {
    const auto g = test::random_graph(rng, {7, 40});
    const auto all = build_all_edge_features(g);
    for (std::size_t d = 0; d < g.node_count(); ++d) {
      CHECK(all[d].size() == build_edge_features(g, g.nodes()[d].id).size());
      std::size_t nonzero_slots = 0;
      for (const auto& nf : all[d]) {
        for (int c = 0; c < kCommodityCount; ++c) {
          const bool present = g.has_flow(g.nodes()[nf.neighbor].id, g.nodes()[d].id, CommodityCode(c + 1));
          nonzero_slots += present;
          if (!present) {
            CHECK(nf.features[3 * c] == 0.0);
            CHECK(nf.features[3 * c + 1] == 0.0);
            CHECK(nf.features[3 * c + 2] == 0.0);
          }
        }
      }
      const auto inbound = std::count_if(g.edges().begin(), g.edges().end(),
                                         [&](const FlowEdge& e) { return e.dest == g.nodes()[d].id; });
      CHECK(nonzero_slots == static_cast<std::size_t>(inbound));
    }
  }
}

TEST_CASE("extract_silo keeps only intra-region edges") {
  Rng rng(12);
  for (int trial = 0; trial < 30; ++trial) {
    const auto g = test::random_graph(rng, {10, 60});
    const auto a = SiloAssignment::from_graph(g);
    std::size_t silo_edges = 0;
    for (Region r : kAllRegions) {
      const auto s = extract_silo(g, a, r);
      CHECK(s.node_count() == a.count(r));
      for (const auto& e : s.edges()) {
        CHECK(a.region_of(e.source) == r);
        CHECK(a.region_of(e.dest) == r);
      }
      silo_edges += s.n_edges();
    }
    // Union of silo edge sets == whole edge set minus cross-silo edges.
    const auto kept = drop_cross_silo_edges(g, a);
    CHECK(kept.n_edges() == silo_edges);
    for (const auto& e : kept.edges()) CHECK(a.region_of(e.source) == a.region_of(e.dest));
  }
}

TEST_CASE("extract_silo: identity partition and a lone node") {
  Rng rng(2);
  const auto g = test::random_graph(rng, {5, 20, true, 1});
  const auto s = extract_silo(g, SiloAssignment::from_graph(g), Region::West);
  CHECK(flows_to_csv(s) == flows_to_csv(g));
  CHECK(nodes_to_csv(s) == nodes_to_csv(g));

  const FlowGraph h({node("AA", Region::West), node("BB", Region::South)}, {edge("AA", "BB", 1, 1, 1, 1)});
  const auto lone = extract_silo(h, SiloAssignment::from_graph(h), Region::South);
  CHECK(lone.node_count() == 1);
  CHECK(lone.n_edges() == 0);
  CHECK_THROWS_AS(SiloAssignment().region_of("AA"), Error);
}

TEST_CASE("parse_region") {
  CHECK(parse_region("Midwest") == Region::Midwest);
  try {
    parse_region("Mars");
    FAIL("expected UnknownRegion");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::UnknownRegion);
  }
}
