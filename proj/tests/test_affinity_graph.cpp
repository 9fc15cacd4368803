#include "doctest.h"
#include "ore/affinity_graph.hpp"
#include "ore/errors.hpp"
#include "test_util.hpp"

using namespace ore;

namespace {

EmbeddingTable clustered_table() {
  EmbeddingTable t;
  t.dim = 2;
  t.vectors["a1"] = {1.0, 0.0};
  t.vectors["a2"] = {0.9, 0.1};
  t.vectors["a3"] = {0.8, 0.0};
  t.vectors["b1"] = {0.0, 1.0};
  t.vectors["b2"] = {0.1, 0.9};
  return t;
}

}  // namespace

TEST_CASE("build_semantic: three mutually similar docs with k=2 each get 2 neighbours") {
  EmbeddingTable t;
  t.dim = 2;
  t.vectors["x"] = {1.0, 0.1};
  t.vectors["y"] = {1.0, 0.0};
  t.vectors["z"] = {0.9, 0.1};
  DenseScorer dot(&t, nullptr, Metric::dot);
  auto g = AffinityGraph::build_semantic(dot, {"x", "y", "z"}, 2);
  for (const auto& id : {"x", "y", "z"}) CHECK(g.neighbours(id).size() == 2);
  CHECK(g.k() == 2);
  CHECK(g.kind() == GraphKind::semantic);
}

TEST_CASE("build k=1 matches brute-force argmax per node") {
  auto t = clustered_table();
  DenseScorer dot(&t, nullptr, Metric::dot);
  std::vector<std::string> ids{"a1", "a2", "a3", "b1", "b2"};
  auto g = AffinityGraph::build_semantic(dot, ids, 1);
  for (const auto& src : ids) {
    std::string best;
    double best_sim = -1e18;
    for (const auto& dst : ids) {
      if (dst == src) continue;
      double s = dot.sim_dd(src, dst);
      if (s > best_sim || (s == best_sim && dst < best)) {
        best_sim = s;
        best = dst;
      }
    }
    REQUIRE(g.neighbours(src).size() == 1);
    CHECK(g.neighbours(src)[0].doc_id == best);
    CHECK(g.neighbours(src)[0].weight == doctest::Approx(best_sim));
  }
}

TEST_CASE("orthogonal embeddings under dot produce zero weights ordered by doc_id") {
  EmbeddingTable t;
  t.dim = 3;
  t.vectors["a"] = {1.0, 0.0, 0.0};
  t.vectors["b"] = {0.0, 1.0, 0.0};
  t.vectors["c"] = {0.0, 0.0, 1.0};
  DenseScorer dot(&t, nullptr, Metric::dot);
  auto g = AffinityGraph::build_semantic(dot, {"a", "b", "c"}, 2);
  auto nbrs = g.neighbours("a");
  REQUIRE(nbrs.size() == 2);
  CHECK(nbrs[0].doc_id == "b");
  CHECK(nbrs[1].doc_id == "c");
  CHECK(nbrs[0].weight == 0.0);
}

TEST_CASE("build_lexical adjacency equals brute-force top-k of bm25_dd") {
  std::vector<Document> corpus = {{"d1", "a b c"}, {"d2", "a b"}, {"d3", "c d"}, {"d4", "e"}};
  auto idx = InvertedIndex::build(corpus);
  std::vector<std::string> ids{"d1", "d2", "d3", "d4"};
  auto g = AffinityGraph::build_lexical(idx, ids, 2);
  for (const auto& src : ids) {
    std::vector<ScoredDoc> all;
    for (const auto& dst : ids)
      if (dst != src) all.push_back(ScoredDoc{dst, idx.bm25_dd(src, dst)});
    sort_ranked(all);
    all.resize(2);
    auto nbrs = g.neighbours(src);
    REQUIRE(nbrs.size() == 2);
    for (int i = 0; i < 2; ++i) {
      CHECK(nbrs[i].doc_id == all[i].doc_id);
      CHECK(nbrs[i].weight == doctest::Approx(all[i].score));
    }
  }
}

TEST_CASE("neighbours is total: unknown ids give the empty list") {
  AffinityGraph g(GraphKind::laff, 4);
  g.add_edge("d1", "d2", 0.8);
  g.finalize();
  CHECK(g.neighbours("d1").size() == 1);
  CHECK(g.neighbours("never-seen").empty());
}

TEST_CASE("edge weights round-trip through neighbours") {
  AffinityGraph g(GraphKind::laff, 4);
  g.add_edge("d1", "d2", 0.8);
  g.add_edge("d1", "d3", 0.9);
  g.finalize();
  bool found = false;
  CHECK(g.edge_weight("d1", "d2", &found) == 0.8);
  CHECK(found);
  CHECK(g.edge_weight("d1", "dX", &found) == 0.0);
  CHECK_FALSE(found);
  // weight-desc order with the stronger edge first
  CHECK(g.neighbours("d1")[0].doc_id == "d3");
}

TEST_CASE("graph file format: parse, validation errors, round-trip") {
  test_util::TempDir tmp;
  auto path = tmp.file("g.tsv");

  test_util::write_file(path, "d1\td2\t0.8\n");
  auto g = AffinityGraph::load(path);
  REQUIRE(g.neighbours("d1").size() == 1);
  CHECK(g.neighbours("d1")[0].doc_id == "d2");
  CHECK(g.neighbours("d1")[0].weight == 0.8);

  test_util::write_file(path, "d1\td1\t0.5\n");
  CHECK_THROWS_WITH_AS(AffinityGraph::load(path), doctest::Contains("line 1"), ValidationError);

  test_util::write_file(path, "d1\td2\tinf\n");
  CHECK_THROWS_AS(AffinityGraph::load(path), ore::Error);

  // save then load a built graph -> equal adjacency
  auto t = clustered_table();
  DenseScorer dot(&t, nullptr, Metric::dot);
  auto built = AffinityGraph::build_semantic(dot, {"a1", "a2", "a3", "b1", "b2"}, 3);
  built.save(tmp.file("built.tsv"));
  auto loaded = AffinityGraph::load(tmp.file("built.tsv"));
  REQUIRE(loaded.adjacency().size() == built.adjacency().size());
  for (const auto& [src, edges] : built.adjacency()) {
    auto le = loaded.neighbours(src);
    REQUIRE(le.size() == edges.size());
    for (size_t i = 0; i < edges.size(); ++i) {
      CHECK(le[i].doc_id == edges[i].doc_id);
      CHECK(le[i].weight == edges[i].weight);
    }
  }
}
