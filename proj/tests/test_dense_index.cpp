#include <cmath>

#include "doctest.h"
#include "ore/dense_index.hpp"
#include "ore/errors.hpp"

using namespace ore;

namespace {

EmbeddingTable table_2d() {
  EmbeddingTable t;
  t.dim = 2;
  t.vectors["d1"] = {1.0, 0.0};
  t.vectors["d2"] = {0.0, 1.0};
  t.vectors["d3"] = {1.0, 2.0};
  t.vectors["d4"] = {3.0, 4.0};
  return t;
}

}  // namespace

TEST_CASE("sim_qd on identity, orthogonality, and hand arithmetic") {
  auto t = table_2d();
  DenseScorer cos(&t, nullptr, Metric::cosine);
  CHECK(cos.sim_qd("d1", "d1") == doctest::Approx(1.0));
  CHECK(cos.sim_qd("d1", "d2") == doctest::Approx(0.0));

  DenseScorer dot(&t, nullptr, Metric::dot);
  CHECK(dot.sim_qd("d3", "d4") == doctest::Approx(11.0));  // [1,2].[3,4]
  CHECK_THROWS_AS(dot.sim_qd("nope", "d1"), LookupError);
}

TEST_CASE("sim_dd symmetry and zero-vector rejection under cosine") {
  auto t = table_2d();
  t.vectors["z"] = {0.0, 0.0};
  DenseScorer cos(&t, nullptr, Metric::cosine);
  CHECK(cos.sim_dd("d3", "d4") == cos.sim_dd("d4", "d3"));
  CHECK(cos.sim_dd("d3", "d4") >= -1.0);
  CHECK(cos.sim_dd("d3", "d4") <= 1.0);
  CHECK_THROWS_AS(cos.sim_dd("z", "d1"), ValidationError);
  DenseScorer dot(&t, nullptr, Metric::dot);
  CHECK(dot.sim_dd("z", "d1") == 0.0);  // dot tolerates zero vectors
}

TEST_CASE("all-pairs similarity matrix is symmetric and matches brute force") {
  auto t = table_2d();
  DenseScorer dot(&t, nullptr, Metric::dot);
  for (const auto& [a, va] : t.vectors)
    for (const auto& [b, vb] : t.vectors) {
      double expected = va[0] * vb[0] + va[1] * vb[1];
      CHECK(dot.sim_dd(a, b) == doctest::Approx(expected));
      CHECK(dot.sim_dd(a, b) == dot.sim_dd(b, a));
    }
}

TEST_CASE("knn excludes source, sorts desc, breaks ties by doc_id") {
  EmbeddingTable t;
  t.dim = 2;
  t.vectors["a"] = {1.0, 0.0};
  t.vectors["b"] = {0.9, 0.1};
  t.vectors["c"] = {0.0, 1.0};
  DenseScorer dot(&t, nullptr, Metric::dot);

  auto top1 = dot.knn("a", 1);
  REQUIRE(top1.size() == 1);
  CHECK(top1[0].doc_id == "b");

  auto all = dot.knn("a", 10);  // k >= n-1: everything, sorted
  REQUIRE(all.size() == 2);
  CHECK(all[0].doc_id == "b");
  CHECK(all[1].doc_id == "c");

  // equal similarities order by ascending doc_id
  EmbeddingTable ties;
  ties.dim = 2;
  ties.vectors["src"] = {1.0, 0.0};
  ties.vectors["n2"] = {0.5, 0.0};
  ties.vectors["n1"] = {0.5, 0.0};
  DenseScorer dot2(&ties, nullptr, Metric::dot);
  auto nn = dot2.knn("src", 2);
  REQUIRE(nn.size() == 2);
  CHECK(nn[0].doc_id == "n1");
  CHECK(nn[1].doc_id == "n2");

  CHECK_THROWS_AS(dot.knn("a", 0), ValidationError);
  CHECK_THROWS_AS(dot.knn("missing", 1), LookupError);
}

TEST_CASE("knn output is a prefix of the fully sorted similarity list") {
  EmbeddingTable t;
  t.dim = 3;
  uint64_t seed = 99;
  for (int i = 0; i < 50; ++i) {
    auto h = [&](int j) { return std::fmod(static_cast<double>(seed = seed * 6364136223846793005ULL + j), 97.0) / 97.0; };
    t.vectors["d" + std::to_string(1000 + i)] = {h(1), h(2), h(3)};
  }
  DenseScorer dot(&t, nullptr, Metric::dot);
  auto full = dot.knn("d1000", 49);
  for (int k : {1, 3, 10, 25}) {
    auto part = dot.knn("d1000", k);
    REQUIRE(part.size() == static_cast<size_t>(k));
    for (int i = 0; i < k; ++i) CHECK(part[i].doc_id == full[i].doc_id);
  }
}

TEST_CASE("psi aliases sim_qd and disables cleanly") {
  auto t = table_2d();
  DenseScorer dot(&t, nullptr, Metric::dot);
  CHECK(psi(&dot, "d3", "d4") == dot.sim_qd("d3", "d4"));
  CHECK(psi(nullptr, "d3", "d4") == 0.0);  // no psi table configured

  // separate psi table with scaled vectors gives scaled scores
  EmbeddingTable scaled = table_2d();
  for (auto& [id, v] : scaled.vectors)
    for (auto& x : v) x *= 2.0;
  DenseScorer psi_scorer(&scaled, nullptr, Metric::dot);
  CHECK(psi(&psi_scorer, "d3", "d4") == doctest::Approx(4.0 * 11.0));
}

TEST_CASE("query table is preferred for query ids when attached") {
  auto docs = table_2d();
  EmbeddingTable queries;
  queries.dim = 2;
  queries.vectors["q1"] = {2.0, 0.0};
  DenseScorer scorer(&docs, &queries, Metric::dot);
  CHECK(scorer.sim_qd("q1", "d1") == doctest::Approx(2.0));
  CHECK_THROWS_AS(scorer.sim_qd("d1", "d1"), LookupError);  // not in the query table
}
