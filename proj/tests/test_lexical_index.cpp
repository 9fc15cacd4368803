#include <cmath>

#include "doctest.h"
#include "oracles.hpp"
#include "ore/errors.hpp"
#include "ore/lexical_index.hpp"
#include "test_util.hpp"

using namespace ore;

namespace {

std::vector<Document> tiny_corpus() {
  return {{"d1", "a b"}, {"d2", "a a"}, {"d3", "c"}};
}

}  // namespace

TEST_CASE("build_index statistics on a hand-counted corpus") {
  auto idx = InvertedIndex::build({{"d1", "a a b"}, {"d2", "b"}});
  CHECK(idx.n_docs() == 2);
  CHECK(idx.avg_doc_len() == doctest::Approx(2.0));
  CHECK(idx.doc_length("d1") == 3);
  CHECK(idx.term_vector("d1").at("a") == 2);
  CHECK(idx.term_vector("d1").at("b") == 1);
  CHECK(idx.term_vector("d2").at("b") == 1);
}

TEST_CASE("build_index rejects empty corpus and duplicates") {
  CHECK_THROWS_AS(InvertedIndex::build({}), ValidationError);
  CHECK_THROWS_AS(InvertedIndex::build({{"d1", "a"}, {"d1", "b"}}), ValidationError);
}

TEST_CASE("index serialization is byte-stable and round-trips") {
  test_util::TempDir tmp;
  auto idx = InvertedIndex::build(tiny_corpus());
  idx.save(tmp.file("a.idx"));
  idx.save(tmp.file("b.idx"));
  CHECK(test_util::read_file(tmp.file("a.idx")) == test_util::read_file(tmp.file("b.idx")));

  auto loaded = InvertedIndex::load(tmp.file("a.idx"));
  CHECK(loaded.n_docs() == idx.n_docs());
  CHECK(loaded.avg_doc_len() == idx.avg_doc_len());
  CHECK(loaded.bm25_qd({"a"}, "d1") == idx.bm25_qd({"a"}, "d1"));

  test_util::write_file(tmp.file("junk.idx"), "NOTANIDX");
  CHECK_THROWS_AS(InvertedIndex::load(tmp.file("junk.idx")), ParseError);
}

TEST_CASE("bm25_qd matches the hand-frozen spec example") {
  auto idx = InvertedIndex::build(tiny_corpus());
  // idf(a)=ln(1.6); tf part = 1.9 / (1 + 0.9*(0.6 + 0.4*(2/(5/3))))
  CHECK(idx.bm25_qd({"a"}, "d1") == doctest::Approx(0.4528432533300698).epsilon(1e-12));
  CHECK(idx.bm25_qd({"a"}, "d2") == doctest::Approx(0.6009467668687063).epsilon(1e-12));
  CHECK(idx.bm25_qd({"a"}, "d1") ==
        doctest::Approx(std::log(1.6) * 1.9 / (1.0 + 0.9 * (0.6 + 0.4 * 1.2))));
}

TEST_CASE("bm25_qd is zero iff no query term occurs") {
  auto idx = InvertedIndex::build(tiny_corpus());
  CHECK(idx.bm25_qd({"zzz"}, "d1") == 0.0);
  CHECK(idx.bm25_qd({"c"}, "d1") == 0.0);
  CHECK(idx.bm25_qd({"c"}, "d3") > 0.0);
  CHECK_THROWS_AS(idx.bm25_qd({"a"}, "nope"), LookupError);
}

TEST_CASE("bm25_qd matches the brute-force oracle on a 5-doc corpus") {
  std::vector<std::pair<std::string, std::string>> raw = {
      {"d1", "apple banana apple"},
      {"d2", "banana cherry"},
      {"d3", "apple cherry cherry date"},
      {"d4", "date"},
      {"d5", "banana banana banana apple cherry"},
  };
  std::vector<Document> corpus;
  for (auto& [id, text] : raw) corpus.push_back({id, text});
  auto idx = InvertedIndex::build(corpus);
  for (const auto& query : {"apple", "banana cherry", "date apple", "cherry cherry"}) {
    for (const auto& [id, text] : raw) {
      CHECK(idx.bm25_qd(tokenize(query), id) ==
            doctest::Approx(oracle::bm25(raw, query, id)).epsilon(1e-12));
    }
  }
}

TEST_CASE("bm25 ranking order is invariant to doubling k1 when tf=1 everywhere") {
  std::vector<std::pair<std::string, std::string>> raw = {
      {"d1", "x y"}, {"d2", "x"}, {"d3", "x y z w"}, {"d4", "q"}};
  std::vector<Document> corpus;
  for (auto& [id, text] : raw) corpus.push_back({id, text});
  auto idx = InvertedIndex::build(corpus);
  Bm25Params p1{0.9, 0.4}, p2{1.8, 0.4};
  auto rank = [&](const Bm25Params& p) {
    auto docs = idx.top_docs({"x"}, 10, p);
    std::vector<std::string> ids;
    for (auto& d : docs) ids.push_back(d.doc_id);
    return ids;
  };
  CHECK(rank(p1) == rank(p2));
}

TEST_CASE("bm25_dd: self-similarity dominates on a disjoint-vocabulary corpus") {
  auto idx = InvertedIndex::build({{"d", "a b"}, {"e", "a"}, {"f", "b"}, {"g", "z"}});
  double self = idx.bm25_dd("d", "d");
  CHECK(self > 0.0);
  CHECK(self > idx.bm25_dd("d", "e"));
  CHECK(self > idx.bm25_dd("d", "f"));
  CHECK(idx.bm25_dd("d", "g") == 0.0);  // disjoint vocabulary
}

TEST_CASE("bm25_dd equals a tf-weighted query against the oracle on all pairs") {
  std::vector<std::pair<std::string, std::string>> raw = {
      {"d1", "apple banana apple"},
      {"d2", "banana cherry"},
      {"d3", "apple cherry cherry"},
      {"d4", "date banana"},
      {"d5", "apple"},
  };
  std::vector<Document> corpus;
  for (auto& [id, text] : raw) corpus.push_back({id, text});
  auto idx = InvertedIndex::build(corpus);
  for (const auto& [src, src_text] : raw)
    for (const auto& [dst, dst_text] : raw)
      CHECK(idx.bm25_dd(src, dst) ==
            doctest::Approx(oracle::bm25(raw, src_text, dst)).epsilon(1e-9));
}

TEST_CASE("rm3_expand endpoints and hand-computed relevance model") {
  auto idx = InvertedIndex::build({{"f1", "a a b"}, {"f2", "c d"}, {"f3", "a c"}});

  SUBCASE("orig_weight=1 returns the original query MLE") {
    auto eq = idx.rm3_expand({"a", "b", "a"}, {"f2"}, 5, 1.0);
    REQUIRE(eq.weights.size() == 2);
    CHECK(eq.weights.at("a") == doctest::Approx(2.0 / 3.0));
    CHECK(eq.weights.at("b") == doctest::Approx(1.0 / 3.0));
  }

  SUBCASE("orig_weight=0 with one feedback doc is its MLE") {
    auto eq = idx.rm3_expand({"a"}, {"f1"}, 2, 0.0);
    CHECK(eq.weights.at("a") == doctest::Approx(2.0 / 3.0));
    CHECK(eq.weights.at("b") == doctest::Approx(1.0 / 3.0));
  }

  SUBCASE("weights always sum to 1 and original terms are present") {
    for (double w : {0.0, 0.3, 0.5, 0.9, 1.0}) {
      auto eq = idx.rm3_expand({"a", "d"}, {"f1", "f2"}, 2, w);
      double sum = 0.0;
      for (auto& [t, v] : eq.weights) sum += v;
      CHECK(sum == doctest::Approx(1.0).epsilon(1e-9));
      CHECK(eq.weights.count("a") == 1);
      CHECK(eq.weights.count("d") == 1);
    }
  }

  SUBCASE("empty feedback set is an error") {
    CHECK_THROWS_AS(idx.rm3_expand({"a"}, {}, 2, 0.5), ValidationError);
  }
}

TEST_CASE("bm25_expanded") {
  auto idx = InvertedIndex::build(tiny_corpus());

  SUBCASE("point-mass expansion equals single-term bm25_qd exactly") {
    ExpandedQuery eq;
    eq.weights["a"] = 1.0;
    CHECK(idx.bm25_expanded(eq, "d1") == idx.bm25_qd({"a"}, "d1"));
  }

  SUBCASE("all terms absent gives 0") {
    ExpandedQuery eq;
    eq.weights["zzz"] = 0.7;
    eq.weights["yyy"] = 0.3;
    CHECK(idx.bm25_expanded(eq, "d1") == 0.0);
  }

  SUBCASE("matches a term-by-term oracle sum") {
    ExpandedQuery eq;
    eq.weights["a"] = 0.6;
    eq.weights["b"] = 0.3;
    eq.weights["c"] = 0.1;
    for (const auto& id : {"d1", "d2", "d3"}) {
      double expected = 0.6 * idx.bm25_qd({"a"}, id) + 0.3 * idx.bm25_qd({"b"}, id) +
                        0.1 * idx.bm25_qd({"c"}, id);
      CHECK(idx.bm25_expanded(eq, id) == doctest::Approx(expected).epsilon(1e-12));
    }
  }
}

TEST_CASE("index statistics are permutation-insensitive") {
  std::vector<Document> corpus = {{"d1", "a b c"}, {"d2", "a"}, {"d3", "b b"}};
  std::vector<Document> shuffled = {corpus[2], corpus[0], corpus[1]};
  auto a = InvertedIndex::build(corpus);
  auto b = InvertedIndex::build(shuffled);
  CHECK(a.avg_doc_len() == b.avg_doc_len());
  for (const auto& id : {"d1", "d2", "d3"}) {
    CHECK(a.bm25_qd({"a", "b"}, id) == b.bm25_qd({"a", "b"}, id));
    CHECK(a.bm25_dd("d1", id) == b.bm25_dd("d1", id));
  }
  auto ta = a.top_docs({"b"}, 10);
  auto tb = b.top_docs({"b"}, 10);
  REQUIRE(ta.size() == tb.size());
  for (size_t i = 0; i < ta.size(); ++i) CHECK(ta[i].doc_id == tb[i].doc_id);
}

TEST_CASE("tokenize lowercases and splits on non-alphanumerics") {
  CHECK(tokenize("Hello, WORLD-42!") == std::vector<std::string>{"hello", "world", "42"});
  CHECK(tokenize("   ") == std::vector<std::string>{});
}
