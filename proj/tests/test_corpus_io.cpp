#include <cstdint>

#include "doctest.h"
#include "ore/corpus_io.hpp"
#include "ore/errors.hpp"
#include "ore/rng.hpp"
#include "test_util.hpp"

using namespace ore;

TEST_CASE("load_corpus parses records in file order") {
  test_util::TempDir tmp;
  auto path = tmp.file("corpus.tsv");
  test_util::write_file(path, "d1\ta b\nd2\tc\n");
  auto corpus = load_corpus(path);
  REQUIRE(corpus.size() == 2);
  CHECK(corpus[0].doc_id == "d1");
  CHECK(corpus[0].text == "a b");
  CHECK(corpus[1].doc_id == "d2");
  CHECK(corpus[1].text == "c");
}

TEST_CASE("load_corpus rejects duplicates, names the offender") {
  test_util::TempDir tmp;
  auto path = tmp.file("corpus.tsv");
  test_util::write_file(path, "d1\ta\nd1\tb\n");
  CHECK_THROWS_WITH_AS(load_corpus(path), doctest::Contains("d1"), ValidationError);
}

TEST_CASE("load_corpus on empty file is empty") {
  test_util::TempDir tmp;
  auto path = tmp.file("corpus.tsv");
  test_util::write_file(path, "");
  CHECK(load_corpus(path).empty());
}

TEST_CASE("load_corpus reports malformed line numbers") {
  test_util::TempDir tmp;
  auto path = tmp.file("corpus.tsv");
  test_util::write_file(path, "d1\ta\nno-tab-here\n");
  CHECK_THROWS_WITH_AS(load_corpus(path), doctest::Contains("line 2"), ParseError);
}

TEST_CASE("load_qrels parses and applies last-wins overwrite") {
  test_util::TempDir tmp;
  auto path = tmp.file("qrels.txt");
  test_util::write_file(path, "q1 0 d1 2\n");
  auto qrels = load_qrels(path);
  CHECK(qrels.grade("q1", "d1") == 2);
  CHECK(qrels.grade("q1", "dX") == 0);  // absent pair means 0
  CHECK(qrels.overwrite_warnings == 0);

  test_util::write_file(path, "q1 0 d1 1\nq1 0 d1 3\n");
  qrels = load_qrels(path);
  CHECK(qrels.grade("q1", "d1") == 3);
  CHECK(qrels.overwrite_warnings == 1);
}

TEST_CASE("load_qrels rejects non-integer grade") {
  test_util::TempDir tmp;
  auto path = tmp.file("qrels.txt");
  test_util::write_file(path, "q1 0 d1 x\n");
  CHECK_THROWS_AS(load_qrels(path), ParseError);
}

TEST_CASE("write_run emits the TREC 6-column format") {
  test_util::TempDir tmp;
  auto path = tmp.file("run.txt");
  write_run({RunEntry{"q1", "d1", 1, 0.9, "ore"}}, path);
  CHECK(test_util::read_file(path) == "q1 Q0 d1 1 0.9 ore\n");
}

TEST_CASE("write_run rejects rank gaps and score inversions") {
  test_util::TempDir tmp;
  auto path = tmp.file("run.txt");
  CHECK_THROWS_AS(write_run({RunEntry{"q1", "d1", 1, 0.9, "t"}, RunEntry{"q1", "d2", 3, 0.8, "t"}},
                            path),
                  ValidationError);
  CHECK_THROWS_AS(write_run({RunEntry{"q1", "d1", 1, 0.5, "t"}, RunEntry{"q1", "d2", 2, 0.8, "t"}},
                            path),
                  ValidationError);
}

TEST_CASE("run files round-trip generated entries exactly") {
  test_util::TempDir tmp;
  auto path = tmp.file("run.txt");
  uint64_t state = 42;
  std::vector<RunEntry> entries;
  for (int q = 0; q < 5; ++q) {
    double score = 1000.0;
    for (int r = 1; r <= 20; ++r) {
      score -= ore::rng::uniform01(state) + 1e-9;
      entries.push_back(RunEntry{"q" + std::to_string(q),
                                 "d" + std::to_string(q * 100 + r), r, score, "tag"});
    }
  }
  write_run(entries, path);
  auto loaded = load_run(path);
  REQUIRE(loaded.size() == entries.size());
  for (size_t i = 0; i < entries.size(); ++i) {
    CHECK(loaded[i].query_id == entries[i].query_id);
    CHECK(loaded[i].doc_id == entries[i].doc_id);
    CHECK(loaded[i].rank == entries[i].rank);
    CHECK(loaded[i].score == entries[i].score);  // exact: shortest round-trip format
    CHECK(loaded[i].tag == entries[i].tag);
  }
}

TEST_CASE("load_embeddings validates dim and finiteness") {
  test_util::TempDir tmp;
  auto path = tmp.file("e.emb");
  test_util::write_file(path, "dim=2\nd1\t1 0\n");
  auto table = load_embeddings(path);
  CHECK(table.dim == 2);
  CHECK(table.at("d1") == std::vector<double>{1.0, 0.0});

  test_util::write_file(path, "dim=2\nd1\t1 0 3\n");
  CHECK_THROWS_WITH_AS(load_embeddings(path), doctest::Contains("d1"), ValidationError);

  test_util::write_file(path, "dim=2\nd1\t1 nan\n");
  CHECK_THROWS_AS(load_embeddings(path), ore::Error);
}

TEST_CASE("embeddings round-trip through write and load") {
  test_util::TempDir tmp;
  auto path = tmp.file("e.emb");
  EmbeddingTable table;
  table.dim = 3;
  uint64_t state = 7;
  for (int i = 0; i < 20; ++i) {
    std::vector<double> v;
    for (int d = 0; d < 3; ++d) v.push_back(ore::rng::normal(state));
    table.vectors["d" + std::to_string(i)] = v;
  }
  write_embeddings(table, path);
  auto loaded = load_embeddings(path);
  CHECK(loaded.dim == table.dim);
  CHECK(loaded.vectors == table.vectors);
}

TEST_CASE("corpus and qrels round-trip") {
  test_util::TempDir tmp;
  std::vector<Document> corpus{{"d1", "alpha beta"}, {"d2", "gamma"}};
  write_corpus(corpus, tmp.file("c.tsv"));
  auto loaded = load_corpus(tmp.file("c.tsv"));
  REQUIRE(loaded.size() == 2);
  CHECK(loaded[1].text == "gamma");

  Qrels qrels;
  qrels.grades["q1"]["d1"] = 3;
  qrels.grades["q2"]["d2"] = 1;
  write_qrels(qrels, tmp.file("q.txt"));
  auto qloaded = load_qrels(tmp.file("q.txt"));
  CHECK(qloaded.grades == qrels.grades);
}
