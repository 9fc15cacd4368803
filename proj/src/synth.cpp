#include "ore/synth.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <numeric>
#include <set>

#include "ore/errors.hpp"
#include "ore/rng.hpp"

namespace ore {

namespace {

constexpr uint64_t kVocabTag = 0x01;
constexpr uint64_t kQueryTag = 0x02;
constexpr uint64_t kClusterTag = 0x03;
constexpr uint64_t kDocTag = 0x04;
constexpr uint64_t kEmbTag = 0x05;
constexpr uint64_t kGraphTag = 0x06;
constexpr uint64_t kPermTag = 0x07;

uint64_t stream(uint64_t seed, uint64_t tag, uint64_t index) {
  return rng::mix(rng::mix(seed, tag), index);
}

std::string term_name(int i) { return "t" + std::to_string(i); }

std::vector<double> random_unit(uint64_t& state, int dim) {
  std::vector<double> v(dim);
  double norm = 0.0;
  for (int i = 0; i < dim; ++i) {
    v[i] = rng::normal(state);
    norm += v[i] * v[i];
  }
  norm = std::sqrt(norm);
  for (double& x : v) x /= norm;
  return v;
}

std::vector<double> jittered(uint64_t& state, const std::vector<double>& center, double jitter) {
  std::vector<double> v(center.size());
  double norm = 0.0;
  for (size_t i = 0; i < center.size(); ++i) {
    v[i] = center[i] + jitter * rng::normal(state);
    norm += v[i] * v[i];
  }
  norm = std::sqrt(norm);
  for (double& x : v) x /= norm;
  return v;
}

int draw_index(uint64_t& state, int n) {
  return static_cast<int>(rng::uniform01(state) * n) % n;
}

}  // namespace

SynthData generate(const SynthSpec& spec) {
  if (spec.cluster_size < 2) throw ValidationError("synth: cluster_size must be >= 2");
  if (spec.visible_fraction <= 0.0 || spec.visible_fraction > 1.0)
    throw ValidationError("synth: visible_fraction must be in (0,1]");
  if (spec.n_queries < 1 || spec.n_docs < 1)
    throw ValidationError("synth: need at least one doc and one query");
  if (spec.embedding_dim < 2) throw ValidationError("synth: embedding_dim must be >= 2");
  int n_clusters = spec.n_queries * spec.clusters_per_query;
  long cluster_docs = static_cast<long>(n_clusters) * spec.cluster_size;
  if (cluster_docs > spec.n_docs)
    throw ValidationError("synth: cluster docs (" + std::to_string(cluster_docs) +
                          ") exceed n_docs (" + std::to_string(spec.n_docs) + ")");
  int n_shared = std::max(20, spec.vocab_size / 6);
  if (n_shared + n_clusters * spec.cluster_terms > spec.vocab_size)
    throw ValidationError("synth: vocab too small for the requested clusters");

  int doc_len = std::max(spec.doc_len, 2 * spec.query_terms + spec.cluster_terms + 2);
  int n_visible = std::max(1, static_cast<int>(std::lround(spec.visible_fraction *
                                                           spec.cluster_size)));
  n_visible = std::min(n_visible, spec.cluster_size);

  // Shuffled doc-id assignment so relevance never correlates with id order.
  int width = static_cast<int>(std::to_string(spec.n_docs).size()) + 1;
  std::vector<int> id_perm(spec.n_docs);
  std::iota(id_perm.begin(), id_perm.end(), 0);
  {
    uint64_t state = stream(spec.seed, kPermTag, 0);
    for (int i = spec.n_docs - 1; i > 0; --i)
      std::swap(id_perm[i], id_perm[draw_index(state, i + 1)]);
  }
  int next_slot = 0;
  auto next_doc_id = [&]() {
    std::string num = std::to_string(id_perm[next_slot++]);
    return "d" + std::string(width - num.size(), '0') + num;
  };

  // Query term sets from the shared pool.
  std::vector<std::vector<int>> query_term_ids(spec.n_queries);
  for (int q = 0; q < spec.n_queries; ++q) {
    uint64_t state = stream(spec.seed, kQueryTag, q);
    std::set<int> terms;
    while (static_cast<int>(terms.size()) < spec.query_terms)
      terms.insert(draw_index(state, n_shared));
    query_term_ids[q].assign(terms.begin(), terms.end());
  }

  SynthData data;
  data.doc_embeddings.dim = spec.embedding_dim;
  data.query_embeddings.dim = spec.embedding_dim;

  uint64_t emb_state = stream(spec.seed, kEmbTag, 0);
  std::vector<std::vector<double>> bg_centroids;
  for (int i = 0; i < spec.bg_centroids; ++i)
    bg_centroids.push_back(random_unit(emb_state, spec.embedding_dim));

  AffinityGraph graph(GraphKind::laff, 0);
  std::vector<std::string> background_ids;

  auto sample_fill = [&](uint64_t& state, const std::set<int>& exclude, int count,
                         std::vector<int>& out) {
    while (count > 0) {
      int t = draw_index(state, n_shared);
      if (exclude.count(t)) continue;
      out.push_back(t);
      --count;
    }
  };

  auto make_text = [&](const std::vector<int>& term_ids) {
    std::string text;
    for (int t : term_ids) {
      if (!text.empty()) text.push_back(' ');
      text += term_name(t);
    }
    return text;
  };

  struct ClusterInfo {
    std::vector<std::string> doc_ids;  // visible docs first, then hidden
  };
  std::vector<ClusterInfo> clusters;

  int cluster_index = 0;
  for (int q = 0; q < spec.n_queries; ++q) {
    std::set<int> qterms(query_term_ids[q].begin(), query_term_ids[q].end());
    for (int cq = 0; cq < spec.clusters_per_query; ++cq, ++cluster_index) {
      uint64_t cstate = stream(spec.seed, kClusterTag, cluster_index);
      std::vector<int> cterms;
      for (int t = 0; t < spec.cluster_terms; ++t)
        cterms.push_back(n_shared + cluster_index * spec.cluster_terms + t);
      auto centroid = random_unit(cstate, spec.embedding_dim);

      ClusterInfo info;
      for (int m = 0; m < spec.cluster_size; ++m) {
        bool visible = m < n_visible;
        std::vector<int> terms;
        if (visible)
          for (int t : query_term_ids[q]) {
            terms.push_back(t);
            terms.push_back(t);
          }
        for (int t : cterms) {
          terms.push_back(t);
          if (!visible) terms.push_back(t);
        }
        sample_fill(cstate, qterms, doc_len - static_cast<int>(terms.size()), terms);

        std::string doc_id = next_doc_id();
        data.corpus.push_back(Document{doc_id, make_text(terms)});
        data.doc_embeddings.vectors[doc_id] = jittered(cstate, centroid, spec.cluster_jitter);
        data.qrels.grades["q" + std::to_string(q)][doc_id] = 3;
        info.doc_ids.push_back(doc_id);
      }
      clusters.push_back(std::move(info));

      // Chain edges along the cluster (both directions): exploration has to
      // walk the chain hop by hop instead of seeing the whole cluster from
      // any one member.
      uint64_t gstate = stream(spec.seed, kGraphTag, cluster_index);
      const auto& ids = clusters.back().doc_ids;
      for (size_t i = 0; i + 1 < ids.size(); ++i) {
        double w = 0.75 + 0.2 * rng::uniform01(gstate);
        graph.add_edge(ids[i], ids[i + 1], w);
        graph.add_edge(ids[i + 1], ids[i], w);
      }
    }
  }

  // Background documents.
  int n_background = spec.n_docs - static_cast<int>(cluster_docs);
  for (int i = 0; i < n_background; ++i) {
    uint64_t state = stream(spec.seed, kDocTag, i);
    std::vector<int> terms;
    sample_fill(state, {}, doc_len, terms);
    std::string doc_id = next_doc_id();
    data.corpus.push_back(Document{doc_id, make_text(terms)});
    int bg = draw_index(state, spec.bg_centroids);
    data.doc_embeddings.vectors[doc_id] = jittered(state, bg_centroids[bg], spec.bg_jitter);
    background_ids.push_back(doc_id);
  }

  // Noise edges: background-to-background plus a few from each cluster doc,
  // so graph frontiers are never trivially clean.
  if (!background_ids.empty()) {
    uint64_t gstate = stream(spec.seed, kGraphTag, 0xffff);
    auto add_noise_edges = [&](const std::string& src, int count) {
      std::set<std::string> used;
      for (int e = 0; e < count; ++e) {
        const std::string& dst = background_ids[draw_index(gstate, background_ids.size())];
        if (dst == src || !used.insert(dst).second) continue;
        graph.add_edge(src, dst, 0.05 + 0.3 * rng::uniform01(gstate));
      }
    };
    for (const auto& id : background_ids) add_noise_edges(id, spec.graph_noise_edges);
    for (const auto& cluster : clusters)
      for (const auto& id : cluster.doc_ids) add_noise_edges(id, 2);
  }
  graph.finalize();
  data.ideal_graph = std::move(graph);

  // Queries: text from the term set; embedding pulled toward two distractor
  // background centroids so the dense channel ranks distractors above the
  // relevant cluster.
  cluster_index = 0;
  for (int q = 0; q < spec.n_queries; ++q) {
    std::string qid = "q" + std::to_string(q);
    std::vector<int> tids = query_term_ids[q];
    std::string text;
    for (int t : tids) {
      if (!text.empty()) text.push_back(' ');
      text += term_name(t);
    }
    data.queries.push_back(Query{qid, text});

    uint64_t state = stream(spec.seed, kVocabTag, q);
    std::vector<double> own(spec.embedding_dim, 0.0);
    for (int cq = 0; cq < spec.clusters_per_query; ++cq) {
      // Recover each cluster centroid as the mean of its member embeddings.
      const auto& ids = clusters[q * spec.clusters_per_query + cq].doc_ids;
      for (const auto& id : ids) {
        const auto& v = data.doc_embeddings.vectors.at(id);
        for (int i = 0; i < spec.embedding_dim; ++i) own[i] += v[i];
      }
    }
    double norm = 0.0;
    for (double v : own) norm += v * v;
    norm = std::sqrt(norm);
    if (norm > 0)
      for (double& v : own) v /= norm;

    int d1 = draw_index(state, spec.bg_centroids);
    int d2 = draw_index(state, spec.bg_centroids);
    std::vector<double> emb(spec.embedding_dim);
    for (int i = 0; i < spec.embedding_dim; ++i)
      emb[i] = spec.query_own_weight * own[i] +
               (1.0 - spec.query_own_weight) * 0.5 * (bg_centroids[d1][i] + bg_centroids[d2][i]) +
               spec.query_jitter * rng::normal(state);
    norm = 0.0;
    for (double v : emb) norm += v * v;
    norm = std::sqrt(norm);
    for (double& v : emb) v /= norm;
    data.query_embeddings.vectors[qid] = emb;
  }

  std::sort(data.corpus.begin(), data.corpus.end(),
            [](const Document& a, const Document& b) { return a.doc_id < b.doc_id; });
  return data;
}

void write_synth(const SynthData& data, const std::string& dir) {
  std::filesystem::create_directories(dir);
  auto path = [&](const char* name) { return (std::filesystem::path(dir) / name).string(); };
  write_corpus(data.corpus, path("corpus.tsv"));
  write_queries(data.queries, path("queries.tsv"));
  write_qrels(data.qrels, path("qrels.txt"));
  write_embeddings(data.doc_embeddings, path("docs.emb"));
  write_embeddings(data.query_embeddings, path("queries.emb"));
  data.ideal_graph.save(path("graph_a.tsv"));
}

}  // namespace ore
