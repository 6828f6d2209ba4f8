#include "cluster_ranker.hpp"

#include <algorithm>
#include <cmath>

#include "error.hpp"

namespace fcair::rank {

namespace {

/// Cosine between two small dense vectors; zero vectors yield 0.
double dense_cosine(std::span<const double> a, std::span<const double> b) {
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    dot += a[i] * b[i];
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  if (na == 0.0 || nb == 0.0) return 0.0;
  return dot / (std::sqrt(na) * std::sqrt(nb));
}

bool is_zero(std::span<const double> v) {
  for (double x : v) {
    if (x != 0.0) return false;
  }
  return true;
}

std::vector<double> densify(const text::DocumentVector& v, std::size_t dim) {
  std::vector<double> dense(dim, 0.0);
  for (const text::Posting& p : v.postings) dense[p.term_id] = p.weight;
  return dense;
}

/// Composite vector and norm of one cluster, rebuilt from the index.
struct ClusterGeometry {
  std::vector<double> composite;
  double norm = 0.0;
};

ClusterGeometry cluster_geometry(const std::vector<std::string>& member_ids,
                                 const text::Index& index) {
  ClusterGeometry g;
  g.composite.assign(index.vocab_size(), 0.0);
  for (const std::string& doc_id : member_ids) {
    const text::DocumentVector* doc = index.find(doc_id);
    if (doc == nullptr) {
      throw Error(ErrorKind::not_found,
                  "document '" + doc_id + "' from partition not present in index");
    }
    for (const text::Posting& p : doc->postings) g.composite[p.term_id] += p.weight;
  }
  double norm_sq = 0.0;
  for (double x : g.composite) norm_sq += x * x;
  g.norm = std::sqrt(norm_sq);
  return g;
}

}  // namespace

ClusterOrdering rank_clusters_oracle(const cluster::PartitionResult& partition,
                                     const eval::Qrels& qrels) {
  if (!qrels.has_query(partition.query_id)) {
    throw Error(ErrorKind::not_found,
                "no judgments for query '" + partition.query_id + "'");
  }
  struct Entry {
    std::size_t cluster;
    std::size_t relevant;
  };
  std::vector<Entry> entries;
  for (std::size_t c = 0; c < partition.clusters.size(); ++c) {
    if (partition.clusters[c].empty()) continue;
    std::size_t relevant = 0;
    for (const std::string& doc_id : partition.clusters[c]) {
      if (qrels.is_relevant(partition.query_id, doc_id)) ++relevant;
    }
    entries.push_back(Entry{c, relevant});
  }
  std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
    if (a.relevant != b.relevant) return a.relevant > b.relevant;
    return a.cluster < b.cluster;
  });

  ClusterOrdering ordering;
  ordering.query_id = partition.query_id;
  ordering.kind = OrderingKind::oracle_lq;
  for (const Entry& e : entries) {
    ordering.clusters.push_back(e.cluster);
    ordering.scores.push_back(static_cast<double>(e.relevant));
  }
  return ordering;
}

double ca_distance(std::span<const double> query_dense,
                   std::span<const double> centroid_dense,
                   const fca::Automaton& ca) {
  if (is_zero(query_dense) || is_zero(centroid_dense)) {
    throw Error(ErrorKind::invalid_argument,
                "ca_distance requires nonzero vectors");
  }
  fca::State eq = fca::encode_vector(query_dense, ca.size());
  fca::State ec = fca::encode_vector(centroid_dense, ca.size());
  fca::Trajectory tq = ca.evolve(eq);
  fca::Trajectory tc = ca.evolve(ec);
  return 1.0 - dense_cosine(tq.attractor, tc.attractor);
}

ClusterOrdering rank_clusters_ca(const cluster::PartitionResult& partition,
                                 const text::Index& index,
                                 const text::Query& query,
                                 const FcaConfig& config) {
  fca::Automaton ca = config.make_automaton();
  std::vector<double> query_dense = densify(query.vector, index.vocab_size());

  struct Entry {
    std::size_t cluster;
    double distance;
    double raw_distance;  // 1 - cosine(query, centroid), the tie resolver
  };
  std::vector<Entry> entries;
  for (std::size_t c = 0; c < partition.clusters.size(); ++c) {
    if (partition.clusters[c].empty()) continue;
    ClusterGeometry g = cluster_geometry(partition.clusters[c], index);
    std::vector<double> centroid(g.composite.size());
    for (std::size_t t = 0; t < centroid.size(); ++t) {
      centroid[t] = g.composite[t] / g.norm;
    }
    Entry e;
    e.cluster = c;
    e.distance = ca_distance(query_dense, centroid, ca);
    e.raw_distance = 1.0 - dense_cosine(query_dense, centroid);
    entries.push_back(e);
  }
  if (entries.empty()) {
    throw Error(ErrorKind::invalid_argument,
                "partition for query '" + partition.query_id +
                    "' has no nonempty cluster");
  }
  std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
    if (a.distance != b.distance) return a.distance < b.distance;
    if (a.raw_distance != b.raw_distance) return a.raw_distance < b.raw_distance;
    return a.cluster < b.cluster;
  });

  ClusterOrdering ordering;
  ordering.query_id = partition.query_id;
  ordering.kind = OrderingKind::ca_lc;
  for (const Entry& e : entries) {
    ordering.clusters.push_back(e.cluster);
    ordering.scores.push_back(e.distance);
  }
  return ordering;
}

trec::QueryRun flatten(const ClusterOrdering& ordering,
                       const cluster::PartitionResult& partition,
                       const text::Index& index, const text::Query& query) {
  // Blocks: clusters in ordering order, then the zero-vector tail.
  std::vector<std::vector<std::string>> blocks;
  for (std::size_t c : ordering.clusters) {
    const std::vector<std::string>& members = partition.clusters.at(c);
    std::vector<std::pair<double, std::string>> scored;
    scored.reserve(members.size());
    for (const std::string& doc_id : members) {
      const text::DocumentVector* doc = index.find(doc_id);
      if (doc == nullptr) {
        throw Error(ErrorKind::not_found,
                    "document '" + doc_id + "' from partition not present in index");
      }
      scored.emplace_back(text::cosine(query.vector, *doc), doc_id);
    }
    std::sort(scored.begin(), scored.end(), [](const auto& a, const auto& b) {
      if (a.first != b.first) return a.first > b.first;
      return a.second < b.second;
    });
    std::vector<std::string> block;
    block.reserve(scored.size());
    for (const auto& [score, doc_id] : scored) block.push_back(doc_id);
    blocks.push_back(std::move(block));
  }
  if (!partition.unclustered.empty()) {
    blocks.push_back(partition.unclustered);  // already ascending by doc_id
  }

  // Score = block rank + within-block normalized rank: strictly decreasing
  // down the list, so sorting by score reproduces it.
  trec::QueryRun run;
  run.query_id = ordering.query_id;
  const double total_blocks = static_cast<double>(blocks.size());
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    const double block_size = static_cast<double>(blocks[b].size());
    for (std::size_t r = 0; r < blocks[b].size(); ++r) {
      double score = (total_blocks - static_cast<double>(b)) +
                     (block_size - static_cast<double>(r)) / (block_size + 1.0);
      run.entries.push_back(trec::RunEntry{blocks[b][r], score});
    }
  }
  return run;
}

}  // namespace fcair::rank
