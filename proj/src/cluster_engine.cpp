#include "cluster_engine.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include <json.hpp>

#include "error.hpp"
#include "rng.hpp"

namespace fcair::cluster {

double remove_gain(double norm, double dot) {
  double arg = norm * norm - 2.0 * dot + 1.0;
  return std::sqrt(std::max(0.0, arg)) - norm;
}

double add_gain(double norm, double dot) {
  double arg = norm * norm + 2.0 * dot + 1.0;
  return std::sqrt(std::max(0.0, arg)) - norm;
}

bool Cluster::contains(uint32_t doc) const {
  return std::binary_search(members.begin(), members.end(), doc);
}

Partition Partition::init_partition(std::vector<ClusterDoc> docs,
                                    std::size_t vocab_size, std::size_t k,
                                    uint64_t seed) {
  if (k < 1) {
    throw Error(ErrorKind::invalid_argument, "cluster count must be at least 1");
  }
  if (docs.empty()) {
    throw Error(ErrorKind::invalid_argument, "cannot cluster an empty document set");
  }
  std::sort(docs.begin(), docs.end(), [](const ClusterDoc& a, const ClusterDoc& b) {
    return a.doc_id < b.doc_id;
  });

  Partition p;
  p.docs_ = std::move(docs);
  p.vocab_ = vocab_size;
  p.clusters_.resize(k);
  p.assign_.resize(p.docs_.size());

  std::vector<uint32_t> order(p.docs_.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<uint32_t>(i);
  Rng rng(seed);
  rng.shuffle(order);
  for (std::size_t pos = 0; pos < order.size(); ++pos) {
    std::size_t c = pos % k;
    p.assign_[order[pos]] = static_cast<uint32_t>(c);
    p.clusters_[c].members.push_back(order[pos]);
  }
  for (Cluster& c : p.clusters_) std::sort(c.members.begin(), c.members.end());
  p.recompute_exact();
  return p;
}

Partition Partition::from_assignment(std::vector<ClusterDoc> docs,
                                     std::size_t vocab_size, std::size_t k,
                                     std::span<const uint32_t> assignment) {
  if (k < 1) {
    throw Error(ErrorKind::invalid_argument, "cluster count must be at least 1");
  }
  if (docs.empty()) {
    throw Error(ErrorKind::invalid_argument, "cannot cluster an empty document set");
  }
  if (assignment.size() != docs.size()) {
    throw Error(ErrorKind::invalid_argument, "assignment size mismatch");
  }
  std::sort(docs.begin(), docs.end(), [](const ClusterDoc& a, const ClusterDoc& b) {
    return a.doc_id < b.doc_id;
  });
  Partition p;
  p.docs_ = std::move(docs);
  p.vocab_ = vocab_size;
  p.clusters_.resize(k);
  p.assign_.assign(assignment.begin(), assignment.end());
  for (uint32_t doc = 0; doc < p.docs_.size(); ++doc) {
    if (p.assign_[doc] >= k) {
      throw Error(ErrorKind::invalid_argument, "assignment index out of range");
    }
    p.clusters_[p.assign_[doc]].members.push_back(doc);
  }
  p.recompute_exact();
  return p;
}

void Partition::recompute_exact() {
  energy_ = 0.0;
  for (Cluster& c : clusters_) {
    c.composite.assign(vocab_, 0.0);
    for (uint32_t doc : c.members) {
      for (const text::Posting& p : docs_[doc].postings) {
        c.composite[p.term_id] += p.weight;
      }
    }
    double norm_sq = 0.0;
    for (double x : c.composite) norm_sq += x * x;
    c.norm = c.members.empty() ? 0.0 : std::sqrt(norm_sq);
    energy_ += c.norm;
  }
  moves_since_recompute_ = 0;
}

double Partition::energy_recomputed() const {
  double total = 0.0;
  for (const Cluster& c : clusters_) {
    std::vector<double> composite(vocab_, 0.0);
    for (uint32_t doc : c.members) {
      for (const text::Posting& p : docs_[doc].postings) {
        composite[p.term_id] += p.weight;
      }
    }
    double norm_sq = 0.0;
    for (double x : composite) norm_sq += x * x;
    total += std::sqrt(norm_sq);
  }
  return total;
}

double Partition::dot_with_composite(uint32_t doc_idx, const Cluster& c) const {
  double dot = 0.0;
  for (const text::Posting& p : docs_[doc_idx].postings) {
    dot += p.weight * c.composite[p.term_id];
  }
  return dot;
}

double Partition::delta_remove(std::size_t c, uint32_t doc_idx) const {
  const Cluster& cl = clusters_[c];
  if (!cl.contains(doc_idx)) {
    throw Error(ErrorKind::invalid_argument,
                "document '" + docs_[doc_idx].doc_id + "' is not a member of cluster " +
                    std::to_string(c));
  }
  if (cl.members.size() == 1) return -1.0;  // cluster empties
  return remove_gain(cl.norm, dot_with_composite(doc_idx, cl));
}

double Partition::delta_add(std::size_t c, uint32_t doc_idx) const {
  const Cluster& cl = clusters_[c];
  if (cl.contains(doc_idx)) {
    throw Error(ErrorKind::invalid_argument,
                "document '" + docs_[doc_idx].doc_id + "' is already a member of cluster " +
                    std::to_string(c));
  }
  if (cl.empty()) return 1.0;
  return add_gain(cl.norm, dot_with_composite(doc_idx, cl));
}

std::optional<Move> Partition::tcls_step() {
  const std::size_t k = clusters_.size();
  if (k < 2 || docs_.empty()) return std::nullopt;

  double best_delta = kMinGain;
  uint32_t best_doc = 0;
  std::size_t best_from = 0, best_to = 0;
  bool found = false;

  // Docs are sorted by doc_id, so ascending index order realizes the
  // smallest-doc_id-then-smallest-target tie break via strict improvement.
  for (uint32_t doc = 0; doc < docs_.size(); ++doc) {
    std::size_t from = assign_[doc];
    const Cluster& src = clusters_[from];
    double removal = (src.members.size() == 1)
                         ? -1.0
                         : remove_gain(src.norm, dot_with_composite(doc, src));
    for (std::size_t to = 0; to < k; ++to) {
      if (to == from) continue;
      const Cluster& tgt = clusters_[to];
      double addition =
          tgt.empty() ? 1.0 : add_gain(tgt.norm, dot_with_composite(doc, tgt));
      double delta = removal + addition;
      if (delta > best_delta) {
        best_delta = delta;
        best_doc = doc;
        best_from = from;
        best_to = to;
        found = true;
      }
    }
  }
  if (!found) return std::nullopt;
  apply_move(best_doc, best_from, best_to, best_delta);
  return Move{best_doc, static_cast<uint32_t>(best_from),
              static_cast<uint32_t>(best_to), best_delta};
}

void Partition::apply_move(uint32_t doc_idx, std::size_t from, std::size_t to,
                           double delta) {
  Cluster& src = clusters_[from];
  Cluster& tgt = clusters_[to];

  double new_src_norm =
      (src.members.size() == 1)
          ? 0.0
          : std::sqrt(std::max(
                0.0, src.norm * src.norm - 2.0 * dot_with_composite(doc_idx, src) + 1.0));
  double new_tgt_norm = std::sqrt(
      std::max(0.0, tgt.norm * tgt.norm + 2.0 * dot_with_composite(doc_idx, tgt) + 1.0));

  auto it = std::lower_bound(src.members.begin(), src.members.end(), doc_idx);
  src.members.erase(it);
  auto pos = std::lower_bound(tgt.members.begin(), tgt.members.end(), doc_idx);
  tgt.members.insert(pos, doc_idx);
  assign_[doc_idx] = static_cast<uint32_t>(to);

  if (src.members.empty()) {
    std::fill(src.composite.begin(), src.composite.end(), 0.0);
    src.norm = 0.0;
  } else {
    for (const text::Posting& p : docs_[doc_idx].postings) {
      src.composite[p.term_id] -= p.weight;
    }
    src.norm = new_src_norm;
  }
  for (const text::Posting& p : docs_[doc_idx].postings) {
    tgt.composite[p.term_id] += p.weight;
  }
  tgt.norm = new_tgt_norm;
  energy_ += delta;

  // Drift control: rebuild exactly every 1024 moves.
  if (++moves_since_recompute_ >= 1024) recompute_exact();
}

LscResult Partition::lsc(std::size_t max_iters) {
  LscResult result;
  result.energy_trace.push_back(energy_);
  for (std::size_t i = 0; i < max_iters; ++i) {
    if (!tcls_step().has_value()) break;
    ++result.iterations;
    result.energy_trace.push_back(energy_);
  }
  return result;
}

void Partition::kmeans_pass() {
  const std::size_t k = clusters_.size();
  std::vector<std::vector<double>> centroids(k);
  std::vector<bool> usable(k, false);
  for (std::size_t c = 0; c < k; ++c) {
    if (clusters_[c].empty() || clusters_[c].norm == 0.0) continue;
    usable[c] = true;
    centroids[c].resize(vocab_);
    for (std::size_t t = 0; t < vocab_; ++t) {
      centroids[c][t] = clusters_[c].composite[t] / clusters_[c].norm;
    }
  }

  std::vector<uint32_t> next_assign(docs_.size());
  for (uint32_t doc = 0; doc < docs_.size(); ++doc) {
    double best = -2.0;
    std::size_t best_c = assign_[doc];
    for (std::size_t c = 0; c < k; ++c) {
      if (!usable[c]) continue;
      double cos = 0.0;
      for (const text::Posting& p : docs_[doc].postings) {
        cos += p.weight * centroids[c][p.term_id];
      }
      if (cos > best) {  // strict: ties keep the lowest index
        best = cos;
        best_c = c;
      }
    }
    next_assign[doc] = static_cast<uint32_t>(best_c);
  }

  for (Cluster& c : clusters_) c.members.clear();
  assign_ = std::move(next_assign);
  for (uint32_t doc = 0; doc < docs_.size(); ++doc) {
    clusters_[assign_[doc]].members.push_back(doc);
  }
  recompute_exact();
}

std::vector<std::string> Partition::member_ids(std::size_t c) const {
  std::vector<std::string> ids;
  ids.reserve(clusters_[c].members.size());
  for (uint32_t doc : clusters_[c].members) ids.push_back(docs_[doc].doc_id);
  return ids;  // members ascending and docs_ sorted, so ids are sorted
}

PartitionResult make_result(const Partition& p, std::string query_id,
                            const LscResult& lsc,
                            std::vector<std::string> unclustered) {
  PartitionResult result;
  result.query_id = std::move(query_id);
  result.k = static_cast<uint32_t>(p.cluster_count());
  result.energy = p.energy();
  result.iterations = static_cast<uint32_t>(lsc.iterations);
  result.energy_trace = lsc.energy_trace;
  for (std::size_t c = 0; c < p.cluster_count(); ++c) {
    result.clusters.push_back(p.member_ids(c));
  }
  std::sort(unclustered.begin(), unclustered.end());
  result.unclustered = std::move(unclustered);
  return result;
}

void PartitionResult::save(const std::string& path) const {
  nlohmann::json j;
  j["format"] = "fcair-partition";
  j["query_id"] = query_id;
  j["k"] = k;
  j["energy"] = energy;
  j["iterations"] = iterations;
  j["energy_trace"] = energy_trace;
  j["clusters"] = clusters;
  j["unclustered"] = unclustered;
  if (kmeans_energy >= 0.0) j["kmeans_energy"] = kmeans_energy;
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw Error(ErrorKind::io, "cannot write partition file '" + path + "'");
  }
  out << j.dump(2) << '\n';
  if (!out) {
    throw Error(ErrorKind::io, "failed writing partition file '" + path + "'");
  }
}

PartitionResult PartitionResult::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorKind::io, "cannot open partition file '" + path + "'");
  }
  nlohmann::json j;
  try {
    in >> j;
    if (j.at("format") != "fcair-partition") {
      throw Error(ErrorKind::parse, "'" + path + "' is not an fcair partition file");
    }
    PartitionResult result;
    result.query_id = j.at("query_id").get<std::string>();
    result.k = j.at("k").get<uint32_t>();
    result.energy = j.at("energy").get<double>();
    result.iterations = j.at("iterations").get<uint32_t>();
    result.energy_trace = j.at("energy_trace").get<std::vector<double>>();
    result.clusters = j.at("clusters").get<std::vector<std::vector<std::string>>>();
    result.unclustered = j.at("unclustered").get<std::vector<std::string>>();
    if (j.contains("kmeans_energy")) {
      result.kmeans_energy = j.at("kmeans_energy").get<double>();
    }
    return result;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::parse, "partition file '" + path + "': " + e.what());
  }
}

}  // namespace fcair::cluster
