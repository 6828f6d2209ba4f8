#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "text_index.hpp"

namespace fcair::cluster {

/// Moves with a gain at or below this threshold are treated as zero.  The
/// selection rule is "maximal gain > 0"; a strict floor keeps rounding noise
/// in mathematically-zero gains from driving endless null moves.
inline constexpr double kMinGain = 1e-10;

/// Closed form for E(S - {d}) - E(S): sqrt(||D||^2 - 2 D.d + 1) - ||D||,
/// with d a unit vector and dot = D.d.
double remove_gain(double norm, double dot);

/// Closed form for E(S + {d}) - E(S): sqrt(||D||^2 + 2 D.d + 1) - ||D||.
double add_gain(double norm, double dot);

/// A document entering the clusterer: id plus a view of its unit vector.
struct ClusterDoc {
  std::string doc_id;
  std::span<const text::Posting> postings;
};

struct Cluster {
  std::vector<uint32_t> members;   // ascending doc indices
  std::vector<double> composite;   // dense sum of member vectors
  double norm = 0.0;               // cached ||composite||

  bool empty() const { return members.empty(); }
  bool contains(uint32_t doc) const;
};

struct Move {
  uint32_t doc;
  uint32_t from;
  uint32_t to;
  double delta;
};

struct LscResult {
  std::size_t iterations = 0;
  std::vector<double> energy_trace;  // initial energy plus one value per move
};

/// K disjoint clusters covering a fixed document set, with incremental
/// composites, norms and energy E(P) = sum of ||D_i||.
class Partition {
 public:
  /// Seeded start: doc ids are shuffled (Fisher-Yates over the doc_id-sorted
  /// order) and dealt round-robin into k clusters.
  static Partition init_partition(std::vector<ClusterDoc> docs,
                                  std::size_t vocab_size, std::size_t k,
                                  uint64_t seed);

  /// Explicit start: assignment[i] is the cluster of the i-th document in
  /// doc_id-sorted order.
  static Partition from_assignment(std::vector<ClusterDoc> docs,
                                   std::size_t vocab_size, std::size_t k,
                                   std::span<const uint32_t> assignment);

  std::size_t cluster_count() const { return clusters_.size(); }
  std::size_t doc_count() const { return docs_.size(); }
  const ClusterDoc& doc(std::size_t i) const { return docs_[i]; }
  const Cluster& cluster(std::size_t c) const { return clusters_[c]; }
  uint32_t assignment(std::size_t doc_idx) const { return assign_[doc_idx]; }

  /// Incrementally maintained energy.
  double energy() const { return energy_; }

  /// Oracle form: every composite rebuilt from member vectors.
  double energy_recomputed() const;

  /// Gain of removing member doc_idx from cluster c; -1 for a singleton.
  /// Errors if the document is not a member.
  double delta_remove(std::size_t c, uint32_t doc_idx) const;

  /// Gain of adding doc_idx to cluster c; +1 for an empty cluster.
  /// Errors if the document is already a member.
  double delta_add(std::size_t c, uint32_t doc_idx) const;

  /// Steepest-descent step: evaluates every (document, target) move and
  /// applies the single best one when its gain is positive.  Ties break by
  /// smallest doc_id, then smallest target index.
  std::optional<Move> tcls_step();

  /// Runs tcls_step until no positive move remains or max_iters is reached.
  LscResult lsc(std::size_t max_iters);

  /// Spherical K-Means reassignment: every document moves simultaneously to
  /// the centroid with the highest cosine (ties to the lowest index; empty
  /// clusters are skipped as targets), then composites are rebuilt exactly.
  void kmeans_pass();

  /// Rebuilds all composites, norms and the energy from member vectors.
  void recompute_exact();

  /// Doc ids of cluster c, ascending.
  std::vector<std::string> member_ids(std::size_t c) const;

 private:
  Partition() = default;

  double dot_with_composite(uint32_t doc_idx, const Cluster& c) const;
  void apply_move(uint32_t doc_idx, std::size_t from, std::size_t to, double delta);

  std::vector<ClusterDoc> docs_;  // sorted by doc_id
  std::size_t vocab_ = 0;
  std::vector<Cluster> clusters_;
  std::vector<uint32_t> assign_;
  double energy_ = 0.0;
  uint64_t moves_since_recompute_ = 0;
};

/// Serializable clustering outcome, detached from any live index.
struct PartitionResult {
  std::string query_id;
  uint32_t k = 0;
  double energy = 0.0;
  uint32_t iterations = 0;
  std::vector<double> energy_trace;
  std::vector<std::vector<std::string>> clusters;  // doc_ids, ascending
  std::vector<std::string> unclustered;  // zero-vector docs, ascending
  double kmeans_energy = -1.0;  // E after repeated kmeans_pass from the same
                                // start; negative when not computed

  void save(const std::string& path) const;
  static PartitionResult load(const std::string& path);
};

PartitionResult make_result(const Partition& p, std::string query_id,
                            const LscResult& lsc,
                            std::vector<std::string> unclustered);

}  // namespace fcair::cluster
