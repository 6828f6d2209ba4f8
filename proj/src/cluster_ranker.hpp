#pragma once

#include <span>
#include <string>
#include <vector>

#include "cluster_engine.hpp"
#include "eval_harness.hpp"
#include "fca_engine.hpp"
#include "text_index.hpp"
#include "trec_io.hpp"

namespace fcair::rank {

enum class OrderingKind { oracle_lq, ca_lc };

/// A permutation of the nonempty cluster indices of one partition, with the
/// score that placed each cluster (relevant count for the oracle ordering,
/// attractor distance for the CA ordering).
struct ClusterOrdering {
  std::string query_id;
  OrderingKind kind = OrderingKind::oracle_lq;
  std::vector<std::size_t> clusters;
  std::vector<double> scores;
};

/// CA classifier configuration: rule codes extended cyclically to `cells`
/// cells, evolved for at most `max_steps` updates.
struct FcaConfig {
  std::vector<unsigned> rule_codes{238, 254, 238, 252};
  std::size_t cells = 8;
  std::size_t max_steps = 64;

  fca::Automaton make_automaton() const {
    return fca::Automaton(fca::RuleVector::cyclic(rule_codes, cells), max_steps);
  }
};

/// Nonempty clusters ordered by the number of relevant members, descending;
/// ties go to the smaller cluster index.  Errors when the query has no
/// entry in the qrels.
ClusterOrdering rank_clusters_oracle(const cluster::PartitionResult& partition,
                                     const eval::Qrels& qrels);

/// Attractor distance between two nonzero dense vectors: both are encoded
/// to `ca.size()` cells, evolved to their attractors, and compared by
/// 1 - cosine.
double ca_distance(std::span<const double> query_dense,
                   std::span<const double> centroid_dense,
                   const fca::Automaton& ca);

/// Nonempty clusters ordered by ca_distance to the query, ascending; ties
/// break by raw centroid cosine, then by cluster index.
ClusterOrdering rank_clusters_ca(const cluster::PartitionResult& partition,
                                 const text::Index& index,
                                 const text::Query& query,
                                 const FcaConfig& config);

/// Concatenates clusters in ordering order; inside a cluster documents sort
/// by query cosine descending (ties by doc_id), and zero-vector documents
/// form a final block ordered by doc_id.  Scores are block rank plus a
/// within-block normalized rank, so the ordering is recoverable from the
/// scores alone.
trec::QueryRun flatten(const ClusterOrdering& ordering,
                       const cluster::PartitionResult& partition,
                       const text::Index& index, const text::Query& query);

}  // namespace fcair::rank
