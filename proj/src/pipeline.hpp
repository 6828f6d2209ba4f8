#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "cluster_engine.hpp"
#include "cluster_ranker.hpp"
#include "eval_harness.hpp"
#include "text_index.hpp"
#include "trec_io.hpp"

namespace fcair::pipeline {

enum class RankMode { lq, lc, baseline };

/// Baseline retrieval for every query; per-query work runs on `threads`
/// workers, results are assembled in query order.
trec::Run search_all(const text::Index& index, const std::vector<text::Query>& queries,
                     std::size_t depth, unsigned threads, const std::string& tag);

/// Clusters each query's retrieved set (zero-vector documents are set aside
/// as the unclustered tail) with LSC.  max_iters 0 selects the safety cap
/// of 10x the number of documents.  With compare_kmeans set, a second
/// partition from the identical start is driven by repeated kmeans_pass and
/// its final energy is recorded on the result.
std::vector<cluster::PartitionResult> cluster_all(const text::Index& index,
                                                  const trec::Run& baseline,
                                                  std::size_t k, uint64_t seed,
                                                  std::size_t max_iters,
                                                  unsigned threads,
                                                  bool compare_kmeans = false);

/// Flattens per-query cluster orderings into a run.  mode lq needs qrels;
/// mode lc needs the CA config.  Queries are matched to partitions by id.
trec::Run rank_all(const std::vector<cluster::PartitionResult>& partitions,
                   const text::Index& index, const std::vector<text::Query>& queries,
                   RankMode mode, const eval::Qrels* qrels,
                   const rank::FcaConfig& config, unsigned threads,
                   const std::string& tag);

/// One partition JSON per query under `dir`; file names derive from the
/// query id, the id inside the file is authoritative.
void save_partitions(const std::vector<cluster::PartitionResult>& partitions,
                     const std::string& dir);
std::vector<cluster::PartitionResult> load_partitions(const std::string& dir);

/// Strict positive-worker parallel map helper used by the *_all functions.
void parallel_for(std::size_t count, unsigned threads,
                  const std::function<void(std::size_t)>& fn);

}  // namespace fcair::pipeline
