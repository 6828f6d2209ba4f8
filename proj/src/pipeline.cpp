#include "pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <filesystem>
#include <functional>
#include <map>
#include <mutex>
#include <thread>

#include "error.hpp"

namespace fs = std::filesystem;

namespace fcair::pipeline {

void parallel_for(std::size_t count, unsigned threads,
                  const std::function<void(std::size_t)>& fn) {
  if (threads < 1) {
    throw Error(ErrorKind::invalid_argument, "thread count must be at least 1");
  }
  if (threads == 1 || count <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  unsigned workers = std::min<std::size_t>(threads, count);
  std::exception_ptr first_error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&, w]() {
      // Striped work split: item i goes to worker i % workers.  Each item
      // writes only its own slot, so results match the sequential order.
      for (std::size_t i = w; i < count; i += workers) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!first_error) first_error = std::current_exception();
        }
      }
    });
  }
  for (std::thread& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

trec::Run search_all(const text::Index& index, const std::vector<text::Query>& queries,
                     std::size_t depth, unsigned threads, const std::string& tag) {
  if (depth < 1) {
    throw Error(ErrorKind::invalid_argument, "retrieval depth must be at least 1");
  }
  trec::Run run;
  run.tag = tag;
  run.queries.resize(queries.size());
  parallel_for(queries.size(), threads, [&](std::size_t i) {
    std::vector<text::ScoredDoc> scored = text::retrieve_top_k(index, queries[i], depth);
    trec::QueryRun& q = run.queries[i];
    q.query_id = queries[i].query_id;
    q.entries.reserve(scored.size());
    for (text::ScoredDoc& s : scored) {
      q.entries.push_back(trec::RunEntry{std::move(s.doc_id), s.score});
    }
  });
  return run;
}

std::vector<cluster::PartitionResult> cluster_all(const text::Index& index,
                                                  const trec::Run& baseline,
                                                  std::size_t k, uint64_t seed,
                                                  std::size_t max_iters,
                                                  unsigned threads,
                                                  bool compare_kmeans) {
  if (k < 1) {
    throw Error(ErrorKind::invalid_argument, "cluster count must be at least 1");
  }
  std::vector<cluster::PartitionResult> results(baseline.queries.size());
  parallel_for(baseline.queries.size(), threads, [&](std::size_t i) {
    const trec::QueryRun& q = baseline.queries[i];
    std::vector<cluster::ClusterDoc> docs;
    std::vector<std::string> unclustered;
    for (const trec::RunEntry& entry : q.entries) {
      const text::DocumentVector* doc = index.find(entry.doc_id);
      if (doc == nullptr) {
        throw Error(ErrorKind::not_found,
                    "document '" + entry.doc_id + "' from run not present in index");
      }
      if (doc->zero) {
        unclustered.push_back(entry.doc_id);
      } else {
        docs.push_back(cluster::ClusterDoc{entry.doc_id, doc->postings});
      }
    }
    if (docs.empty()) {
      throw Error(ErrorKind::invalid_argument,
                  "query '" + q.query_id + "' retrieved no clusterable documents");
    }
    cluster::Partition partition =
        cluster::Partition::init_partition(docs, index.vocab_size(), k, seed);
    std::size_t cap = max_iters > 0 ? max_iters : 10 * partition.doc_count();
    cluster::LscResult lsc = partition.lsc(cap);
    results[i] = cluster::make_result(partition, q.query_id, lsc, std::move(unclustered));

    if (compare_kmeans) {
      // Same seeded start, driven by synchronous reassignment instead.
      cluster::Partition km = cluster::Partition::init_partition(
          std::move(docs), index.vocab_size(), k, seed);
      for (std::size_t pass = 0; pass < 100; ++pass) {
        double before = km.energy();
        km.kmeans_pass();
        if (std::abs(km.energy() - before) <= 1e-12) break;
      }
      results[i].kmeans_energy = km.energy();
    }
  });
  return results;
}

trec::Run rank_all(const std::vector<cluster::PartitionResult>& partitions,
                   const text::Index& index, const std::vector<text::Query>& queries,
                   RankMode mode, const eval::Qrels* qrels,
                   const rank::FcaConfig& config, unsigned threads,
                   const std::string& tag) {
  if (mode == RankMode::baseline) {
    throw Error(ErrorKind::invalid_argument,
                "baseline mode passes the search run through; nothing to rank");
  }
  if (mode == RankMode::lq && qrels == nullptr) {
    throw Error(ErrorKind::invalid_argument, "lq ranking requires qrels");
  }
  std::map<std::string, const cluster::PartitionResult*> by_id;
  for (const cluster::PartitionResult& p : partitions) by_id[p.query_id] = &p;

  trec::Run run;
  run.tag = tag;
  run.queries.resize(queries.size());
  parallel_for(queries.size(), threads, [&](std::size_t i) {
    auto it = by_id.find(queries[i].query_id);
    if (it == by_id.end()) {
      throw Error(ErrorKind::not_found,
                  "no partition for query '" + queries[i].query_id + "'");
    }
    const cluster::PartitionResult& partition = *it->second;
    rank::ClusterOrdering ordering =
        (mode == RankMode::lq)
            ? rank::rank_clusters_oracle(partition, *qrels)
            : rank::rank_clusters_ca(partition, index, queries[i], config);
    run.queries[i] = rank::flatten(ordering, partition, index, queries[i]);
  });
  return run;
}

namespace {

std::string safe_file_stem(const std::string& query_id) {
  std::string stem;
  for (char c : query_id) {
    bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
              (c >= '0' && c <= '9') || c == '-' || c == '_';
    stem.push_back(ok ? c : '_');
  }
  return stem.empty() ? "query" : stem;
}

}  // namespace

void save_partitions(const std::vector<cluster::PartitionResult>& partitions,
                     const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) {
    throw Error(ErrorKind::io, "cannot create partition directory '" + dir + "'");
  }
  for (const cluster::PartitionResult& p : partitions) {
    fs::path path = fs::path(dir) / (safe_file_stem(p.query_id) + ".json");
    p.save(path.string());
  }
}

std::vector<cluster::PartitionResult> load_partitions(const std::string& dir) {
  std::vector<fs::path> files;
  std::error_code ec;
  for (const auto& entry : fs::directory_iterator(dir, ec)) {
    if (entry.is_regular_file() && entry.path().extension() == ".json") {
      files.push_back(entry.path());
    }
  }
  if (ec) {
    throw Error(ErrorKind::io, "cannot read partition directory '" + dir + "'");
  }
  std::sort(files.begin(), files.end());
  if (files.empty()) {
    throw Error(ErrorKind::not_found, "no partition files under '" + dir + "'");
  }
  std::vector<cluster::PartitionResult> partitions;
  partitions.reserve(files.size());
  for (const fs::path& file : files) {
    partitions.push_back(cluster::PartitionResult::load(file.string()));
  }
  return partitions;
}

}  // namespace fcair::pipeline
