#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "trec_io.hpp"

namespace fcair::eval {

/// Binary relevance judgments keyed by (query_id, doc_id).
class Qrels {
 public:
  Qrels() = default;

  /// TREC qrels format: `query_id 0 doc_id relevance`, whitespace-separated.
  /// Duplicate pairs and malformed lines report their line number.
  static Qrels load(const std::string& path);

  /// Adds one judgment; relevance > 0 counts as relevant.
  void add(const std::string& query_id, const std::string& doc_id, int relevance);

  void save(const std::string& path) const;

  bool has_query(const std::string& query_id) const;
  bool is_relevant(const std::string& query_id, const std::string& doc_id) const;

  /// Number of relevant documents judged for the query (0 if unknown).
  std::size_t relevant_count(const std::string& query_id) const;

 private:
  std::map<std::string, std::map<std::string, int>> judgments_;
};

/// (# relevant in the top min(k, run length)) / k; the divisor stays k even
/// for runs shorter than k.
double precision_at_k(const trec::QueryRun& run, const Qrels& qrels, std::size_t k);

/// Non-interpolated average precision over all R relevant documents;
/// relevant documents never retrieved contribute zero.  Errors when the
/// query has no relevant documents.
double average_precision(const trec::QueryRun& run, const Qrels& qrels);

/// Interpolated precision max over achieved recall >= r, sampled at
/// r = 0.0, 0.1, ..., 1.0.
std::array<double, 11> recall_precision_curve(const trec::QueryRun& run,
                                              const Qrels& qrels);

struct QueryMetrics {
  double p5 = 0.0;
  double p10 = 0.0;
  double p20 = 0.0;
  double ap = 0.0;
  std::array<double, 11> curve{};
};

struct PrecisionReport {
  std::vector<std::pair<std::string, QueryMetrics>> per_query;  // run order
  QueryMetrics macro;  // arithmetic mean over queries
};

/// Scores every query in the run.  Errors if a run query is missing from
/// the qrels or has no relevant documents.
PrecisionReport evaluate(const trec::Run& run, const Qrels& qrels);

struct CompareRow {
  std::string metric;
  double base = 0.0;
  double other = 0.0;
  std::optional<double> rel_change;  // (other - base) / base; empty when base = 0
  int wins = 0;    // queries where other > base
  int losses = 0;  // queries where other < base
  int ties = 0;
};

/// Per-metric relative change from `base` to `other` with per-query
/// win/loss counts.  Errors when the reports cover different query sets.
std::vector<CompareRow> compare_runs(const PrecisionReport& base,
                                     const PrecisionReport& other);

void save_report_csv(const PrecisionReport& report, const std::string& path);
void save_curve_csv(const PrecisionReport& report, const std::string& path);
void save_compare_csv(const std::vector<CompareRow>& rows, const std::string& path);

}  // namespace fcair::eval
