#pragma once

#include <string>
#include <vector>

namespace fcair::trec {

struct RunEntry {
  std::string doc_id;
  double score;
};

/// One query's ranked list; ranks are implicit 1..n over `entries`.
struct QueryRun {
  std::string query_id;
  std::vector<RunEntry> entries;
};

struct Run {
  std::string tag;
  std::vector<QueryRun> queries;
};

/// Writes standard TREC run lines `query_id Q0 doc_id rank score tag`,
/// space-separated, rank from 1, scores printed with six decimals.
void save_run(const Run& run, const std::string& path);

/// Parses a TREC run file; entries are ordered by their rank column and
/// queries by first appearance.  Malformed lines report their line number.
Run load_run(const std::string& path);

}  // namespace fcair::trec
