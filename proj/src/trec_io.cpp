#include "trec_io.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "error.hpp"

namespace fcair::trec {

void save_run(const Run& run, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw Error(ErrorKind::io, "cannot write run file '" + path + "'");
  }
  char score_buf[64];
  for (const QueryRun& q : run.queries) {
    for (std::size_t i = 0; i < q.entries.size(); ++i) {
      std::snprintf(score_buf, sizeof(score_buf), "%.6f", q.entries[i].score);
      out << q.query_id << " Q0 " << q.entries[i].doc_id << ' ' << (i + 1) << ' '
          << score_buf << ' ' << run.tag << '\n';
    }
  }
  if (!out) {
    throw Error(ErrorKind::io, "failed writing run file '" + path + "'");
  }
}

Run load_run(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorKind::io, "cannot open run file '" + path + "'");
  }
  Run run;
  std::map<std::string, std::size_t> position;
  std::vector<std::vector<std::pair<long, RunEntry>>> ranked;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::istringstream parts(line);
    std::string qid, q0, did, extra;
    long rank = 0;
    double score = 0.0;
    if (!(parts >> qid >> q0 >> did >> rank >> score)) {
      throw Error(ErrorKind::parse, "run file '" + path + "' line " +
                                        std::to_string(line_no) +
                                        ": expected 'query_id Q0 doc_id rank score tag'");
    }
    parts >> extra;  // run tag; last one seen wins
    if (!extra.empty()) run.tag = extra;
    auto [it, inserted] = position.try_emplace(qid, ranked.size());
    if (inserted) {
      ranked.emplace_back();
      run.queries.push_back(QueryRun{qid, {}});
    }
    ranked[it->second].emplace_back(rank, RunEntry{did, score});
  }
  for (std::size_t i = 0; i < ranked.size(); ++i) {
    auto& entries = ranked[i];
    std::stable_sort(entries.begin(), entries.end(),
                     [](const auto& a, const auto& b) { return a.first < b.first; });
    for (auto& [rank, entry] : entries) {
      run.queries[i].entries.push_back(std::move(entry));
    }
  }
  if (run.queries.empty()) {
    throw Error(ErrorKind::invalid_argument, "run file '" + path + "' is empty");
  }
  return run;
}

}  // namespace fcair::trec
