#include "eval_harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "error.hpp"

namespace fcair::eval {

namespace {

std::string format_double(double value) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6f", value);
  return buf;
}

}  // namespace

Qrels Qrels::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorKind::io, "cannot open qrels file '" + path + "'");
  }
  Qrels qrels;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::istringstream parts(line);
    std::string qid, unused, did;
    int relevance = 0;
    if (!(parts >> qid >> unused >> did >> relevance)) {
      throw Error(ErrorKind::parse,
                  "qrels file '" + path + "' line " + std::to_string(line_no) +
                      ": expected 'query_id 0 doc_id relevance'");
    }
    auto& per_query = qrels.judgments_[qid];
    if (!per_query.try_emplace(did, relevance).second) {
      throw Error(ErrorKind::parse,
                  "qrels file '" + path + "' line " + std::to_string(line_no) +
                      ": duplicate judgment for (" + qid + ", " + did + ")");
    }
  }
  return qrels;
}

void Qrels::add(const std::string& query_id, const std::string& doc_id,
                int relevance) {
  auto& per_query = judgments_[query_id];
  if (!per_query.try_emplace(doc_id, relevance).second) {
    throw Error(ErrorKind::invalid_argument,
                "duplicate judgment for (" + query_id + ", " + doc_id + ")");
  }
}

void Qrels::save(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw Error(ErrorKind::io, "cannot write qrels file '" + path + "'");
  }
  for (const auto& [qid, docs] : judgments_) {
    for (const auto& [did, rel] : docs) {
      out << qid << " 0 " << did << ' ' << rel << '\n';
    }
  }
  if (!out) {
    throw Error(ErrorKind::io, "failed writing qrels file '" + path + "'");
  }
}

bool Qrels::has_query(const std::string& query_id) const {
  return judgments_.count(query_id) != 0;
}

bool Qrels::is_relevant(const std::string& query_id, const std::string& doc_id) const {
  auto q = judgments_.find(query_id);
  if (q == judgments_.end()) return false;
  auto d = q->second.find(doc_id);
  return d != q->second.end() && d->second > 0;
}

std::size_t Qrels::relevant_count(const std::string& query_id) const {
  auto q = judgments_.find(query_id);
  if (q == judgments_.end()) return 0;
  std::size_t count = 0;
  for (const auto& [did, rel] : q->second) {
    if (rel > 0) ++count;
  }
  return count;
}

double precision_at_k(const trec::QueryRun& run, const Qrels& qrels, std::size_t k) {
  if (k < 1) {
    throw Error(ErrorKind::invalid_argument, "k must be at least 1");
  }
  if (!qrels.has_query(run.query_id)) {
    throw Error(ErrorKind::not_found,
                "no judgments for query '" + run.query_id + "'");
  }
  std::size_t top = std::min(k, run.entries.size());
  std::size_t relevant = 0;
  for (std::size_t i = 0; i < top; ++i) {
    if (qrels.is_relevant(run.query_id, run.entries[i].doc_id)) ++relevant;
  }
  return static_cast<double>(relevant) / static_cast<double>(k);
}

double average_precision(const trec::QueryRun& run, const Qrels& qrels) {
  if (!qrels.has_query(run.query_id)) {
    throw Error(ErrorKind::not_found,
                "no judgments for query '" + run.query_id + "'");
  }
  std::size_t total_relevant = qrels.relevant_count(run.query_id);
  if (total_relevant == 0) {
    throw Error(ErrorKind::invalid_argument,
                "query '" + run.query_id + "' has no relevant documents");
  }
  double sum = 0.0;
  std::size_t seen = 0;
  for (std::size_t i = 0; i < run.entries.size(); ++i) {
    if (qrels.is_relevant(run.query_id, run.entries[i].doc_id)) {
      ++seen;
      sum += static_cast<double>(seen) / static_cast<double>(i + 1);
    }
  }
  return sum / static_cast<double>(total_relevant);
}

std::array<double, 11> recall_precision_curve(const trec::QueryRun& run,
                                              const Qrels& qrels) {
  if (!qrels.has_query(run.query_id)) {
    throw Error(ErrorKind::not_found,
                "no judgments for query '" + run.query_id + "'");
  }
  std::size_t total_relevant = qrels.relevant_count(run.query_id);
  if (total_relevant == 0) {
    throw Error(ErrorKind::invalid_argument,
                "query '" + run.query_id + "' has no relevant documents");
  }
  // Precision/recall after each rank.
  std::vector<std::pair<double, double>> points;  // (recall, precision)
  std::size_t seen = 0;
  for (std::size_t i = 0; i < run.entries.size(); ++i) {
    if (qrels.is_relevant(run.query_id, run.entries[i].doc_id)) ++seen;
    points.emplace_back(static_cast<double>(seen) / static_cast<double>(total_relevant),
                        static_cast<double>(seen) / static_cast<double>(i + 1));
  }
  std::array<double, 11> curve{};
  for (std::size_t level = 0; level < 11; ++level) {
    double target = static_cast<double>(level) / 10.0;
    double best = 0.0;
    for (const auto& [recall, precision] : points) {
      if (recall + 1e-12 >= target) best = std::max(best, precision);
    }
    curve[level] = best;
  }
  return curve;
}

PrecisionReport evaluate(const trec::Run& run, const Qrels& qrels) {
  if (run.queries.empty()) {
    throw Error(ErrorKind::invalid_argument, "run contains no queries");
  }
  PrecisionReport report;
  for (const trec::QueryRun& q : run.queries) {
    QueryMetrics m;
    m.p5 = precision_at_k(q, qrels, 5);
    m.p10 = precision_at_k(q, qrels, 10);
    m.p20 = precision_at_k(q, qrels, 20);
    m.ap = average_precision(q, qrels);
    m.curve = recall_precision_curve(q, qrels);
    report.per_query.emplace_back(q.query_id, m);
  }
  const double n = static_cast<double>(report.per_query.size());
  for (const auto& [qid, m] : report.per_query) {
    report.macro.p5 += m.p5 / n;
    report.macro.p10 += m.p10 / n;
    report.macro.p20 += m.p20 / n;
    report.macro.ap += m.ap / n;
    for (std::size_t i = 0; i < 11; ++i) report.macro.curve[i] += m.curve[i] / n;
  }
  return report;
}

std::vector<CompareRow> compare_runs(const PrecisionReport& base,
                                     const PrecisionReport& other) {
  std::vector<std::string> base_ids, other_ids;
  for (const auto& [qid, m] : base.per_query) base_ids.push_back(qid);
  for (const auto& [qid, m] : other.per_query) other_ids.push_back(qid);
  std::sort(base_ids.begin(), base_ids.end());
  std::sort(other_ids.begin(), other_ids.end());
  if (base_ids != other_ids) {
    throw Error(ErrorKind::invalid_argument,
                "cannot compare runs over different query sets");
  }

  std::map<std::string, const QueryMetrics*> base_by_id, other_by_id;
  for (const auto& [qid, m] : base.per_query) base_by_id[qid] = &m;
  for (const auto& [qid, m] : other.per_query) other_by_id[qid] = &m;

  struct MetricDef {
    const char* name;
    double QueryMetrics::* field;
  };
  const MetricDef metrics[] = {{"P@5", &QueryMetrics::p5},
                               {"P@10", &QueryMetrics::p10},
                               {"P@20", &QueryMetrics::p20},
                               {"AP", &QueryMetrics::ap}};

  std::vector<CompareRow> rows;
  for (const MetricDef& metric : metrics) {
    CompareRow row;
    row.metric = metric.name;
    row.base = base.macro.*metric.field;
    row.other = other.macro.*metric.field;
    if (row.base != 0.0) {
      row.rel_change = (row.other - row.base) / row.base;
    }
    for (const auto& [qid, m] : base.per_query) {
      double a = m.*metric.field;
      double b = (*other_by_id.at(qid)).*metric.field;
      if (b > a) {
        ++row.wins;
      } else if (b < a) {
        ++row.losses;
      } else {
        ++row.ties;
      }
    }
    rows.push_back(row);
  }
  return rows;
}

void save_report_csv(const PrecisionReport& report, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw Error(ErrorKind::io, "cannot write report file '" + path + "'");
  }
  out << "query_id,metric,value\n";
  auto emit = [&out](const std::string& qid, const QueryMetrics& m) {
    out << qid << ",P@5," << format_double(m.p5) << '\n';
    out << qid << ",P@10," << format_double(m.p10) << '\n';
    out << qid << ",P@20," << format_double(m.p20) << '\n';
    out << qid << ",AP," << format_double(m.ap) << '\n';
  };
  for (const auto& [qid, m] : report.per_query) emit(qid, m);
  emit("all", report.macro);
  if (!out) {
    throw Error(ErrorKind::io, "failed writing report file '" + path + "'");
  }
}

void save_curve_csv(const PrecisionReport& report, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw Error(ErrorKind::io, "cannot write curve file '" + path + "'");
  }
  out << "recall,precision\n";
  char recall_buf[16];
  for (std::size_t i = 0; i < 11; ++i) {
    std::snprintf(recall_buf, sizeof(recall_buf), "%.1f",
                  static_cast<double>(i) / 10.0);
    out << recall_buf << ',' << format_double(report.macro.curve[i]) << '\n';
  }
  if (!out) {
    throw Error(ErrorKind::io, "failed writing curve file '" + path + "'");
  }
}

void save_compare_csv(const std::vector<CompareRow>& rows, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw Error(ErrorKind::io, "cannot write comparison file '" + path + "'");
  }
  out << "metric,base,other,rel_change,wins,losses,ties\n";
  for (const CompareRow& row : rows) {
    out << row.metric << ',' << format_double(row.base) << ','
        << format_double(row.other) << ',';
    if (row.rel_change.has_value()) {
      out << format_double(*row.rel_change);
    } else {
      out << "undefined";
    }
    out << ',' << row.wins << ',' << row.losses << ',' << row.ties << '\n';
  }
  if (!out) {
    throw Error(ErrorKind::io, "failed writing comparison file '" + path + "'");
  }
}

}  // namespace fcair::eval
