#include "text_index.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <unordered_map>

#include <json.hpp>

#include "error.hpp"

namespace fs = std::filesystem;

namespace fcair::text {

namespace {

bool is_word_byte(char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9');
}

char lower_byte(char c) {
  return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c;
}

}  // namespace

std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> tokens;
  std::string current;
  for (char c : text) {
    if (is_word_byte(c)) {
      current.push_back(lower_byte(c));
    } else if (!current.empty()) {
      if (current.size() >= 2) tokens.push_back(current);
      current.clear();
    }
  }
  if (current.size() >= 2) tokens.push_back(current);
  return tokens;
}

double cosine(const DocumentVector& a, const DocumentVector& b) {
  double dot = 0.0;
  std::size_t i = 0, j = 0;
  while (i < a.postings.size() && j < b.postings.size()) {
    uint32_t ta = a.postings[i].term_id;
    uint32_t tb = b.postings[j].term_id;
    if (ta == tb) {
      dot += a.postings[i].weight * b.postings[j].weight;
      ++i;
      ++j;
    } else if (ta < tb) {
      ++i;
    } else {
      ++j;
    }
  }
  return dot;
}

Index Index::build(std::vector<Document> docs) {
  if (docs.empty()) {
    throw Error(ErrorKind::invalid_argument, "corpus is empty");
  }
  std::sort(docs.begin(), docs.end(),
            [](const Document& a, const Document& b) { return a.doc_id < b.doc_id; });
  for (std::size_t i = 0; i + 1 < docs.size(); ++i) {
    if (docs[i].doc_id == docs[i + 1].doc_id) {
      throw Error(ErrorKind::invalid_argument,
                  "duplicate doc_id '" + docs[i].doc_id + "'");
    }
    if (docs[i].doc_id.empty()) {
      throw Error(ErrorKind::invalid_argument, "empty doc_id");
    }
  }

  Index index;
  const std::size_t n = docs.size();

  // Document frequencies over unique terms per document.
  std::vector<std::vector<std::pair<std::string, uint32_t>>> doc_terms(n);
  std::map<std::string, uint32_t> df;
  for (std::size_t d = 0; d < n; ++d) {
    std::map<std::string, uint32_t> tf;
    for (const std::string& tok : tokenize(docs[d].text)) ++tf[tok];
    doc_terms[d].assign(tf.begin(), tf.end());
    for (const auto& [term, count] : tf) ++df[term];
  }

  // Dense term ids in lexicographic term order.
  uint32_t next_id = 0;
  for (const auto& [term, count] : df) {
    index.vocabulary_[term] = TermInfo{next_id++, count};
  }

  for (std::size_t d = 0; d < n; ++d) {
    DocumentVector vec;
    vec.doc_id = docs[d].doc_id;
    double norm_sq = 0.0;
    for (const auto& [term, count] : doc_terms[d]) {
      const TermInfo& info = index.vocabulary_.at(term);
      double idf = std::log(static_cast<double>(n) / static_cast<double>(info.df));
      double w = static_cast<double>(count) * idf;
      if (w > 0.0) {
        vec.postings.push_back(Posting{info.term_id, w});
        norm_sq += w * w;
      }
    }
    if (vec.postings.empty()) {
      vec.zero = true;
    } else {
      double norm = std::sqrt(norm_sq);
      for (Posting& p : vec.postings) p.weight /= norm;
    }
    index.doc_lookup_[vec.doc_id] = static_cast<uint32_t>(index.docs_.size());
    index.docs_.push_back(std::move(vec));
  }
  return index;
}

const DocumentVector* Index::find(const std::string& doc_id) const {
  auto it = doc_lookup_.find(doc_id);
  if (it == doc_lookup_.end()) return nullptr;
  return &docs_[it->second];
}

DocumentVector Index::vectorize(const std::string& text) const {
  std::map<uint32_t, double> weights;
  std::map<std::string, uint32_t> tf;
  for (const std::string& tok : tokenize(text)) ++tf[tok];
  const double n = static_cast<double>(docs_.size());
  for (const auto& [term, count] : tf) {
    auto it = vocabulary_.find(term);
    if (it == vocabulary_.end()) continue;  // OOV terms dropped
    double idf = std::log(n / static_cast<double>(it->second.df));
    double w = static_cast<double>(count) * idf;
    if (w > 0.0) weights[it->second.term_id] = w;
  }
  DocumentVector vec;
  double norm_sq = 0.0;
  for (const auto& [tid, w] : weights) {
    vec.postings.push_back(Posting{tid, w});
    norm_sq += w * w;
  }
  if (vec.postings.empty()) {
    vec.zero = true;
  } else {
    double norm = std::sqrt(norm_sq);
    for (Posting& p : vec.postings) p.weight /= norm;
  }
  return vec;
}

Query Index::make_query(std::string query_id, std::string text) const {
  Query q;
  q.query_id = std::move(query_id);
  q.vector = vectorize(text);
  q.text = std::move(text);
  return q;
}

std::vector<ScoredDoc> retrieve_top_k(const Index& index, const Query& query,
                                      std::size_t k) {
  if (k < 1) {
    throw Error(ErrorKind::invalid_argument, "retrieval depth must be at least 1");
  }
  std::vector<ScoredDoc> scored;
  scored.reserve(index.doc_count());
  for (const DocumentVector& d : index.docs()) {
    scored.push_back(ScoredDoc{d.doc_id, cosine(query.vector, d)});
  }
  std::sort(scored.begin(), scored.end(), [](const ScoredDoc& a, const ScoredDoc& b) {
    if (a.score != b.score) return a.score > b.score;
    return a.doc_id < b.doc_id;
  });
  if (scored.size() > k) scored.resize(k);
  return scored;
}

void Index::save(const std::string& path) const {
  nlohmann::json j;
  j["format"] = "fcair-index";
  j["version"] = 1;
  j["n"] = docs_.size();
  nlohmann::json vocab = nlohmann::json::array();
  for (const auto& [term, info] : vocabulary_) {
    vocab.push_back({term, info.term_id, info.df});
  }
  j["vocabulary"] = std::move(vocab);
  nlohmann::json documents = nlohmann::json::array();
  for (const DocumentVector& d : docs_) {
    nlohmann::json terms = nlohmann::json::array();
    for (const Posting& p : d.postings) terms.push_back({p.term_id, p.weight});
    documents.push_back({{"doc_id", d.doc_id},
                         {"zero", d.zero},
                         {"terms", std::move(terms)}});
  }
  j["documents"] = std::move(documents);

  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw Error(ErrorKind::io, "cannot write index file '" + path + "'");
  }
  out << j.dump(2) << '\n';
  if (!out) {
    throw Error(ErrorKind::io, "failed writing index file '" + path + "'");
  }
}

Index Index::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorKind::io, "cannot open index file '" + path + "'");
  }
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::parse, "index file '" + path + "': " + e.what());
  }
  try {
    if (j.at("format") != "fcair-index") {
      throw Error(ErrorKind::parse, "'" + path + "' is not an fcair index file");
    }
    Index index;
    for (const auto& entry : j.at("vocabulary")) {
      index.vocabulary_[entry.at(0).get<std::string>()] =
          TermInfo{entry.at(1).get<uint32_t>(), entry.at(2).get<uint32_t>()};
    }
    for (const auto& entry : j.at("documents")) {
      DocumentVector d;
      d.doc_id = entry.at("doc_id").get<std::string>();
      d.zero = entry.at("zero").get<bool>();
      for (const auto& term : entry.at("terms")) {
        d.postings.push_back(
            Posting{term.at(0).get<uint32_t>(), term.at(1).get<double>()});
      }
      index.doc_lookup_[d.doc_id] = static_cast<uint32_t>(index.docs_.size());
      index.docs_.push_back(std::move(d));
    }
    if (index.docs_.size() != j.at("n").get<std::size_t>()) {
      throw Error(ErrorKind::parse, "index file '" + path + "': document count mismatch");
    }
    return index;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::parse, "index file '" + path + "': " + e.what());
  }
}

std::vector<Document> load_corpus(const std::string& path) {
  std::vector<Document> docs;
  fs::path p(path);
  std::error_code ec;
  if (fs::is_directory(p, ec)) {
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(p)) {
      if (entry.is_regular_file() && entry.path().extension() == ".txt") {
        files.push_back(entry.path());
      }
    }
    std::sort(files.begin(), files.end());
    for (const fs::path& file : files) {
      std::ifstream in(file, std::ios::binary);
      if (!in) {
        throw Error(ErrorKind::io, "cannot read '" + file.string() + "'");
      }
      std::ostringstream text;
      text << in.rdbuf();
      docs.push_back(Document{file.stem().string(), text.str()});
    }
    if (docs.empty()) {
      throw Error(ErrorKind::invalid_argument,
                  "no .txt files found in '" + path + "'");
    }
    return docs;
  }

  std::ifstream in(p, std::ios::binary);
  if (!in) {
    throw Error(ErrorKind::io, "cannot open corpus '" + path + "'");
  }
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    auto tab = line.find('\t');
    if (tab == std::string::npos || tab == 0) {
      throw Error(ErrorKind::parse, "corpus '" + path + "' line " +
                                        std::to_string(line_no) +
                                        ": expected 'doc_id<TAB>text'");
    }
    docs.push_back(Document{line.substr(0, tab), line.substr(tab + 1)});
  }
  if (docs.empty()) {
    throw Error(ErrorKind::invalid_argument, "corpus '" + path + "' is empty");
  }
  return docs;
}

std::vector<Query> load_queries(const std::string& path, const Index& index) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorKind::io, "cannot open query file '" + path + "'");
  }
  std::vector<Query> queries;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    auto tab = line.find('\t');
    if (tab == std::string::npos || tab == 0) {
      throw Error(ErrorKind::parse, "query file '" + path + "' line " +
                                        std::to_string(line_no) +
                                        ": expected 'query_id<TAB>text'");
    }
    queries.push_back(index.make_query(line.substr(0, tab), line.substr(tab + 1)));
  }
  if (queries.empty()) {
    throw Error(ErrorKind::invalid_argument, "query file '" + path + "' is empty");
  }
  return queries;
}

}  // namespace fcair::text
