#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace fcair::text {

struct Document {
  std::string doc_id;
  std::string text;
};

/// Lowercases, splits on any non-alphanumeric byte and drops tokens shorter
/// than two characters.  No stemming; bit-reproducible by construction.
std::vector<std::string> tokenize(std::string_view text);

struct Posting {
  uint32_t term_id;
  double weight;
};

/// Sparse unit-norm TF-IDF vector.  `zero` marks documents whose raw vector
/// was all zero (every term had idf 0); those keep an empty posting list.
struct DocumentVector {
  std::string doc_id;
  std::vector<Posting> postings;  // ascending term_id, weights > 0
  bool zero = false;
};

/// Dot product of two sparse vectors; equals the cosine when both are unit
/// (or zero, which yields 0).
double cosine(const DocumentVector& a, const DocumentVector& b);

struct TermInfo {
  uint32_t term_id;
  uint32_t df;
};

struct Query {
  std::string query_id;
  std::string text;
  DocumentVector vector;  // built against the index vocabulary, OOV dropped
};

struct ScoredDoc {
  std::string doc_id;
  double score;
};

class Index {
 public:
  /// weight(t,d) = tf * ln(N/df), then each vector is scaled to unit norm.
  /// Throws on an empty corpus or duplicate doc ids.
  static Index build(std::vector<Document> docs);

  static Index load(const std::string& path);
  void save(const std::string& path) const;

  std::size_t doc_count() const { return docs_.size(); }
  std::size_t vocab_size() const { return vocabulary_.size(); }

  const std::vector<DocumentVector>& docs() const { return docs_; }
  const DocumentVector& doc(std::size_t i) const { return docs_[i]; }
  const DocumentVector* find(const std::string& doc_id) const;

  const std::map<std::string, TermInfo>& vocabulary() const { return vocabulary_; }

  /// Unit-norm query vector over the index vocabulary; unseen terms are
  /// dropped, so the result may be empty.
  DocumentVector vectorize(const std::string& text) const;

  Query make_query(std::string query_id, std::string text) const;

 private:
  Index() = default;

  std::map<std::string, TermInfo> vocabulary_;
  std::vector<DocumentVector> docs_;  // sorted by doc_id
  std::map<std::string, uint32_t> doc_lookup_;
};

/// Scores every document by cosine with the query and keeps the top k.
/// Ties break by doc_id ascending.  k must be at least 1.
std::vector<ScoredDoc> retrieve_top_k(const Index& index, const Query& query,
                                      std::size_t k);

/// Corpus input: a directory of .txt files (doc_id = filename stem) or a
/// single file with one `doc_id<TAB>text` per line.
std::vector<Document> load_corpus(const std::string& path);

/// Query file: one `query_id<TAB>text` per line.
std::vector<Query> load_queries(const std::string& path, const Index& index);

}  // namespace fcair::text
