#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "eval_harness.hpp"
#include "text_index.hpp"

namespace fcair::synth {

/// Planted-topic corpus parameters.  The seed fixes the entire corpus,
/// query set and qrels byte-for-byte.
struct SynthSpec {
  uint32_t topics = 4;
  uint32_t docs_per_topic = 50;
  uint32_t vocab_size = 400;
  double concentration = 1.0;  // Zipf exponent of the within-topic term draw
  double noise = 0.2;          // probability a token comes from the full vocabulary
  uint64_t seed = 1;
  uint32_t doc_length = 40;    // tokens per document
  uint32_t query_terms = 5;    // highest-concentration terms forming each query
};

struct SynthData {
  std::vector<text::Document> documents;
  std::vector<std::pair<std::string, std::string>> queries;  // (query_id, text)
  eval::Qrels qrels;
};

/// Generates T disjoint topic term pools; each document draws its tokens
/// from its topic's pool with probability 1 - noise and uniformly from the
/// whole vocabulary otherwise.  One query per topic, built from that
/// topic's highest-weight terms; a document is relevant to a query exactly
/// when its topic generated it.
SynthData synth_corpus(const SynthSpec& spec);

/// Writes corpus.tsv, queries.tsv and qrels.txt under out_dir.
void write_synth(const SynthData& data, const std::string& out_dir);

}  // namespace fcair::synth
