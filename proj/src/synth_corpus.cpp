#include "synth_corpus.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "error.hpp"
#include "rng.hpp"

namespace fs = std::filesystem;

namespace fcair::synth {

namespace {

std::string padded(const char* prefix, uint32_t value, int width) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%s%0*u", prefix, width, value);
  return buf;
}

void validate(const SynthSpec& spec) {
  if (spec.topics < 1 || spec.docs_per_topic < 1 || spec.vocab_size < 1 ||
      spec.doc_length < 1 || spec.query_terms < 1) {
    throw Error(ErrorKind::invalid_argument, "synth parameters must be positive");
  }
  if (spec.noise < 0.0 || spec.noise >= 1.0) {
    throw Error(ErrorKind::invalid_argument, "noise rate must lie in [0, 1)");
  }
  if (spec.concentration < 0.0) {
    throw Error(ErrorKind::invalid_argument, "concentration must be non-negative");
  }
  if (spec.vocab_size < spec.topics) {
    throw Error(ErrorKind::invalid_argument,
                "vocabulary too small: " + std::to_string(spec.vocab_size) +
                    " terms for " + std::to_string(spec.topics) + " topics");
  }
  if (spec.query_terms > spec.vocab_size / spec.topics) {
    throw Error(ErrorKind::invalid_argument,
                "query_terms exceeds the per-topic pool size");
  }
}

}  // namespace

SynthData synth_corpus(const SynthSpec& spec) {
  validate(spec);

  const uint32_t pool_size = spec.vocab_size / spec.topics;
  const int term_width = std::max(2, static_cast<int>(std::to_string(spec.vocab_size - 1).size()));
  const int topic_width = std::max(2, static_cast<int>(std::to_string(spec.topics).size()));
  const int doc_width = std::max(4, static_cast<int>(std::to_string(spec.docs_per_topic).size()));

  std::vector<std::string> terms;
  terms.reserve(spec.vocab_size);
  for (uint32_t t = 0; t < spec.vocab_size; ++t) {
    terms.push_back(padded("w", t, term_width));
  }

  // Zipf-style cumulative weights over pool positions, shared by all topics.
  std::vector<double> cumulative(pool_size);
  double total = 0.0;
  for (uint32_t j = 0; j < pool_size; ++j) {
    total += std::pow(static_cast<double>(j + 1), -spec.concentration);
    cumulative[j] = total;
  }

  Rng rng(spec.seed);
  auto draw_pool_position = [&]() -> uint32_t {
    double u = rng.next_unit() * total;
    auto it = std::lower_bound(cumulative.begin(), cumulative.end(), u);
    if (it == cumulative.end()) return pool_size - 1;
    return static_cast<uint32_t>(it - cumulative.begin());
  };

  SynthData data;
  for (uint32_t topic = 0; topic < spec.topics; ++topic) {
    const uint32_t pool_start = topic * pool_size;
    std::string query_id = padded("q", topic + 1, topic_width);

    std::string query_text;
    for (uint32_t q = 0; q < spec.query_terms; ++q) {
      if (q > 0) query_text.push_back(' ');
      query_text += terms[pool_start + q];
    }
    data.queries.emplace_back(query_id, std::move(query_text));

    for (uint32_t d = 0; d < spec.docs_per_topic; ++d) {
      std::string doc_id =
          padded("s", topic + 1, topic_width) + padded("d", d + 1, doc_width);
      std::string text;
      for (uint32_t tok = 0; tok < spec.doc_length; ++tok) {
        if (tok > 0) text.push_back(' ');
        uint32_t term_index;
        if (rng.next_unit() < spec.noise) {
          term_index = static_cast<uint32_t>(rng.next_index(spec.vocab_size));
        } else {
          term_index = pool_start + draw_pool_position();
        }
        text += terms[term_index];
      }
      data.qrels.add(query_id, doc_id, 1);
      data.documents.push_back(text::Document{std::move(doc_id), std::move(text)});
    }
  }
  return data;
}

void write_synth(const SynthData& data, const std::string& out_dir) {
  fs::path dir(out_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) {
    throw Error(ErrorKind::io, "cannot create output directory '" + out_dir + "'");
  }

  {
    std::ofstream out(dir / "corpus.tsv", std::ios::binary);
    if (!out) {
      throw Error(ErrorKind::io, "cannot write corpus.tsv under '" + out_dir + "'");
    }
    for (const text::Document& d : data.documents) {
      out << d.doc_id << '\t' << d.text << '\n';
    }
    if (!out) {
      throw Error(ErrorKind::io, "failed writing corpus.tsv");
    }
  }
  {
    std::ofstream out(dir / "queries.tsv", std::ios::binary);
    if (!out) {
      throw Error(ErrorKind::io, "cannot write queries.tsv under '" + out_dir + "'");
    }
    for (const auto& [qid, text] : data.queries) {
      out << qid << '\t' << text << '\n';
    }
    if (!out) {
      throw Error(ErrorKind::io, "failed writing queries.tsv");
    }
  }
  data.qrels.save((dir / "qrels.txt").string());
}

}  // namespace fcair::synth
