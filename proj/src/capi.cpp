#include "fcair/fcair.h"

#include <cstring>
#include <string>
#include <vector>

#include "cluster_engine.hpp"
#include "cluster_ranker.hpp"
#include "error.hpp"
#include "eval_harness.hpp"
#include "fca_engine.hpp"
#include "pipeline.hpp"
#include "synth_corpus.hpp"
#include "text_index.hpp"
#include "trec_io.hpp"

using fcair::Error;
using fcair::ErrorKind;

struct fcair_fca {
  fcair::fca::Automaton automaton;
};
struct fcair_index {
  fcair::text::Index index;
};
struct fcair_queries {
  std::vector<fcair::text::Query> queries;
};
struct fcair_qrels {
  fcair::eval::Qrels qrels;
};
struct fcair_run {
  fcair::trec::Run run;
};
struct fcair_partitions {
  std::vector<fcair::cluster::PartitionResult> partitions;
};
struct fcair_report {
  fcair::eval::PrecisionReport report;
};

namespace {

thread_local std::string g_last_error;

fcair_status status_of(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::invalid_argument:
      return FCAIR_ERR_INVALID_ARGUMENT;
    case ErrorKind::io:
      return FCAIR_ERR_IO;
    case ErrorKind::parse:
      return FCAIR_ERR_PARSE;
    case ErrorKind::not_found:
      return FCAIR_ERR_NOT_FOUND;
  }
  return FCAIR_ERR_INTERNAL;
}

template <typename Fn>
fcair_status guarded(Fn&& fn) noexcept {
  try {
    fn();
    g_last_error.clear();
    return FCAIR_OK;
  } catch (const Error& e) {
    g_last_error = e.what();
    return status_of(e.kind());
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return FCAIR_ERR_INTERNAL;
  } catch (...) {
    g_last_error = "unknown error";
    return FCAIR_ERR_INTERNAL;
  }
}

void require(bool condition, const char* message) {
  if (!condition) throw Error(ErrorKind::invalid_argument, message);
}

}  // namespace

extern "C" {

const char* fcair_last_error(void) { return g_last_error.c_str(); }

/* ---- fuzzy cellular automaton ------------------------------------------ */

fcair_status fcair_fca_create(const unsigned* rule_codes, size_t n_codes,
                              size_t n_cells, unsigned max_steps, fcair_fca** out) {
  return guarded([&] {
    require(rule_codes != nullptr && out != nullptr, "null argument");
    require(n_codes >= 1, "need at least one rule code");
    auto rules = fcair::fca::RuleVector::cyclic({rule_codes, n_codes}, n_cells);
    *out = new fcair_fca{fcair::fca::Automaton(std::move(rules), max_steps)};
  });
}

void fcair_fca_free(fcair_fca* fca) { delete fca; }

size_t fcair_fca_cells(const fcair_fca* fca) {
  return fca == nullptr ? 0 : fca->automaton.size();
}

fcair_status fcair_fca_matrix(const fcair_fca* fca, unsigned char* out, size_t cap) {
  return guarded([&] {
    require(fca != nullptr && out != nullptr, "null argument");
    const size_t n = fca->automaton.size();
    require(cap >= n * n, "matrix buffer too small");
    const auto& matrix = fca->automaton.matrix();
    for (size_t i = 0; i < n; ++i) {
      for (size_t j = 0; j < n; ++j) {
        out[i * n + j] = matrix.entry(i, j) ? 1 : 0;
      }
    }
  });
}

fcair_status fcair_fca_step(const fcair_fca* fca, const double* state, size_t n,
                            double* next) {
  return guarded([&] {
    require(fca != nullptr && state != nullptr && next != nullptr, "null argument");
    fcair::fca::State p(state, state + n);
    fcair::fca::State result = fca->automaton.step(p);
    std::memcpy(next, result.data(), n * sizeof(double));
  });
}

fcair_status fcair_fca_evolve(const fcair_fca* fca, const double* p0, size_t n,
                              double* states, size_t cap, size_t* n_states,
                              int* terminal, double* attractor) {
  return guarded([&] {
    require(fca != nullptr && p0 != nullptr && states != nullptr &&
                n_states != nullptr && terminal != nullptr && attractor != nullptr,
            "null argument");
    require(n == fca->automaton.size(), "state dimension mismatch");
    fcair::fca::State start(p0, p0 + n);
    fcair::fca::Trajectory t = fca->automaton.evolve(start);
    require(cap >= t.states.size(), "state buffer too small");
    for (size_t i = 0; i < t.states.size(); ++i) {
      std::memcpy(states + i * n, t.states[i].data(), n * sizeof(double));
    }
    *n_states = t.states.size();
    switch (t.terminal_kind) {
      case fcair::fca::TerminalKind::fixed_point:
        *terminal = FCAIR_TERMINAL_FIXED_POINT;
        break;
      case fcair::fca::TerminalKind::cycle:
        *terminal = FCAIR_TERMINAL_CYCLE;
        break;
      case fcair::fca::TerminalKind::step_cap:
        *terminal = FCAIR_TERMINAL_STEP_CAP;
        break;
    }
    std::memcpy(attractor, t.attractor.data(), n * sizeof(double));
  });
}

fcair_status fcair_fca_encode(const double* v, size_t m, size_t n_cells,
                              double* cells) {
  return guarded([&] {
    require(v != nullptr && cells != nullptr, "null argument");
    fcair::fca::State encoded = fcair::fca::encode_vector({v, m}, n_cells);
    std::memcpy(cells, encoded.data(), n_cells * sizeof(double));
  });
}

/* ---- index and retrieval ------------------------------------------------ */

fcair_status fcair_index_build(const char* corpus_path, fcair_index** out) {
  return guarded([&] {
    require(corpus_path != nullptr && out != nullptr, "null argument");
    auto docs = fcair::text::load_corpus(corpus_path);
    *out = new fcair_index{fcair::text::Index::build(std::move(docs))};
  });
}

fcair_status fcair_index_save(const fcair_index* index, const char* path) {
  return guarded([&] {
    require(index != nullptr && path != nullptr, "null argument");
    index->index.save(path);
  });
}

fcair_status fcair_index_load(const char* path, fcair_index** out) {
  return guarded([&] {
    require(path != nullptr && out != nullptr, "null argument");
    *out = new fcair_index{fcair::text::Index::load(path)};
  });
}

size_t fcair_index_docs(const fcair_index* index) {
  return index == nullptr ? 0 : index->index.doc_count();
}

size_t fcair_index_terms(const fcair_index* index) {
  return index == nullptr ? 0 : index->index.vocab_size();
}

void fcair_index_free(fcair_index* index) { delete index; }

fcair_status fcair_queries_load(const char* path, const fcair_index* index,
                                fcair_queries** out) {
  return guarded([&] {
    require(path != nullptr && index != nullptr && out != nullptr, "null argument");
    *out = new fcair_queries{fcair::text::load_queries(path, index->index)};
  });
}

size_t fcair_queries_count(const fcair_queries* queries) {
  return queries == nullptr ? 0 : queries->queries.size();
}

void fcair_queries_free(fcair_queries* queries) { delete queries; }

fcair_status fcair_search(const fcair_index* index, const fcair_queries* queries,
                          size_t depth, unsigned threads, const char* tag,
                          fcair_run** out) {
  return guarded([&] {
    require(index != nullptr && queries != nullptr && out != nullptr, "null argument");
    *out = new fcair_run{fcair::pipeline::search_all(
        index->index, queries->queries, depth, threads,
        tag != nullptr ? tag : "baseline")};
  });
}

fcair_status fcair_run_save(const fcair_run* run, const char* path) {
  return guarded([&] {
    require(run != nullptr && path != nullptr, "null argument");
    fcair::trec::save_run(run->run, path);
  });
}

fcair_status fcair_run_load(const char* path, fcair_run** out) {
  return guarded([&] {
    require(path != nullptr && out != nullptr, "null argument");
    *out = new fcair_run{fcair::trec::load_run(path)};
  });
}

const char* fcair_run_tag(const fcair_run* run) {
  return run == nullptr ? "" : run->run.tag.c_str();
}

fcair_status fcair_run_set_tag(fcair_run* run, const char* tag) {
  return guarded([&] {
    require(run != nullptr && tag != nullptr, "null argument");
    run->run.tag = tag;
  });
}

void fcair_run_free(fcair_run* run) { delete run; }

/* ---- clustering --------------------------------------------------------- */

fcair_status fcair_cluster(const fcair_index* index, const fcair_run* baseline,
                           size_t k, uint64_t seed, size_t max_iters,
                           unsigned threads, int compare_kmeans,
                           fcair_partitions** out) {
  return guarded([&] {
    require(index != nullptr && baseline != nullptr && out != nullptr,
            "null argument");
    *out = new fcair_partitions{
        fcair::pipeline::cluster_all(index->index, baseline->run, k, seed,
                                     max_iters, threads, compare_kmeans != 0)};
  });
}

size_t fcair_partitions_count(const fcair_partitions* parts) {
  return parts == nullptr ? 0 : parts->partitions.size();
}

const char* fcair_partitions_query(const fcair_partitions* parts, size_t i) {
  if (parts == nullptr || i >= parts->partitions.size()) return "";
  return parts->partitions[i].query_id.c_str();
}

double fcair_partitions_energy(const fcair_partitions* parts, size_t i) {
  if (parts == nullptr || i >= parts->partitions.size()) return 0.0;
  return parts->partitions[i].energy;
}

size_t fcair_partitions_iterations(const fcair_partitions* parts, size_t i) {
  if (parts == nullptr || i >= parts->partitions.size()) return 0;
  return parts->partitions[i].iterations;
}

double fcair_partitions_kmeans_energy(const fcair_partitions* parts, size_t i) {
  if (parts == nullptr || i >= parts->partitions.size()) return -1.0;
  return parts->partitions[i].kmeans_energy;
}

fcair_status fcair_partitions_save(const fcair_partitions* parts, const char* dir) {
  return guarded([&] {
    require(parts != nullptr && dir != nullptr, "null argument");
    fcair::pipeline::save_partitions(parts->partitions, dir);
  });
}

fcair_status fcair_partitions_load(const char* dir, fcair_partitions** out) {
  return guarded([&] {
    require(dir != nullptr && out != nullptr, "null argument");
    *out = new fcair_partitions{fcair::pipeline::load_partitions(dir)};
  });
}

void fcair_partitions_free(fcair_partitions* parts) { delete parts; }

/* ---- cluster ranking ---------------------------------------------------- */

fcair_status fcair_rank(const fcair_partitions* parts, const fcair_index* index,
                        const fcair_queries* queries, const fcair_qrels* qrels,
                        fcair_rank_mode mode, const fcair_fca* fca,
                        unsigned threads, const char* tag, fcair_run** out) {
  return guarded([&] {
    require(parts != nullptr && index != nullptr && queries != nullptr &&
                out != nullptr,
            "null argument");
    fcair::pipeline::RankMode rank_mode;
    if (mode == FCAIR_RANK_LQ) {
      rank_mode = fcair::pipeline::RankMode::lq;
    } else if (mode == FCAIR_RANK_LC) {
      rank_mode = fcair::pipeline::RankMode::lc;
    } else {
      throw Error(ErrorKind::invalid_argument, "unknown rank mode");
    }
    fcair::rank::FcaConfig config;
    if (fca != nullptr) {
      config.rule_codes = fca->automaton.rules().codes();
      config.cells = fca->automaton.size();
      config.max_steps = fca->automaton.max_steps();
    } else if (mode == FCAIR_RANK_LC) {
      throw Error(ErrorKind::invalid_argument, "lc ranking requires an automaton");
    }
    *out = new fcair_run{fcair::pipeline::rank_all(
        parts->partitions, index->index, queries->queries, rank_mode,
        qrels != nullptr ? &qrels->qrels : nullptr, config, threads,
        tag != nullptr ? tag : (mode == FCAIR_RANK_LQ ? "lq" : "lc"))};
  });
}

/* ---- evaluation --------------------------------------------------------- */

fcair_status fcair_qrels_load(const char* path, fcair_qrels** out) {
  return guarded([&] {
    require(path != nullptr && out != nullptr, "null argument");
    *out = new fcair_qrels{fcair::eval::Qrels::load(path)};
  });
}

void fcair_qrels_free(fcair_qrels* qrels) { delete qrels; }

fcair_status fcair_evaluate(const fcair_run* run, const fcair_qrels* qrels,
                            fcair_report** out) {
  return guarded([&] {
    require(run != nullptr && qrels != nullptr && out != nullptr, "null argument");
    *out = new fcair_report{fcair::eval::evaluate(run->run, qrels->qrels)};
  });
}

fcair_status fcair_report_macro(const fcair_report* report, const char* metric,
                                double* out) {
  return guarded([&] {
    require(report != nullptr && metric != nullptr && out != nullptr,
            "null argument");
    const auto& macro = report->report.macro;
    std::string name(metric);
    if (name == "P@5") {
      *out = macro.p5;
    } else if (name == "P@10") {
      *out = macro.p10;
    } else if (name == "P@20") {
      *out = macro.p20;
    } else if (name == "AP") {
      *out = macro.ap;
    } else {
      throw Error(ErrorKind::invalid_argument, "unknown metric '" + name + "'");
    }
  });
}

fcair_status fcair_report_save_csv(const fcair_report* report,
                                   const char* report_path, const char* curve_path) {
  return guarded([&] {
    require(report != nullptr, "null argument");
    if (report_path != nullptr) {
      fcair::eval::save_report_csv(report->report, report_path);
    }
    if (curve_path != nullptr) {
      fcair::eval::save_curve_csv(report->report, curve_path);
    }
  });
}

fcair_status fcair_report_compare_csv(const fcair_report* base,
                                      const fcair_report* other, const char* path) {
  return guarded([&] {
    require(base != nullptr && other != nullptr && path != nullptr,
            "null argument");
    auto rows = fcair::eval::compare_runs(base->report, other->report);
    fcair::eval::save_compare_csv(rows, path);
  });
}

void fcair_report_free(fcair_report* report) { delete report; }

/* ---- synthetic corpus --------------------------------------------------- */

fcair_status fcair_synth(uint32_t topics, uint32_t docs_per_topic, uint32_t vocab_size,
                         double concentration, double noise, uint64_t seed,
                         uint32_t doc_length, uint32_t query_terms,
                         const char* out_dir) {
  return guarded([&] {
    require(out_dir != nullptr, "null argument");
    fcair::synth::SynthSpec spec;
    spec.topics = topics;
    spec.docs_per_topic = docs_per_topic;
    spec.vocab_size = vocab_size;
    spec.concentration = concentration;
    spec.noise = noise;
    spec.seed = seed;
    if (doc_length > 0) spec.doc_length = doc_length;
    if (query_terms > 0) spec.query_terms = query_terms;
    fcair::synth::write_synth(fcair::synth::synth_corpus(spec), out_dir);
  });
}

}  // extern "C"
