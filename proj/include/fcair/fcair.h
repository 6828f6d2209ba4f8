/* fcair - query-specific document clustering with a fuzzy cellular automata
 * cluster ranker.
 *
 * C API of the shared library.  All functions return fcair_status; on any
 * failure fcair_last_error() carries a message for the calling thread.
 * Objects returned through out-parameters are owned by the caller and must
 * be released with the matching *_free function.
 */
#ifndef FCAIR_H
#define FCAIR_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define FCAIR_API __declspec(dllexport)
#else
#define FCAIR_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum fcair_status {
  FCAIR_OK = 0,
  FCAIR_ERR_INVALID_ARGUMENT = 1,
  FCAIR_ERR_IO = 2,
  FCAIR_ERR_PARSE = 3,
  FCAIR_ERR_NOT_FOUND = 4,
  FCAIR_ERR_INTERNAL = 5
} fcair_status;

/* Message for the calling thread's most recent failed call; empty string
 * after a success. The pointer stays valid until the thread's next call. */
FCAIR_API const char* fcair_last_error(void);

typedef struct fcair_fca fcair_fca;
typedef struct fcair_index fcair_index;
typedef struct fcair_queries fcair_queries;
typedef struct fcair_qrels fcair_qrels;
typedef struct fcair_run fcair_run;
typedef struct fcair_partitions fcair_partitions;
typedef struct fcair_report fcair_report;

/* ---- fuzzy cellular automaton ------------------------------------------ */

typedef enum fcair_terminal {
  FCAIR_TERMINAL_FIXED_POINT = 0,
  FCAIR_TERMINAL_CYCLE = 1,
  FCAIR_TERMINAL_STEP_CAP = 2
} fcair_terminal;

/* Builds an n_cells-cell null-boundary hybrid automaton.  rule_codes
 * (length n_codes >= 1) repeat cyclically when n_codes < n_cells.  Codes
 * must come from the 16-rule table: 0, 170, 204, 238, 240, 250, 252, 254
 * and their complements 255, 85, 51, 17, 15, 5, 3, 1. */
FCAIR_API fcair_status fcair_fca_create(const unsigned* rule_codes, size_t n_codes,
                                        size_t n_cells, unsigned max_steps,
                                        fcair_fca** out);
FCAIR_API void fcair_fca_free(fcair_fca* fca);

FCAIR_API size_t fcair_fca_cells(const fcair_fca* fca);

/* Writes the n*n 0/1 dependency matrix row-major into out (capacity cap). */
FCAIR_API fcair_status fcair_fca_matrix(const fcair_fca* fca, unsigned char* out,
                                        size_t cap);

/* One synchronous update of an n-component state in [0,1]^n. */
FCAIR_API fcair_status fcair_fca_step(const fcair_fca* fca, const double* state,
                                      size_t n, double* next);

/* Evolves p0 until a state repeats exactly or max_steps updates were
 * applied.  states receives the visited states row-major (capacity cap
 * states; cap >= max_steps + 2 always suffices; the repeated state is
 * included), *n_states the number written, *terminal the outcome and
 * attractor (n doubles) the fixed point / cycle representative. */
FCAIR_API fcair_status fcair_fca_evolve(const fcair_fca* fca, const double* p0,
                                        size_t n, double* states, size_t cap,
                                        size_t* n_states, int* terminal,
                                        double* attractor);

/* Bucket-mean encoding of an m-dimensional vector into n_cells cells,
 * clamped to [0,1]; requires m >= n_cells >= 1. */
FCAIR_API fcair_status fcair_fca_encode(const double* v, size_t m, size_t n_cells,
                                        double* cells);

/* ---- index and retrieval ------------------------------------------------ */

/* corpus_path: directory of .txt files (doc_id = file stem) or a file of
 * doc_id<TAB>text lines. */
FCAIR_API fcair_status fcair_index_build(const char* corpus_path, fcair_index** out);
FCAIR_API fcair_status fcair_index_save(const fcair_index* index, const char* path);
FCAIR_API fcair_status fcair_index_load(const char* path, fcair_index** out);
FCAIR_API size_t fcair_index_docs(const fcair_index* index);
FCAIR_API size_t fcair_index_terms(const fcair_index* index);
FCAIR_API void fcair_index_free(fcair_index* index);

/* Query file: query_id<TAB>text lines, vectorized against the index. */
FCAIR_API fcair_status fcair_queries_load(const char* path, const fcair_index* index,
                                          fcair_queries** out);
FCAIR_API size_t fcair_queries_count(const fcair_queries* queries);
FCAIR_API void fcair_queries_free(fcair_queries* queries);

/* Cosine retrieval of the top `depth` documents per query. */
FCAIR_API fcair_status fcair_search(const fcair_index* index,
                                    const fcair_queries* queries, size_t depth,
                                    unsigned threads, const char* tag,
                                    fcair_run** out);

/* TREC run files: query_id Q0 doc_id rank score tag. */
FCAIR_API fcair_status fcair_run_save(const fcair_run* run, const char* path);
FCAIR_API fcair_status fcair_run_load(const char* path, fcair_run** out);
FCAIR_API const char* fcair_run_tag(const fcair_run* run);
FCAIR_API fcair_status fcair_run_set_tag(fcair_run* run, const char* tag);
FCAIR_API void fcair_run_free(fcair_run* run);

/* ---- clustering --------------------------------------------------------- */

/* Clusters each query's retrieved set into k clusters by steepest-descent
 * local search.  max_iters 0 selects the 10x-document-count safety cap.
 * With compare_kmeans nonzero, a second partition from the identical seeded
 * start is driven by repeated spherical K-Means passes and its final energy
 * is recorded alongside each result. */
FCAIR_API fcair_status fcair_cluster(const fcair_index* index, const fcair_run* baseline,
                                     size_t k, uint64_t seed, size_t max_iters,
                                     unsigned threads, int compare_kmeans,
                                     fcair_partitions** out);

FCAIR_API size_t fcair_partitions_count(const fcair_partitions* parts);
FCAIR_API const char* fcair_partitions_query(const fcair_partitions* parts, size_t i);
FCAIR_API double fcair_partitions_energy(const fcair_partitions* parts, size_t i);
FCAIR_API size_t fcair_partitions_iterations(const fcair_partitions* parts, size_t i);
/* Final energy of the K-Means comparison run; negative when not computed. */
FCAIR_API double fcair_partitions_kmeans_energy(const fcair_partitions* parts,
                                                size_t i);

/* One JSON file per query under dir. */
FCAIR_API fcair_status fcair_partitions_save(const fcair_partitions* parts,
                                             const char* dir);
FCAIR_API fcair_status fcair_partitions_load(const char* dir, fcair_partitions** out);
FCAIR_API void fcair_partitions_free(fcair_partitions* parts);

/* ---- cluster ranking ---------------------------------------------------- */

typedef enum fcair_rank_mode {
  FCAIR_RANK_LQ = 0, /* clusters by relevant-document count (needs qrels) */
  FCAIR_RANK_LC = 1  /* clusters by CA-attractor distance to the query */
} fcair_rank_mode;

/* Flattens cluster orderings into a ranked run.  qrels may be NULL for
 * FCAIR_RANK_LC; fca may be NULL for FCAIR_RANK_LQ. */
FCAIR_API fcair_status fcair_rank(const fcair_partitions* parts,
                                  const fcair_index* index,
                                  const fcair_queries* queries,
                                  const fcair_qrels* qrels, fcair_rank_mode mode,
                                  const fcair_fca* fca, unsigned threads,
                                  const char* tag, fcair_run** out);

/* ---- evaluation --------------------------------------------------------- */

/* TREC qrels: query_id 0 doc_id relevance. */
FCAIR_API fcair_status fcair_qrels_load(const char* path, fcair_qrels** out);
FCAIR_API void fcair_qrels_free(fcair_qrels* qrels);

FCAIR_API fcair_status fcair_evaluate(const fcair_run* run, const fcair_qrels* qrels,
                                      fcair_report** out);

/* metric: "P@5", "P@10", "P@20" or "AP"; writes the macro average. */
FCAIR_API fcair_status fcair_report_macro(const fcair_report* report,
                                          const char* metric, double* out);

/* Per-query metric rows plus a macro block / 11-point macro curve. */
FCAIR_API fcair_status fcair_report_save_csv(const fcair_report* report,
                                             const char* report_path,
                                             const char* curve_path);

/* Relative-change table between two reports over the same query set. */
FCAIR_API fcair_status fcair_report_compare_csv(const fcair_report* base,
                                                const fcair_report* other,
                                                const char* path);
FCAIR_API void fcair_report_free(fcair_report* report);

/* ---- synthetic corpus --------------------------------------------------- */

/* Writes corpus.tsv, queries.tsv and qrels.txt under out_dir.  doc_length
 * and query_terms of 0 select the defaults (40 and 5). */
FCAIR_API fcair_status fcair_synth(uint32_t topics, uint32_t docs_per_topic,
                                   uint32_t vocab_size, double concentration,
                                   double noise, uint64_t seed, uint32_t doc_length,
                                   uint32_t query_terms, const char* out_dir);

#ifdef __cplusplus
}
#endif

#endif /* FCAIR_H */
