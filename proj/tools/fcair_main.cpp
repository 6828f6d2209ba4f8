// Command-line front end for the fcair shared library.  Everything goes
// through the public C API in fcair/fcair.h.

#include <cstdint>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <iostream>
#include <memory>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "fcair/fcair.h"
#include "config.hpp"

namespace fs = std::filesystem;
using fcair::cli::Config;

namespace {

struct CliError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void check(fcair_status status, const std::string& what) {
  if (status != FCAIR_OK) {
    throw CliError(what + ": " + fcair_last_error());
  }
}

template <auto FreeFn>
struct FnDeleter {
  template <typename T>
  void operator()(T* p) const {
    FreeFn(p);
  }
};

using IndexHandle = std::unique_ptr<fcair_index, FnDeleter<&fcair_index_free>>;
using QueriesHandle = std::unique_ptr<fcair_queries, FnDeleter<&fcair_queries_free>>;
using QrelsHandle = std::unique_ptr<fcair_qrels, FnDeleter<&fcair_qrels_free>>;
using RunHandle = std::unique_ptr<fcair_run, FnDeleter<&fcair_run_free>>;
using PartitionsHandle =
    std::unique_ptr<fcair_partitions, FnDeleter<&fcair_partitions_free>>;
using ReportHandle = std::unique_ptr<fcair_report, FnDeleter<&fcair_report_free>>;
using FcaHandle = std::unique_ptr<fcair_fca, FnDeleter<&fcair_fca_free>>;

IndexHandle load_index(const std::string& path) {
  fcair_index* raw = nullptr;
  check(fcair_index_load(path.c_str(), &raw), "loading index '" + path + "'");
  return IndexHandle(raw);
}

QueriesHandle load_queries(const std::string& path, const fcair_index* index) {
  fcair_queries* raw = nullptr;
  check(fcair_queries_load(path.c_str(), index, &raw),
        "loading queries '" + path + "'");
  return QueriesHandle(raw);
}

QrelsHandle load_qrels(const std::string& path) {
  fcair_qrels* raw = nullptr;
  check(fcair_qrels_load(path.c_str(), &raw), "loading qrels '" + path + "'");
  return QrelsHandle(raw);
}

RunHandle load_run(const std::string& path) {
  fcair_run* raw = nullptr;
  check(fcair_run_load(path.c_str(), &raw), "loading run '" + path + "'");
  return RunHandle(raw);
}

std::vector<unsigned> parse_rule_list(const std::string& text) {
  std::vector<unsigned> codes;
  std::string item;
  std::stringstream in(text);
  while (std::getline(in, item, ',')) {
    try {
      std::size_t pos = 0;
      unsigned long value = std::stoul(item, &pos);
      if (pos != item.size()) throw std::invalid_argument("trailing characters");
      codes.push_back(static_cast<unsigned>(value));
    } catch (const std::exception&) {
      throw CliError("bad rule number '" + item + "' in '" + text + "'");
    }
  }
  if (codes.empty()) throw CliError("empty rule list '" + text + "'");
  return codes;
}

std::vector<double> parse_state_list(const std::string& text) {
  std::vector<double> state;
  std::string item;
  std::stringstream in(text);
  while (std::getline(in, item, ',')) {
    try {
      std::size_t pos = 0;
      double value = std::stod(item, &pos);
      if (pos != item.size()) throw std::invalid_argument("trailing characters");
      state.push_back(value);
    } catch (const std::exception&) {
      throw CliError("bad state value '" + item + "' in '" + text + "'");
    }
  }
  if (state.empty()) throw CliError("empty state list '" + text + "'");
  return state;
}

FcaHandle make_fca(const std::string& rules, std::size_t cells, unsigned max_steps) {
  std::vector<unsigned> codes = parse_rule_list(rules);
  fcair_fca* raw = nullptr;
  check(fcair_fca_create(codes.data(), codes.size(), cells, max_steps, &raw),
        "building automaton");
  return FcaHandle(raw);
}

std::string file_stem(const std::string& path) {
  return fs::path(path).stem().string();
}

void ensure_parent_dir(const std::string& path) {
  fs::path parent = fs::path(path).parent_path();
  if (parent.empty()) return;
  std::error_code ec;
  fs::create_directories(parent, ec);
  if (ec) throw CliError("cannot create directory '" + parent.string() + "'");
}

int cmd_index(const std::string& corpus, const std::string& out) {
  fcair_index* raw = nullptr;
  check(fcair_index_build(corpus.c_str(), &raw), "indexing '" + corpus + "'");
  IndexHandle index(raw);
  ensure_parent_dir(out);
  check(fcair_index_save(index.get(), out.c_str()), "saving index '" + out + "'");
  std::cout << "indexed " << fcair_index_docs(index.get()) << " documents, "
            << fcair_index_terms(index.get()) << " terms -> " << out << "\n";
  return 0;
}

int cmd_search(const std::string& index_path, const std::string& queries_path,
               std::size_t depth, unsigned threads, const std::string& tag,
               const std::string& out) {
  IndexHandle index = load_index(index_path);
  QueriesHandle queries = load_queries(queries_path, index.get());
  fcair_run* raw = nullptr;
  check(fcair_search(index.get(), queries.get(), depth, threads, tag.c_str(), &raw),
        "searching");
  RunHandle run(raw);
  ensure_parent_dir(out);
  check(fcair_run_save(run.get(), out.c_str()), "saving run '" + out + "'");
  std::cout << "searched " << fcair_queries_count(queries.get())
            << " queries at depth " << depth << " -> " << out << "\n";
  return 0;
}

void cluster_once(const fcair_index* index, const fcair_run* baseline, std::size_t k,
                  uint64_t seed, std::size_t max_iters, unsigned threads,
                  bool compare_kmeans, const std::string& out_dir) {
  fcair_partitions* raw = nullptr;
  check(fcair_cluster(index, baseline, k, seed, max_iters, threads,
                      compare_kmeans ? 1 : 0, &raw),
        "clustering (k=" + std::to_string(k) + ")");
  PartitionsHandle parts(raw);
  check(fcair_partitions_save(parts.get(), out_dir.c_str()),
        "saving partitions under '" + out_dir + "'");
  for (std::size_t i = 0; i < fcair_partitions_count(parts.get()); ++i) {
    std::printf("k=%zu query=%s energy=%.6f iterations=%zu", k,
                fcair_partitions_query(parts.get(), i),
                fcair_partitions_energy(parts.get(), i),
                fcair_partitions_iterations(parts.get(), i));
    if (compare_kmeans) {
      double lsc = fcair_partitions_energy(parts.get(), i);
      double km = fcair_partitions_kmeans_energy(parts.get(), i);
      std::printf(" kmeans_energy=%.6f gain=%.6f", km, lsc - km);
    }
    std::printf("\n");
  }
}

int cmd_cluster(const std::string& index_path, const std::string& run_path,
                std::size_t k, const std::string& sweep, uint64_t seed,
                std::size_t max_iters, unsigned threads, bool compare_kmeans,
                const std::string& out_dir) {
  IndexHandle index = load_index(index_path);
  RunHandle baseline = load_run(run_path);
  if (sweep.empty()) {
    cluster_once(index.get(), baseline.get(), k, seed, max_iters, threads,
                 compare_kmeans, out_dir);
    return 0;
  }
  auto sep = sweep.find("..");
  if (sep == std::string::npos) {
    throw CliError("--k-sweep expects 'min..max', got '" + sweep + "'");
  }
  std::size_t lo = 0, hi = 0;
  try {
    lo = std::stoul(sweep.substr(0, sep));
    hi = std::stoul(sweep.substr(sep + 2));
  } catch (const std::exception&) {
    throw CliError("--k-sweep expects 'min..max', got '" + sweep + "'");
  }
  if (lo < 1 || hi < lo) {
    throw CliError("--k-sweep needs 1 <= min <= max, got '" + sweep + "'");
  }
  for (std::size_t kk = lo; kk <= hi; ++kk) {
    fs::path dir = fs::path(out_dir) / ("k" + std::to_string(kk));
    cluster_once(index.get(), baseline.get(), kk, seed, max_iters, threads,
                 compare_kmeans, dir.string());
  }
  return 0;
}

int cmd_rank(const std::string& partitions_dir, const std::string& index_path,
             const std::string& queries_path, const std::string& mode,
             const std::string& qrels_path, const std::string& run_path,
             const std::string& rules, std::size_t cells, unsigned max_steps,
             unsigned threads, std::string tag, const std::string& out) {
  if (mode == "baseline") {
    if (run_path.empty()) {
      throw CliError("--mode baseline requires --run (the search run to pass through)");
    }
    RunHandle run = load_run(run_path);
    if (tag.empty()) tag = "baseline";
    check(fcair_run_set_tag(run.get(), tag.c_str()), "setting tag");
    ensure_parent_dir(out);
  check(fcair_run_save(run.get(), out.c_str()), "saving run '" + out + "'");
    std::cout << "passed '" << run_path << "' through -> " << out << "\n";
    return 0;
  }
  if (mode != "lq" && mode != "lc") {
    throw CliError("--mode must be lq, lc or baseline, got '" + mode + "'");
  }
  IndexHandle index = load_index(index_path);
  QueriesHandle queries = load_queries(queries_path, index.get());
  fcair_partitions* parts_raw = nullptr;
  check(fcair_partitions_load(partitions_dir.c_str(), &parts_raw),
        "loading partitions under '" + partitions_dir + "'");
  PartitionsHandle parts(parts_raw);

  QrelsHandle qrels;
  FcaHandle fca;
  fcair_rank_mode rank_mode;
  if (mode == "lq") {
    if (qrels_path.empty()) {
      throw CliError("--mode lq requires --qrels");
    }
    qrels = load_qrels(qrels_path);
    rank_mode = FCAIR_RANK_LQ;
    if (tag.empty()) tag = "lq";
  } else {
    fca = make_fca(rules, cells, max_steps);
    rank_mode = FCAIR_RANK_LC;
    if (tag.empty()) tag = "lc";
  }
  fcair_run* raw = nullptr;
  check(fcair_rank(parts.get(), index.get(), queries.get(), qrels.get(), rank_mode,
                   fca.get(), threads, tag.c_str(), &raw),
        "ranking (mode=" + mode + ")");
  RunHandle run(raw);
  ensure_parent_dir(out);
  check(fcair_run_save(run.get(), out.c_str()), "saving run '" + out + "'");
  std::cout << "ranked " << fcair_partitions_count(parts.get()) << " queries (mode="
            << mode << ") -> " << out << "\n";
  return 0;
}

int cmd_eval(const std::vector<std::string>& run_paths, const std::string& qrels_path,
             const std::string& out_dir) {
  QrelsHandle qrels = load_qrels(qrels_path);
  std::vector<RunHandle> runs;
  std::vector<ReportHandle> reports;
  for (const std::string& path : run_paths) {
    runs.push_back(load_run(path));
    fcair_report* raw = nullptr;
    check(fcair_evaluate(runs.back().get(), qrels.get(), &raw),
          "evaluating '" + path + "'");
    reports.emplace_back(raw);
  }
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) throw CliError("cannot create output directory '" + out_dir + "'");

  for (std::size_t i = 0; i < run_paths.size(); ++i) {
    std::string stem = file_stem(run_paths[i]);
    fs::path report_path = fs::path(out_dir) / ("report_" + stem + ".csv");
    fs::path curve_path = fs::path(out_dir) / ("curve_" + stem + ".csv");
    check(fcair_report_save_csv(reports[i].get(), report_path.string().c_str(),
                                curve_path.string().c_str()),
          "writing report for '" + run_paths[i] + "'");
    double ap = 0.0, p10 = 0.0;
    check(fcair_report_macro(reports[i].get(), "AP", &ap), "reading macro AP");
    check(fcair_report_macro(reports[i].get(), "P@10", &p10), "reading macro P@10");
    std::printf("%s: AP=%.6f P@10=%.6f\n", stem.c_str(), ap, p10);
  }
  for (std::size_t i = 1; i < run_paths.size(); ++i) {
    fs::path cmp = fs::path(out_dir) / ("compare_" + file_stem(run_paths[0]) +
                                        "_vs_" + file_stem(run_paths[i]) + ".csv");
    check(fcair_report_compare_csv(reports[0].get(), reports[i].get(),
                                   cmp.string().c_str()),
          "writing comparison");
  }
  return 0;
}

int cmd_ca_demo(const std::string& rules, const std::string& state_csv,
                unsigned max_steps) {
  std::vector<double> state = parse_state_list(state_csv);
  const std::size_t n = state.size();
  FcaHandle fca = make_fca(rules, n, max_steps);

  std::vector<unsigned char> matrix(n * n);
  check(fcair_fca_matrix(fca.get(), matrix.data(), matrix.size()), "reading matrix");
  std::cout << "rules: " << rules << "\n";
  std::cout << "dependency matrix:\n";
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      std::cout << (j ? " " : "") << int(matrix[i * n + j]);
    }
    std::cout << "\n";
  }

  std::size_t cap = max_steps + 2;
  std::vector<double> states(cap * n);
  std::vector<double> attractor(n);
  std::size_t n_states = 0;
  int terminal = 0;
  check(fcair_fca_evolve(fca.get(), state.data(), n, states.data(), cap, &n_states,
                         &terminal, attractor.data()),
        "evolving");

  // The final entry repeats an earlier state unless the cap was hit.
  std::size_t printed = (terminal == FCAIR_TERMINAL_STEP_CAP) ? n_states : n_states - 1;
  for (std::size_t t = 0; t < printed; ++t) {
    std::printf("P(%zu) = (", t);
    for (std::size_t i = 0; i < n; ++i) {
      std::printf("%s%.2f", i ? ", " : "", states[t * n + i]);
    }
    std::printf(")\n");
  }
  if (terminal == FCAIR_TERMINAL_FIXED_POINT) {
    std::printf("fixed point reached at t = %zu\n", printed - 1);
  } else if (terminal == FCAIR_TERMINAL_CYCLE) {
    std::size_t entry = 0;
    for (std::size_t t = 0; t + 1 < n_states; ++t) {
      if (std::memcmp(&states[t * n], &states[(n_states - 1) * n],
                      n * sizeof(double)) == 0) {
        entry = t;
        break;
      }
    }
    std::printf("cycle detected: t = %zu repeats t = %zu (period %zu)\n",
                n_states - 1, entry, n_states - 1 - entry);
  } else {
    std::printf("no repeat within %u steps\n", max_steps);
  }
  return 0;
}

int cmd_synth(uint32_t topics, uint32_t docs_per_topic, uint32_t vocab,
              double concentration, double noise, uint64_t seed, uint32_t doc_len,
              uint32_t query_terms, const std::string& out_dir) {
  check(fcair_synth(topics, docs_per_topic, vocab, concentration, noise, seed,
                    doc_len, query_terms, out_dir.c_str()),
        "generating synthetic corpus");
  std::cout << "wrote corpus.tsv, queries.tsv, qrels.txt under " << out_dir << " ("
            << topics << " topics x " << docs_per_topic << " docs)\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"query-specific document clustering with an FCA cluster ranker"};
  app.require_subcommand(1);
  app.fallthrough();  // global flags may follow the subcommand name

  std::string config_path;
  app.add_option("--config", config_path, "key = value config file; flags override");
  // Global values; per-command options named the same take precedence.
  Config cfg;

  uint64_t seed = cfg.seed;
  unsigned threads = cfg.threads;
  auto* seed_opt = app.add_option("--seed", seed, "random seed");
  auto* threads_opt = app.add_option("--threads", threads, "worker threads")
                          ->check(CLI::Range(1u, 256u));

  // index
  auto* index_cmd = app.add_subcommand("index", "build and save a TF-IDF index");
  std::string corpus_arg, index_out;
  auto* corpus_opt = index_cmd->add_option("--corpus", corpus_arg,
                                           "corpus directory or doc_id<TAB>text file");
  auto* index_out_opt = index_cmd->add_option("--out", index_out, "index JSON path");

  // search
  auto* search_cmd = app.add_subcommand("search", "baseline cosine retrieval");
  std::string search_index, search_queries, search_out, search_tag = "baseline";
  std::size_t depth = cfg.depth;
  auto* s_index_opt = search_cmd->add_option("--index", search_index, "index JSON path");
  auto* s_queries_opt =
      search_cmd->add_option("--queries", search_queries, "query_id<TAB>text file");
  auto* s_depth_opt = search_cmd->add_option("--depth", depth, "documents kept per query");
  search_cmd->add_option("--tag", search_tag, "run tag");
  auto* s_out_opt = search_cmd->add_option("--out", search_out, "output run file");

  // cluster
  auto* cluster_cmd =
      app.add_subcommand("cluster", "steepest-descent clustering of retrieved sets");
  std::string cl_index, cl_run, cl_out, cl_sweep;
  std::size_t cl_k = cfg.k;
  std::size_t cl_max_iters = cfg.lsc_max_iters;
  auto* c_index_opt = cluster_cmd->add_option("--index", cl_index, "index JSON path");
  auto* c_run_opt = cluster_cmd->add_option("--run", cl_run, "baseline run file");
  auto* c_k_opt = cluster_cmd->add_option("--k", cl_k, "cluster count");
  cluster_cmd->add_option("--k-sweep", cl_sweep,
                          "sweep cluster counts, e.g. 2..13 (writes k<K>/ subdirs)");
  auto* c_iters_opt = cluster_cmd->add_option("--max-iters", cl_max_iters,
                                              "LSC move cap (0 = 10x documents)");
  bool cl_compare_kmeans = false;
  cluster_cmd->add_flag("--compare-kmeans", cl_compare_kmeans,
                        "also run repeated K-Means from the same start and "
                        "report both energies");
  auto* c_out_opt = cluster_cmd->add_option("--out-dir", cl_out, "partition directory");

  // rank
  auto* rank_cmd = app.add_subcommand("rank", "order clusters and flatten to a run");
  std::string r_partitions, r_index, r_queries, r_mode = "lc", r_qrels, r_run, r_out,
              r_tag;
  std::string r_rules = cfg.rules;
  std::size_t r_cells = cfg.cells;
  unsigned r_max_steps = cfg.max_steps;
  auto* r_parts_opt =
      rank_cmd->add_option("--partitions", r_partitions, "partition directory");
  auto* r_index_opt = rank_cmd->add_option("--index", r_index, "index JSON path");
  auto* r_queries_opt = rank_cmd->add_option("--queries", r_queries, "query file");
  rank_cmd->add_option("--mode", r_mode, "lq, lc or baseline")->capture_default_str();
  auto* r_qrels_opt = rank_cmd->add_option("--qrels", r_qrels, "qrels (lq mode)");
  rank_cmd->add_option("--run", r_run, "search run (baseline mode)");
  auto* r_rules_opt = rank_cmd->add_option("--rules", r_rules, "FCA rule numbers");
  auto* r_cells_opt = rank_cmd->add_option("--cells", r_cells, "FCA cell count");
  auto* r_steps_opt = rank_cmd->add_option("--max-steps", r_max_steps, "FCA step cap");
  rank_cmd->add_option("--tag", r_tag, "run tag (defaults to the mode)");
  rank_cmd->add_option("--out", r_out, "output run file");

  // eval
  auto* eval_cmd = app.add_subcommand("eval", "score runs against qrels");
  std::vector<std::string> e_runs;
  std::string e_qrels, e_out;
  eval_cmd->add_option("--run", e_runs, "run file (repeatable; first is the baseline)")
      ->required();
  auto* e_qrels_opt = eval_cmd->add_option("--qrels", e_qrels, "qrels file");
  auto* e_out_opt = eval_cmd->add_option("--out-dir", e_out, "report directory");

  // ca-demo
  auto* demo_cmd = app.add_subcommand("ca-demo", "print an FCA trajectory");
  std::string d_rules = cfg.rules;
  std::string d_state = "0.80,0.20,0.20,0.00";
  unsigned d_max_steps = cfg.max_steps;
  auto* d_rules_opt = demo_cmd->add_option("--rules", d_rules, "FCA rule numbers");
  demo_cmd->add_option("--state", d_state, "initial state values")
      ->capture_default_str();
  auto* d_steps_opt = demo_cmd->add_option("--max-steps", d_max_steps, "FCA step cap");

  // synth
  auto* synth_cmd = app.add_subcommand("synth", "generate a planted-topic corpus");
  uint32_t sy_topics = 4, sy_docs = 50, sy_vocab = 400, sy_doc_len = 40,
           sy_query_terms = 5;
  double sy_concentration = 1.0, sy_noise = 0.2;
  std::string sy_out;
  synth_cmd->add_option("--topics", sy_topics, "topic count")->capture_default_str();
  synth_cmd->add_option("--docs-per-topic", sy_docs, "documents per topic")
      ->capture_default_str();
  synth_cmd->add_option("--vocab", sy_vocab, "vocabulary size")->capture_default_str();
  synth_cmd->add_option("--concentration", sy_concentration,
                        "within-topic Zipf exponent")
      ->capture_default_str();
  synth_cmd->add_option("--noise", sy_noise, "off-topic token probability")
      ->capture_default_str();
  synth_cmd->add_option("--doc-len", sy_doc_len, "tokens per document")
      ->capture_default_str();
  synth_cmd->add_option("--query-terms", sy_query_terms, "terms per query")
      ->capture_default_str();
  auto* sy_out_opt = synth_cmd->add_option("--out-dir", sy_out, "output directory");

  try {
    app.parse(argc, argv);

    if (!config_path.empty()) {
      cfg = Config::load(config_path);
      // Config values fill in everything the command line left untouched.
      if (seed_opt->count() == 0) seed = cfg.seed;
      if (threads_opt->count() == 0) threads = cfg.threads;
      if (corpus_opt->count() == 0) corpus_arg = cfg.corpus;
      if (index_out_opt->count() == 0) index_out = cfg.index;
      if (s_index_opt->count() == 0) search_index = cfg.index;
      if (s_queries_opt->count() == 0) search_queries = cfg.queries;
      if (s_depth_opt->count() == 0) depth = cfg.depth;
      if (s_out_opt->count() == 0 && !cfg.output_dir.empty()) {
        search_out = (fs::path(cfg.output_dir) / "baseline.run").string();
      }
      if (c_index_opt->count() == 0) cl_index = cfg.index;
      if (c_run_opt->count() == 0 && !cfg.output_dir.empty()) {
        cl_run = (fs::path(cfg.output_dir) / "baseline.run").string();
      }
      if (c_k_opt->count() == 0) cl_k = cfg.k;
      if (c_iters_opt->count() == 0) cl_max_iters = cfg.lsc_max_iters;
      if (c_out_opt->count() == 0 && !cfg.output_dir.empty()) {
        cl_out = (fs::path(cfg.output_dir) / "partitions").string();
      }
      if (r_parts_opt->count() == 0 && !cfg.output_dir.empty()) {
        r_partitions = (fs::path(cfg.output_dir) / "partitions").string();
      }
      if (r_index_opt->count() == 0) r_index = cfg.index;
      if (r_queries_opt->count() == 0) r_queries = cfg.queries;
      if (r_qrels_opt->count() == 0) r_qrels = cfg.qrels;
      if (r_rules_opt->count() == 0) r_rules = cfg.rules;
      if (r_cells_opt->count() == 0) r_cells = cfg.cells;
      if (r_steps_opt->count() == 0) r_max_steps = cfg.max_steps;
      if (e_qrels_opt->count() == 0) e_qrels = cfg.qrels;
      if (e_out_opt->count() == 0 && !cfg.output_dir.empty()) {
        e_out = (fs::path(cfg.output_dir) / "reports").string();
      }
      if (d_rules_opt->count() == 0) d_rules = cfg.rules;
      if (d_steps_opt->count() == 0) d_max_steps = cfg.max_steps;
      if (sy_out_opt->count() == 0) sy_out = cfg.corpus;
    }

    auto require_value = [](const std::string& value, const char* flag) {
      if (value.empty()) {
        throw CliError(std::string("missing required option ") + flag +
                       " (flag or config)");
      }
    };

    if (index_cmd->parsed()) {
      require_value(corpus_arg, "--corpus");
      require_value(index_out, "--out");
      return cmd_index(corpus_arg, index_out);
    }
    if (search_cmd->parsed()) {
      require_value(search_index, "--index");
      require_value(search_queries, "--queries");
      require_value(search_out, "--out");
      return cmd_search(search_index, search_queries, depth, threads, search_tag,
                        search_out);
    }
    if (cluster_cmd->parsed()) {
      require_value(cl_index, "--index");
      require_value(cl_run, "--run");
      require_value(cl_out, "--out-dir");
      return cmd_cluster(cl_index, cl_run, cl_k, cl_sweep, seed, cl_max_iters,
                         threads, cl_compare_kmeans, cl_out);
    }
    if (rank_cmd->parsed()) {
      if (r_mode != "baseline") {
        require_value(r_partitions, "--partitions");
        require_value(r_index, "--index");
        require_value(r_queries, "--queries");
      }
      require_value(r_out, "--out");
      return cmd_rank(r_partitions, r_index, r_queries, r_mode, r_qrels, r_run,
                      r_rules, r_cells, r_max_steps, threads, r_tag, r_out);
    }
    if (eval_cmd->parsed()) {
      require_value(e_qrels, "--qrels");
      require_value(e_out, "--out-dir");
      return cmd_eval(e_runs, e_qrels, e_out);
    }
    if (demo_cmd->parsed()) {
      return cmd_ca_demo(d_rules, d_state, d_max_steps);
    }
    if (synth_cmd->parsed()) {
      require_value(sy_out, "--out-dir");
      return cmd_synth(sy_topics, sy_docs, sy_vocab, sy_concentration, sy_noise,
                       seed, sy_doc_len, sy_query_terms, sy_out);
    }
    return 0;
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const std::exception& e) {
    std::cerr << "fcair: " << e.what() << "\n";
    return 1;
  }
}
