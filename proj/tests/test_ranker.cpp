#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "cluster_ranker.hpp"
#include "error.hpp"
#include "synth_corpus.hpp"

using namespace fcair;
using cluster::PartitionResult;
using rank::ClusterOrdering;
using rank::FcaConfig;

namespace {

PartitionResult make_partition(std::string query_id,
                               std::vector<std::vector<std::string>> clusters,
                               std::vector<std::string> unclustered = {}) {
  PartitionResult p;
  p.query_id = std::move(query_id);
  p.k = static_cast<uint32_t>(clusters.size());
  p.clusters = std::move(clusters);
  p.unclustered = std::move(unclustered);
  return p;
}

// Hand-rolled bounded-sum evolve for the distance oracle: per-cell formulas
// for the <238,254,238,252> vector on four cells, iterated to a repeat.
std::vector<double> hand_attractor(std::vector<double> p) {
  REQUIRE(p.size() == 4);
  std::vector<std::vector<double>> seen{p};
  for (int step = 0; step < 64; ++step) {
    std::vector<double> n(4);
    n[0] = std::min(1.0, p[0] + p[1]);          // 238: self + right
    n[1] = std::min(1.0, p[0] + p[1] + p[2]);   // 254: all three
    n[2] = std::min(1.0, p[2] + p[3]);          // 238: self + right
    n[3] = std::min(1.0, p[2] + p[3]);          // 252: left + self
    for (const auto& old : seen) {
      if (old == n) return old;
    }
    seen.push_back(n);
    p = n;
  }
  return p;
}

std::vector<double> hand_encode4(const std::vector<double>& v) {
  std::vector<double> cells(4);
  std::size_t base = v.size() / 4, extra = v.size() % 4, offset = 0;
  for (std::size_t i = 0; i < 4; ++i) {
    std::size_t len = base + (i < extra ? 1 : 0);
    double sum = 0.0;
    for (std::size_t j = 0; j < len; ++j) sum += v[offset + j];
    offset += len;
    cells[i] = std::clamp(sum / static_cast<double>(len), 0.0, 1.0);
  }
  return cells;
}

double hand_cosine(const std::vector<double>& a, const std::vector<double>& b) {
  double dot = 0, na = 0, nb = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    dot += a[i] * b[i];
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  if (na == 0.0 || nb == 0.0) return 0.0;
  return dot / (std::sqrt(na) * std::sqrt(nb));
}

std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

}  // namespace

TEST_CASE("oracle ordering sorts by relevant count with index tie break") {
  eval::Qrels qrels;
  qrels.add("q1", "d1", 1);
  qrels.add("q1", "d2", 1);
  qrels.add("q1", "d3", 1);
  qrels.add("q1", "d6", 1);

  PartitionResult p =
      make_partition("q1", {{"d4", "d5"}, {"d1", "d2", "d3"}, {"d6"}});
  ClusterOrdering ordering = rank::rank_clusters_oracle(p, qrels);
  CHECK(ordering.clusters == std::vector<std::size_t>{1, 2, 0});
  CHECK(ordering.scores == std::vector<double>{3.0, 1.0, 0.0});

  // Equal counts: lower index first.
  PartitionResult tie = make_partition("q1", {{"d1"}, {"d2"}});
  ClusterOrdering tied = rank::rank_clusters_oracle(tie, qrels);
  CHECK(tied.clusters == std::vector<std::size_t>{0, 1});

  // No relevant docs anywhere: order by cluster index.
  PartitionResult none = make_partition("q1", {{"d9"}, {"d8"}, {"d7"}});
  ClusterOrdering zero = rank::rank_clusters_oracle(none, qrels);
  CHECK(zero.clusters == std::vector<std::size_t>{0, 1, 2});

  // Empty clusters are skipped.
  PartitionResult holes = make_partition("q1", {{}, {"d1"}, {}});
  CHECK(rank::rank_clusters_oracle(holes, qrels).clusters ==
        std::vector<std::size_t>{1});

  PartitionResult unknown = make_partition("q404", {{"d1"}});
  CHECK_THROWS_AS(rank::rank_clusters_oracle(unknown, qrels), Error);
}

TEST_CASE("ca_distance: identical vectors, identity rule, zero rejection") {
  fca::Automaton ca(fca::RuleVector::parse("238,254,238,252"), 64);
  std::vector<double> v{0.6, 0.1, 0.3, 0.2, 0.9, 0.0, 0.4, 0.7};
  CHECK(rank::ca_distance(v, v, ca) == doctest::Approx(0.0).epsilon(1e-12));

  unsigned identity_code[] = {204};
  fca::Automaton identity(fca::RuleVector::cyclic(identity_code, 4), 64);
  std::vector<double> w{0.1, 0.9, 0.2, 0.8, 0.5, 0.5, 0.3, 0.6};
  double expected = 1.0 - hand_cosine(hand_encode4(v), hand_encode4(w));
  CHECK(rank::ca_distance(v, w, identity) ==
        doctest::Approx(expected).epsilon(1e-12));

  std::vector<double> zero(8, 0.0);
  CHECK_THROWS_AS(rank::ca_distance(v, zero, ca), Error);
  CHECK_THROWS_AS(rank::ca_distance(zero, v, ca), Error);
}

TEST_CASE("ca_distance agrees with hand-evolved attractors on a toy instance") {
  fca::Automaton ca(fca::RuleVector::parse("238,254,238,252"), 64);
  std::vector<double> query{0.5, 0.1, 0.0, 0.2, 0.4, 0.0, 0.3, 0.1};
  std::vector<std::vector<double>> centroids{
      {0.4, 0.2, 0.1, 0.2, 0.5, 0.1, 0.2, 0.0},
      {0.0, 0.0, 0.9, 0.8, 0.0, 0.1, 0.0, 0.6},
      {0.2, 0.9, 0.0, 0.0, 0.7, 0.3, 0.1, 0.2}};
  std::vector<double> qa = hand_attractor(hand_encode4(query));
  for (const auto& centroid : centroids) {
    std::vector<double> caa = hand_attractor(hand_encode4(centroid));
    double expected = 1.0 - hand_cosine(qa, caa);
    CHECK(rank::ca_distance(query, centroid, ca) ==
          doctest::Approx(expected).epsilon(1e-12));
  }
}

TEST_CASE("identity CA ordering equals the centroid-cosine ordering") {
  std::mt19937_64 rng(31337);
  for (int trial = 0; trial < 20; ++trial) {
    synth::SynthSpec spec;
    spec.topics = 3;
    spec.docs_per_topic = 6;
    spec.vocab_size = 45;
    spec.noise = 0.3;
    spec.seed = rng();
    spec.doc_length = 20;
    spec.query_terms = 3;
    synth::SynthData data = synth::synth_corpus(spec);
    text::Index index = text::Index::build(data.documents);

    // Random partition of all documents into three clusters.
    PartitionResult partition;
    partition.query_id = data.queries[0].first;
    partition.k = 3;
    partition.clusters.resize(3);
    for (const auto& doc : index.docs()) {
      partition.clusters[rng() % 3].push_back(doc.doc_id);
    }

    text::Query query =
        index.make_query(data.queries[0].first, data.queries[0].second);

    FcaConfig config;
    config.rule_codes = {204};
    config.cells = index.vocab_size();  // lossless encoding
    ClusterOrdering ca_ordering = rank::rank_clusters_ca(partition, index, query, config);

    // Independent centroid-cosine argsort.
    std::vector<std::pair<double, std::size_t>> expected;
    for (std::size_t c = 0; c < 3; ++c) {
      if (partition.clusters[c].empty()) continue;
      std::vector<double> centroid(index.vocab_size(), 0.0);
      for (const auto& doc_id : partition.clusters[c]) {
        for (const auto& posting : index.find(doc_id)->postings) {
          centroid[posting.term_id] += posting.weight;
        }
      }
      std::vector<double> query_dense(index.vocab_size(), 0.0);
      for (const auto& posting : query.vector.postings) {
        query_dense[posting.term_id] = posting.weight;
      }
      expected.emplace_back(1.0 - hand_cosine(query_dense, centroid), c);
    }
    std::stable_sort(expected.begin(), expected.end(),
                     [](const auto& a, const auto& b) { return a.first < b.first; });
    REQUIRE(ca_ordering.clusters.size() == expected.size());
    for (std::size_t i = 0; i < expected.size(); ++i) {
      CHECK(ca_ordering.clusters[i] == expected[i].second);
    }
  }
}

TEST_CASE("flatten orders within clusters by query similarity") {
  text::Index index = text::Index::build(
      {{"d1", "qq rr"}, {"d2", "qq zz"}, {"d3", "ww vv"}});
  text::Query query = index.make_query("q1", "qq rr");

  PartitionResult p = make_partition("q1", {{"d2", "d1"}, {"d3"}});
  ClusterOrdering ordering;
  ordering.query_id = "q1";
  ordering.clusters = {0, 1};
  ordering.scores = {0.0, 0.0};

  trec::QueryRun run = rank::flatten(ordering, p, index, query);
  REQUIRE(run.entries.size() == 3);
  CHECK(run.entries[0].doc_id == "d1");
  CHECK(run.entries[1].doc_id == "d2");
  CHECK(run.entries[2].doc_id == "d3");
  for (std::size_t i = 1; i < run.entries.size(); ++i) {
    CHECK(run.entries[i].score < run.entries[i - 1].score);
  }
}

TEST_CASE("flatten appends zero-vector documents last") {
  // "xx" is in every document, so z9's vector is all zero.
  text::Index index =
      text::Index::build({{"z9", "xx"}, {"d2", "xx yy"}, {"d3", "xx ww"}});
  REQUIRE(index.find("z9")->zero);
  text::Query query = index.make_query("q1", "yy");

  PartitionResult p = make_partition("q1", {{"d3"}, {"d2"}}, {"z9"});
  ClusterOrdering ordering;
  ordering.query_id = "q1";
  ordering.clusters = {1, 0};  // d2's cluster first
  ordering.scores = {0.0, 0.0};

  trec::QueryRun run = rank::flatten(ordering, p, index, query);
  REQUIRE(run.entries.size() == 3);
  CHECK(run.entries[0].doc_id == "d2");
  CHECK(run.entries[1].doc_id == "d3");
  CHECK(run.entries[2].doc_id == "z9");
  CHECK(run.entries[2].score > 0.0);
}

TEST_CASE("flatten emits a permutation of the clustered documents") {
  std::mt19937_64 rng(404);
  synth::SynthSpec spec;
  spec.topics = 2;
  spec.docs_per_topic = 15;
  spec.vocab_size = 40;
  spec.seed = 9;
  spec.doc_length = 25;
  synth::SynthData data = synth::synth_corpus(spec);
  text::Index index = text::Index::build(data.documents);
  text::Query query = index.make_query(data.queries[0].first, data.queries[0].second);

  for (int trial = 0; trial < 10; ++trial) {
    PartitionResult partition;
    partition.query_id = query.query_id;
    partition.k = 4;
    partition.clusters.resize(4);
    std::vector<std::string> all_ids;
    for (const auto& doc : index.docs()) {
      partition.clusters[rng() % 4].push_back(doc.doc_id);
      all_ids.push_back(doc.doc_id);
    }
    eval::Qrels qrels;
    bool any = false;
    for (const auto& id : all_ids) {
      if (rng() % 3 == 0) {
        qrels.add(query.query_id, id, 1);
        any = true;
      }
    }
    if (!any) qrels.add(query.query_id, all_ids[0], 1);

    ClusterOrdering ordering = rank::rank_clusters_oracle(partition, qrels);
    trec::QueryRun run = rank::flatten(ordering, partition, index, query);

    std::vector<std::string> out_ids;
    for (const auto& entry : run.entries) out_ids.push_back(entry.doc_id);
    std::sort(out_ids.begin(), out_ids.end());
    CHECK(out_ids == all_ids);  // index order is already sorted

    for (std::size_t i = 1; i < run.entries.size(); ++i) {
      CHECK(run.entries[i].score < run.entries[i - 1].score);
    }
  }
}

TEST_CASE("oracle flatten puts a fully-relevant first cluster up front") {
  text::Index index = text::Index::build({{"r1", "aa bb"},
                                          {"r2", "aa cc"},
                                          {"n1", "dd ee"},
                                          {"n2", "dd ff"}});
  text::Query query = index.make_query("q1", "aa");
  eval::Qrels qrels;
  qrels.add("q1", "r1", 1);
  qrels.add("q1", "r2", 1);

  PartitionResult p = make_partition("q1", {{"n1", "n2"}, {"r1", "r2"}});
  ClusterOrdering ordering = rank::rank_clusters_oracle(p, qrels);
  trec::QueryRun run = rank::flatten(ordering, p, index, query);
  REQUIRE(run.entries.size() == 4);
  CHECK(qrels.is_relevant("q1", run.entries[0].doc_id));
  CHECK(qrels.is_relevant("q1", run.entries[1].doc_id));
  CHECK_FALSE(qrels.is_relevant("q1", run.entries[2].doc_id));
  CHECK_FALSE(qrels.is_relevant("q1", run.entries[3].doc_id));

  // With R = 2 relevant docs leading the list, P@k = 1 for k <= R.
  CHECK(eval::precision_at_k(run, qrels, 1) == 1.0);
  CHECK(eval::precision_at_k(run, qrels, 2) == 1.0);
}

TEST_CASE("ordering invariants: permutation and monotone scores") {
  eval::Qrels qrels;
  qrels.add("q1", "a1", 1);
  qrels.add("q1", "b1", 1);
  qrels.add("q1", "b2", 1);
  PartitionResult p =
      make_partition("q1", {{"a1", "a2"}, {}, {"b1", "b2"}, {"c1"}});

  ClusterOrdering lq = rank::rank_clusters_oracle(p, qrels);
  std::vector<std::size_t> sorted_lq = lq.clusters;
  std::sort(sorted_lq.begin(), sorted_lq.end());
  CHECK(sorted_lq == std::vector<std::size_t>{0, 2, 3});  // nonempty only
  for (std::size_t i = 1; i < lq.scores.size(); ++i) {
    CHECK(lq.scores[i] <= lq.scores[i - 1]);  // relevant counts non-increasing
  }

  text::Index index = text::Index::build({{"a1", "qq xx"},
                                          {"a2", "qq yy"},
                                          {"b1", "rr zz"},
                                          {"b2", "rr ww"},
                                          {"c1", "ss vv"}});
  text::Query query = index.make_query("q1", "qq rr");
  rank::FcaConfig config;
  config.cells = 4;
  ClusterOrdering lc = rank::rank_clusters_ca(p, index, query, config);
  std::vector<std::size_t> sorted_lc = lc.clusters;
  std::sort(sorted_lc.begin(), sorted_lc.end());
  CHECK(sorted_lc == std::vector<std::size_t>{0, 2, 3});
  for (std::size_t i = 1; i < lc.scores.size(); ++i) {
    CHECK(lc.scores[i] >= lc.scores[i - 1]);  // distances non-decreasing
  }
}

TEST_CASE("identical inputs produce byte-identical run files") {
  text::Index index = text::Index::build(
      {{"d1", "qq rr"}, {"d2", "qq zz"}, {"d3", "ww vv"}});
  text::Query query = index.make_query("q1", "qq rr");
  PartitionResult p = make_partition("q1", {{"d2", "d1"}, {"d3"}});
  ClusterOrdering ordering;
  ordering.query_id = "q1";
  ordering.clusters = {0, 1};
  ordering.scores = {0.0, 0.0};

  trec::Run run;
  run.tag = "flat";
  run.queries.push_back(rank::flatten(ordering, p, index, query));

  auto dir = std::filesystem::temp_directory_path();
  trec::save_run(run, (dir / "fcair_run_a.txt").string());
  trec::save_run(run, (dir / "fcair_run_b.txt").string());
  CHECK(slurp(dir / "fcair_run_a.txt") == slurp(dir / "fcair_run_b.txt"));
  CHECK_FALSE(slurp(dir / "fcair_run_a.txt").empty());
}
