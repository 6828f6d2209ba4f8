#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <random>

#include "cluster_engine.hpp"
#include "error.hpp"

using namespace fcair;
using cluster::ClusterDoc;
using cluster::Partition;

namespace {

// Dense document fixture; ids must be added in ascending order so that test
// indices line up with the partition's doc_id-sorted order.
struct DenseDocs {
  explicit DenseDocs(std::size_t dim) : dim(dim) {}

  void add(std::string id, std::vector<double> dense) {
    REQUIRE(dense.size() == dim);
    if (!ids.empty()) REQUIRE(ids.back() < id);
    std::vector<text::Posting> postings;
    for (uint32_t t = 0; t < dense.size(); ++t) {
      if (dense[t] != 0.0) postings.push_back({t, dense[t]});
    }
    storage.push_back(std::move(postings));
    values.push_back(std::move(dense));
    ids.push_back(std::move(id));
  }

  std::vector<ClusterDoc> docs() const {
    std::vector<ClusterDoc> out;
    for (std::size_t i = 0; i < ids.size(); ++i) {
      out.push_back(ClusterDoc{ids[i], storage[i]});
    }
    return out;
  }

  std::size_t dim;
  std::vector<std::string> ids;
  std::vector<std::vector<text::Posting>> storage;
  std::vector<std::vector<double>> values;
};

double vec_norm(const std::vector<double>& v) {
  double sq = 0.0;
  for (double x : v) sq += x * x;
  return std::sqrt(sq);
}

std::vector<double> random_unit(std::mt19937_64& rng, std::size_t dim) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<double> v(dim);
  double norm_sq = 0.0;
  do {
    norm_sq = 0.0;
    for (double& x : v) {
      x = u(rng);
      norm_sq += x * x;
    }
  } while (norm_sq < 1e-12);
  double norm = std::sqrt(norm_sq);
  for (double& x : v) x /= norm;
  return v;
}

// Independent energy oracle: composites summed from scratch, in full.
double oracle_energy(const DenseDocs& dd, const std::vector<uint32_t>& assign,
                     std::size_t k) {
  double total = 0.0;
  for (std::size_t c = 0; c < k; ++c) {
    std::vector<double> composite(dd.dim, 0.0);
    for (std::size_t i = 0; i < assign.size(); ++i) {
      if (assign[i] != c) continue;
      for (std::size_t t = 0; t < dd.dim; ++t) composite[t] += dd.values[i][t];
    }
    total += vec_norm(composite);
  }
  return total;
}

// Best single-document move by exhaustive scan over (doc, target) pairs.
double oracle_best_delta(const DenseDocs& dd, const std::vector<uint32_t>& assign,
                         std::size_t k) {
  double base = oracle_energy(dd, assign, k);
  double best = -1e300;
  for (std::size_t i = 0; i < assign.size(); ++i) {
    for (std::size_t c = 0; c < k; ++c) {
      if (c == assign[i]) continue;
      std::vector<uint32_t> moved = assign;
      moved[i] = static_cast<uint32_t>(c);
      best = std::max(best, oracle_energy(dd, moved, k) - base);
    }
  }
  return best;
}

std::vector<uint32_t> snapshot_assignment(const Partition& p) {
  std::vector<uint32_t> assign(p.doc_count());
  for (std::size_t i = 0; i < p.doc_count(); ++i) assign[i] = p.assignment(i);
  return assign;
}

DenseDocs three_doc_instance() {
  DenseDocs dd(2);
  dd.add("d0", {1.0, 0.0});
  dd.add("d1", {1.0, 0.0});
  dd.add("d2", {0.0, 1.0});
  return dd;
}

}  // namespace

TEST_CASE("init_partition deals round robin and is seed-deterministic") {
  DenseDocs dd(2);
  dd.add("d0", {1.0, 0.0});
  dd.add("d1", {0.0, 1.0});
  dd.add("d2", {1.0, 0.0});
  dd.add("d3", {0.0, 1.0});

  Partition p = Partition::init_partition(dd.docs(), dd.dim, 2, 7);
  CHECK(p.cluster(0).members.size() == 2);
  CHECK(p.cluster(1).members.size() == 2);

  Partition q = Partition::init_partition(dd.docs(), dd.dim, 2, 7);
  CHECK(snapshot_assignment(p) == snapshot_assignment(q));

  Partition all = Partition::init_partition(dd.docs(), dd.dim, 1, 3);
  CHECK(all.cluster(0).members.size() == 4);
  CHECK(all.energy() == doctest::Approx(vec_norm({2.0, 2.0})).epsilon(1e-12));

  CHECK_THROWS_AS(Partition::init_partition(dd.docs(), dd.dim, 0, 1), Error);
}

TEST_CASE("energy on colinear, orthogonal and singleton layouts") {
  DenseDocs colinear(2);
  colinear.add("a", {1.0, 0.0});
  colinear.add("b", {1.0, 0.0});
  uint32_t one_cluster[] = {0, 0};
  Partition p1 = Partition::from_assignment(colinear.docs(), 2, 1, one_cluster);
  CHECK(p1.energy() == doctest::Approx(2.0).epsilon(1e-12));

  DenseDocs ortho(2);
  ortho.add("a", {1.0, 0.0});
  ortho.add("b", {0.0, 1.0});
  Partition p2 = Partition::from_assignment(ortho.docs(), 2, 1, one_cluster);
  CHECK(p2.energy() == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));

  uint32_t separate[] = {0, 1};
  Partition p3 = Partition::from_assignment(ortho.docs(), 2, 2, separate);
  CHECK(p3.energy() == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(p3.energy_recomputed() == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("delta_remove matches direct norm differences") {
  DenseDocs ortho(2);
  ortho.add("a", {1.0, 0.0});
  ortho.add("b", {0.0, 1.0});
  uint32_t together[] = {0, 0};
  Partition p = Partition::from_assignment(ortho.docs(), 2, 1, together);
  // Composite (1,1); removing b leaves (1,0).
  CHECK(p.delta_remove(0, 1) ==
        doctest::Approx(1.0 - std::sqrt(2.0)).epsilon(1e-9));

  DenseDocs colinear(2);
  colinear.add("a", {1.0, 0.0});
  colinear.add("b", {1.0, 0.0});
  Partition p2 = Partition::from_assignment(colinear.docs(), 2, 1, together);
  CHECK(p2.delta_remove(0, 0) == doctest::Approx(-1.0).epsilon(1e-9));

  DenseDocs single(2);
  single.add("a", {1.0, 0.0});
  uint32_t alone[] = {0};
  Partition p3 = Partition::from_assignment(single.docs(), 2, 2, alone);
  CHECK(p3.delta_remove(0, 0) == -1.0);
  CHECK_THROWS_AS(p3.delta_remove(1, 0), Error);  // not a member there
}

TEST_CASE("delta_add matches direct norm differences") {
  DenseDocs dd(2);
  dd.add("a", {1.0, 0.0});
  dd.add("b", {1.0, 0.0});
  dd.add("c", {0.0, 1.0});
  uint32_t assign[] = {0, 1, 1};
  Partition p = Partition::from_assignment(dd.docs(), 2, 3, assign);
  // Cluster 0 holds only (1,0): adding the identical doc doubles the norm.
  CHECK(p.delta_add(0, 1) == doctest::Approx(1.0).epsilon(1e-9));
  // Adding the orthogonal doc gives sqrt(2) - 1.
  CHECK(p.delta_add(0, 2) == doctest::Approx(std::sqrt(2.0) - 1.0).epsilon(1e-9));
  // Empty cluster 2 always gains exactly 1.
  CHECK(p.delta_add(2, 0) == 1.0);
  CHECK_THROWS_AS(p.delta_add(0, 0), Error);  // already a member
}

TEST_CASE("property: closed forms track exact recomputation") {
  std::mt19937_64 rng(20240818);
  for (int trial = 0; trial < 10000; ++trial) {
    std::size_t dim = 2 + rng() % 199;   // 2..200
    std::size_t size = 1 + rng() % 50;   // 1..50
    std::vector<double> composite(dim, 0.0);
    std::vector<std::vector<double>> members;
    for (std::size_t m = 0; m < size; ++m) {
      members.push_back(random_unit(rng, dim));
      for (std::size_t t = 0; t < dim; ++t) composite[t] += members.back()[t];
    }
    double norm = vec_norm(composite);

    const std::vector<double>& leaving = members[rng() % members.size()];
    double dot_leaving = 0.0;
    for (std::size_t t = 0; t < dim; ++t) dot_leaving += leaving[t] * composite[t];
    std::vector<double> without = composite;
    for (std::size_t t = 0; t < dim; ++t) without[t] -= leaving[t];
    double direct_remove = vec_norm(without) - norm;
    // Same branch as delta_remove: a singleton empties the cluster.
    double closed_remove =
        (size == 1) ? -1.0 : cluster::remove_gain(norm, dot_leaving);
    CHECK(std::abs(closed_remove - direct_remove) <= 1e-9);

    std::vector<double> arriving = random_unit(rng, dim);
    double dot_arriving = 0.0;
    for (std::size_t t = 0; t < dim; ++t) dot_arriving += arriving[t] * composite[t];
    std::vector<double> with = composite;
    for (std::size_t t = 0; t < dim; ++t) with[t] += arriving[t];
    double direct_add = vec_norm(with) - norm;
    CHECK(std::abs(cluster::add_gain(norm, dot_arriving) - direct_add) <= 1e-9);
  }
}

TEST_CASE("tcls_step picks the known best move on the three-doc instance") {
  DenseDocs dd = three_doc_instance();
  uint32_t assign[] = {0, 1, 1};
  Partition p = Partition::from_assignment(dd.docs(), 2, 2, assign);
  CHECK(p.energy() == doctest::Approx(1.0 + std::sqrt(2.0)).epsilon(1e-12));

  auto move = p.tcls_step();
  REQUIRE(move.has_value());
  CHECK(move->doc == 1);
  CHECK(move->from == 1);
  CHECK(move->to == 0);
  CHECK(move->delta == doctest::Approx(2.0 - std::sqrt(2.0)).epsilon(1e-9));
  CHECK(p.energy() == doctest::Approx(3.0).epsilon(1e-9));
  CHECK(p.cluster(0).members == std::vector<uint32_t>{0, 1});
  CHECK(p.cluster(1).members == std::vector<uint32_t>{2});
}

TEST_CASE("tcls_step returns none at a local optimum") {
  DenseDocs dd(2);
  dd.add("a", {1.0, 0.0});
  dd.add("b", {1.0, 0.0});
  dd.add("c", {1.0, 0.0});
  dd.add("d", {1.0, 0.0});
  uint32_t all_in_one[] = {0, 0, 0, 0};
  Partition p = Partition::from_assignment(dd.docs(), 2, 2, all_in_one);
  CHECK_FALSE(p.tcls_step().has_value());

  // Identical docs split across clusters: every move is a wash.
  uint32_t split[] = {0, 0, 1, 1};
  Partition q = Partition::from_assignment(dd.docs(), 2, 2, split);
  CHECK_FALSE(q.tcls_step().has_value());
}

TEST_CASE("tcls_step: a lone document never chases the empty cluster") {
  DenseDocs dd(2);
  dd.add("only", {1.0, 0.0});
  uint32_t assign[] = {0};
  Partition p = Partition::from_assignment(dd.docs(), 2, 2, assign);
  CHECK_FALSE(p.tcls_step().has_value());  // -1 + 1 = 0, not positive
}

TEST_CASE("lsc reaches the global optimum of the three-doc instance") {
  for (uint64_t seed : {1, 2, 3, 4, 5}) {
    DenseDocs dd = three_doc_instance();
    Partition p = Partition::init_partition(dd.docs(), dd.dim, 2, seed);
    cluster::LscResult r = p.lsc(100);
    CHECK(p.energy() == doctest::Approx(3.0).epsilon(1e-9));
    CHECK(r.iterations < 100);
    for (std::size_t i = 1; i < r.energy_trace.size(); ++i) {
      CHECK(r.energy_trace[i] > r.energy_trace[i - 1]);
    }
  }
}

TEST_CASE("lsc trivia: zero budget and already-optimal starts") {
  DenseDocs dd = three_doc_instance();
  uint32_t optimal[] = {0, 0, 1};
  Partition p = Partition::from_assignment(dd.docs(), 2, 2, optimal);
  cluster::LscResult none = p.lsc(0);
  CHECK(none.iterations == 0);
  CHECK(none.energy_trace.size() == 1);

  cluster::LscResult steady = p.lsc(50);
  CHECK(steady.iterations == 0);
  CHECK(p.energy() == doctest::Approx(3.0).epsilon(1e-12));
}

TEST_CASE("property: tcls matches the exhaustive oracle on small instances") {
  std::mt19937_64 rng(555);
  for (int trial = 0; trial < 60; ++trial) {
    std::size_t n_docs = 2 + rng() % 9;  // 2..10
    std::size_t k = 2 + rng() % 2;       // 2..3
    std::size_t dim = 2 + rng() % 5;
    DenseDocs dd(dim);
    for (std::size_t i = 0; i < n_docs; ++i) {
      char id[8];
      std::snprintf(id, sizeof(id), "d%02zu", i);
      dd.add(id, random_unit(rng, dim));
    }
    Partition p = Partition::init_partition(dd.docs(), dim, k, rng());

    std::vector<uint32_t> before = snapshot_assignment(p);
    double best = oracle_best_delta(dd, before, k);
    auto move = p.tcls_step();
    if (move.has_value()) {
      CHECK(std::abs(move->delta - best) <= 1e-9);
    } else {
      CHECK(best <= 1e-9);
    }

    // Run to termination; no positive move may remain.
    p.lsc(10 * n_docs);
    CHECK(oracle_best_delta(dd, snapshot_assignment(p), k) <= 1e-9);
  }
}

TEST_CASE("property: incremental state survives long move sequences") {
  std::mt19937_64 rng(808);
  for (int trial = 0; trial < 10; ++trial) {
    std::size_t n_docs = 20 + rng() % 30;
    std::size_t dim = 5 + rng() % 20;
    std::size_t k = 2 + rng() % 4;
    DenseDocs dd(dim);
    for (std::size_t i = 0; i < n_docs; ++i) {
      char id[8];
      std::snprintf(id, sizeof(id), "d%03zu", i);
      dd.add(id, random_unit(rng, dim));
    }
    Partition p = Partition::init_partition(dd.docs(), dim, k, rng());
    cluster::LscResult r = p.lsc(10 * n_docs);
    CHECK(r.iterations < 10 * n_docs);

    // Conservation: incremental energy and composites match exact recompute.
    CHECK(std::abs(p.energy() - p.energy_recomputed()) <= 1e-7);
    std::size_t covered = 0;
    for (std::size_t c = 0; c < p.cluster_count(); ++c) {
      covered += p.cluster(c).members.size();
      std::vector<double> scratch(dim, 0.0);
      for (uint32_t doc : p.cluster(c).members) {
        for (std::size_t t = 0; t < dim; ++t) {
          scratch[t] += dd.values[doc][t];
        }
        CHECK(p.assignment(doc) == c);
      }
      for (std::size_t t = 0; t < dim; ++t) {
        CHECK(std::abs(scratch[t] - p.cluster(c).composite[t]) <= 1e-7);
      }
      CHECK(p.cluster(c).norm <= p.cluster(c).members.size() + 1e-9);
    }
    CHECK(covered == n_docs);
    CHECK(p.energy() <= static_cast<double>(n_docs) + 1e-9);
  }
}

TEST_CASE("kmeans_pass: fixed point, swap recovery and single cluster") {
  DenseDocs dd(2);
  dd.add("a1", {1.0, 0.0});
  dd.add("a2", {1.0, 0.0});
  dd.add("b1", {0.0, 1.0});
  dd.add("b2", {0.0, 1.0});

  uint32_t natural[] = {0, 0, 1, 1};
  Partition p = Partition::from_assignment(dd.docs(), 2, 2, natural);
  p.kmeans_pass();
  CHECK(snapshot_assignment(p) == std::vector<uint32_t>{0, 0, 1, 1});

  // b1 begins in the a-heavy cluster; one pass sends it home.
  uint32_t mixed[] = {0, 0, 0, 1};
  Partition q = Partition::from_assignment(dd.docs(), 2, 2, mixed);
  q.kmeans_pass();
  CHECK(snapshot_assignment(q) == std::vector<uint32_t>{0, 0, 1, 1});
  CHECK(q.energy() == doctest::Approx(4.0).epsilon(1e-9));

  uint32_t lone[] = {0, 0, 0, 0};
  Partition single = Partition::from_assignment(dd.docs(), 2, 1, lone);
  double before = single.energy();
  single.kmeans_pass();
  CHECK(single.energy() == doctest::Approx(before).epsilon(1e-12));
  CHECK(snapshot_assignment(single) == std::vector<uint32_t>{0, 0, 0, 0});
}

TEST_CASE("partition results serialize and load") {
  DenseDocs dd = three_doc_instance();
  uint32_t assign[] = {0, 0, 1};
  Partition p = Partition::from_assignment(dd.docs(), 2, 2, assign);
  cluster::LscResult r = p.lsc(10);
  cluster::PartitionResult result =
      cluster::make_result(p, "q1", r, {"zz-empty"});

  auto path = std::filesystem::temp_directory_path() / "fcair_partition.json";
  result.save(path.string());
  cluster::PartitionResult loaded = cluster::PartitionResult::load(path.string());
  CHECK(loaded.query_id == "q1");
  CHECK(loaded.k == 2);
  CHECK(loaded.energy == result.energy);
  CHECK(loaded.clusters == result.clusters);
  CHECK(loaded.unclustered == std::vector<std::string>{"zz-empty"});
  CHECK(loaded.energy_trace == result.energy_trace);
}
