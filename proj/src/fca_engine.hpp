#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace fcair::fca {

/// One cell's next-state function, identified by its Wolfram rule number.
/// Only the 16 OR-family rules are admissible: 0, 170, 204, 238, 240, 250,
/// 252, 254 and their complements 255, 85, 51, 17, 15, 5, 3, 1.
struct Rule {
  unsigned code = 0;
  bool depends_left = false;
  bool depends_self = false;
  bool depends_right = false;
  bool complemented = false;
};

/// Looks up the dependency triple and complement flag for a rule number.
/// Throws Error(invalid_argument) for codes outside the 16-rule table.
Rule rule_from_code(unsigned code);

bool is_valid_rule_code(unsigned code);

/// Cell states; every component lies in [0,1].
using State = std::vector<double>;

/// Per-cell rule assignment for a hybrid automaton, applied left to right
/// over a null-boundary lattice (cells outside [0,n) read as 0).
class RuleVector {
 public:
  explicit RuleVector(std::vector<Rule> rules);

  static RuleVector from_codes(std::span<const unsigned> codes);

  /// Parses a comma-separated list of decimal rule numbers, e.g.
  /// "238,254,238,252".
  static RuleVector parse(const std::string& text);

  /// Repeats `codes` cyclically to fill n_cells cells.
  static RuleVector cyclic(std::span<const unsigned> codes, std::size_t n_cells);

  std::size_t size() const { return rules_.size(); }
  const Rule& at(std::size_t i) const { return rules_[i]; }
  const std::vector<Rule>& rules() const { return rules_; }

  std::vector<unsigned> codes() const;

 private:
  std::vector<Rule> rules_;
};

/// 0/1 neighbourhood matrix: row i lists which cells feed cell i's next
/// state.  Rows hold at most three ascending column indices.
class DependencyMatrix {
 public:
  explicit DependencyMatrix(std::size_t n) : n_(n), rows_(n) {}

  std::size_t size() const { return n_; }
  std::span<const uint32_t> row(std::size_t i) const { return rows_[i]; }
  bool entry(std::size_t i, std::size_t j) const;

  void add_entry(std::size_t i, std::size_t j) {
    rows_[i].push_back(static_cast<uint32_t>(j));
  }

 private:
  std::size_t n_;
  std::vector<std::vector<uint32_t>> rows_;
};

using ComplementMask = std::vector<bool>;

DependencyMatrix build_dependency_matrix(const RuleVector& rules);
ComplementMask build_complement_mask(const RuleVector& rules);

/// One synchronous update: s_i = min(1, sum of the cells row i reads),
/// negated where the mask is set.  Fuzzy OR is the bounded sum.
State step(const State& p, const DependencyMatrix& t, const ComplementMask& mask);

enum class TerminalKind { fixed_point, cycle, step_cap };

struct Trajectory {
  std::vector<State> states;  // includes the repeated state when one is found
  TerminalKind terminal_kind = TerminalKind::step_cap;
  State attractor;            // fixed point, first state of the detected cycle,
                              // or the last state when the cap is hit
  std::size_t cycle_start = 0;  // index of the attractor within states
};

/// Iterates step() until a state repeats exactly (bit equality of clamped
/// doubles) or max_steps updates have been applied.
Trajectory evolve(const State& p0, const DependencyMatrix& t,
                  const ComplementMask& mask, std::size_t max_steps);

/// Reduces an m-dimensional feature vector to n cells by contiguous bucket
/// means (first m mod n buckets take the extra element), clamped to [0,1].
State encode_vector(std::span<const double> v, std::size_t n_cells);

/// Rule vector plus its derived matrix and mask, bundled for repeated use.
class Automaton {
 public:
  explicit Automaton(RuleVector rules, std::size_t max_steps = 64);

  std::size_t size() const { return rules_.size(); }
  std::size_t max_steps() const { return max_steps_; }
  const RuleVector& rules() const { return rules_; }
  const DependencyMatrix& matrix() const { return matrix_; }
  const ComplementMask& mask() const { return mask_; }

  State step(const State& p) const { return fca::step(p, matrix_, mask_); }
  Trajectory evolve(const State& p0) const {
    return fca::evolve(p0, matrix_, mask_, max_steps_);
  }

 private:
  RuleVector rules_;
  DependencyMatrix matrix_;
  ComplementMask mask_;
  std::size_t max_steps_;
};

}  // namespace fcair::fca
