#include "fca_engine.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "error.hpp"

namespace fcair::fca {

namespace {

struct RuleEntry {
  unsigned code;
  bool left, self, right, complemented;
};

// The 16 admissible rules: eight OR combinations of the 3-neighbourhood and
// their complements (255 pairs with 0, 85 with 170, and so on).
constexpr RuleEntry kRuleTable[] = {
    {0, false, false, false, false},  {170, false, false, true, false},
    {204, false, true, false, false}, {238, false, true, true, false},
    {240, true, false, false, false}, {250, true, false, true, false},
    {252, true, true, false, false},  {254, true, true, true, false},
    {255, false, false, false, true}, {85, false, false, true, true},
    {51, false, true, false, true},   {17, false, true, true, true},
    {15, true, false, false, true},   {5, true, false, true, true},
    {3, true, true, false, true},     {1, true, true, true, true},
};

const RuleEntry* find_rule(unsigned code) {
  for (const auto& entry : kRuleTable) {
    if (entry.code == code) return &entry;
  }
  return nullptr;
}

}  // namespace

bool is_valid_rule_code(unsigned code) { return find_rule(code) != nullptr; }

Rule rule_from_code(unsigned code) {
  const RuleEntry* entry = find_rule(code);
  if (entry == nullptr) {
    throw Error(ErrorKind::invalid_argument,
                "unknown FCA rule code " + std::to_string(code) +
                    " (not in the 16-rule table)");
  }
  return Rule{entry->code, entry->left, entry->self, entry->right,
              entry->complemented};
}

RuleVector::RuleVector(std::vector<Rule> rules) : rules_(std::move(rules)) {
  if (rules_.empty()) {
    throw Error(ErrorKind::invalid_argument, "rule vector must not be empty");
  }
}

RuleVector RuleVector::from_codes(std::span<const unsigned> codes) {
  std::vector<Rule> rules;
  rules.reserve(codes.size());
  for (unsigned code : codes) rules.push_back(rule_from_code(code));
  return RuleVector(std::move(rules));
}

RuleVector RuleVector::parse(const std::string& text) {
  std::vector<unsigned> codes;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    std::size_t pos = 0;
    unsigned long value = 0;
    try {
      value = std::stoul(item, &pos);
    } catch (const std::exception&) {
      throw Error(ErrorKind::parse, "bad rule number '" + item + "'");
    }
    while (pos < item.size() && std::isspace(static_cast<unsigned char>(item[pos]))) ++pos;
    if (pos != item.size()) {
      throw Error(ErrorKind::parse, "bad rule number '" + item + "'");
    }
    codes.push_back(static_cast<unsigned>(value));
  }
  if (codes.empty()) {
    throw Error(ErrorKind::parse, "empty rule list");
  }
  return from_codes(codes);
}

RuleVector RuleVector::cyclic(std::span<const unsigned> codes, std::size_t n_cells) {
  if (codes.empty()) {
    throw Error(ErrorKind::invalid_argument, "rule vector must not be empty");
  }
  if (n_cells == 0) {
    throw Error(ErrorKind::invalid_argument, "cell count must be at least 1");
  }
  std::vector<unsigned> extended(n_cells);
  for (std::size_t i = 0; i < n_cells; ++i) extended[i] = codes[i % codes.size()];
  return from_codes(extended);
}

std::vector<unsigned> RuleVector::codes() const {
  std::vector<unsigned> out;
  out.reserve(rules_.size());
  for (const Rule& r : rules_) out.push_back(r.code);
  return out;
}

bool DependencyMatrix::entry(std::size_t i, std::size_t j) const {
  for (uint32_t col : rows_[i]) {
    if (col == j) return true;
  }
  return false;
}

DependencyMatrix build_dependency_matrix(const RuleVector& rules) {
  const std::size_t n = rules.size();
  DependencyMatrix t(n);
  for (std::size_t i = 0; i < n; ++i) {
    const Rule& r = rules.at(i);
    // Null boundary: neighbour columns falling outside [0, n) are dropped.
    if (r.depends_left && i > 0) t.add_entry(i, i - 1);
    if (r.depends_self) t.add_entry(i, i);
    if (r.depends_right && i + 1 < n) t.add_entry(i, i + 1);
  }
  return t;
}

ComplementMask build_complement_mask(const RuleVector& rules) {
  ComplementMask mask(rules.size());
  for (std::size_t i = 0; i < rules.size(); ++i) mask[i] = rules.at(i).complemented;
  return mask;
}

State step(const State& p, const DependencyMatrix& t, const ComplementMask& mask) {
  const std::size_t n = t.size();
  if (p.size() != n || mask.size() != n) {
    throw Error(ErrorKind::invalid_argument,
                "state/matrix/mask dimension mismatch: state " +
                    std::to_string(p.size()) + ", matrix " + std::to_string(n));
  }
  State next(n);
  for (std::size_t i = 0; i < n; ++i) {
    double sum = 0.0;
    for (uint32_t j : t.row(i)) sum += p[j];  // ascending columns
    double clamped = std::min(1.0, sum);
    next[i] = mask[i] ? 1.0 - clamped : clamped;
  }
  return next;
}

Trajectory evolve(const State& p0, const DependencyMatrix& t,
                  const ComplementMask& mask, std::size_t max_steps) {
  if (max_steps < 1) {
    throw Error(ErrorKind::invalid_argument, "max_steps must be at least 1");
  }
  Trajectory result;
  result.states.push_back(p0);
  for (std::size_t s = 0; s < max_steps; ++s) {
    State next = step(result.states.back(), t, mask);
    // Exact repeat detection: bounded-sum outputs of identical inputs are
    // bit-identical, so == is sound here.
    for (std::size_t k = 0; k < result.states.size(); ++k) {
      if (result.states[k] == next) {
        bool is_fixed = (k + 1 == result.states.size());
        result.terminal_kind = is_fixed ? TerminalKind::fixed_point : TerminalKind::cycle;
        result.attractor = result.states[k];
        result.cycle_start = k;
        result.states.push_back(std::move(next));
        return result;
      }
    }
    result.states.push_back(std::move(next));
  }
  result.terminal_kind = TerminalKind::step_cap;
  result.attractor = result.states.back();
  result.cycle_start = result.states.size() - 1;
  return result;
}

State encode_vector(std::span<const double> v, std::size_t n_cells) {
  if (v.empty()) {
    throw Error(ErrorKind::invalid_argument, "cannot encode an empty vector");
  }
  if (n_cells < 1 || n_cells > v.size()) {
    throw Error(ErrorKind::invalid_argument,
                "cell count " + std::to_string(n_cells) +
                    " out of range for vector of dimension " +
                    std::to_string(v.size()));
  }
  for (double x : v) {
    if (!std::isfinite(x)) {
      throw Error(ErrorKind::invalid_argument, "vector component is not finite");
    }
  }
  const std::size_t m = v.size();
  const std::size_t base = m / n_cells;
  const std::size_t extra = m % n_cells;  // first `extra` buckets take one more
  State cells(n_cells);
  std::size_t offset = 0;
  for (std::size_t i = 0; i < n_cells; ++i) {
    std::size_t len = base + (i < extra ? 1 : 0);
    double sum = 0.0;
    for (std::size_t j = 0; j < len; ++j) sum += v[offset + j];
    offset += len;
    double mean = sum / static_cast<double>(len);
    cells[i] = std::clamp(mean, 0.0, 1.0);
  }
  return cells;
}

Automaton::Automaton(RuleVector rules, std::size_t max_steps)
    : rules_(std::move(rules)),
      matrix_(build_dependency_matrix(rules_)),
      mask_(build_complement_mask(rules_)),
      max_steps_(max_steps) {
  if (max_steps_ < 1) {
    throw Error(ErrorKind::invalid_argument, "max_steps must be at least 1");
  }
}

}  // namespace fcair::fca
