#pragma once

// Cayley-tree geometry and the exact traversals shared by the polymer and
// tree-code layers.
//
// Branch (i, j) is the j-th branch of generation i, 1 <= i <= n and
// 0 <= j < d^i. Its children are the branches d*j .. d*j + d - 1 of
// generation i + 1. A walk is the absolute index sequence (j_1, ..., j_n).
// Lexicographic order on walks coincides with numeric order on j_n, and a
// depth-first traversal visiting children in increasing index order meets the
// leaves in that order.

#include <algorithm>
#include <cmath>
#include <concepts>
#include <cstdint>
#include <limits>
#include <vector>

namespace cayley {

class TreeShape {
 public:
  /// Throws std::invalid_argument unless d >= 1, n >= 1 and the total branch
  /// count sum_{i=1..n} d^i fits in 64 bits.
  TreeShape(std::uint64_t branching, int depth);

  [[nodiscard]] std::uint64_t branching() const noexcept { return d_; }
  [[nodiscard]] int depth() const noexcept { return n_; }
  /// d^i, the number of branches in generation i (0 <= i <= n).
  [[nodiscard]] std::uint64_t generation_size(int i) const { return sizes_.at(static_cast<std::size_t>(i)); }
  [[nodiscard]] std::uint64_t total_branches() const noexcept { return total_; }

  friend bool operator==(const TreeShape&, const TreeShape&) = default;

 private:
  std::uint64_t d_;
  int n_;
  std::vector<std::uint64_t> sizes_;
  std::uint64_t total_;
};

struct Walk {
  std::vector<std::uint64_t> steps;  // absolute branch index per generation

  friend bool operator==(const Walk&, const Walk&) = default;
};

/// Throws std::invalid_argument if `walk` is not a root-to-leaf walk of `shape`.
void validate_walk(const Walk& walk, const TreeShape& shape);

/// Rebuilds the full walk from its leaf index.
[[nodiscard]] Walk walk_from_leaf(std::uint64_t leaf, const TreeShape& shape);

/// Anything that assigns an energy to branch (generation, index).
template <class F>
concept BranchField = requires(const F& f, int generation, std::uint64_t index) {
  { f(generation, index) } -> std::convertible_to<double>;
};

struct ThermoSummary {
  double log_partition = 0.0;  // ln Z_n(beta)
  double mean_energy = 0.0;    // Boltzmann average of the walk energy
};

struct GroundState {
  Walk walk;
  double energy = 0.0;
};

namespace detail {

// Per-generation scratch for the thermodynamic pass: O(n * d) memory.
template <BranchField F>
class ThermoPass {
 public:
  ThermoPass(const F& field, const TreeShape& shape, double beta)
      : field_(field),
        d_(shape.branching()),
        n_(shape.depth()),
        beta_(beta),
        log_terms_(static_cast<std::size_t>(n_), std::vector<double>(d_)),
        energies_(static_cast<std::size_t>(n_), std::vector<double>(d_)) {}

  // Subtree below branch `index` of generation `generation` (0 = root).
  ThermoSummary visit(int generation, std::uint64_t index) {
    if (generation == n_) return {};
    auto& terms = log_terms_[static_cast<std::size_t>(generation)];
    auto& means = energies_[static_cast<std::size_t>(generation)];
    double peak = -std::numeric_limits<double>::infinity();
    for (std::uint64_t c = 0; c < d_; ++c) {
      const std::uint64_t child = index * d_ + c;
      const double eps = static_cast<double>(field_(generation + 1, child));
      const ThermoSummary below = visit(generation + 1, child);
      terms[c] = -beta_ * eps + below.log_partition;
      means[c] = eps + below.mean_energy;
      peak = std::max(peak, terms[c]);
    }
    double weight_sum = 0.0;
    double weighted_energy = 0.0;
    for (std::uint64_t c = 0; c < d_; ++c) {
      const double w = std::exp(terms[c] - peak);
      weight_sum += w;
      weighted_energy += w * means[c];
    }
    return {peak + std::log(weight_sum), weighted_energy / weight_sum};
  }

 private:
  const F& field_;
  std::uint64_t d_;
  int n_;
  double beta_;
  std::vector<std::vector<double>> log_terms_;
  std::vector<std::vector<double>> energies_;
};

template <BranchField F>
class GroundPass {
 public:
  GroundPass(const F& field, const TreeShape& shape)
      : field_(field), d_(shape.branching()), n_(shape.depth()),
        path_(static_cast<std::size_t>(n_)) {}

  GroundState run() {
    best_.energy = std::numeric_limits<double>::infinity();
    visit(0, 0, 0.0);
    return best_;
  }

 private:
  // Path energies are accumulated root to leaf, one addition per generation.
  void visit(int generation, std::uint64_t index, double prefix) {
    if (generation == n_) {
      // Strict comparison keeps the lexicographically first minimizer.
      if (prefix < best_.energy) {
        best_.energy = prefix;
        best_.walk.steps = path_;
      }
      return;
    }
    for (std::uint64_t c = 0; c < d_; ++c) {
      const std::uint64_t child = index * d_ + c;
      path_[static_cast<std::size_t>(generation)] = child;
      visit(generation + 1, child, prefix + static_cast<double>(field_(generation + 1, child)));
    }
  }

  const F& field_;
  std::uint64_t d_;
  int n_;
  std::vector<std::uint64_t> path_;
  GroundState best_;
};

}  // namespace detail

/// Exact ln Z_n(beta) and the Boltzmann-averaged walk energy in one
/// depth-first pass, combining children by log-sum-exp.
template <BranchField F>
[[nodiscard]] ThermoSummary thermo_summary(const F& field, const TreeShape& shape, double beta) {
  detail::ThermoPass<F> pass(field, shape, beta);
  return pass.visit(0, 0);
}

/// Minimum-energy walk, ties broken towards the lexicographically smallest
/// index sequence.
template <BranchField F>
[[nodiscard]] GroundState ground_state(const F& field, const TreeShape& shape) {
  return detail::GroundPass<F>(field, shape).run();
}

/// Energy of one walk, summed root to leaf.
template <BranchField F>
[[nodiscard]] double walk_energy(const F& field, const Walk& walk) {
  double e = 0.0;
  for (std::size_t i = 0; i < walk.steps.size(); ++i) {
    e += static_cast<double>(field(static_cast<int>(i) + 1, walk.steps[i]));
  }
  return e;
}

}  // namespace cayley
