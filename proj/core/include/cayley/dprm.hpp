#pragma once

// Directed polymer on a random Cayley tree: one realization of the branch
// energies and the exact observables computed on it.

#include <cstdint>
#include <vector>

#include "cayley/model.hpp"
#include "cayley/rng.hpp"
#include "cayley/tree.hpp"

namespace cayley::dprm {

/// Lazily generated i.i.d. branch energies. energy(i, j) is a pure function
/// of (master_seed, i, j); nothing is materialized.
class BranchEnergyOracle {
 public:
  BranchEnergyOracle(std::uint64_t master_seed, EnergyDistribution energy_dist, TreeShape shape);

  /// Throws std::out_of_range unless 1 <= i <= n and j < d^i.
  [[nodiscard]] double energy(int generation, std::uint64_t index) const;

  /// Unchecked access used by the traversals.
  [[nodiscard]] double operator()(int generation, std::uint64_t index) const {
    return dist_.sample(rng::to_unit_open(
        rng::derive(generation_keys_[static_cast<std::size_t>(generation)], index)));
  }

  [[nodiscard]] std::uint64_t master_seed() const noexcept { return seed_; }
  [[nodiscard]] const EnergyDistribution& energy_distribution() const noexcept { return dist_; }
  [[nodiscard]] const TreeShape& shape() const noexcept { return shape_; }

 private:
  std::uint64_t seed_;
  EnergyDistribution dist_;
  TreeShape shape_;
  std::vector<std::uint64_t> generation_keys_;
};

[[nodiscard]] double branch_energy(const BranchEnergyOracle& oracle, int generation,
                                   std::uint64_t index);

/// ln Z_n(beta). Throws std::invalid_argument for beta <= 0.
[[nodiscard]] double log_partition_function(const BranchEnergyOracle& oracle, double beta);

/// f_n(beta) = ln Z_n(beta) / (n beta). Positive sign convention: the
/// thermodynamic free energy per step is -f_n.
[[nodiscard]] double free_energy_per_step(const BranchEnergyOracle& oracle, double beta);

/// Boltzmann average of the walk energy, -d/dbeta ln Z_n.
[[nodiscard]] double internal_energy(const BranchEnergyOracle& oracle, double beta);

/// Both of the above from a single pass.
[[nodiscard]] ThermoSummary thermodynamics(const BranchEnergyOracle& oracle, double beta);

[[nodiscard]] GroundState ground_state(const BranchEnergyOracle& oracle);

struct MonteCarloStats {
  double mean = 0.0;
  double stddev = 0.0;  // sample (n - 1) standard deviation; 0 for one trial
  std::vector<double> values;
};

/// Sample mean and standard deviation, accumulated in index order.
[[nodiscard]] MonteCarloStats summarize(std::vector<double> values);

/// Seed of trial t in a Monte-Carlo campaign keyed by `master_seed`.
[[nodiscard]] std::uint64_t trial_oracle_seed(std::uint64_t master_seed, std::uint64_t trial);

/// f_n(beta) over `trials` independent trees. Trial t uses
/// trial_oracle_seed(master_seed, t); results land in per-trial slots, so the
/// statistics do not depend on scheduling. threads == 0 picks the hardware
/// concurrency.
[[nodiscard]] MonteCarloStats monte_carlo_free_energy(const TreeShape& shape,
                                                      const EnergyDistribution& energy_dist,
                                                      double beta, std::size_t trials,
                                                      std::uint64_t master_seed,
                                                      unsigned threads = 0);

}  // namespace cayley::dprm
