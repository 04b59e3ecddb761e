#include "cayley/dprm.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "cayley/parallel.hpp"

namespace cayley::dprm {
namespace {

void require_positive_beta(double beta) {
  if (!(beta > 0.0) || !std::isfinite(beta)) {
    throw std::invalid_argument("inverse temperature beta must be finite and > 0");
  }
}

}  // namespace

BranchEnergyOracle::BranchEnergyOracle(std::uint64_t master_seed, EnergyDistribution energy_dist,
                                       TreeShape shape)
    : seed_(master_seed), dist_(std::move(energy_dist)), shape_(std::move(shape)) {
  const std::uint64_t key = rng::stream_key(seed_, rng::Stream::kBranchEnergy);
  generation_keys_.resize(static_cast<std::size_t>(shape_.depth()) + 1);
  for (int i = 1; i <= shape_.depth(); ++i) {
    generation_keys_[static_cast<std::size_t>(i)] = rng::derive(key, static_cast<std::uint64_t>(i));
  }
}

double BranchEnergyOracle::energy(int generation, std::uint64_t index) const {
  if (generation < 1 || generation > shape_.depth() ||
      index >= shape_.generation_size(generation)) {
    std::ostringstream os;
    os << "branch (" << generation << ", " << index << ") outside tree of depth "
       << shape_.depth() << " and branching " << shape_.branching();
    throw std::out_of_range(os.str());
  }
  return (*this)(generation, index);
}

double branch_energy(const BranchEnergyOracle& oracle, int generation, std::uint64_t index) {
  return oracle.energy(generation, index);
}

ThermoSummary thermodynamics(const BranchEnergyOracle& oracle, double beta) {
  require_positive_beta(beta);
  return thermo_summary(oracle, oracle.shape(), beta);
}

double log_partition_function(const BranchEnergyOracle& oracle, double beta) {
  return thermodynamics(oracle, beta).log_partition;
}

double free_energy_per_step(const BranchEnergyOracle& oracle, double beta) {
  const double log_z = log_partition_function(oracle, beta);
  return log_z / (static_cast<double>(oracle.shape().depth()) * beta);
}

double internal_energy(const BranchEnergyOracle& oracle, double beta) {
  return thermodynamics(oracle, beta).mean_energy;
}

GroundState ground_state(const BranchEnergyOracle& oracle) {
  return cayley::ground_state(oracle, oracle.shape());
}

MonteCarloStats summarize(std::vector<double> values) {
  MonteCarloStats stats;
  stats.values = std::move(values);
  const auto count = static_cast<double>(stats.values.size());
  if (stats.values.empty()) return stats;
  double sum = 0.0;
  for (double v : stats.values) sum += v;
  stats.mean = sum / count;
  if (stats.values.size() > 1) {
    double ss = 0.0;
    for (double v : stats.values) ss += (v - stats.mean) * (v - stats.mean);
    stats.stddev = std::sqrt(ss / (count - 1.0));
  }
  return stats;
}

std::uint64_t trial_oracle_seed(std::uint64_t master_seed, std::uint64_t trial) {
  return rng::trial_seed(master_seed, trial);
}

MonteCarloStats monte_carlo_free_energy(const TreeShape& shape,
                                        const EnergyDistribution& energy_dist, double beta,
                                        std::size_t trials, std::uint64_t master_seed,
                                        unsigned threads) {
  require_positive_beta(beta);
  if (trials < 1) throw std::invalid_argument("monte_carlo_free_energy: trials must be >= 1");
  std::vector<double> values(trials);
  parallel_for(trials, threads, [&](std::size_t t) {
    const BranchEnergyOracle oracle(trial_oracle_seed(master_seed, t), energy_dist, shape);
    values[t] = free_energy_per_step(oracle, beta);
  });
  return summarize(std::move(values));
}

}  // namespace cayley::dprm
