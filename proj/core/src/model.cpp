#include "cayley/model.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include <boost/math/distributions/normal.hpp>

namespace cayley {
namespace {

constexpr double kSumTolerance = 1e-12;

std::vector<double> validated_probs(std::vector<double> probs, const char* what) {
  if (probs.empty()) {
    throw std::invalid_argument(std::string(what) + ": empty probability vector");
  }
  double sum = 0.0;
  for (double p : probs) {
    if (!std::isfinite(p) || p < 0.0) {
      throw std::invalid_argument(std::string(what) + ": probabilities must be finite and >= 0");
    }
    sum += p;
  }
  if (std::abs(sum - 1.0) > kSumTolerance) {
    std::ostringstream os;
    os << what << ": probabilities sum to " << sum << ", expected 1 within 1e-12";
    throw std::invalid_argument(os.str());
  }
  for (double& p : probs) p /= sum;
  return probs;
}

std::vector<double> cumulative(std::span<const double> probs) {
  std::vector<double> cdf(probs.size());
  std::partial_sum(probs.begin(), probs.end(), cdf.begin());
  return cdf;
}

std::size_t search_cdf(std::span<const double> cdf, double u) noexcept {
  const auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
  if (it == cdf.end()) return cdf.size() - 1;
  return static_cast<std::size_t>(it - cdf.begin());
}

// Aggregated value -> mass atoms, sorted by value.
using Atoms = std::vector<std::pair<double, double>>;

Atoms merge_atoms(std::vector<std::pair<double, double>> raw) {
  std::sort(raw.begin(), raw.end());
  Atoms atoms;
  for (const auto& [value, mass] : raw) {
    if (mass <= 0.0) continue;
    if (!atoms.empty() && value - atoms.back().first <= kValueMergeTolerance) {
      atoms.back().second += mass;
    } else {
      atoms.emplace_back(value, mass);
    }
  }
  return atoms;
}

Atoms row_atoms(const CodingDistribution& q, const DistortionMatrix& rho, std::size_t x) {
  std::vector<std::pair<double, double>> raw;
  raw.reserve(rho.cols());
  for (std::size_t y = 0; y < rho.cols(); ++y) raw.emplace_back(rho(x, y), q[y]);
  return merge_atoms(std::move(raw));
}

double mass_at(const Atoms& atoms, double value) {
  for (const auto& [v, m] : atoms) {
    if (std::abs(v - value) <= kValueMergeTolerance) return m;
  }
  return 0.0;
}

void check_dims(const CodingDistribution& q, const DistortionMatrix& rho) {
  if (q.size() != rho.cols()) {
    std::ostringstream os;
    os << "coding distribution has " << q.size() << " letters but distortion matrix has "
       << rho.cols() << " columns";
    throw std::invalid_argument(os.str());
  }
}

}  // namespace

template <class Tag>
Pmf<Tag>::Pmf(std::vector<double> probs)
    : probs_(validated_probs(std::move(probs), "pmf")), cdf_(cumulative(probs_)) {}

template <class Tag>
Pmf<Tag> Pmf<Tag>::uniform(std::size_t size) {
  if (size == 0) throw std::invalid_argument("pmf: uniform over an empty alphabet");
  return Pmf(std::vector<double>(size, 1.0 / static_cast<double>(size)));
}

template <class Tag>
std::size_t Pmf<Tag>::sample(double u) const noexcept {
  // Zero-mass letters at the end of the alphabet must never be returned.
  std::size_t k = search_cdf(cdf_, u);
  while (probs_[k] == 0.0 && k > 0) --k;
  return k;
}

template class Pmf<detail::SourceTag>;
template class Pmf<detail::CodingTag>;

DistortionMatrix::DistortionMatrix(std::size_t rows, std::size_t cols, std::vector<double> values)
    : rows_(rows), cols_(cols), values_(std::move(values)) {
  if (rows_ == 0 || cols_ == 0) throw std::invalid_argument("distortion matrix: empty dimension");
  if (values_.size() != rows_ * cols_) {
    throw std::invalid_argument("distortion matrix: value count does not match rows x cols");
  }
  for (double v : values_) {
    if (!std::isfinite(v) || v < 0.0) {
      throw std::invalid_argument("distortion matrix: entries must be finite and >= 0");
    }
  }
}

DistortionMatrix::DistortionMatrix(const std::vector<std::vector<double>>& rows)
    : DistortionMatrix(rows.size(), rows.empty() ? 0 : rows.front().size(), [&] {
        std::vector<double> flat;
        for (const auto& r : rows) {
          if (r.size() != rows.front().size()) {
            throw std::invalid_argument("distortion matrix: ragged rows");
          }
          flat.insert(flat.end(), r.begin(), r.end());
        }
        return flat;
      }()) {}

DistortionMatrix DistortionMatrix::hamming(std::size_t k) {
  std::vector<double> v(k * k, 1.0);
  for (std::size_t i = 0; i < k; ++i) v[i * k + i] = 0.0;
  return DistortionMatrix(k, k, std::move(v));
}

DistortionMatrix DistortionMatrix::constant(std::size_t rows, std::size_t cols, double c) {
  return DistortionMatrix(rows, cols, std::vector<double>(rows * cols, c));
}

double DistortionMatrix::min_value() const {
  return *std::min_element(values_.begin(), values_.end());
}

double DistortionMatrix::max_value() const {
  return *std::max_element(values_.begin(), values_.end());
}

EnergyDistribution EnergyDistribution::discrete(std::vector<double> values,
                                                std::vector<double> probs) {
  if (values.size() != probs.size()) {
    throw std::invalid_argument("energy distribution: values and probs differ in length");
  }
  for (double v : values) {
    if (!std::isfinite(v)) throw std::invalid_argument("energy distribution: non-finite atom");
  }
  probs = validated_probs(std::move(probs), "energy distribution");
  std::vector<std::pair<double, double>> raw;
  for (std::size_t k = 0; k < values.size(); ++k) raw.emplace_back(values[k], probs[k]);
  DiscreteEnergy law;
  for (const auto& [v, m] : merge_atoms(std::move(raw))) {
    law.values.push_back(v);
    law.probs.push_back(m);
  }
  EnergyDistribution dist{law};
  dist.cdf_ = cumulative(dist.as_discrete().probs);
  return dist;
}

EnergyDistribution EnergyDistribution::point_mass(double value) {
  return discrete({value}, {1.0});
}

EnergyDistribution EnergyDistribution::bernoulli(double low, double high, double p_high) {
  return discrete({low, high}, {1.0 - p_high, p_high});
}

EnergyDistribution EnergyDistribution::gaussian(double mean, double stddev) {
  if (!std::isfinite(mean) || !std::isfinite(stddev) || stddev <= 0.0) {
    throw std::invalid_argument("energy distribution: gaussian needs finite mean and std > 0");
  }
  return EnergyDistribution{GaussianEnergy{mean, stddev}};
}

double EnergyDistribution::sample(double u) const {
  if (const auto* g = std::get_if<GaussianEnergy>(&law_)) {
    static const boost::math::normal_distribution<double> standard;
    return g->mean + g->stddev * boost::math::quantile(standard, u);
  }
  return std::get<DiscreteEnergy>(law_).values[search_cdf(cdf_, u)];
}

std::string EnergyDistribution::describe() const {
  std::ostringstream os;
  os.precision(17);
  if (const auto* g = std::get_if<GaussianEnergy>(&law_)) {
    os << "gaussian(mean=" << g->mean << ", std=" << g->stddev << ")";
  } else {
    const auto& d = std::get<DiscreteEnergy>(law_);
    os << "discrete{";
    for (std::size_t k = 0; k < d.values.size(); ++k) {
      os << (k ? ", " : "") << d.values[k] << ": " << d.probs[k];
    }
    os << "}";
  }
  return os.str();
}

SymmetryReport check_symmetry(const CodingDistribution& q, const DistortionMatrix& rho,
                              double tol) {
  check_dims(q, rho);
  SymmetryReport report;
  const Atoms reference = row_atoms(q, rho, 0);
  for (std::size_t x = 1; x < rho.rows(); ++x) {
    const Atoms other = row_atoms(q, rho, x);
    // Union of supports; both directions so atoms missing on either side count.
    for (const Atoms* side : {&reference, &other}) {
      for (const auto& [value, mass] : *side) {
        (void)mass;
        const double m0 = mass_at(reference, value);
        const double m1 = mass_at(other, value);
        if (std::abs(m0 - m1) > tol) {
          std::ostringstream os;
          os << "rho(" << 0 << ",Y) and rho(" << x << ",Y) differ at distortion " << value
             << ": mass " << m0 << " vs " << m1;
          return SymmetryReport{false, 0, x, value, m0, m1, os.str()};
        }
      }
    }
  }
  report.message = "symmetric";
  return report;
}

EnergyDistribution induced_energy_distribution(const CodingDistribution& q,
                                               const DistortionMatrix& rho, std::size_t x) {
  check_dims(q, rho);
  if (x >= rho.rows()) throw std::out_of_range("induced_energy_distribution: source letter");
  std::vector<double> values(rho.row(x).begin(), rho.row(x).end());
  std::vector<double> probs(q.probs().begin(), q.probs().end());
  return EnergyDistribution::discrete(std::move(values), std::move(probs));
}

}  // namespace cayley
