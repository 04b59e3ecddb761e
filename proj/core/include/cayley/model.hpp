#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace cayley {

namespace detail {
struct SourceTag {};
struct CodingTag {};
}  // namespace detail

/// Probability mass function over the index set 0..size-1.
///
/// Construction validates nonnegativity and that the masses sum to one within
/// 1e-12, then renormalizes once so downstream log-domain code sees an exact
/// unit sum.
template <class Tag>
class Pmf {
 public:
  explicit Pmf(std::vector<double> probs);

  static Pmf uniform(std::size_t size);

  [[nodiscard]] std::size_t size() const noexcept { return probs_.size(); }
  [[nodiscard]] double operator[](std::size_t i) const { return probs_[i]; }
  [[nodiscard]] std::span<const double> probs() const noexcept { return probs_; }

  /// Inverse-transform sample from a uniform variate u in (0, 1).
  [[nodiscard]] std::size_t sample(double u) const noexcept;

 private:
  std::vector<double> probs_;
  std::vector<double> cdf_;
};

/// Discrete memoryless source, letters 0..|X|-1.
using SourceModel = Pmf<detail::SourceTag>;
/// Random-coding output distribution Q over the reproduction alphabet.
using CodingDistribution = Pmf<detail::CodingTag>;

extern template class Pmf<detail::SourceTag>;
extern template class Pmf<detail::CodingTag>;

/// Nonnegative per-letter distortions rho(x, y), row-major over X x Y.
class DistortionMatrix {
 public:
  DistortionMatrix(std::size_t rows, std::size_t cols, std::vector<double> values);
  explicit DistortionMatrix(const std::vector<std::vector<double>>& rows);

  /// k x k Hamming matrix: 0 on the diagonal, 1 elsewhere.
  static DistortionMatrix hamming(std::size_t k);
  static DistortionMatrix constant(std::size_t rows, std::size_t cols, double c);

  [[nodiscard]] std::size_t rows() const noexcept { return rows_; }
  [[nodiscard]] std::size_t cols() const noexcept { return cols_; }
  [[nodiscard]] double operator()(std::size_t x, std::size_t y) const {
    return values_[x * cols_ + y];
  }
  [[nodiscard]] std::span<const double> row(std::size_t x) const {
    return std::span<const double>(values_).subspan(x * cols_, cols_);
  }
  [[nodiscard]] double min_value() const;
  [[nodiscard]] double max_value() const;

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::vector<double> values_;
};

struct DiscreteEnergy {
  std::vector<double> values;  // strictly increasing
  std::vector<double> probs;   // strictly positive

  friend bool operator==(const DiscreteEnergy&, const DiscreteEnergy&) = default;
};

struct GaussianEnergy {
  double mean = 0.0;
  double stddev = 1.0;

  friend bool operator==(const GaussianEnergy&, const GaussianEnergy&) = default;
};

/// Law of a single branch energy: a finite discrete pmf or a Gaussian.
class EnergyDistribution {
 public:
  /// Atoms are sorted, values within 1e-9 of each other are merged, and
  /// zero-mass atoms are dropped.
  static EnergyDistribution discrete(std::vector<double> values, std::vector<double> probs);
  static EnergyDistribution point_mass(double value);
  static EnergyDistribution bernoulli(double low, double high, double p_high);
  static EnergyDistribution gaussian(double mean, double stddev);

  [[nodiscard]] bool is_discrete() const noexcept {
    return std::holds_alternative<DiscreteEnergy>(law_);
  }
  [[nodiscard]] bool is_gaussian() const noexcept {
    return std::holds_alternative<GaussianEnergy>(law_);
  }
  [[nodiscard]] const DiscreteEnergy& as_discrete() const { return std::get<DiscreteEnergy>(law_); }
  [[nodiscard]] const GaussianEnergy& as_gaussian() const { return std::get<GaussianEnergy>(law_); }

  /// Inverse-CDF sample from u in (0, 1).
  [[nodiscard]] double sample(double u) const;

  [[nodiscard]] std::string describe() const;

  friend bool operator==(const EnergyDistribution&, const EnergyDistribution&) = default;

 private:
  explicit EnergyDistribution(std::variant<DiscreteEnergy, GaussianEnergy> law)
      : law_(std::move(law)) {}

  std::variant<DiscreteEnergy, GaussianEnergy> law_;
  std::vector<double> cdf_;  // discrete only
};

/// Outcome of the symmetry test. When `symmetric` is false the fields
/// describe the first offending pair of source letters.
struct SymmetryReport {
  bool symmetric = true;
  std::size_t x = 0;
  std::size_t x_prime = 0;
  double distortion_value = 0.0;
  double mass_x = 0.0;
  double mass_x_prime = 0.0;
  std::string message;
};

/// Atoms within this distance are one distortion value.
inline constexpr double kValueMergeTolerance = 1e-9;

/// True iff the law of rho(x, Y), Y ~ Q, is the same for every source letter x.
[[nodiscard]] SymmetryReport check_symmetry(const CodingDistribution& q,
                                            const DistortionMatrix& rho,
                                            double tol = 1e-9);

/// The law of rho(x, Y) with Y ~ Q, as a discrete energy distribution.
[[nodiscard]] EnergyDistribution induced_energy_distribution(const CodingDistribution& q,
                                                             const DistortionMatrix& rho,
                                                             std::size_t x);

}  // namespace cayley
