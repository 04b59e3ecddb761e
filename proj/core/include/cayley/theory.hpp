#pragma once

// Closed-form large-depth limits for the polymer on a Cayley tree.
//
//   phi(beta) = (ln d + ln E exp(-beta eps)) / beta
//   f(beta)   = phi(beta)        for beta <= beta_c
//             = phi(beta_c)      for beta >  beta_c
//
// beta_c minimizes phi. Writing L(beta) = ln E exp(-beta eps), the sign of
// phi'(beta) is the sign of g(beta) = beta L'(beta) - ln d - L(beta), and
// g' = beta L'' >= 0, so the stationary point is unique when it exists.

#include <cstdint>
#include <limits>
#include <string>

#include "cayley/model.hpp"

namespace cayley::theory {

/// Largest beta examined before declaring that phi never turns around.
inline constexpr double kBetaMax = 1e4;

/// ln E{exp(-beta eps)}, beta >= 0.
[[nodiscard]] double log_mgf(const EnergyDistribution& dist, double beta);

/// E_beta{eps} under the tilted law exp(-beta eps)/M(beta); equals -L'(beta).
[[nodiscard]] double tilted_mean(const EnergyDistribution& dist, double beta);

/// phi(beta); throws std::invalid_argument for beta <= 0.
[[nodiscard]] double phi(const EnergyDistribution& dist, std::uint64_t d, double beta);

/// Stationarity residual g(beta) = beta L'(beta) - ln d - L(beta).
[[nodiscard]] double stationarity_residual(const EnergyDistribution& dist, std::uint64_t d,
                                           double beta);

struct CriticalBeta {
  double value = std::numeric_limits<double>::infinity();
  bool infinite = true;
  std::string diagnostic;

  [[nodiscard]] bool finite() const noexcept { return !infinite; }
};

/// Minimizer of phi. Brackets the root of the stationarity residual by
/// geometric expansion up to kBetaMax and bisects to relative tolerance 1e-10.
/// Returns infinite (with a diagnostic) for d == 1 or when phi decreases all
/// the way to kBetaMax. Throws for d < 1.
[[nodiscard]] CriticalBeta beta_c(const EnergyDistribution& dist, std::uint64_t d);

/// Piecewise limit object for one (energy law, branching ratio).
struct FreeEnergyLimit {
  EnergyDistribution energy_dist;
  std::uint64_t d;
  CriticalBeta critical;
  double phi_at_beta_c = std::numeric_limits<double>::quiet_NaN();  // when finite

  [[nodiscard]] double operator()(double beta) const;
};

[[nodiscard]] FreeEnergyLimit make_free_energy_limit(const EnergyDistribution& dist,
                                                     std::uint64_t d);

/// f(beta) for beta > 0.
[[nodiscard]] double f_limit(const EnergyDistribution& dist, std::uint64_t d, double beta);

struct D0Result {
  double d0 = 0.0;
  std::uint64_t d = 0;
  CriticalBeta critical;
  /// Set when beta_c is infinite: the supremum over beta is a limit and not
  /// attained. d0 then holds lim_{beta->inf} -phi(beta), which for a finite
  /// law is its smallest atom.
  bool degenerate = false;
  double minus_phi_at_beta_max = 0.0;  // diagnostic for the degenerate case
};

/// Returns d if rate == ln d for an integer d >= 2 within 1e-9 nats, else throws.
[[nodiscard]] std::uint64_t branching_for_rate(double rate_nats);

/// D0(R) = max_{beta>0} -(ln E exp(-beta rho(x,Y)) + R) / beta = -phi(beta_c),
/// built from the law of rho(x, Y) with Y ~ Q. Throws std::invalid_argument if
/// (Q, rho) fails the symmetry check or R is not ln of an integer >= 2.
[[nodiscard]] D0Result d0_of_r(const CodingDistribution& q, const DistortionMatrix& rho,
                               double rate_nats, double symmetry_tol = 1e-9);

}  // namespace cayley::theory
