#include "cayley/theory.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace cayley::theory {
namespace {

// ln E exp(-beta eps) and the tilted mean, shifted by the smallest atom so the
// exponentials never overflow and stay exact at the ground level.
struct Tilt {
  double log_mgf;
  double mean;
};

Tilt tilt(const EnergyDistribution& dist, double beta) {
  if (dist.is_gaussian()) {
    const auto& g = dist.as_gaussian();
    const double var = g.stddev * g.stddev;
    return {-beta * g.mean + 0.5 * beta * beta * var, g.mean - beta * var};
  }
  const auto& law = dist.as_discrete();
  const double floor = law.values.front();  // values are sorted
  double sum = 0.0;
  double weighted = 0.0;
  for (std::size_t k = 0; k < law.values.size(); ++k) {
    const double w = law.probs[k] * std::exp(-beta * (law.values[k] - floor));
    sum += w;
    weighted += w * law.values[k];
  }
  return {-beta * floor + std::log(sum), weighted / sum};
}

void require_beta(double beta, bool allow_zero) {
  if (!std::isfinite(beta) || beta < 0.0 || (!allow_zero && beta == 0.0)) {
    throw std::invalid_argument(allow_zero ? "beta must be finite and >= 0"
                                           : "beta must be finite and > 0");
  }
}

double log_d(std::uint64_t d) { return std::log(static_cast<double>(d)); }

}  // namespace

double log_mgf(const EnergyDistribution& dist, double beta) {
  require_beta(beta, true);
  return tilt(dist, beta).log_mgf;
}

double tilted_mean(const EnergyDistribution& dist, double beta) {
  require_beta(beta, true);
  return tilt(dist, beta).mean;
}

double phi(const EnergyDistribution& dist, std::uint64_t d, double beta) {
  require_beta(beta, false);
  if (d < 1) throw std::invalid_argument("phi: branching ratio must be >= 1");
  return (log_d(d) + tilt(dist, beta).log_mgf) / beta;
}

double stationarity_residual(const EnergyDistribution& dist, std::uint64_t d, double beta) {
  require_beta(beta, true);
  // Discrete laws: with a floor shift, g = beta (floor - mean) - ln d - ln S,
  // which keeps the large-beta asymptote -ln(d p_min) free of cancellation.
  if (dist.is_discrete()) {
    const auto& law = dist.as_discrete();
    const double floor = law.values.front();
    double sum = 0.0;
    double weighted_excess = 0.0;
    for (std::size_t k = 0; k < law.values.size(); ++k) {
      const double excess = law.values[k] - floor;
      const double w = law.probs[k] * std::exp(-beta * excess);
      sum += w;
      weighted_excess += w * excess;
    }
    return -beta * (weighted_excess / sum) - log_d(d) - std::log(sum);
  }
  const Tilt t = tilt(dist, beta);
  return -beta * t.mean - log_d(d) - t.log_mgf;
}

CriticalBeta beta_c(const EnergyDistribution& dist, std::uint64_t d) {
  if (d < 1) throw std::invalid_argument("beta_c: branching ratio must be >= 1");
  CriticalBeta out;
  if (d == 1) {
    out.diagnostic = "d = 1: ln d = 0 and phi(beta) = L(beta)/beta is non-increasing; no transition";
    return out;
  }
  // Finite law: g(beta) -> -ln(d p_min) as beta grows, so a sign change needs
  // d p_min < 1. Deciding this exactly avoids chasing rounding noise in g.
  if (dist.is_discrete()) {
    const double d_pmin = static_cast<double>(d) * dist.as_discrete().probs.front();
    if (d_pmin >= 1.0 - 1e-12) {
      std::ostringstream os;
      os << "d * P(eps = min) = " << d_pmin
         << " >= 1: phi decreases to -min(eps) without a stationary point";
      out.diagnostic = os.str();
      return out;
    }
  }
  // g(0+) = -ln d < 0 and g is non-decreasing; find the first bracket where
  // g turns positive.
  double lo = 1e-3;
  double hi = 1.0;
  while (lo > 1e-12 && stationarity_residual(dist, d, lo) >= 0.0) lo *= 1e-3;
  while (stationarity_residual(dist, d, hi) <= 0.0) {
    lo = hi;
    if (hi >= kBetaMax) {
      std::ostringstream os;
      os << "phi is decreasing on (0, " << kBetaMax << "]; the frozen phase is never entered";
      out.diagnostic = os.str();
      return out;
    }
    hi = std::min(hi * 2.0, kBetaMax);
  }
  while (hi - lo > 1e-12 * hi) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (stationarity_residual(dist, d, mid) > 0.0) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  out.value = 0.5 * (lo + hi);
  out.infinite = false;
  out.diagnostic = "stationary point of phi";
  return out;
}

double FreeEnergyLimit::operator()(double beta) const {
  require_beta(beta, false);
  if (critical.finite() && beta > critical.value) return phi_at_beta_c;
  return phi(energy_dist, d, beta);
}

FreeEnergyLimit make_free_energy_limit(const EnergyDistribution& dist, std::uint64_t d) {
  FreeEnergyLimit limit{dist, d, beta_c(dist, d)};
  if (limit.critical.finite()) limit.phi_at_beta_c = phi(dist, d, limit.critical.value);
  return limit;
}

double f_limit(const EnergyDistribution& dist, std::uint64_t d, double beta) {
  return make_free_energy_limit(dist, d)(beta);
}

std::uint64_t branching_for_rate(double rate_nats) {
  if (!std::isfinite(rate_nats) || rate_nats <= 0.0) {
    throw std::invalid_argument("rate must be ln d for an integer d >= 2");
  }
  const double d_real = std::exp(rate_nats);
  const double d_round = std::round(d_real);
  if (d_round < 2.0 || std::abs(std::log(d_round) - rate_nats) > 1e-9) {
    std::ostringstream os;
    os.precision(17);
    os << "rate " << rate_nats << " nats is not ln of an integer >= 2";
    throw std::invalid_argument(os.str());
  }
  return static_cast<std::uint64_t>(d_round);
}

D0Result d0_of_r(const CodingDistribution& q, const DistortionMatrix& rho, double rate_nats,
                  double symmetry_tol) {
  const SymmetryReport sym = check_symmetry(q, rho, symmetry_tol);
  if (!sym.symmetric) {
    throw std::invalid_argument("d0_of_r: symmetry condition fails: " + sym.message);
  }
  const std::uint64_t d = branching_for_rate(rate_nats);
  const EnergyDistribution law = induced_energy_distribution(q, rho, 0);
  D0Result out;
  out.d = d;
  out.critical = beta_c(law, d);
  out.minus_phi_at_beta_max = -phi(law, d, kBetaMax);
  if (out.critical.finite()) {
    out.d0 = -phi(law, d, out.critical.value);
  } else {
    // -phi(beta) -> min atom - ln(d p_min)/beta from below once d p_min >= 1.
    out.degenerate = true;
    out.d0 = law.as_discrete().values.front() + 0.0;
  }
  return out;
}

}  // namespace cayley::theory
