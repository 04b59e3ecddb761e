#include "cayley/rd.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace cayley::rd {
namespace {

constexpr double kRateTolerance = 1e-8;
constexpr double kQStarSymmetryTolerance = 1e-8;
constexpr double kBetaCap = 1e3;

void check_dims(const SourceModel& source, const DistortionMatrix& rho) {
  if (source.size() != rho.rows()) {
    throw std::invalid_argument("source alphabet size does not match distortion matrix rows");
  }
}

// Expected distortion of each reproduction letter under the source.
std::vector<double> column_costs(const SourceModel& source, const DistortionMatrix& rho) {
  std::vector<double> cost(rho.cols(), 0.0);
  for (std::size_t x = 0; x < rho.rows(); ++x) {
    for (std::size_t y = 0; y < rho.cols(); ++y) cost[y] += source[x] * rho(x, y);
  }
  return cost;
}

// Test channel W(y|x) proportional to q(y) exp(-beta rho(x,y)), row-major.
void channel(const SourceModel& source, const DistortionMatrix& rho, double beta,
             std::span<const double> q, std::vector<double>& w) {
  const std::size_t ny = rho.cols();
  for (std::size_t x = 0; x < source.size(); ++x) {
    double peak = -std::numeric_limits<double>::infinity();
    for (std::size_t y = 0; y < ny; ++y) {
      const double a = q[y] > 0.0 ? std::log(q[y]) - beta * rho(x, y)
                                  : -std::numeric_limits<double>::infinity();
      w[x * ny + y] = a;
      peak = std::max(peak, a);
    }
    double sum = 0.0;
    for (std::size_t y = 0; y < ny; ++y) {
      w[x * ny + y] = std::exp(w[x * ny + y] - peak);
      sum += w[x * ny + y];
    }
    for (std::size_t y = 0; y < ny; ++y) w[x * ny + y] /= sum;
  }
}

}  // namespace

double minimum_distortion(const SourceModel& source, const DistortionMatrix& rho) {
  check_dims(source, rho);
  double total = 0.0;
  for (std::size_t x = 0; x < rho.rows(); ++x) {
    const auto row = rho.row(x);
    total += source[x] * *std::min_element(row.begin(), row.end());
  }
  return total;
}

RDPoint blahut_arimoto(const SourceModel& source, const DistortionMatrix& rho, double beta,
                       const BlahutArimotoOptions& options) {
  check_dims(source, rho);
  if (!std::isfinite(beta) || beta < 0.0) throw std::invalid_argument("blahut_arimoto: beta < 0");
  if (!(options.tol > 0.0)) throw std::invalid_argument("blahut_arimoto: tol must be > 0");
  const std::size_t nx = rho.rows();
  const std::size_t ny = rho.cols();

  if (beta == 0.0) {
    // Zero slope: every marginal is a fixed point; the rate-zero optimum puts
    // all mass on the letter of least expected distortion.
    const auto cost = column_costs(source, rho);
    const auto best = static_cast<std::size_t>(std::min_element(cost.begin(), cost.end()) - cost.begin());
    std::vector<double> q(ny, 0.0);
    q[best] = 1.0;
    return RDPoint{0.0, 0.0, cost[best], CodingDistribution(std::move(q)), 0, true};
  }

  std::vector<double> q(ny, 1.0 / static_cast<double>(ny));
  std::vector<double> next(ny);
  std::vector<double> w(nx * ny);
  std::size_t iter = 0;
  bool converged = false;
  while (iter < options.max_iter) {
    ++iter;
    channel(source, rho, beta, q, w);
    std::fill(next.begin(), next.end(), 0.0);
    for (std::size_t x = 0; x < nx; ++x) {
      for (std::size_t y = 0; y < ny; ++y) next[y] += source[x] * w[x * ny + y];
    }
    double tv = 0.0;
    for (std::size_t y = 0; y < ny; ++y) tv += std::abs(next[y] - q[y]);
    q.swap(next);
    if (0.5 * tv < options.tol) {
      converged = true;
      break;
    }
  }

  channel(source, rho, beta, q, w);
  std::vector<double> out(ny, 0.0);
  for (std::size_t x = 0; x < nx; ++x) {
    for (std::size_t y = 0; y < ny; ++y) out[y] += source[x] * w[x * ny + y];
  }
  double rate = 0.0;
  double distortion = 0.0;
  for (std::size_t x = 0; x < nx; ++x) {
    for (std::size_t y = 0; y < ny; ++y) {
      const double wxy = w[x * ny + y];
      if (wxy <= 0.0 || source[x] <= 0.0) continue;
      rate += source[x] * wxy * std::log(wxy / out[y]);
      distortion += source[x] * wxy * rho(x, y);
    }
  }
  double sum = 0.0;
  for (double v : out) sum += v;
  for (double& v : out) v /= sum;
  return RDPoint{beta, std::max(rate, 0.0), distortion, CodingDistribution(std::move(out)), iter,
                 converged};
}

ParametricPoint rd_point_parametric(const SourceModel& source, const CodingDistribution& q_star,
                                    const DistortionMatrix& rho, double beta) {
  check_dims(source, rho);
  if (!std::isfinite(beta) || beta < 0.0) throw std::invalid_argument("rd_point_parametric: beta < 0");
  const SymmetryReport sym = check_symmetry(q_star, rho, kQStarSymmetryTolerance);
  if (!sym.symmetric) {
    throw std::invalid_argument("rd_point_parametric: (Q*, rho) not symmetric: " + sym.message);
  }
  const EnergyDistribution law = induced_energy_distribution(q_star, rho, 0);
  ParametricPoint p;
  p.distortion = theory::tilted_mean(law, beta);
  p.rate = std::max(0.0, -(beta * p.distortion + theory::log_mgf(law, beta)));
  return p;
}

DistortionRate distortion_rate(const SourceModel& source, const DistortionMatrix& rho,
                               double rate_nats) {
  check_dims(source, rho);
  if (!std::isfinite(rate_nats) || rate_nats <= 0.0) {
    throw std::invalid_argument("distortion_rate: rate must be > 0");
  }
  // At or beyond the rate where the curve meets D_min, D(R) is the floor.
  RDPoint at_cap = blahut_arimoto(source, rho, kBetaCap);
  if (rate_nats >= at_cap.rate - kRateTolerance) {
    return DistortionRate{std::move(at_cap), minimum_distortion(source, rho), true};
  }
  double lo = 1e-4;
  double hi = 50.0;
  RDPoint at_hi = blahut_arimoto(source, rho, hi);
  while (at_hi.rate < rate_nats && hi < kBetaCap) {
    lo = hi;
    hi = std::min(2.0 * hi, kBetaCap);
    at_hi = blahut_arimoto(source, rho, hi);
  }
  while (lo > 1e-12 && blahut_arimoto(source, rho, lo).rate > rate_nats) lo *= 0.1;

  RDPoint best = at_hi;
  for (int it = 0; it < 300; ++it) {
    const double mid = 0.5 * (lo + hi);
    RDPoint p = blahut_arimoto(source, rho, mid);
    const bool closer = std::abs(p.rate - rate_nats) < std::abs(best.rate - rate_nats);
    if (p.rate < rate_nats) {
      lo = mid;
    } else {
      hi = mid;
    }
    if (closer) best = std::move(p);
    if (std::abs(best.rate - rate_nats) <= kRateTolerance * 1e-2 || hi - lo <= 1e-15 * hi) break;
  }
  return DistortionRate{best, best.distortion, false};
}

std::vector<RDPoint> rd_curve(const SourceModel& source, const DistortionMatrix& rho,
                              std::span<const double> betas) {
  std::vector<RDPoint> out;
  out.reserve(betas.size());
  for (double b : betas) out.push_back(blahut_arimoto(source, rho, b));
  return out;
}

const char* to_string(Verdict v) noexcept {
  switch (v) {
    case Verdict::kPass: return "PASS";
    case Verdict::kFail: return "FAIL";
    case Verdict::kNotApplicable: return "NOT-APPLICABLE";
  }
  return "?";
}

TheoremReport verify_d0_equals_d(const SourceModel& source, const DistortionMatrix& rho,
                                 std::uint64_t d, double tol) {
  if (d < 2) throw std::invalid_argument("verify_d0_equals_d: d must be >= 2");
  TheoremReport report;
  report.rate_nats = std::log(static_cast<double>(d));
  const DistortionRate dr = distortion_rate(source, rho, report.rate_nats);
  report.d_of_r = dr.distortion;
  report.at_floor = dr.at_floor;
  report.beta_star = dr.point.beta;
  report.q_star.assign(dr.point.q_star.probs().begin(), dr.point.q_star.probs().end());
  report.symmetry = check_symmetry(dr.point.q_star, rho, kQStarSymmetryTolerance);
  if (!report.symmetry.symmetric) {
    report.verdict = Verdict::kNotApplicable;
    report.message = "Q* violates the symmetry condition: " + report.symmetry.message;
    return report;
  }
  const auto d0 = theory::d0_of_r(dr.point.q_star, rho, report.rate_nats, kQStarSymmetryTolerance);
  report.d0 = d0.d0;
  report.degenerate = d0.degenerate;
  report.gap = std::abs(report.d0 - report.d_of_r);
  report.verdict = report.gap <= tol ? Verdict::kPass : Verdict::kFail;
  std::ostringstream os;
  os.precision(10);
  os << "D0=" << report.d0 << " D(R)=" << report.d_of_r << " gap=" << report.gap
     << (report.degenerate ? " (degenerate: beta_c infinite)" : "");
  report.message = os.str();
  return report;
}

}  // namespace cayley::rd
