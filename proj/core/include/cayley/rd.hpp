#pragma once

// Rate-distortion numerics for a finite memoryless source.
//
// Points on the R(D) curve are indexed by the slope parameter beta >= 0 of the
// Lagrangian. Blahut-Arimoto gives the optimal test channel and its output
// marginal Q*; when (Q*, rho) satisfies the symmetry condition the same point
// follows from the single-letter parametric form
//   D(beta) = E_{Q*}[rho e^{-beta rho}] / E_{Q*}[e^{-beta rho}]
//   R(beta) = -(beta D(beta) + ln E_{Q*}[e^{-beta rho}]).

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "cayley/model.hpp"
#include "cayley/theory.hpp"

namespace cayley::rd {

struct RDPoint {
  double beta = 0.0;
  double rate = 0.0;        // nats per symbol
  double distortion = 0.0;
  CodingDistribution q_star;
  std::size_t iterations = 0;
  bool converged = false;
};

struct BlahutArimotoOptions {
  double tol = 1e-13;  // total-variation change of the output marginal
  std::size_t max_iter = 200000;
};

/// Alternating minimization from the uniform output marginal. Non-convergence
/// is reported through RDPoint::converged, not thrown.
[[nodiscard]] RDPoint blahut_arimoto(const SourceModel& source, const DistortionMatrix& rho,
                                     double beta, const BlahutArimotoOptions& options = {});

struct ParametricPoint {
  double rate = 0.0;
  double distortion = 0.0;
};

/// Single-letter form of the curve at slope beta; requires (q_star, rho)
/// symmetric, otherwise throws std::invalid_argument.
[[nodiscard]] ParametricPoint rd_point_parametric(const SourceModel& source,
                                                  const CodingDistribution& q_star,
                                                  const DistortionMatrix& rho, double beta);

/// sum_x p(x) min_y rho(x, y): the smallest achievable distortion.
[[nodiscard]] double minimum_distortion(const SourceModel& source, const DistortionMatrix& rho);

struct DistortionRate {
  RDPoint point;
  double distortion = 0.0;
  /// The target rate is at or beyond R(D_min); distortion is D_min.
  bool at_floor = false;
};

/// D(R) by bisection on beta until R(beta) = rate within 1e-8 nats. Initial
/// bracket [1e-4, 50], expanded up to beta = 1e3.
[[nodiscard]] DistortionRate distortion_rate(const SourceModel& source,
                                             const DistortionMatrix& rho, double rate_nats);

[[nodiscard]] std::vector<RDPoint> rd_curve(const SourceModel& source,
                                            const DistortionMatrix& rho,
                                            std::span<const double> betas);

enum class Verdict { kPass, kFail, kNotApplicable };

[[nodiscard]] const char* to_string(Verdict v) noexcept;

struct TheoremReport {
  Verdict verdict = Verdict::kFail;
  double rate_nats = 0.0;
  double d0 = 0.0;
  double d_of_r = 0.0;
  double gap = 0.0;  // |D0 - D|
  double beta_star = 0.0;
  bool degenerate = false;  // D0 is a limit (beta_c infinite)
  bool at_floor = false;
  std::vector<double> q_star;
  SymmetryReport symmetry;
  std::string message;
};

/// Computes Q* at R = ln d, checks the symmetry condition for Q*, and
/// compares D0(R) built from Q* with D(R). NotApplicable when Q* is not
/// symmetric.
[[nodiscard]] TheoremReport verify_d0_equals_d(const SourceModel& source,
                                               const DistortionMatrix& rho, std::uint64_t d,
                                               double tol = 1e-4);

}  // namespace cayley::rd
