#include "cayley/theory.hpp"

#include <cmath>

#include <gtest/gtest.h>

#include "brute_force.hpp"

namespace cayley::theory {
namespace {

const double kSqrt2Ln2 = std::sqrt(2.0 * std::log(2.0));

const auto kGauss = EnergyDistribution::gaussian(0.0, 1.0);
const auto kFairCoin = EnergyDistribution::bernoulli(0.0, 1.0, 0.5);

// Maximizes -(ln E e^{-beta rho} + R)/beta by golden-section search on a
// log-beta axis; independent of the stationarity root finder.
double d0_by_search(const EnergyDistribution& law, double rate) {
  const auto objective = [&](double log_beta) {
    const double beta = std::exp(log_beta);
    return -(log_mgf(law, beta) + rate) / beta;
  };
  double lo = std::log(1e-3), hi = std::log(1e3);
  const double g = (std::sqrt(5.0) - 1.0) / 2.0;
  for (int k = 0; k < 300; ++k) {
    const double a = hi - g * (hi - lo), b = lo + g * (hi - lo);
    if (objective(a) < objective(b)) lo = a; else hi = b;
  }
  return objective(0.5 * (lo + hi));
}

TEST(LogMgf, Examples) {
  EXPECT_NEAR(log_mgf(EnergyDistribution::point_mass(1.7), 2.0), -3.4, 1e-15);
  EXPECT_NEAR(log_mgf(kGauss, 2.0), 2.0, 1e-15);
  EXPECT_NEAR(log_mgf(kFairCoin, 1.0), std::log((1.0 + std::exp(-1.0)) / 2.0), 1e-15);
  EXPECT_NEAR(log_mgf(kFairCoin, 1.0), -0.37988549304172, 1e-13);
  EXPECT_EQ(log_mgf(kFairCoin, 0.0), 0.0);
  EXPECT_THROW((void)log_mgf(kGauss, -1.0), std::invalid_argument);
}

TEST(LogMgf, TiltedMeanIsMinusDerivative) {
  const auto law = EnergyDistribution::discrete({-1.0, 0.5, 3.0}, {0.3, 0.3, 0.4});
  EXPECT_NEAR(tilted_mean(law, 0.0), 1.05, 1e-15);
  for (double beta : {0.4, 2.0, 30.0}) {
    const double h = 1e-5;
    const double fd = -(log_mgf(law, beta + h) - log_mgf(law, beta - h)) / (2 * h);
    EXPECT_NEAR(tilted_mean(law, beta), fd, 1e-6);
  }
}

TEST(Phi, Examples) {
  const double c = 0.4;
  EXPECT_NEAR(phi(EnergyDistribution::point_mass(c), 2, std::log(2.0)), 1.0 - c, 1e-15);
  EXPECT_NEAR(phi(kGauss, 2, kSqrt2Ln2), kSqrt2Ln2, 1e-15);
  EXPECT_NEAR(phi(kFairCoin, 2, 1.0), std::log(1.0 + std::exp(-1.0)), 1e-15);
  EXPECT_NEAR(phi(kFairCoin, 2, 1.0), 0.31326168751822, 1e-13);
  EXPECT_THROW((void)phi(kGauss, 2, 0.0), std::invalid_argument);
}

TEST(BetaC, GaussianMatchesClosedForm) {
  const auto bc = beta_c(kGauss, 2);
  ASSERT_TRUE(bc.finite());
  EXPECT_NEAR(bc.value, kSqrt2Ln2, 1e-10);
  EXPECT_NEAR(bc.value, 1.17741, 1e-5);
  // N(mu, sigma^2): phi = ln d / beta - mu + beta sigma^2 / 2.
  const auto shifted = beta_c(EnergyDistribution::gaussian(3.0, 0.5), 5);
  ASSERT_TRUE(shifted.finite());
  EXPECT_NEAR(shifted.value, std::sqrt(2.0 * std::log(5.0)) / 0.5, 1e-9);
}

TEST(BetaC, FairCoinBinaryTreeNeverFreezes) {
  const auto bc = beta_c(kFairCoin, 2);
  EXPECT_FALSE(bc.finite());
  EXPECT_FALSE(bc.diagnostic.empty());
  // Dense-grid oracle: phi strictly decreasing.
  double prev = phi(kFairCoin, 2, 0.01);
  for (double beta = 0.02; beta < 25.0; beta *= 1.05) {
    const double cur = phi(kFairCoin, 2, beta);
    EXPECT_LT(cur, prev);
    prev = cur;
  }
}

TEST(BetaC, FairCoinQuaternaryTreeNeverFreezesEither) {
  // With d = 4 the zero-energy branches form a supercritical branching
  // process (4 * 1/2 > 1); phi = (ln 2 + ln(1 + e^-beta)) / beta decreases
  // monotonically to 0.
  EXPECT_FALSE(beta_c(kFairCoin, 4).finite());
  double prev = phi(kFairCoin, 4, 0.01);
  for (double beta = 0.02; beta < 25.0; beta *= 1.05) {
    const double cur = phi(kFairCoin, 4, beta);
    EXPECT_LT(cur, prev);
    prev = cur;
  }
}

TEST(BetaC, SubcriticalGroundLevelFreezes) {
  // P(eps = 0) = 1/4 and d = 2, so d * p_min < 1 and phi turns around.
  const auto law = EnergyDistribution::bernoulli(0.0, 1.0, 0.75);
  const auto bc = beta_c(law, 2);
  ASSERT_TRUE(bc.finite());
  EXPECT_NEAR(bc.value, 2.5532449091856573, 1e-10);
  EXPECT_NEAR(stationarity_residual(law, 2, bc.value), 0.0, 1e-10);
  const double at_root = phi(law, 2, bc.value);
  for (double beta = 0.05; beta < 50.0; beta += 0.05) EXPECT_GE(phi(law, 2, beta), at_root - 1e-14);
}

TEST(BetaC, DegenerateBranching) {
  EXPECT_FALSE(beta_c(kGauss, 1).finite());
  EXPECT_THROW((void)beta_c(kGauss, 0), std::invalid_argument);
}

TEST(FLimit, Examples) {
  EXPECT_NEAR(f_limit(kGauss, 2, 0.5), std::log(2.0) / 0.5 + 0.25, 1e-14);
  EXPECT_NEAR(f_limit(kGauss, 2, 0.5), 1.63629, 1e-5);
  EXPECT_NEAR(f_limit(kGauss, 2, 3.0), kSqrt2Ln2, 1e-12);
  const auto limit = make_free_energy_limit(kGauss, 2);
  const double bc = limit.critical.value;
  EXPECT_NEAR(limit(bc), limit.phi_at_beta_c, 1e-15);
  EXPECT_NEAR(limit(std::nextafter(bc, 10.0)), limit(bc), 1e-15);
  // No transition: f = phi everywhere.
  EXPECT_EQ(f_limit(kFairCoin, 2, 40.0), phi(kFairCoin, 2, 40.0));
}

TEST(FLimit, MinusFIsNondecreasingAndSaturates) {
  const auto limit = make_free_energy_limit(kGauss, 2);
  double prev = -limit(0.05);
  for (double beta = 0.06; beta < 6.0; beta += 0.01) {
    const double cur = -limit(beta);
    EXPECT_GE(cur, prev - 1e-15);
    if (beta > limit.critical.value) EXPECT_EQ(cur, -limit.phi_at_beta_c);
    prev = cur;
  }
}

TEST(FLimit, SecondOrderTransitionShape) {
  const auto limit = make_free_energy_limit(kGauss, 2);
  const double bc = limit.critical.value;
  const double h = 1e-3;
  // Grid offset so that beta_c falls strictly inside an interval.
  std::vector<double> b, f;
  for (int k = -20; k <= 20; ++k) {
    b.push_back(bc + (k + 0.37) * h);
    f.push_back(limit(b.back()));
  }
  std::vector<double> d1, d2;
  for (std::size_t k = 0; k + 1 < f.size(); ++k) d1.push_back((f[k + 1] - f[k]) / h);
  for (std::size_t k = 0; k + 1 < d1.size(); ++k) d2.push_back((d1[k + 1] - d1[k]) / h);
  const std::size_t seam = 19;  // b[19] < bc < b[20]
  ASSERT_LT(b[seam], bc);
  ASSERT_GT(b[seam + 1], bc);
  EXPECT_LE(std::abs(f[seam + 1] - f[seam]), 1e-6);
  EXPECT_LE(std::abs(d1[seam] - d1[seam - 1]), 1e-3);
  EXPECT_LE(std::abs(d1[seam + 1] - d1[seam]), 1e-3);
  // phi'' at beta_c is 2 ln 2 / beta_c^3 ~ 0.85; the frozen side is flat.
  EXPECT_GE(std::abs(d2[seam - 2] - d2[seam + 1]), 0.1);
}

TEST(FLimit, PhiBoundedByLargestAtom) {
  const auto law = EnergyDistribution::discrete({-0.5, 1.0, 2.0}, {0.1, 0.6, 0.3});
  for (std::uint64_t d : {2u, 3u, 8u}) {
    for (double beta = 0.1; beta < 30.0; beta *= 1.3) EXPECT_GE(phi(law, d, beta), -2.0);
    const auto limit = make_free_energy_limit(law, d);
    if (limit.critical.finite()) EXPECT_GE(limit.phi_at_beta_c, -2.0);
  }
}

TEST(D0, BinaryHammingIsDegenerateZero) {
  const auto r = d0_of_r(CodingDistribution::uniform(2), DistortionMatrix::hamming(2), std::log(2.0));
  EXPECT_TRUE(r.degenerate);
  EXPECT_FALSE(r.critical.finite());
  EXPECT_EQ(r.d0, 0.0);
  EXPECT_FALSE(std::signbit(r.d0));
  EXPECT_LE(r.minus_phi_at_beta_max, 0.0);
}

TEST(D0, QuaternaryHammingAtOneBit) {
  const auto q = CodingDistribution::uniform(4);
  const auto rho = DistortionMatrix::hamming(4);
  const auto r = d0_of_r(q, rho, std::log(2.0));
  EXPECT_FALSE(r.degenerate);
  EXPECT_EQ(r.d, 2u);
  EXPECT_NEAR(r.d0, d0_by_search(induced_energy_distribution(q, rho, 0), std::log(2.0)), 1e-9);
  EXPECT_NEAR(r.d0, testing::symmetric_hamming_distortion(4, std::log(2.0)), 1e-9);
  EXPECT_NEAR(r.d0, 0.1893, 1e-4);
  // Same number through the generic polymer pipeline.
  const auto limit = make_free_energy_limit(induced_energy_distribution(q, rho, 0), 2);
  EXPECT_EQ(r.d0, -limit.phi_at_beta_c);
}

TEST(D0, ConstantDistortion) {
  const double c = 0.625;
  const auto r = d0_of_r(CodingDistribution::uniform(3), DistortionMatrix::constant(2, 3, c), std::log(3.0));
  EXPECT_TRUE(r.degenerate);
  EXPECT_EQ(r.d0, c);
  EXPECT_NEAR(r.minus_phi_at_beta_max, c - std::log(3.0) / kBetaMax, 1e-12);
}

TEST(D0, Errors) {
  EXPECT_THROW((void)d0_of_r(CodingDistribution({0.9, 0.1}), DistortionMatrix::hamming(2), std::log(2.0)),
               std::invalid_argument);
  EXPECT_THROW((void)d0_of_r(CodingDistribution::uniform(2), DistortionMatrix::hamming(2), 0.5),
               std::invalid_argument);
  EXPECT_THROW((void)d0_of_r(CodingDistribution::uniform(2), DistortionMatrix::hamming(2), 0.0),
               std::invalid_argument);
  EXPECT_EQ(branching_for_rate(std::log(7.0)), 7u);
}

}  // namespace
}  // namespace cayley::theory
