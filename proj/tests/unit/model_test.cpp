#include "cayley/model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include <gtest/gtest.h>

#include "cayley/rng.hpp"

namespace cayley {
namespace {

TEST(Pmf, RejectsBadMass) {
  EXPECT_THROW(SourceModel({0.5, 0.6}), std::invalid_argument);
  EXPECT_THROW(SourceModel({-0.1, 1.1}), std::invalid_argument);
  EXPECT_THROW(SourceModel(std::vector<double>{}), std::invalid_argument);
  EXPECT_NO_THROW(SourceModel({0.5, 0.5 + 1e-13}));
}

TEST(Pmf, SampleSkipsZeroMassLetters) {
  const CodingDistribution q({0.0, 1.0, 0.0});
  for (double u : {1e-12, 0.3, 0.999999999}) EXPECT_EQ(q.sample(u), 1u);
}

TEST(DistortionMatrix, Validation) {
  EXPECT_THROW(DistortionMatrix(2, 2, {0, 1, 1}), std::invalid_argument);
  EXPECT_THROW(DistortionMatrix(2, 2, {0, -1, 1, 0}), std::invalid_argument);
  EXPECT_THROW(DistortionMatrix(std::vector<std::vector<double>>{{0, 1}, {1}}),
               std::invalid_argument);
  const auto h = DistortionMatrix::hamming(3);
  EXPECT_EQ(h(1, 1), 0.0);
  EXPECT_EQ(h(1, 2), 1.0);
}

TEST(EnergyDistribution, MergesAndDropsAtoms) {
  const auto e = EnergyDistribution::discrete({1.0, 0.0, 1.0 + 1e-12, 5.0}, {0.25, 0.5, 0.25, 0.0});
  ASSERT_TRUE(e.is_discrete());
  EXPECT_EQ(e.as_discrete().values, (std::vector<double>{0.0, 1.0}));
  EXPECT_DOUBLE_EQ(e.as_discrete().probs[1], 0.5);
  EXPECT_THROW(EnergyDistribution::gaussian(0.0, 0.0), std::invalid_argument);
}

TEST(Symmetry, BinaryHammingUniformIsSymmetric) {
  EXPECT_TRUE(check_symmetry(CodingDistribution::uniform(2), DistortionMatrix::hamming(2)).symmetric);
}

TEST(Symmetry, SkewedQBreaksHamming) {
  const auto report = check_symmetry(CodingDistribution({0.9, 0.1}), DistortionMatrix::hamming(2));
  EXPECT_FALSE(report.symmetric);
  EXPECT_EQ(report.x, 0u);
  EXPECT_EQ(report.x_prime, 1u);
  // rho(0,Y) has mass 0.1 at distortion 1, rho(1,Y) has 0.9.
  const double m0 = report.distortion_value == 1.0 ? report.mass_x : 1.0 - report.mass_x;
  const double m1 = report.distortion_value == 1.0 ? report.mass_x_prime : 1.0 - report.mass_x_prime;
  EXPECT_NEAR(m0, 0.1, 1e-15);
  EXPECT_NEAR(m1, 0.9, 1e-15);
}

TEST(Symmetry, SwapAllowedOnlyBetweenEqualMassLetters) {
  const DistortionMatrix rho({{0, 1, 2}, {1, 0, 2}});
  // Swapping columns a and b is harmless when q(a) = q(b).
  EXPECT_TRUE(check_symmetry(CodingDistribution({0.3, 0.3, 0.4}), rho).symmetric);
  // Row 0 law {0:.5, 1:.3, 2:.2}; row 1 law {0:.3, 1:.5, 2:.2}.
  const auto report = check_symmetry(CodingDistribution({0.5, 0.3, 0.2}), rho);
  EXPECT_FALSE(report.symmetric);
  EXPECT_NEAR(std::abs(report.mass_x - report.mass_x_prime), 0.2, 1e-12);
}

TEST(Symmetry, DimensionMismatchThrows) {
  EXPECT_THROW((void)check_symmetry(CodingDistribution::uniform(3), DistortionMatrix::hamming(2)),
               std::invalid_argument);
}

TEST(InducedEnergy, Examples) {
  const auto binary = induced_energy_distribution(CodingDistribution::uniform(2),
                                                  DistortionMatrix::hamming(2), 0);
  EXPECT_EQ(binary.as_discrete().values, (std::vector<double>{0.0, 1.0}));
  EXPECT_EQ(binary.as_discrete().probs, (std::vector<double>{0.5, 0.5}));

  const auto degenerate = induced_energy_distribution(CodingDistribution({1.0, 0.0}),
                                                      DistortionMatrix({{0, 1}, {1, 0}}), 0);
  EXPECT_EQ(degenerate.as_discrete().values, (std::vector<double>{0.0}));
  EXPECT_EQ(degenerate.as_discrete().probs, (std::vector<double>{1.0}));

  for (std::size_t x = 0; x < 4; ++x) {
    const auto quaternary = induced_energy_distribution(CodingDistribution::uniform(4),
                                                        DistortionMatrix::hamming(4), x);
    EXPECT_EQ(quaternary.as_discrete().values, (std::vector<double>{0.0, 1.0}));
    EXPECT_DOUBLE_EQ(quaternary.as_discrete().probs[0], 0.25);
    EXPECT_DOUBLE_EQ(quaternary.as_discrete().probs[1], 0.75);
  }
}

// Random matrices whose rows are permutations of a base row, uniform Q.
TEST(SymmetryProperty, RowPermutedMatricesUnderUniformQ) {
  std::mt19937_64 gen(20240611);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t rows = 2 + gen() % 4;
    const std::size_t cols = 2 + gen() % 5;
    std::vector<double> base(cols);
    for (auto& v : base) v = static_cast<double>(gen() % 4) * 0.5;
    std::vector<std::vector<double>> m;
    for (std::size_t r = 0; r < rows; ++r) {
      auto row = base;
      std::shuffle(row.begin(), row.end(), gen);
      m.push_back(row);
    }
    const DistortionMatrix rho(m);
    const auto q = CodingDistribution::uniform(cols);
    ASSERT_TRUE(check_symmetry(q, rho).symmetric);
    const auto reference = induced_energy_distribution(q, rho, 0);
    for (std::size_t x = 1; x < rows; ++x) {
      const auto other = induced_energy_distribution(q, rho, x);
      ASSERT_EQ(other.as_discrete().values, reference.as_discrete().values);
      for (std::size_t k = 0; k < other.as_discrete().probs.size(); ++k) {
        ASSERT_NEAR(other.as_discrete().probs[k], reference.as_discrete().probs[k], 1e-12);
      }
    }
  }
}

TEST(Rng, DeriveIsDeterministicAndSpreads) {
  EXPECT_EQ(rng::derive(7, 3, 4), rng::derive(7, 3, 4));
  EXPECT_NE(rng::derive(7, 3, 4), rng::derive(7, 4, 3));
  EXPECT_NE(rng::trial_seed(1, 0), rng::trial_seed(1, 0, rng::Stream::kCodeTrial));
  for (std::uint64_t b : {0ULL, 1ULL, ~0ULL}) {
    const double u = rng::to_unit_open(b);
    EXPECT_GT(u, 0.0);
    EXPECT_LT(u, 1.0);
  }
}

}  // namespace
}  // namespace cayley
