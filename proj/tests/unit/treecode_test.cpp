#include "cayley/treecode.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include <gtest/gtest.h>

#include "brute_force.hpp"
#include "cayley/dprm.hpp"

namespace cayley::treecode {
namespace {

using testing::enumerate_walks;

std::vector<std::size_t> random_sequence(std::size_t k, int n, std::uint64_t seed) {
  return draw_source_sequence(SourceModel::uniform(k), n, seed);
}

TEST(TreeCode, SymbolsAreDeterministicAndChecked) {
  const TreeCode a(11, CodingDistribution::uniform(3), TreeShape(3, 5));
  const TreeCode b(11, CodingDistribution::uniform(3), TreeShape(3, 5));
  for (int t = 1; t <= 5; ++t) {
    for (std::uint64_t j = 0; j < a.shape().generation_size(t); ++j) {
      EXPECT_EQ(a.symbol(t, j), b.symbol(t, j));
    }
  }
  EXPECT_THROW((void)a.symbol(0, 0), std::out_of_range);
  EXPECT_THROW((void)a.symbol(6, 0), std::out_of_range);
  EXPECT_THROW((void)a.symbol(2, 9), std::out_of_range);
}

TEST(TreeCode, PointMassCoding) {
  const TreeCode code(3, CodingDistribution(std::vector<double>{0.0, 1.0, 0.0}), TreeShape(2, 8));
  for (int t = 1; t <= 8; ++t) {
    for (std::uint64_t j = 0; j < (1ULL << t); ++j) EXPECT_EQ(code.symbol(t, j), 1u);
  }
}

TEST(TreeCode, LetterFrequenciesFollowQ) {
  const std::vector<double> q{0.5, 0.3, 0.2};
  const TreeCode code(2024, CodingDistribution(q), TreeShape(2, 17));
  std::vector<double> counts(3, 0.0);
  const std::uint64_t draws = 100000;
  for (std::uint64_t j = 0; j < draws; ++j) counts[code.symbol(17, j)] += 1.0;
  for (std::size_t y = 0; y < 3; ++y) EXPECT_NEAR(counts[y] / static_cast<double>(draws), q[y], 0.01);
}

TEST(TreeCode, CodewordSymbolValidatesPath) {
  const TreeCode code(5, CodingDistribution::uniform(2), TreeShape(2, 3));
  const std::vector<std::uint64_t> path{1, 2, 5};
  EXPECT_EQ(codeword_symbol(code, 3, path), code.symbol(3, 5));
  const std::vector<std::uint64_t> bad{1, 4};
  EXPECT_THROW((void)codeword_symbol(code, 2, bad), std::out_of_range);
}

TEST(EncodeExact, MatchesEnumeration) {
  const auto rho = DistortionMatrix::hamming(3);
  for (std::uint64_t d : {2u, 3u}) {
    for (int n = 1; n <= 5; ++n) {
      for (std::uint64_t seed = 0; seed < 6; ++seed) {
        const TreeCode code(seed, CodingDistribution::uniform(3), TreeShape(d, n));
        const auto x = random_sequence(3, n, seed + 1000);
        const auto all = enumerate_walks(d, n, [&](int t, std::uint64_t j) {
          return rho(x[static_cast<std::size_t>(t - 1)], code.symbol(t, j));
        });
        const auto brute = testing::brute_ground(all);
        const EncodingResult got = encode_exact(code, x, rho);
        EXPECT_EQ(got.walk.steps, brute.walk);
        EXPECT_DOUBLE_EQ(got.total_distortion, brute.energy);
        EXPECT_EQ(got.per_symbol.size(), static_cast<std::size_t>(n));
        EXPECT_NEAR(got.distortion_per_symbol(), brute.energy / n, 1e-15);
      }
    }
  }
}

TEST(EncodeExact, DepthOne) {
  const TreeCode code(9, CodingDistribution::uniform(4), TreeShape(4, 1));
  const auto rho = DistortionMatrix::hamming(4);
  const std::vector<std::size_t> x{2};
  const auto got = encode_exact(code, x, rho);
  double best = 1.0;
  for (std::uint64_t j = 0; j < 4; ++j) best = std::min(best, rho(2, code.symbol(1, j)));
  EXPECT_EQ(got.total_distortion, best);
}

TEST(EncodeExact, ZeroDistortionPicksAllZeroWalk) {
  const TreeCode code(1, CodingDistribution::uniform(2), TreeShape(3, 6));
  const auto rho = DistortionMatrix::constant(2, 2, 0.0);
  const auto got = encode_exact(code, random_sequence(2, 6, 3), rho);
  EXPECT_EQ(got.walk.steps, std::vector<std::uint64_t>(6, 0));
  EXPECT_EQ(got.total_distortion, 0.0);
}

TEST(EncodeExact, AgreesWithGroundStateOfTabulatedField) {
  const TreeShape shape(2, 9);
  const TreeCode code(77, CodingDistribution(std::vector<double>{0.6, 0.4}), shape);
  const auto rho = DistortionMatrix(std::vector<std::vector<double>>{{0.0, 1.5}, {0.7, 0.2}});
  const auto x = random_sequence(2, 9, 78);
  std::vector<std::vector<double>> table(10);
  for (int t = 1; t <= 9; ++t) {
    for (std::uint64_t j = 0; j < shape.generation_size(t); ++j) {
      table[static_cast<std::size_t>(t)].push_back(rho(x[static_cast<std::size_t>(t - 1)], code.symbol(t, j)));
    }
  }
  const auto field = [&](int t, std::uint64_t j) { return table[static_cast<std::size_t>(t)][j]; };
  const GroundState gs = ground_state(field, shape);
  const auto enc = encode_exact(code, x, rho);
  EXPECT_EQ(enc.walk, gs.walk);
  EXPECT_DOUBLE_EQ(enc.total_distortion, gs.energy);
}

TEST(EncodeExact, NeverWorseThanTheAllZeroWalk) {
  const auto rho = DistortionMatrix::hamming(2);
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const TreeCode code(seed, CodingDistribution::uniform(2), TreeShape(2, 8));
    const auto x = random_sequence(2, 8, seed ^ 0xABCDEF);
    const auto zero = evaluate_walk(code, x, rho, Walk{std::vector<std::uint64_t>(8, 0)});
    EXPECT_LE(encode_exact(code, x, rho).total_distortion, zero.total_distortion);
  }
}

TEST(EncodeBeam, WidthOneIsGreedy) {
  const auto rho = DistortionMatrix::hamming(3);
  const TreeCode code(31, CodingDistribution::uniform(3), TreeShape(3, 7));
  const auto x = random_sequence(3, 7, 32);
  std::uint64_t j = 0;
  std::vector<std::uint64_t> steps;
  for (int t = 1; t <= 7; ++t) {
    std::uint64_t best = j * 3;
    for (std::uint64_t c = j * 3; c < j * 3 + 3; ++c) {
      if (rho(x[static_cast<std::size_t>(t - 1)], code.symbol(t, c)) <
          rho(x[static_cast<std::size_t>(t - 1)], code.symbol(t, best))) {
        best = c;
      }
    }
    steps.push_back(best);
    j = best;
  }
  EXPECT_EQ(encode_beam(code, x, rho, 1).walk.steps, steps);
}

TEST(EncodeBeam, FullWidthIsExact) {
  const auto rho = DistortionMatrix::hamming(2);
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const TreeCode code(seed, CodingDistribution::uniform(2), TreeShape(3, 6));
    const auto x = random_sequence(2, 6, seed + 5);
    const auto exact = encode_exact(code, x, rho);
    const auto beam = encode_beam(code, x, rho, 243);
    EXPECT_EQ(beam.walk, exact.walk);
    EXPECT_EQ(beam.total_distortion, exact.total_distortion);
  }
}

TEST(EncodeBeam, ModerateWidthIsNearExact) {
  const auto rho = DistortionMatrix::hamming(2);
  double exact_sum = 0.0;
  double beam_sum = 0.0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const TreeCode code(seed, CodingDistribution::uniform(2), TreeShape(2, 10));
    const auto x = random_sequence(2, 10, seed + 999);
    const double exact = encode_exact(code, x, rho).total_distortion;
    const double beam = encode_beam(code, x, rho, 8).total_distortion;
    EXPECT_GE(beam, exact);
    exact_sum += exact;
    beam_sum += beam;
  }
  EXPECT_LE(beam_sum, 1.10 * exact_sum);
}

// A wider beam can discard a partial path that a narrower one keeps, so the
// per-instance distortion is not monotone in the width; the average is.
TEST(EncodeBeam, AverageDistortionFallsWithWidth) {
  const auto rho = DistortionMatrix::hamming(2);
  const std::vector<std::size_t> widths{1, 2, 4, 8, 16, 32};
  std::vector<double> sums(widths.size(), 0.0);
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const TreeCode code(seed, CodingDistribution::uniform(2), TreeShape(2, 12));
    const auto x = random_sequence(2, 12, seed + 4242);
    const double exact = encode_exact(code, x, rho).total_distortion;
    for (std::size_t k = 0; k < widths.size(); ++k) {
      const double got = encode_beam(code, x, rho, widths[k]).total_distortion;
      EXPECT_GE(got, exact);
      sums[k] += got;
    }
  }
  for (std::size_t k = 1; k < widths.size(); ++k) EXPECT_LE(sums[k], sums[k - 1]);
}

TEST(EncodeBeam, RejectsZeroWidth) {
  const TreeCode code(1, CodingDistribution::uniform(2), TreeShape(2, 3));
  const auto x = random_sequence(2, 3, 1);
  EXPECT_THROW((void)encode_beam(code, x, DistortionMatrix::hamming(2), 0), std::invalid_argument);
}

TEST(Decode, RoundTripReproducesEncoderOutput) {
  const auto rho = DistortionMatrix::hamming(3);
  for (std::uint64_t d : {2u, 3u, 4u}) {
    const TreeCode code(d * 17, CodingDistribution::uniform(3), TreeShape(d, 6));
    const auto x = random_sequence(3, 6, d);
    const auto enc = encode_exact(code, x, rho);
    const auto stream = codec::pack(enc.walk, d);
    std::vector<int> order;
    const auto letters = decode_sequential(code, stream, [&](int t, std::size_t letter) {
      order.push_back(t);
      EXPECT_EQ(letter, enc.reproduction[static_cast<std::size_t>(t - 1)]);
    });
    EXPECT_EQ(letters, enc.reproduction);
    EXPECT_EQ(order, (std::vector<int>{1, 2, 3, 4, 5, 6}));
  }
}

TEST(Decode, ShapeMismatchIsRejected) {
  const TreeCode code(1, CodingDistribution::uniform(2), TreeShape(2, 4));
  const auto stream = codec::pack(Walk{{1, 2, 5}}, 2);
  EXPECT_THROW((void)decode_sequential(code, stream), std::invalid_argument);
}

TEST(Ensemble, ConstantDistortionGivesThatConstant) {
  const auto stats = simulate_ensemble(SourceModel::uniform(2), CodingDistribution::uniform(2),
                                       DistortionMatrix::constant(2, 2, 0.25), 2, 6,
                                       {.trials = 8, .master_seed = 3});
  EXPECT_EQ(stats.mean, 0.25);
  EXPECT_EQ(stats.stddev, 0.0);
  EXPECT_EQ(stats.d0, 0.25);
  EXPECT_EQ(stats.gap_to_d0, 0.0);
}

TEST(Ensemble, ThreadCountDoesNotChangeResults) {
  EnsembleOptions opts{.trials = 12, .master_seed = 99, .fixed_sequence = true};
  opts.threads = 1;
  const auto a = simulate_ensemble(SourceModel::uniform(4), CodingDistribution::uniform(4),
                                   DistortionMatrix::hamming(4), 2, 8, opts);
  opts.threads = 4;
  const auto b = simulate_ensemble(SourceModel::uniform(4), CodingDistribution::uniform(4),
                                   DistortionMatrix::hamming(4), 2, 8, opts);
  EXPECT_EQ(a.per_trial, b.per_trial);
}

TEST(Ensemble, RequiresSymmetry) {
  const auto rho = DistortionMatrix(std::vector<std::vector<double>>{{0.0, 1.0}, {2.0, 0.0}});
  EXPECT_THROW((void)simulate_ensemble(SourceModel::uniform(2), CodingDistribution::uniform(2),
                                       rho, 2, 4, {.trials = 2}),
               std::invalid_argument);
}

TEST(Ensemble, MeanStaysAboveRateDistortionFloor) {
  // Ternary Hamming at R = ln 2: D(R) ~ 0.1039.
  const auto stats = simulate_ensemble(SourceModel::uniform(3), CodingDistribution::uniform(3),
                                       DistortionMatrix::hamming(3), 2, 10,
                                       {.trials = 20, .master_seed = 5});
  EXPECT_NEAR(stats.d_of_r, 0.10385734171377986, 1e-6);
  EXPECT_GE(stats.mean, stats.d_of_r - 0.01);
  EXPECT_NEAR(stats.rate_nats, std::log(2.0), 1e-15);
}

}  // namespace
}  // namespace cayley::treecode
