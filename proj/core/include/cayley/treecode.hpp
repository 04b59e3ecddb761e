#pragma once

// Random tree codes for lossy compression of a memoryless source.
//
// A code of depth n and branching d carries one reproduction letter on every
// branch of a Cayley tree; the letter on branch (t, j) is an independent draw
// from Q keyed by (master seed, t, j). A source n-tuple is encoded as the walk
// minimizing the summed distortion rho(x_t, Y_t), which is exactly the ground
// state of a polymer with branch energies rho(x_t, Y(t, j)). The walk costs
// log2 d bits per symbol and decodes one symbol per step.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "cayley/bitstream.hpp"
#include "cayley/model.hpp"
#include "cayley/rng.hpp"
#include "cayley/tree.hpp"

namespace cayley::treecode {

class TreeCode {
 public:
  TreeCode(std::uint64_t master_seed, CodingDistribution q, TreeShape shape);

  /// Letter on branch (t, j): time t in 1..n, j the flattened path index
  /// (the absolute index j_t). Throws std::out_of_range.
  [[nodiscard]] std::size_t symbol(int t, std::uint64_t path_index) const;

  /// Unchecked variant used on hot paths.
  [[nodiscard]] std::size_t symbol_unchecked(int t, std::uint64_t path_index) const noexcept {
    return q_.sample(rng::to_unit_open(
        rng::derive(time_keys_[static_cast<std::size_t>(t)], path_index)));
  }

  [[nodiscard]] std::uint64_t master_seed() const noexcept { return seed_; }
  [[nodiscard]] const CodingDistribution& coding_distribution() const noexcept { return q_; }
  [[nodiscard]] const TreeShape& shape() const noexcept { return shape_; }

 private:
  std::uint64_t seed_;
  CodingDistribution q_;
  TreeShape shape_;
  std::vector<std::uint64_t> time_keys_;
};

/// Letter at time t reached by the path (j_1..j_t); the path is validated.
[[nodiscard]] std::size_t codeword_symbol(const TreeCode& code, int t,
                                          std::span<const std::uint64_t> path);

/// Branch energies rho(x_t, Y(t, j)) of the polymer induced by a code and a
/// source sequence.
class InducedField {
 public:
  InducedField(const TreeCode& code, std::span<const std::size_t> x, const DistortionMatrix& rho)
      : code_(code), x_(x), rho_(rho) {}

  [[nodiscard]] double operator()(int t, std::uint64_t j) const {
    return rho_(x_[static_cast<std::size_t>(t) - 1], code_.symbol_unchecked(t, j));
  }

 private:
  const TreeCode& code_;
  std::span<const std::size_t> x_;
  const DistortionMatrix& rho_;
};

struct EncodingResult {
  Walk walk;
  double total_distortion = 0.0;
  std::vector<double> per_symbol;
  std::vector<std::size_t> reproduction;

  [[nodiscard]] double distortion_per_symbol() const {
    return per_symbol.empty() ? 0.0 : total_distortion / static_cast<double>(per_symbol.size());
  }
};

/// Reports the distortions and letters along an arbitrary walk.
[[nodiscard]] EncodingResult evaluate_walk(const TreeCode& code, std::span<const std::size_t> x,
                                           const DistortionMatrix& rho, const Walk& walk);

/// Exhaustive minimum-distortion encoder over all d^n walks; ties go to the
/// lexicographically smallest walk.
[[nodiscard]] EncodingResult encode_exact(const TreeCode& code, std::span<const std::size_t> x,
                                          const DistortionMatrix& rho);

/// M-algorithm: keeps the `beam_width` best partial paths per generation
/// (partial distortion, then lexicographic path). Exact once
/// beam_width >= d^(n-1).
[[nodiscard]] EncodingResult encode_beam(const TreeCode& code, std::span<const std::size_t> x,
                                         const DistortionMatrix& rho, std::size_t beam_width);

/// Decodes a packed walk, calling `emit(t, letter)` for t = 1..n in order.
/// Power-of-two d emits letter t before the bits of step t + 1 are read.
std::vector<std::size_t> decode_sequential(
    const TreeCode& code, const codec::Bitstream& stream,
    const std::function<void(int t, std::size_t letter)>& emit = {});

/// Source n-tuple drawn from `source`, letter t keyed by (seed, t).
[[nodiscard]] std::vector<std::size_t> draw_source_sequence(const SourceModel& source, int n,
                                                            std::uint64_t seed);

struct EnsembleOptions {
  std::size_t trials = 1;
  std::uint64_t master_seed = 0;
  /// Hold one source sequence fixed across all code redraws.
  bool fixed_sequence = false;
  /// 0 runs encode_exact; otherwise encode_beam with this width.
  std::size_t beam_width = 0;
  unsigned threads = 0;
};

struct EnsembleStats {
  double mean = 0.0;
  double stddev = 0.0;
  std::vector<double> per_trial;  // per-symbol distortion of each trial
  double rate_nats = 0.0;
  double d0 = 0.0;
  bool d0_degenerate = false;
  double d_of_r = 0.0;  // distortion-rate function of the source at ln d
  double gap_to_d0 = 0.0;
  double gap_to_d_of_r = 0.0;
};

/// Per trial: an independent code (and, unless fixed_sequence, an independent
/// source sequence) encoded exactly. Throws std::invalid_argument if (Q, rho)
/// is not symmetric.
[[nodiscard]] EnsembleStats simulate_ensemble(const SourceModel& source,
                                              const CodingDistribution& q,
                                              const DistortionMatrix& rho, std::uint64_t d, int n,
                                              const EnsembleOptions& options);

}  // namespace cayley::treecode
