#include "cayley/treecode.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "cayley/dprm.hpp"
#include "cayley/parallel.hpp"
#include "cayley/rd.hpp"
#include "cayley/theory.hpp"

namespace cayley::treecode {
namespace {

void validate_source_tuple(const TreeCode& code, std::span<const std::size_t> x,
                           const DistortionMatrix& rho) {
  if (x.size() != static_cast<std::size_t>(code.shape().depth())) {
    std::ostringstream os;
    os << "source tuple has length " << x.size() << ", code depth is " << code.shape().depth();
    throw std::invalid_argument(os.str());
  }
  if (rho.cols() != code.coding_distribution().size()) {
    throw std::invalid_argument("distortion matrix columns do not match the code alphabet");
  }
  for (std::size_t letter : x) {
    if (letter >= rho.rows()) throw std::invalid_argument("source letter outside the alphabet");
  }
}

struct Partial {
  double distortion;
  std::uint64_t index;  // absolute branch index; orders paths lexicographically
};

bool better(const Partial& a, const Partial& b) {
  return a.distortion < b.distortion || (a.distortion == b.distortion && a.index < b.index);
}

}  // namespace

TreeCode::TreeCode(std::uint64_t master_seed, CodingDistribution q, TreeShape shape)
    : seed_(master_seed), q_(std::move(q)), shape_(std::move(shape)) {
  const std::uint64_t key = rng::stream_key(seed_, rng::Stream::kCodebook);
  time_keys_.resize(static_cast<std::size_t>(shape_.depth()) + 1);
  for (int t = 1; t <= shape_.depth(); ++t) {
    time_keys_[static_cast<std::size_t>(t)] = rng::derive(key, static_cast<std::uint64_t>(t));
  }
}

std::size_t TreeCode::symbol(int t, std::uint64_t path_index) const {
  if (t < 1 || t > shape_.depth() || path_index >= shape_.generation_size(t)) {
    std::ostringstream os;
    os << "codeword (" << t << ", " << path_index << ") outside the code tree";
    throw std::out_of_range(os.str());
  }
  return symbol_unchecked(t, path_index);
}

std::size_t codeword_symbol(const TreeCode& code, int t, std::span<const std::uint64_t> path) {
  if (t < 1 || static_cast<std::size_t>(t) != path.size()) {
    throw std::out_of_range("codeword_symbol: path length must equal t");
  }
  std::uint64_t parent = 0;
  for (std::uint64_t j : path) {
    const std::uint64_t first = parent * code.shape().branching();
    if (j < first || j - first >= code.shape().branching()) {
      throw std::out_of_range("codeword_symbol: path violates the child constraint");
    }
    parent = j;
  }
  return code.symbol(t, path.back());
}

EncodingResult evaluate_walk(const TreeCode& code, std::span<const std::size_t> x,
                             const DistortionMatrix& rho, const Walk& walk) {
  validate_source_tuple(code, x, rho);
  validate_walk(walk, code.shape());
  EncodingResult out;
  out.walk = walk;
  for (std::size_t t = 0; t < walk.steps.size(); ++t) {
    const std::size_t letter = code.symbol_unchecked(static_cast<int>(t) + 1, walk.steps[t]);
    out.reproduction.push_back(letter);
    out.per_symbol.push_back(rho(x[t], letter));
    out.total_distortion += out.per_symbol.back();
  }
  return out;
}

EncodingResult encode_exact(const TreeCode& code, std::span<const std::size_t> x,
                            const DistortionMatrix& rho) {
  validate_source_tuple(code, x, rho);
  const InducedField field(code, x, rho);
  const GroundState best = ground_state(field, code.shape());
  return evaluate_walk(code, x, rho, best.walk);
}

EncodingResult encode_beam(const TreeCode& code, std::span<const std::size_t> x,
                           const DistortionMatrix& rho, std::size_t beam_width) {
  validate_source_tuple(code, x, rho);
  if (beam_width < 1) throw std::invalid_argument("encode_beam: beam width must be >= 1");
  const std::uint64_t d = code.shape().branching();
  const int n = code.shape().depth();
  std::vector<Partial> survivors{{0.0, 0}};
  std::vector<Partial> candidates;
  for (int t = 1; t <= n; ++t) {
    candidates.clear();
    candidates.reserve(survivors.size() * d);
    for (const Partial& s : survivors) {
      for (std::uint64_t c = 0; c < d; ++c) {
        const std::uint64_t j = s.index * d + c;
        const double step = rho(x[static_cast<std::size_t>(t) - 1], code.symbol_unchecked(t, j));
        candidates.push_back({s.distortion + step, j});
      }
    }
    const std::size_t keep = std::min(beam_width, candidates.size());
    std::partial_sort(candidates.begin(), candidates.begin() + static_cast<std::ptrdiff_t>(keep),
                      candidates.end(), better);
    candidates.resize(keep);
    survivors.swap(candidates);
  }
  return evaluate_walk(code, x, rho, walk_from_leaf(survivors.front().index, code.shape()));
}

std::vector<std::size_t> decode_sequential(
    const TreeCode& code, const codec::Bitstream& stream,
    const std::function<void(int, std::size_t)>& emit) {
  if (stream.d != code.shape().branching() || stream.n != code.shape().depth()) {
    throw std::invalid_argument("decode_sequential: stream shape does not match the code");
  }
  std::vector<std::size_t> letters;
  letters.reserve(static_cast<std::size_t>(stream.n));
  std::uint64_t node = 0;
  codec::unpack_incremental(stream, [&](int t, std::uint64_t relative) {
    node = node * stream.d + relative;
    letters.push_back(code.symbol_unchecked(t, node));
    if (emit) emit(t, letters.back());
  });
  return letters;
}

std::vector<std::size_t> draw_source_sequence(const SourceModel& source, int n,
                                              std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("draw_source_sequence: n must be >= 1");
  const std::uint64_t key = rng::stream_key(seed, rng::Stream::kSource);
  std::vector<std::size_t> x(static_cast<std::size_t>(n));
  for (int t = 0; t < n; ++t) {
    x[static_cast<std::size_t>(t)] =
        source.sample(rng::to_unit_open(rng::derive(key, static_cast<std::uint64_t>(t))));
  }
  return x;
}

EnsembleStats simulate_ensemble(const SourceModel& source, const CodingDistribution& q,
                                const DistortionMatrix& rho, std::uint64_t d, int n,
                                const EnsembleOptions& options) {
  if (source.size() != rho.rows()) {
    throw std::invalid_argument("simulate_ensemble: source alphabet does not match rho rows");
  }
  const SymmetryReport sym = check_symmetry(q, rho);
  if (!sym.symmetric) {
    throw std::invalid_argument("simulate_ensemble: symmetry condition fails: " + sym.message);
  }
  if (options.trials < 1) throw std::invalid_argument("simulate_ensemble: trials must be >= 1");
  const TreeShape shape(d, n);

  EnsembleStats stats;
  stats.rate_nats = std::log(static_cast<double>(d));
  const auto d0 = theory::d0_of_r(q, rho, stats.rate_nats);
  stats.d0 = d0.d0;
  stats.d0_degenerate = d0.degenerate;
  stats.d_of_r = rd::distortion_rate(source, rho, stats.rate_nats).distortion;

  const std::vector<std::size_t> fixed =
      draw_source_sequence(source, n, rng::stream_key(options.master_seed, rng::Stream::kSource));
  std::vector<double> per_trial(options.trials);
  parallel_for(options.trials, options.threads, [&](std::size_t t) {
    const std::vector<std::size_t> x =
        options.fixed_sequence
            ? fixed
            : draw_source_sequence(source, n, rng::trial_seed(options.master_seed, t,
                                                              rng::Stream::kSource));
    const TreeCode code(rng::trial_seed(options.master_seed, t, rng::Stream::kCodeTrial), q,
                        shape);
    const EncodingResult enc = options.beam_width == 0
                                   ? encode_exact(code, x, rho)
                                   : encode_beam(code, x, rho, options.beam_width);
    per_trial[t] = enc.distortion_per_symbol();
  });
  const auto summary = dprm::summarize(std::move(per_trial));
  stats.mean = summary.mean;
  stats.stddev = summary.stddev;
  stats.per_trial = summary.values;
  stats.gap_to_d0 = stats.mean - stats.d0;
  stats.gap_to_d_of_r = stats.mean - stats.d_of_r;
  return stats;
}

}  // namespace cayley::treecode
