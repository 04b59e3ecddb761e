#pragma once

// Counter-based random substreams.
//
// Every random quantity in the library is a pure function of a 64-bit master
// seed and a tuple of integer coordinates (a named tag, a generation, a branch
// index, a trial number). Values are obtained by chaining the splitmix64
// finalizer over the coordinates, so any draw can be recomputed in O(1)
// without materializing or advancing a generator.

#include <cstdint>

namespace cayley::rng {

/// splitmix64 output function (Steele, Lea, Flood 2014).
[[nodiscard]] constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Derives a child key from a parent key and one coordinate.
[[nodiscard]] constexpr std::uint64_t derive(std::uint64_t key,
                                             std::uint64_t coordinate) noexcept {
  return mix64(key ^ mix64(coordinate ^ 0x6a09e667f3bcc909ULL));
}

[[nodiscard]] constexpr std::uint64_t derive(std::uint64_t key, std::uint64_t a,
                                             std::uint64_t b) noexcept {
  return derive(derive(key, a), b);
}

/// Maps 64 random bits to a double strictly inside (0, 1).
[[nodiscard]] constexpr double to_unit_open(std::uint64_t bits) noexcept {
  return (static_cast<double>(bits >> 12) + 0.5) * 0x1.0p-52;
}

// Named substream tags. Distinct tags keep tree branches, codebooks, source
// sequences, and trial seeds from ever sharing a stream.
enum class Stream : std::uint64_t {
  kBranchEnergy = 0x42524e43484e5247ULL,
  kCodebook = 0x434f4445424f4f4bULL,
  kSource = 0x534f555243455351ULL,
  kTrial = 0x545249414c534545ULL,
  kCodeTrial = 0x434f444554524c53ULL,
};

[[nodiscard]] constexpr std::uint64_t stream_key(std::uint64_t master_seed,
                                                 Stream tag) noexcept {
  return derive(master_seed, static_cast<std::uint64_t>(tag));
}

/// Seed for the `index`-th independent trial of a campaign.
[[nodiscard]] constexpr std::uint64_t trial_seed(std::uint64_t master_seed,
                                                 std::uint64_t index,
                                                 Stream tag = Stream::kTrial) noexcept {
  return derive(stream_key(master_seed, tag), index);
}

}  // namespace cayley::rng
