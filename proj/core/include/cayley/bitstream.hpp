#pragma once

// Fixed-rate serialization of tree-code walks.
//
// Each step of a walk is stored as its relative child index r_t = j_t - d j_{t-1}
// in 0..d-1. When d is a power of two every r_t takes log2(d) raw bits, most
// significant bit first, so a decoder can act on step t before reading step
// t + 1. For other d the digits r_1..r_n form one base-d integer
// (r_1 most significant) written in ceil(n log2 d) bits; the decoder must read
// the whole integer first. Either way the payload is exactly
// ceil(n log2 d) = bit_length(d^n - 1) bits, zero-padded to whole bytes.

#include <cstdint>
#include <filesystem>
#include <functional>
#include <span>
#include <vector>

#include "cayley/tree.hpp"

namespace cayley::codec {

struct Bitstream {
  std::vector<std::uint8_t> bytes;
  std::uint64_t bit_count = 0;
  std::uint64_t d = 0;
  int n = 0;

  friend bool operator==(const Bitstream&, const Bitstream&) = default;
};

/// ceil(n log2 d), computed exactly.
[[nodiscard]] std::uint64_t payload_bits(std::uint64_t d, int n);

[[nodiscard]] bool is_power_of_two(std::uint64_t d) noexcept;

[[nodiscard]] std::vector<std::uint64_t> relative_indices(const Walk& walk, std::uint64_t d);
[[nodiscard]] Walk walk_from_relative(std::span<const std::uint64_t> relative, std::uint64_t d);

[[nodiscard]] Bitstream pack(const Walk& walk, std::uint64_t d);

/// Throws std::invalid_argument for a malformed stream (wrong length, value
/// outside 0..d^n-1).
[[nodiscard]] Walk unpack(const Bitstream& stream);

/// Feeds relative indices to `on_step` one at a time, in order. For power-of-two
/// d each index is produced right after its own bits are consumed.
void unpack_incremental(const Bitstream& stream,
                        const std::function<void(int step, std::uint64_t relative)>& on_step);

/// File framing: a 24-byte big-endian header
///   bytes 0..3   magic "TCB1"
///   bytes 4..7   d      (uint32)
///   bytes 8..15  n      (uint64)
///   bytes 16..23 master seed of the code (uint64)
/// followed by the payload bytes.
inline constexpr std::size_t kHeaderSize = 24;

struct BitstreamFile {
  Bitstream stream;
  std::uint64_t master_seed = 0;
};

[[nodiscard]] std::vector<std::uint8_t> serialize(const BitstreamFile& file);
[[nodiscard]] BitstreamFile deserialize(std::span<const std::uint8_t> data);

void write_file(const std::filesystem::path& path, const BitstreamFile& file);
[[nodiscard]] BitstreamFile read_file(const std::filesystem::path& path);

}  // namespace cayley::codec
