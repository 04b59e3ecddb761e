#include "cayley/bitstream.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <fstream>
#include <iterator>
#include <sstream>
#include <stdexcept>

namespace cayley::codec {
namespace {

// Minimal unsigned big integer, little-endian 32-bit limbs. Only what base-d
// packing needs: multiply-add and divide by a word below 2^32, bit access.
class BigUint {
 public:
  void mul_add(std::uint64_t mul, std::uint64_t add) {
    std::uint64_t carry = add;
    for (auto& limb : limbs_) {
      const std::uint64_t v = static_cast<std::uint64_t>(limb) * mul + carry;
      limb = static_cast<std::uint32_t>(v);
      carry = v >> 32;
    }
    while (carry != 0) {
      limbs_.push_back(static_cast<std::uint32_t>(carry));
      carry >>= 32;
    }
  }

  std::uint64_t div_small(std::uint64_t divisor) {
    std::uint64_t rem = 0;
    for (auto it = limbs_.rbegin(); it != limbs_.rend(); ++it) {
      const std::uint64_t cur = (rem << 32) | *it;
      *it = static_cast<std::uint32_t>(cur / divisor);
      rem = cur % divisor;
    }
    trim();
    return rem;
  }

  void sub_one() {
    for (auto& limb : limbs_) {
      if (limb-- != 0) break;
    }
    trim();
  }

  [[nodiscard]] std::uint64_t bit_length() const {
    if (limbs_.empty()) return 0;
    return 32 * (limbs_.size() - 1) + std::bit_width(limbs_.back());
  }

  [[nodiscard]] bool bit(std::uint64_t i) const {
    const std::size_t limb = i / 32;
    return limb < limbs_.size() && ((limbs_[limb] >> (i % 32)) & 1U) != 0;
  }

  void set_bit(std::uint64_t i) {
    const std::size_t limb = i / 32;
    if (limbs_.size() <= limb) limbs_.resize(limb + 1, 0);
    limbs_[limb] |= 1U << (i % 32);
  }

  [[nodiscard]] bool less_than(const BigUint& other) const {
    if (limbs_.size() != other.limbs_.size()) return limbs_.size() < other.limbs_.size();
    return std::lexicographical_compare(limbs_.rbegin(), limbs_.rend(), other.limbs_.rbegin(),
                                        other.limbs_.rend());
  }

  static BigUint power(std::uint64_t base, int exponent) {
    BigUint v;
    v.mul_add(0, 1);
    for (int i = 0; i < exponent; ++i) v.mul_add(base, 0);
    return v;
  }

 private:
  void trim() {
    while (!limbs_.empty() && limbs_.back() == 0) limbs_.pop_back();
  }

  std::vector<std::uint32_t> limbs_;
};

class BitWriter {
 public:
  explicit BitWriter(std::uint64_t total_bits) : bytes_((total_bits + 7) / 8, 0) {}

  void put(bool bit) {
    if (bit) bytes_[pos_ / 8] |= static_cast<std::uint8_t>(0x80U >> (pos_ % 8));
    ++pos_;
  }

  void put_bits(std::uint64_t value, unsigned width) {
    for (unsigned b = width; b-- > 0;) put(((value >> b) & 1U) != 0);
  }

  std::vector<std::uint8_t> take() && { return std::move(bytes_); }

 private:
  std::vector<std::uint8_t> bytes_;
  std::uint64_t pos_ = 0;
};

class BitReader {
 public:
  explicit BitReader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

  bool get() {
    const bool bit = ((bytes_[pos_ / 8] >> (7 - pos_ % 8)) & 1U) != 0;
    ++pos_;
    return bit;
  }

  std::uint64_t get_bits(unsigned width) {
    std::uint64_t v = 0;
    for (unsigned b = 0; b < width; ++b) v = (v << 1) | (get() ? 1U : 0U);
    return v;
  }

 private:
  std::span<const std::uint8_t> bytes_;
  std::uint64_t pos_ = 0;
};

void validate_stream(const Bitstream& s) {
  if (s.d < 1 || s.n < 1) throw std::invalid_argument("bitstream: invalid (d, n) header");
  const std::uint64_t bits = payload_bits(s.d, s.n);
  if (s.bit_count != bits) {
    std::ostringstream os;
    os << "bitstream: " << s.bit_count << " payload bits, expected " << bits << " for d=" << s.d
       << ", n=" << s.n;
    throw std::invalid_argument(os.str());
  }
  if (s.bytes.size() != (bits + 7) / 8) {
    throw std::invalid_argument("bitstream: truncated or oversized payload");
  }
  if (bits % 8 != 0 && (s.bytes.back() & (0xFFU >> (bits % 8))) != 0) {
    throw std::invalid_argument("bitstream: nonzero padding bits");
  }
}

void put_be(std::vector<std::uint8_t>& out, std::uint64_t v, int width) {
  for (int b = width - 1; b >= 0; --b) out.push_back(static_cast<std::uint8_t>(v >> (8 * b)));
}

std::uint64_t get_be(std::span<const std::uint8_t> in, std::size_t offset, int width) {
  std::uint64_t v = 0;
  for (int b = 0; b < width; ++b) v = (v << 8) | in[offset + static_cast<std::size_t>(b)];
  return v;
}

constexpr std::array<std::uint8_t, 4> kMagic{'T', 'C', 'B', '1'};

void require_radix(std::uint64_t d) {
  if (d >= (1ULL << 32)) {
    throw std::invalid_argument("base-d packing supports d < 2^32 unless d is a power of two");
  }
}

}  // namespace

bool is_power_of_two(std::uint64_t d) noexcept { return std::has_single_bit(d); }

std::uint64_t payload_bits(std::uint64_t d, int n) {
  if (d < 1 || n < 1) throw std::invalid_argument("payload_bits: need d >= 1 and n >= 1");
  if (is_power_of_two(d)) {
    return static_cast<std::uint64_t>(n) * static_cast<std::uint64_t>(std::countr_zero(d));
  }
  require_radix(d);
  BigUint v = BigUint::power(d, n);
  v.sub_one();
  return v.bit_length();
}

std::vector<std::uint64_t> relative_indices(const Walk& walk, std::uint64_t d) {
  std::vector<std::uint64_t> rel;
  rel.reserve(walk.steps.size());
  std::uint64_t parent = 0;
  for (std::uint64_t j : walk.steps) {
    const std::uint64_t first = parent * d;
    if (j < first || j - first >= d) throw std::invalid_argument("walk violates child constraint");
    rel.push_back(j - first);
    parent = j;
  }
  return rel;
}

Walk walk_from_relative(std::span<const std::uint64_t> relative, std::uint64_t d) {
  Walk walk;
  walk.steps.reserve(relative.size());
  std::uint64_t parent = 0;
  for (std::uint64_t r : relative) {
    if (r >= d) throw std::invalid_argument("relative index out of range");
    parent = parent * d + r;
    walk.steps.push_back(parent);
  }
  return walk;
}

Bitstream pack(const Walk& walk, std::uint64_t d) {
  if (walk.steps.empty()) throw std::invalid_argument("pack: empty walk");
  const auto rel = relative_indices(walk, d);
  Bitstream out;
  out.d = d;
  out.n = static_cast<int>(rel.size());
  out.bit_count = payload_bits(d, out.n);
  BitWriter writer(out.bit_count);
  if (is_power_of_two(d)) {
    const auto width = static_cast<unsigned>(std::countr_zero(d));
    for (std::uint64_t r : rel) writer.put_bits(r, width);
  } else {
    BigUint value;
    for (std::uint64_t r : rel) value.mul_add(d, r);
    for (std::uint64_t b = out.bit_count; b-- > 0;) writer.put(value.bit(b));
  }
  out.bytes = std::move(writer).take();
  return out;
}

void unpack_incremental(const Bitstream& stream,
                        const std::function<void(int, std::uint64_t)>& on_step) {
  validate_stream(stream);
  BitReader reader(stream.bytes);
  if (is_power_of_two(stream.d)) {
    const auto width = static_cast<unsigned>(std::countr_zero(stream.d));
    for (int t = 1; t <= stream.n; ++t) on_step(t, reader.get_bits(width));
    return;
  }
  BigUint value;
  for (std::uint64_t b = 0; b < stream.bit_count; ++b) value.mul_add(2, reader.get() ? 1 : 0);
  if (!value.less_than(BigUint::power(stream.d, stream.n))) {
    throw std::invalid_argument("bitstream: packed value exceeds d^n - 1");
  }
  std::vector<std::uint64_t> digits(static_cast<std::size_t>(stream.n));
  for (auto it = digits.rbegin(); it != digits.rend(); ++it) *it = value.div_small(stream.d);
  for (int t = 1; t <= stream.n; ++t) on_step(t, digits[static_cast<std::size_t>(t) - 1]);
}

Walk unpack(const Bitstream& stream) {
  std::vector<std::uint64_t> rel;
  unpack_incremental(stream, [&](int, std::uint64_t r) { rel.push_back(r); });
  return walk_from_relative(rel, stream.d);
}

std::vector<std::uint8_t> serialize(const BitstreamFile& file) {
  const Bitstream& s = file.stream;
  if (s.d > 0xFFFFFFFFULL) throw std::invalid_argument("serialize: d does not fit in 32 bits");
  std::vector<std::uint8_t> out(kMagic.begin(), kMagic.end());
  put_be(out, s.d, 4);
  put_be(out, static_cast<std::uint64_t>(s.n), 8);
  put_be(out, file.master_seed, 8);
  out.insert(out.end(), s.bytes.begin(), s.bytes.end());
  return out;
}

BitstreamFile deserialize(std::span<const std::uint8_t> data) {
  if (data.size() < kHeaderSize) throw std::invalid_argument("bitstream file: truncated header");
  if (!std::equal(kMagic.begin(), kMagic.end(), data.begin())) {
    throw std::invalid_argument("bitstream file: bad magic");
  }
  BitstreamFile file;
  file.stream.d = get_be(data, 4, 4);
  const std::uint64_t n = get_be(data, 8, 8);
  if (n < 1 || n > 1'000'000'000ULL) throw std::invalid_argument("bitstream file: bad depth");
  file.stream.n = static_cast<int>(n);
  file.master_seed = get_be(data, 16, 8);
  file.stream.bit_count = payload_bits(file.stream.d, file.stream.n);
  file.stream.bytes.assign(data.begin() + kHeaderSize, data.end());
  validate_stream(file.stream);
  return file;
}

void write_file(const std::filesystem::path& path, const BitstreamFile& file) {
  const auto bytes = serialize(file);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

BitstreamFile read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  return deserialize(bytes);
}

}  // namespace cayley::codec
