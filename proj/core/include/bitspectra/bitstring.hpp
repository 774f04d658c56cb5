#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace bitspectra {

// 2^27 bits = 16 MiB files.
inline constexpr std::size_t kDefaultMaxBits = std::size_t{1} << 27;

// Where a bit string came from. Offsets and lengths are in bytes of the original source.
struct Origin {
  std::string path;
  std::uint64_t byte_offset = 0;
  std::uint64_t byte_length = 0;

  bool operator==(const Origin&) const = default;
};

// Immutable sequence of M bits.
//
// Bit order is MSB-first: bit i is bit (7 - i % 8) of byte i / 8. Internally bits are packed
// into 64-bit words with the same convention (bit i lives at position 63 - i % 64 of word
// i / 64) and the unused tail of the last word is always zero.
class BitString {
 public:
  BitString() = default;

  static BitString from_bytes(std::span<const std::uint8_t> data,
                              std::optional<Origin> origin = std::nullopt);
  static BitString from_bytes(std::string_view data,
                              std::optional<Origin> origin = std::nullopt);

  // One element per bit, each 0 or 1. Anything else is an ArgumentError.
  static BitString from_bits(std::span<const std::uint8_t> bits);

  // ASCII '0'/'1' characters; whitespace is skipped.
  static BitString from_ascii(std::string_view text);

  // Throws IoError when unreadable, SizeLimitError when 8 * size exceeds max_bits.
  static BitString from_file(const std::filesystem::path& path,
                             std::size_t max_bits = kDefaultMaxBits);

  std::size_t size() const noexcept { return size_; }
  bool empty() const noexcept { return size_ == 0; }
  std::uint64_t popcount() const noexcept { return popcount_; }

  bool operator[](std::size_t i) const noexcept {
    return (words_[i >> 6] >> (63 - (i & 63))) & 1U;
  }

  std::span<const std::uint64_t> words() const noexcept { return words_; }
  const std::optional<Origin>& origin() const noexcept { return origin_; }

  // Packs back to bytes, MSB-first; a partial last byte is zero-padded.
  std::vector<std::uint8_t> to_bytes() const;

  // One byte (0 or 1) per bit.
  std::vector<std::uint8_t> unpack() const;

  BitString complement() const;

  // Contiguous byte-aligned sub-range [byte_offset, byte_offset + byte_length).
  BitString byte_range(std::size_t byte_offset, std::size_t byte_length) const;

  std::string to_ascii() const;

  // Value equality on the bits only.
  bool operator==(const BitString& other) const noexcept {
    return size_ == other.size_ && words_ == other.words_;
  }

 private:
  BitString(std::vector<std::uint64_t> words, std::size_t size, std::optional<Origin> origin);

  std::vector<std::uint64_t> words_;
  std::size_t size_ = 0;
  std::uint64_t popcount_ = 0;
  std::optional<Origin> origin_;
};

// Byte-aligned contiguous slice with length uniform in [min_bytes, max_bytes] and offset
// uniform over the valid range. Deterministic in (b, seed, min_bytes, max_bytes).
// Requires b non-empty and 1 <= min_bytes <= max_bytes <= size / 8.
BitString random_slice(const BitString& b, std::uint64_t seed, std::size_t min_bytes,
                       std::size_t max_bytes);

std::vector<std::uint8_t> read_file_bytes(const std::filesystem::path& path);

}  // namespace bitspectra
