#include "bitspectra/bitstring.hpp"

#include <bit>
#include <cctype>
#include <fstream>
#include <iterator>
#include <numeric>

#include "bitspectra/errors.hpp"
#include "bitspectra/rng.hpp"

namespace bitspectra {
namespace {

std::size_t word_count(std::size_t bits) { return (bits + 63) / 64; }

std::uint64_t count_ones(const std::vector<std::uint64_t>& words) {
  return std::accumulate(words.begin(), words.end(), std::uint64_t{0},
                         [](std::uint64_t acc, std::uint64_t w) {
                           return acc + static_cast<std::uint64_t>(std::popcount(w));
                         });
}

}  // namespace

BitString::BitString(std::vector<std::uint64_t> words, std::size_t size,
                     std::optional<Origin> origin)
    : words_(std::move(words)), size_(size), origin_(std::move(origin)) {
  if (size_ & 63) words_.back() &= ~std::uint64_t{0} << (64 - (size_ & 63));
  popcount_ = count_ones(words_);
}

BitString BitString::from_bytes(std::span<const std::uint8_t> data,
                                std::optional<Origin> origin) {
  std::vector<std::uint64_t> words(word_count(data.size() * 8), 0);
  for (std::size_t i = 0; i < data.size(); ++i) {
    words[i >> 3] |= std::uint64_t{data[i]} << (56 - 8 * (i & 7));
  }
  return BitString(std::move(words), data.size() * 8, std::move(origin));
}

BitString BitString::from_bytes(std::string_view data, std::optional<Origin> origin) {
  return from_bytes(std::span(reinterpret_cast<const std::uint8_t*>(data.data()), data.size()),
                    std::move(origin));
}

BitString BitString::from_bits(std::span<const std::uint8_t> bits) {
  std::vector<std::uint64_t> words(word_count(bits.size()), 0);
  for (std::size_t i = 0; i < bits.size(); ++i) {
    if (bits[i] > 1) throw ArgumentError("bit values must be 0 or 1");
    words[i >> 6] |= std::uint64_t{bits[i]} << (63 - (i & 63));
  }
  return BitString(std::move(words), bits.size(), std::nullopt);
}

BitString BitString::from_ascii(std::string_view text) {
  std::vector<std::uint8_t> bits;
  bits.reserve(text.size());
  for (char c : text) {
    if (c == '0' || c == '1') {
      bits.push_back(static_cast<std::uint8_t>(c - '0'));
    } else if (!std::isspace(static_cast<unsigned char>(c))) {
      throw ArgumentError(std::string("raw bit text contains non-binary character '") + c +
                          "'");
    }
  }
  return from_bits(bits);
}

std::vector<std::uint8_t> read_file_bytes(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::vector<std::uint8_t> data((std::istreambuf_iterator<char>(in)),
                                 std::istreambuf_iterator<char>());
  if (in.bad()) throw IoError("read failed for " + path.string());
  return data;
}

BitString BitString::from_file(const std::filesystem::path& path, std::size_t max_bits) {
  std::error_code ec;
  const auto size = std::filesystem::file_size(path, ec);
  if (ec) throw IoError("cannot read " + path.string() + ": " + ec.message());
  if (size > max_bits / 8) {
    throw SizeLimitError(path.string() + " has " + std::to_string(size * 8) +
                         " bits, over the max_bits limit of " + std::to_string(max_bits));
  }
  auto data = read_file_bytes(path);
  if (data.size() * 8 > max_bits) {
    throw SizeLimitError(path.string() + " exceeds the max_bits limit of " +
                         std::to_string(max_bits));
  }
  return from_bytes(data, Origin{path.string(), 0, data.size()});
}

std::vector<std::uint8_t> BitString::to_bytes() const {
  std::vector<std::uint8_t> out((size_ + 7) / 8);
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = static_cast<std::uint8_t>(words_[i >> 3] >> (56 - 8 * (i & 7)));
  }
  return out;
}

std::vector<std::uint8_t> BitString::unpack() const {
  std::vector<std::uint8_t> out(size_);
  for (std::size_t i = 0; i < size_; ++i) out[i] = (*this)[i] ? 1 : 0;
  return out;
}

BitString BitString::complement() const {
  std::vector<std::uint64_t> words(words_.size());
  for (std::size_t i = 0; i < words_.size(); ++i) words[i] = ~words_[i];
  return BitString(std::move(words), size_, origin_);
}

BitString BitString::byte_range(std::size_t byte_offset, std::size_t byte_length) const {
  if ((byte_offset + byte_length) * 8 > size_) throw ArgumentError("byte range out of bounds");
  const auto bytes = to_bytes();
  Origin origin{origin_ ? origin_->path : std::string{},
                (origin_ ? origin_->byte_offset : 0) + byte_offset, byte_length};
  return from_bytes(std::span(bytes).subspan(byte_offset, byte_length), std::move(origin));
}

std::string BitString::to_ascii() const {
  std::string out(size_, '0');
  for (std::size_t i = 0; i < size_; ++i) {
    if ((*this)[i]) out[i] = '1';
  }
  return out;
}

BitString random_slice(const BitString& b, std::uint64_t seed, std::size_t min_bytes,
                       std::size_t max_bytes) {
  const std::size_t total = b.size() / 8;
  if (b.empty()) throw ArgumentError("random_slice: empty bit string");
  if (min_bytes < 1 || min_bytes > max_bytes || max_bytes > total) {
    throw ArgumentError("random_slice: need 1 <= min_bytes <= max_bytes <= " +
                        std::to_string(total));
  }
  Rng rng(seed);
  const std::size_t length = rng.uniform(min_bytes, max_bytes);
  const std::size_t offset = rng.uniform(0, total - length);
  return b.byte_range(offset, length);
}

}  // namespace bitspectra
