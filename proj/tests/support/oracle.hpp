#pragma once

// Test-only oracles. Kept independent of the library kernels: plain vectors of 0/1 and the
// 1-based wraparound rule B_{i+n} = B_{i+n-M} for i + n > M.

#include <cstdint>
#include <random>
#include <vector>

namespace oracle {

using Bits = std::vector<std::uint8_t>;

inline std::int64_t disagreements(const Bits& b, std::size_t n) {
  const std::size_t m = b.size();
  std::int64_t c = 0;
  for (std::size_t i = 1; i <= m; ++i) {
    std::size_t j = i + n;
    if (j > m) j -= m;
    c += b[i - 1] ^ b[j - 1];
  }
  return c;
}

inline std::vector<std::int64_t> profile(const Bits& b) {
  const auto m = static_cast<std::int64_t>(b.size());
  std::vector<std::int64_t> out(b.size());
  for (std::size_t n = 0; n < b.size(); ++n) out[n] = m - 2 * disagreements(b, n);
  return out;
}

inline Bits random_bits(std::mt19937_64& gen, std::size_t m) {
  Bits b(m);
  for (auto& x : b) x = static_cast<std::uint8_t>(gen() >> 63);
  return b;
}

inline std::vector<std::uint8_t> random_bytes(std::mt19937_64& gen, std::size_t n) {
  std::vector<std::uint8_t> out(n);
  for (auto& x : out) x = static_cast<std::uint8_t>(gen() >> 56);
  return out;
}

}  // namespace oracle
