#include "bitspectra/metrics.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <chrono>
#include <cmath>
#include <string>
#include <thread>

#include "bitspectra/errors.hpp"

namespace bitspectra {
namespace {

// b followed by b, plus one zero guard word, so that any rotation is a plain window.
std::vector<std::uint64_t> doubled_words(const BitString& b) {
  const std::size_t m = b.size();
  const auto src = b.words();
  std::vector<std::uint64_t> out((2 * m + 63) / 64 + 1, 0);
  std::copy(src.begin(), src.end(), out.begin());
  for (std::size_t j = 0; j < src.size(); ++j) {
    const std::size_t pos = m + 64 * j;
    const unsigned shift = pos & 63;
    out[pos >> 6] |= src[j] >> shift;
    if (shift != 0 && (pos >> 6) + 1 < out.size()) out[(pos >> 6) + 1] |= src[j] << (64 - shift);
  }
  return out;
}

std::uint64_t rotated_disagreements(std::span<const std::uint64_t> words,
                                    const std::vector<std::uint64_t>& doubled,
                                    std::size_t lag, std::uint64_t tail_mask) {
  // Every word of the rotated window shares the same bit shift.
  const std::size_t last = words.size() - 1;
  const std::uint64_t* d = doubled.data() + (lag >> 6);
  const unsigned shift = lag & 63;
  std::uint64_t count = 0;
  std::uint64_t tail = 0;
  if (shift == 0) {
    for (std::size_t j = 0; j < last; ++j) {
      count += static_cast<std::uint64_t>(std::popcount(words[j] ^ d[j]));
    }
    tail = d[last];
  } else {
    const unsigned back = 64 - shift;
    for (std::size_t j = 0; j < last; ++j) {
      count += static_cast<std::uint64_t>(
          std::popcount(words[j] ^ ((d[j] << shift) | (d[j + 1] >> back))));
    }
    tail = (d[last] << shift) | (d[last + 1] >> back);
  }
  count += static_cast<std::uint64_t>(std::popcount((words[last] ^ tail) & tail_mask));
  return count;
}

}  // namespace

std::string_view to_string(Kernel kernel) {
  switch (kernel) {
    case Kernel::Reference: return "reference";
    case Kernel::BitParallel: return "bitparallel";
    case Kernel::Fft: return "fft";
    case Kernel::Auto: return "auto";
  }
  return "unknown";
}

Kernel parse_kernel(std::string_view name) {
  if (name == "reference") return Kernel::Reference;
  if (name == "bitparallel") return Kernel::BitParallel;
  if (name == "fft") return Kernel::Fft;
  if (name == "auto") return Kernel::Auto;
  throw ArgumentError("unknown kernel '" + std::string(name) +
                      "' (expected reference, bitparallel, fft or auto)");
}

std::uint64_t corr_xor(const BitString& b, std::size_t lag) {
  const std::size_t m = b.size();
  if (m == 0) throw ArgumentError("corr_xor: empty bit string");
  if (lag >= m) {
    throw ArgumentError("corr_xor: lag " + std::to_string(lag) + " outside [0, " +
                        std::to_string(m) + ")");
  }
  std::uint64_t count = 0;
  for (std::size_t i = 0; i < m; ++i) count += b[i] != b[(i + lag) % m];
  return count;
}

LagProfile lag_profile_reference(const BitString& b, const KernelLimits& limits) {
  const std::size_t m = b.size();
  if (m == 0) throw ArgumentError("lag_profile_reference: empty bit string");
  if (m > limits.reference_cap) {
    throw SizeLimitError("reference kernel is capped at " + std::to_string(limits.reference_cap) +
                         " bits, input has " + std::to_string(m));
  }
  const auto bits = b.unpack();
  const std::uint8_t* a = bits.data();
  std::vector<std::int64_t> values(m);
  for (std::size_t n = 0; n < m; ++n) {
    std::uint32_t c = 0;
    for (std::size_t i = 0; i + n < m; ++i) c += a[i] ^ a[i + n];
    for (std::size_t i = m - n; i < m; ++i) c += a[i] ^ a[i + n - m];
    values[n] = static_cast<std::int64_t>(m) - 2 * static_cast<std::int64_t>(c);
  }
  return LagProfile(std::move(values));
}

LagProfile lag_profile_bitparallel(const BitString& b, const KernelLimits& limits) {
  const std::size_t m = b.size();
  if (m == 0) throw ArgumentError("lag_profile_bitparallel: empty bit string");
  const auto words = b.words();
  const auto doubled = doubled_words(b);
  const std::uint64_t tail_mask = (m & 63) ? ~std::uint64_t{0} << (64 - (m & 63))
                                           : ~std::uint64_t{0};
  std::vector<std::int64_t> values(m);
  values[0] = static_cast<std::int64_t>(m);
  const std::size_t half = m / 2;

  auto run = [&](std::size_t first, std::size_t last) {
    for (std::size_t n = first; n < last; ++n) {
      const auto c = rotated_disagreements(words, doubled, n, tail_mask);
      const auto v = static_cast<std::int64_t>(m) - 2 * static_cast<std::int64_t>(c);
      values[n] = v;
      values[m - n] = v;
    }
  };

  const unsigned threads = std::max(1U, limits.threads);
  if (threads == 1 || half < 64) {
    run(1, half + 1);
  } else {
    std::vector<std::jthread> pool;
    const std::size_t chunk = (half + threads - 1) / threads;
    for (unsigned t = 0; t < threads; ++t) {
      const std::size_t first = 1 + t * chunk;
      const std::size_t last = std::min(half + 1, first + chunk);
      if (first < last) pool.emplace_back(run, first, last);
    }
  }
  return LagProfile(std::move(values));
}

std::uint64_t mf_total(const LagProfile& profile) {
  std::int64_t sum = 0;
  for (auto v : profile.values()) sum += v;
  if (sum < 0) throw InternalError("lag profile sums to a negative M_F");
  return static_cast<std::uint64_t>(sum);
}

std::uint64_t mf_closed_form(const BitString& b) {
  const auto diff = static_cast<std::int64_t>(b.size()) - 2 * static_cast<std::int64_t>(b.popcount());
  return static_cast<std::uint64_t>(diff * diff);
}

double adj_mf(std::uint64_t mf, std::uint64_t m) {
  if (m == 0) throw ArgumentError("adj_mf: M must be positive");
  const uint128 m2 = static_cast<uint128>(m) * m;
  if (mf > m2) throw ArgumentError("adj_mf: mf exceeds M^2");
  const uint128 num = static_cast<uint128>(mf) * (m2 - mf);
  return static_cast<double>(static_cast<long double>(num) / static_cast<long double>(m2));
}

uint128 df_numerator(const LagProfile& profile) {
  uint128 sum = 0;
  const auto values = profile.values();
  for (std::size_t n = 1; n < values.size(); ++n) {
    const auto v = static_cast<uint128>(values[n] < 0 ? -values[n] : values[n]);
    sum += v * v;
  }
  return sum;
}

double df(const LagProfile& profile) {
  const std::size_t m = profile.length_bits();
  if (m == 0) throw ArgumentError("df: empty profile");
  const long double m2 = static_cast<long double>(m) * static_cast<long double>(m);
  return static_cast<double>(static_cast<long double>(df_numerator(profile)) / m2);
}

double shannon_entropy_bytes(std::span<const std::uint8_t> data) {
  if (data.empty()) throw ArgumentError("shannon_entropy_bytes: empty input");
  std::array<std::uint64_t, 256> counts{};
  for (auto byte : data) ++counts[byte];
  const double total = static_cast<double>(data.size());
  double h = 0.0;
  for (auto c : counts) {
    if (c == 0) continue;
    const double p = static_cast<double>(c) / total;
    h -= p * std::log2(p);
  }
  return std::clamp(h, 0.0, 8.0);
}

MetricsRecord analyze(const BitString& b, Kernel kernel, const KernelLimits& limits) {
  const std::size_t m = b.size();
  if (m == 0) throw ArgumentError("empty input");
  const auto start = std::chrono::steady_clock::now();

  const bool automatic = kernel == Kernel::Auto;
  if (automatic) {
    if (m <= limits.reference_cap) {
      kernel = Kernel::Reference;
    } else if (m <= limits.bitparallel_cap) {
      kernel = Kernel::BitParallel;
    } else if (m <= limits.fft_cap) {
      kernel = Kernel::Fft;
    } else {
      throw SizeLimitError("input of " + std::to_string(m) + " bits exceeds the fft cap of " +
                           std::to_string(limits.fft_cap));
    }
  }

  LagProfile profile;
  switch (kernel) {
    case Kernel::Reference:
      profile = lag_profile_reference(b, limits);
      break;
    case Kernel::BitParallel:
      profile = lag_profile_bitparallel(b, limits);
      break;
    case Kernel::Fft:
      try {
        profile = lag_profile_fft(b, limits);
      } catch (const PrecisionError&) {
        if (!automatic) throw;
        profile = lag_profile_bitparallel(b, limits);
        kernel = Kernel::BitParallel;
      }
      break;
    case Kernel::Auto:
      break;
  }

  MetricsRecord r;
  r.source = b.origin();
  r.length_bits = m;
  r.popcount = b.popcount();
  r.mf = mf_closed_form(b);
  if (mf_total(profile) != r.mf) {
    throw InternalError("profile sum " + std::to_string(mf_total(profile)) +
                        " disagrees with closed-form M_F " + std::to_string(r.mf));
  }
  r.adj_mf = adj_mf(r.mf, m);
  r.df = df(profile);
  r.entropy_bits_per_byte = shannon_entropy_bytes(b.to_bytes());
  r.kernel = kernel;
  r.runtime_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return r;
}

}  // namespace bitspectra
