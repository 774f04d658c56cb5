#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "bitspectra/bitstring.hpp"

namespace bitspectra {

// Sums of squared lag values need more than 64 bits at the size caps.
__extension__ typedef unsigned __int128 uint128;

enum class Kernel { Reference, BitParallel, Fft, Auto };

std::string_view to_string(Kernel kernel);
// Accepts reference, bitparallel, fft, auto. ArgumentError otherwise.
Kernel parse_kernel(std::string_view name);

struct KernelLimits {
  std::size_t reference_cap = std::size_t{1} << 14;
  // Largest M for which `auto` still picks the bit-parallel kernel.
  std::size_t bitparallel_cap = std::size_t{1} << 20;
  std::size_t fft_cap = std::size_t{1} << 27;
  // Worker threads for the bit-parallel kernel. Output does not depend on it.
  unsigned threads = 1;
};

// M_F(n) = M - 2 * C_R(n) for n = 0 .. M-1.
class LagProfile {
 public:
  LagProfile() = default;
  explicit LagProfile(std::vector<std::int64_t> values) : values_(std::move(values)) {}

  std::size_t length_bits() const noexcept { return values_.size(); }
  std::span<const std::int64_t> values() const noexcept { return values_; }
  std::int64_t operator[](std::size_t n) const noexcept { return values_[n]; }

  bool operator==(const LagProfile&) const = default;

 private:
  std::vector<std::int64_t> values_;
};

struct FftDiagnostics {
  // Largest distance of a raw inverse-transform value from its rounded integer.
  double max_rounding_error = 0.0;
};

// C_R(n): number of positions i with b[i] != b[(i + n) mod M].
std::uint64_t corr_xor(const BitString& b, std::size_t lag);

// O(M^2) direct evaluation; the ground truth. SizeLimitError above limits.reference_cap.
LagProfile lag_profile_reference(const BitString& b, const KernelLimits& limits = {});

// XOR of the packed words against every circular rotation, then popcount. Only lags up to
// M/2 are computed; the rest follow from values[n] == values[M - n].
LagProfile lag_profile_bitparallel(const BitString& b, const KernelLimits& limits = {});

// Circular autocorrelation of s_i = 1 - 2 b[i] through the power spectrum. Raw values must
// round within 0.25 of an integer or PrecisionError is thrown.
LagProfile lag_profile_fft(const BitString& b, const KernelLimits& limits = {},
                           FftDiagnostics* diagnostics = nullptr);

inline constexpr double kFftRoundingTolerance = 0.25;

// Sum of the profile. Equals (M - 2 popcount)^2.
std::uint64_t mf_total(const LagProfile& profile);

// (M - 2 popcount)^2 straight from the cached popcount.
std::uint64_t mf_closed_form(const BitString& b);

// (1 - mf / M^2) * mf. ArgumentError when mf > M^2 or M == 0.
double adj_mf(std::uint64_t mf, std::uint64_t m);

// Sum over n >= 1 of values[n]^2, exact. df == df_numerator / M^2.
uint128 df_numerator(const LagProfile& profile);

// sum_n (values[n] / M)^2 - 1. The zero-lag term is exactly 1, so this is the off-zero sum.
double df(const LagProfile& profile);

// df without the profile: sum_n values[n]^2 = (1/M) sum_k |S_k|^4 (Parseval on the
// autocorrelation). Requires 2 <= M <= limits.fft_cap.
double df_spectral(const BitString& b, const KernelLimits& limits = {});

// Byte-frequency entropy in bits per byte. ArgumentError on empty input.
double shannon_entropy_bytes(std::span<const std::uint8_t> data);

struct MetricsRecord {
  std::optional<Origin> source;
  std::uint64_t length_bits = 0;
  std::uint64_t popcount = 0;
  std::uint64_t mf = 0;
  double adj_mf = 0.0;
  double df = 0.0;
  double entropy_bits_per_byte = 0.0;
  Kernel kernel = Kernel::Auto;
  double runtime_ms = 0.0;
};

// Runs the chosen kernel and fills every field. `Auto` resolves to reference up to
// reference_cap, bit-parallel up to bitparallel_cap, otherwise fft with a bit-parallel
// fallback on PrecisionError; the record names the kernel that actually ran.
MetricsRecord analyze(const BitString& b, Kernel kernel, const KernelLimits& limits = {});

}  // namespace bitspectra
