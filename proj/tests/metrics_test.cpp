#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "bitspectra/errors.hpp"
#include "bitspectra/metrics.hpp"
#include "support/oracle.hpp"

namespace bitspectra {
namespace {

using Values = std::vector<std::int64_t>;

Values values_of(const LagProfile& p) { return {p.values().begin(), p.values().end()}; }

BitString zeros(std::size_t m) { return BitString::from_bits(std::vector<std::uint8_t>(m, 0)); }

BitString alternating(std::size_t m) {
  std::vector<std::uint8_t> bits(m);
  for (std::size_t i = 0; i < m; ++i) bits[i] = i & 1;
  return BitString::from_bits(bits);
}

TEST(CorrXor, Examples) {
  const auto b101 = BitString::from_ascii("101");
  EXPECT_EQ(corr_xor(b101, 0), 0U);
  EXPECT_EQ(corr_xor(b101, 1), 2U);
  EXPECT_EQ(corr_xor(BitString::from_ascii("1100"), 2), 4U);
}

TEST(CorrXor, Errors) {
  EXPECT_THROW(corr_xor(BitString{}, 0), ArgumentError);
  EXPECT_THROW(corr_xor(BitString::from_ascii("101"), 3), ArgumentError);
}

TEST(CorrXor, MatchesOracle) {
  std::mt19937_64 gen(1);
  for (int trial = 0; trial < 50; ++trial) {
    const auto bits = oracle::random_bits(gen, 1 + gen() % 100);
    const auto b = BitString::from_bits(bits);
    for (std::size_t n = 0; n < bits.size(); ++n) {
      ASSERT_EQ(static_cast<std::int64_t>(corr_xor(b, n)), oracle::disagreements(bits, n));
    }
  }
}

TEST(Kernels, HandExamples) {
  const auto b101 = BitString::from_ascii("101");
  const auto b1100 = BitString::from_ascii("1100");
  EXPECT_EQ(values_of(lag_profile_reference(b101)), (Values{3, -1, -1}));
  EXPECT_EQ(values_of(lag_profile_reference(b1100)), (Values{4, 0, -4, 0}));
  EXPECT_EQ(values_of(lag_profile_reference(zeros(8))), Values(8, 8));
  EXPECT_EQ(values_of(lag_profile_bitparallel(b101)), (Values{3, -1, -1}));
  EXPECT_EQ(values_of(lag_profile_bitparallel(b1100)), (Values{4, 0, -4, 0}));
  EXPECT_EQ(values_of(lag_profile_fft(b1100)), (Values{4, 0, -4, 0}));
  EXPECT_EQ(values_of(lag_profile_fft(b101)), (Values{3, -1, -1}));
  EXPECT_EQ(values_of(lag_profile_fft(BitString::from_ascii("11111111"))), Values(8, 8));
}

TEST(Kernels, SingleBit) {
  const auto one = BitString::from_ascii("1");
  EXPECT_EQ(values_of(lag_profile_reference(one)), Values{1});
  EXPECT_EQ(values_of(lag_profile_bitparallel(one)), Values{1});
  EXPECT_THROW(lag_profile_fft(one), ArgumentError);
}

TEST(Kernels, Caps) {
  KernelLimits small;
  small.reference_cap = 16;
  small.fft_cap = 16;
  const auto b = zeros(17);
  EXPECT_THROW(lag_profile_reference(b, small), SizeLimitError);
  EXPECT_THROW(lag_profile_fft(b, small), SizeLimitError);
  EXPECT_THROW(df_spectral(b, small), SizeLimitError);
  EXPECT_NO_THROW(lag_profile_bitparallel(b, small));
  EXPECT_THROW(lag_profile_reference(BitString{}), ArgumentError);
}

TEST(Kernels, ReferenceMatchesIndependentOracle) {
  std::mt19937_64 gen(2);
  for (int trial = 0; trial < 60; ++trial) {
    const auto bits = oracle::random_bits(gen, 1 + gen() % 300);
    EXPECT_EQ(values_of(lag_profile_reference(BitString::from_bits(bits))),
              oracle::profile(bits));
  }
}

TEST(Kernels, BitParallelEqualsReference4096) {
  std::mt19937_64 gen(4096);
  const auto b = BitString::from_bits(oracle::random_bits(gen, 4096));
  EXPECT_EQ(lag_profile_bitparallel(b), lag_profile_reference(b));
}

TEST(Kernels, AllKernelsAgreeOnOddLengths) {
  std::mt19937_64 gen(9);
  for (std::size_t m : {2UL, 3UL, 63UL, 64UL, 65UL, 127UL, 128UL, 129UL, 1000UL, 1031UL}) {
    const auto b = BitString::from_bits(oracle::random_bits(gen, m));
    const auto ref = lag_profile_reference(b);
    EXPECT_EQ(lag_profile_bitparallel(b), ref) << m;
    EXPECT_EQ(lag_profile_fft(b), ref) << m;
  }
}

TEST(Kernels, BitParallelThreadCountDoesNotMatter) {
  std::mt19937_64 gen(12);
  const auto b = BitString::from_bits(oracle::random_bits(gen, 5003));
  KernelLimits one, four;
  four.threads = 4;
  EXPECT_EQ(lag_profile_bitparallel(b, one), lag_profile_bitparallel(b, four));
}

TEST(Kernels, FftLargeRandomMatchesBitParallel) {
  std::mt19937_64 gen(65536);
  const auto b = BitString::from_bits(oracle::random_bits(gen, 1 << 16));
  FftDiagnostics diag;
  const auto fft = lag_profile_fft(b, {}, &diag);
  EXPECT_EQ(fft, lag_profile_bitparallel(b));
  EXPECT_LT(diag.max_rounding_error, kFftRoundingTolerance);
}

TEST(Aggregates, MfTotalAndClosedForm) {
  EXPECT_EQ(mf_total(lag_profile_reference(zeros(8))), 64U);
  EXPECT_EQ(mf_closed_form(zeros(8)), 64U);
  const auto b101 = BitString::from_ascii("101");
  EXPECT_EQ(mf_total(lag_profile_reference(b101)), 1U);
  EXPECT_EQ(mf_closed_form(b101), 1U);
  const auto b1100 = BitString::from_ascii("1100");
  EXPECT_EQ(mf_total(lag_profile_reference(b1100)), 0U);
  EXPECT_EQ(mf_closed_form(alternating(1000)), 0U);
}

TEST(Aggregates, ClosedFormIdentityProperty) {
  std::mt19937_64 gen(21);
  for (int trial = 0; trial < 300; ++trial) {
    const auto b = BitString::from_bits(oracle::random_bits(gen, 1 + gen() % 1024));
    ASSERT_EQ(mf_total(lag_profile_bitparallel(b)), mf_closed_form(b));
  }
}

TEST(Aggregates, AdjMf) {
  EXPECT_DOUBLE_EQ(adj_mf(64, 8), 0.0);
  EXPECT_DOUBLE_EQ(adj_mf(0, 8), 0.0);
  EXPECT_NEAR(adj_mf(1, 3), 8.0 / 9.0, 1e-15);
  EXPECT_THROW(adj_mf(65, 8), ArgumentError);
  EXPECT_THROW(adj_mf(0, 0), ArgumentError);
  // Maximum M^2/4 at mf = M^2/2.
  EXPECT_DOUBLE_EQ(adj_mf(32, 8), 16.0);
}

TEST(Aggregates, Df) {
  EXPECT_NEAR(df(lag_profile_reference(BitString::from_ascii("1100"))), 1.0, 1e-15);
  EXPECT_NEAR(df(lag_profile_reference(BitString::from_ascii("101"))), 2.0 / 9.0, 1e-15);
  EXPECT_DOUBLE_EQ(df(lag_profile_reference(zeros(32))), 31.0);
  const std::size_t m = 1024;
  const auto p = lag_profile_bitparallel(alternating(m));
  EXPECT_TRUE(df_numerator(p) == static_cast<uint128>(m - 1) * m * m);
}

TEST(Aggregates, DfSpectralMatchesDf) {
  EXPECT_NEAR(df_spectral(BitString::from_ascii("1100")), 1.0, 1e-6);
  EXPECT_NEAR(df_spectral(BitString::from_ascii("101")), 2.0 / 9.0, 1e-6);
  std::mt19937_64 gen(4096);
  for (std::size_t m : {2UL, 7UL, 64UL, 4096UL, 4097UL}) {
    const auto b = BitString::from_bits(oracle::random_bits(gen, m));
    const double exact = df(lag_profile_reference(b));
    EXPECT_NEAR(df_spectral(b), exact, 1e-6 * std::max(1.0, exact)) << m;
  }
  EXPECT_NEAR(df_spectral(zeros(100)), 99.0, 1e-6 * 99.0);
}

TEST(Entropy, Examples) {
  EXPECT_DOUBLE_EQ(shannon_entropy_bytes(std::vector<std::uint8_t>(100, 7)), 0.0);
  std::vector<std::uint8_t> two;
  for (int i = 0; i < 50; ++i) {
    two.push_back(1);
    two.push_back(200);
  }
  EXPECT_DOUBLE_EQ(shannon_entropy_bytes(two), 1.0);
  std::vector<std::uint8_t> all;
  for (int r = 0; r < 3; ++r)
    for (int v = 0; v < 256; ++v) all.push_back(static_cast<std::uint8_t>(v));
  EXPECT_NEAR(shannon_entropy_bytes(all), 8.0, 1e-12);
  EXPECT_THROW(shannon_entropy_bytes(std::vector<std::uint8_t>{}), ArgumentError);
}

TEST(Analyze, Examples) {
  const auto r = analyze(BitString::from_ascii("101"), Kernel::Auto);
  EXPECT_EQ(r.length_bits, 3U);
  EXPECT_EQ(r.mf, 1U);
  EXPECT_NEAR(r.adj_mf, 8.0 / 9.0, 1e-12);
  EXPECT_NEAR(r.df, 2.0 / 9.0, 1e-12);
  EXPECT_EQ(r.kernel, Kernel::Reference);

  const auto z = analyze(zeros(8), Kernel::Auto);
  EXPECT_EQ(z.mf, 64U);
  EXPECT_EQ(z.adj_mf, 0.0);
  EXPECT_EQ(z.df, 7.0);
  EXPECT_EQ(z.entropy_bits_per_byte, 0.0);

  EXPECT_THROW(analyze(BitString{}, Kernel::Auto), ArgumentError);
}

TEST(Analyze, KernelsGiveIdenticalRecords) {
  std::mt19937_64 gen(8);
  const auto b = BitString::from_bytes(oracle::random_bytes(gen, 1500));
  const auto ref = analyze(b, Kernel::Reference);
  for (Kernel k : {Kernel::BitParallel, Kernel::Fft}) {
    const auto r = analyze(b, k);
    EXPECT_EQ(r.kernel, k);
    EXPECT_EQ(r.mf, ref.mf);
    EXPECT_EQ(r.adj_mf, ref.adj_mf);
    EXPECT_EQ(r.df, ref.df);
    EXPECT_EQ(r.entropy_bits_per_byte, ref.entropy_bits_per_byte);
  }
}

TEST(Analyze, AutoKernelSelection) {
  KernelLimits limits;
  limits.reference_cap = 64;
  limits.bitparallel_cap = 256;
  limits.fft_cap = 1024;
  EXPECT_EQ(analyze(zeros(64), Kernel::Auto, limits).kernel, Kernel::Reference);
  EXPECT_EQ(analyze(zeros(200), Kernel::Auto, limits).kernel, Kernel::BitParallel);
  EXPECT_EQ(analyze(zeros(1000), Kernel::Auto, limits).kernel, Kernel::Fft);
  EXPECT_THROW(analyze(zeros(2000), Kernel::Auto, limits), SizeLimitError);
  EXPECT_THROW(analyze(zeros(65), Kernel::Reference, limits), SizeLimitError);
}

TEST(Analyze, KernelNames) {
  for (Kernel k : {Kernel::Reference, Kernel::BitParallel, Kernel::Fft, Kernel::Auto}) {
    EXPECT_EQ(parse_kernel(to_string(k)), k);
  }
  EXPECT_THROW(parse_kernel("gpu"), ArgumentError);
}

// Invariants over random profiles: symmetry, parity, zero lag, df >= 0, complement.
TEST(Properties, ProfileInvariants) {
  std::mt19937_64 gen(33);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t m = 1 + gen() % 700;
    const auto b = BitString::from_bits(oracle::random_bits(gen, m));
    const auto p = lag_profile_bitparallel(b);
    ASSERT_EQ(p[0], static_cast<std::int64_t>(m));
    for (std::size_t n = 1; n < m; ++n) {
      ASSERT_EQ(p[n], p[m - n]);
      ASSERT_EQ(((p[n] - static_cast<std::int64_t>(m)) % 2 + 2) % 2, 0);
      ASSERT_LE(std::abs(p[n]), static_cast<std::int64_t>(m));
    }
    ASSERT_GE(df(p), 0.0);
    const auto c = b.complement();
    ASSERT_EQ(mf_closed_form(c), mf_closed_form(b));
    ASSERT_EQ(lag_profile_bitparallel(c), p);
  }
}

}  // namespace
}  // namespace bitspectra
