#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "bitspectra/metrics.hpp"

namespace bitspectra {

// Structured: uncompressed, self-correlated data. Compressed: compressor output and slices of
// it. Random: CSPRNG / entropy-device bytes.
enum class GroupLabel { Structured, Compressed, Random, Indeterminate };

std::string_view to_string(GroupLabel label);
GroupLabel parse_group_label(std::string_view name);

struct FeatureVector {
  std::uint64_t m_bits = 0;
  // log(max(mf, 1)) / log(M): growth exponent of M_F against size, in [0, 2].
  double alpha = 0.0;
  double df = 0.0;
  // df / (M / 100).
  double df_norm = 0.0;
};

FeatureVector features(const MetricsRecord& r);
FeatureVector features(std::uint64_t m_bits, std::uint64_t mf, double df);

// Decision boundaries. df_split(M) = df_split_c * M^df_split_gamma.
struct Thresholds {
  double min_confident_bits = 1e7;
  double df_split_c = 0.1;
  double df_split_gamma = 0.5;
  double alpha_split = 1.25;
  // Half-widths of the band around each boundary in which small files become Indeterminate.
  double df_margin_decades = 0.5;
  double alpha_margin = 0.1;

  double df_split(double m_bits) const;

  // Throws ArgumentError unless 1 < alpha_split < 1.5, min_confident_bits > 0, and
  // 1 < df_split(M) < M/100 for every M > 10^4.
  void validate() const;

  // Keys: min_confident_bits, df_split_c, df_split_gamma, alpha_split.
  std::string to_json() const;
  static Thresholds from_json(std::string_view text);

  bool operator==(const Thresholds&) const = default;
};

struct Classification {
  GroupLabel label = GroupLabel::Indeterminate;
  double confidence = 0.0;
};

// (1) df > df_split(M) -> Structured; (2) alpha < alpha_split -> Random; (3) Compressed.
// Below min_confident_bits, a decision inside the margin band is reported as Indeterminate
// with confidence < 0.5. All other decisions carry confidence >= 0.5, growing with M and with
// the distance to the boundary.
Classification classify(const FeatureVector& f, const Thresholds& t);
Classification classify(const MetricsRecord& r, const Thresholds& t);

struct LabeledRecord {
  MetricsRecord record;
  GroupLabel label;
};

struct CalibrationResult {
  Thresholds thresholds;
  // Set when part of the fit was unusable and the defaults were kept for it.
  bool degenerate = false;
  std::vector<std::string> warnings;
  // Measured log-log slopes of df vs M for each side of the df boundary, and of mf vs M per
  // class (NaN when the class is absent).
  double structured_df_exponent = 0.0;
  double rest_df_exponent = 0.0;
  double random_mf_exponent = 0.0;
  double compressed_mf_exponent = 0.0;
  double structured_mf_exponent = 0.0;
};

// Fits df_split through the geometric midpoint of the per-size df medians of the Structured
// and non-Structured records, and alpha_split at the midpoint of the Random and Compressed
// alpha means. Needs >= 10 records in each class present, Structured plus at least one other
// class, and >= 2 decades of M; CalibrationError otherwise.
CalibrationResult calibrate(std::span<const LabeledRecord> labeled,
                            const Thresholds& defaults = {});

// Least-squares slope and intercept of log(y) on log(x).
struct LogLogFit {
  double slope = 0.0;
  double intercept = 0.0;
};
LogLogFit fit_log_log(std::span<const double> x, std::span<const double> y);

}  // namespace bitspectra
