#include "bitspectra/classifier.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <nlohmann/json.hpp>

#include "bitspectra/errors.hpp"

namespace bitspectra {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

// Median (log M, log df) per power-of-two size bin.
struct BinnedFit {
  LogLogFit fit;
  std::size_t bins = 0;
};

BinnedFit fit_binned_df(const std::vector<const MetricsRecord*>& records) {
  std::map<long, std::pair<std::vector<double>, std::vector<double>>> bins;
  for (const auto* r : records) {
    const long key = std::lround(std::log2(static_cast<double>(r->length_bits)));
    bins[key].first.push_back(static_cast<double>(r->length_bits));
    bins[key].second.push_back(std::max(r->df, 1e-12));
  }
  std::vector<double> xs, ys;
  for (auto& [key, xy] : bins) {
    xs.push_back(median(xy.first));
    ys.push_back(median(xy.second));
  }
  BinnedFit out;
  out.bins = xs.size();
  if (out.bins >= 2) out.fit = fit_log_log(xs, ys);
  return out;
}

double mf_exponent(const std::vector<const MetricsRecord*>& records) {
  std::vector<double> xs, ys;
  for (const auto* r : records) {
    xs.push_back(static_cast<double>(r->length_bits));
    ys.push_back(std::max<double>(static_cast<double>(r->mf), 1.0));
  }
  if (xs.size() < 2) return kNaN;
  const auto [lo, hi] = std::minmax_element(xs.begin(), xs.end());
  if (*lo == *hi) return kNaN;
  return fit_log_log(xs, ys).slope;
}

}  // namespace

std::string_view to_string(GroupLabel label) {
  switch (label) {
    case GroupLabel::Structured: return "structured";
    case GroupLabel::Compressed: return "compressed";
    case GroupLabel::Random: return "random";
    case GroupLabel::Indeterminate: return "indeterminate";
  }
  return "indeterminate";
}

GroupLabel parse_group_label(std::string_view name) {
  std::string lower(name);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (lower == "structured") return GroupLabel::Structured;
  if (lower == "compressed") return GroupLabel::Compressed;
  if (lower == "random") return GroupLabel::Random;
  if (lower == "indeterminate") return GroupLabel::Indeterminate;
  throw ArgumentError("unknown group label '" + std::string(name) + "'");
}

FeatureVector features(std::uint64_t m_bits, std::uint64_t mf, double df) {
  if (m_bits < 2) throw ArgumentError("features: need M >= 2");
  FeatureVector f;
  f.m_bits = m_bits;
  const double log_m = std::log(static_cast<double>(m_bits));
  f.alpha = std::log(static_cast<double>(std::max<std::uint64_t>(mf, 1))) / log_m;
  f.df = df;
  f.df_norm = 100.0 * df / static_cast<double>(m_bits);
  return f;
}

FeatureVector features(const MetricsRecord& r) { return features(r.length_bits, r.mf, r.df); }

double Thresholds::df_split(double m_bits) const {
  return df_split_c * std::pow(m_bits, df_split_gamma);
}

void Thresholds::validate() const {
  if (!(alpha_split > 1.0 && alpha_split < 1.5)) {
    throw ArgumentError("alpha_split must lie in (1, 1.5)");
  }
  if (!(min_confident_bits > 0.0)) throw ArgumentError("min_confident_bits must be positive");
  if (!(df_margin_decades > 0.0) || !(alpha_margin > 0.0)) {
    throw ArgumentError("margins must be positive");
  }
  if (!(df_split_c > 0.0) || !(df_split_gamma >= 0.0 && df_split_gamma <= 1.0)) {
    throw ArgumentError("df_split needs c > 0 and 0 <= gamma <= 1");
  }
  // Monotone in M, and the ratio to M/100 is non-increasing for gamma <= 1: checking the left
  // end of M > 10^4 suffices.
  const double at = df_split(1e4);
  if (!(at >= 1.0 && at <= 100.0) || (df_split_gamma == 1.0 && df_split_c >= 0.01) ||
      (df_split_gamma == 0.0 && df_split_c <= 1.0)) {
    throw ArgumentError("df_split(M) must lie strictly between 1 and M/100 for M > 10^4");
  }
}

std::string Thresholds::to_json() const {
  nlohmann::ordered_json j;
  j["min_confident_bits"] = min_confident_bits;
  j["df_split_c"] = df_split_c;
  j["df_split_gamma"] = df_split_gamma;
  j["alpha_split"] = alpha_split;
  return j.dump(2) + "\n";
}

Thresholds Thresholds::from_json(std::string_view text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ArgumentError(std::string("thresholds JSON: ") + e.what());
  }
  if (!j.is_object()) throw ArgumentError("thresholds JSON must be an object");
  Thresholds t;
  auto read = [&](const char* key, double& field) {
    if (!j.contains(key)) return;
    if (!j[key].is_number()) throw ArgumentError(std::string("thresholds JSON: ") + key +
                                                 " must be a number");
    field = j[key].get<double>();
  };
  read("min_confident_bits", t.min_confident_bits);
  read("df_split_c", t.df_split_c);
  read("df_split_gamma", t.df_split_gamma);
  read("alpha_split", t.alpha_split);
  t.validate();
  return t;
}

Classification classify(const FeatureVector& f, const Thresholds& t) {
  const double m = static_cast<double>(f.m_bits);
  const double split = t.df_split(m);
  const double df_floor = std::max(f.df, std::numeric_limits<double>::min());

  Classification out;
  double distance = 0.0;  // in units of the margin band
  if (f.df > split) {
    out.label = GroupLabel::Structured;
    distance = std::log10(df_floor / split) / t.df_margin_decades;
  } else {
    out.label = f.alpha < t.alpha_split ? GroupLabel::Random : GroupLabel::Compressed;
    const double df_distance = std::log10(split / df_floor) / t.df_margin_decades;
    const double alpha_distance = std::abs(f.alpha - t.alpha_split) / t.alpha_margin;
    distance = std::min(df_distance, alpha_distance);
  }

  const double size_term =
      m <= 1.0 ? 0.0 : std::clamp(std::log(m) / std::log(t.min_confident_bits), 0.0, 1.0);
  if (m < t.min_confident_bits && distance < 1.0) {
    out.label = GroupLabel::Indeterminate;
    out.confidence = 0.5 * size_term * std::max(distance, 0.0);
  } else {
    out.confidence = 0.5 + 0.5 * size_term * std::min(distance, 1.0);
  }
  return out;
}

Classification classify(const MetricsRecord& r, const Thresholds& t) {
  return classify(features(r), t);
}

LogLogFit fit_log_log(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) {
    throw ArgumentError("fit_log_log: need at least two paired points");
  }
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0)) throw ArgumentError("fit_log_log: values must be > 0");
    const double lx = std::log(x[i]);
    const double ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  const double denom = n * sxx - sx * sx;
  if (std::abs(denom) < 1e-12 * std::max(1.0, n * sxx)) {
    throw ArgumentError("fit_log_log: x values are all equal");
  }
  LogLogFit fit;
  fit.slope = (n * sxy - sx * sy) / denom;
  fit.intercept = (sy - fit.slope * sx) / n;
  return fit;
}

CalibrationResult calibrate(std::span<const LabeledRecord> labeled, const Thresholds& defaults) {
  std::vector<const MetricsRecord*> structured, random, compressed, rest;
  double min_m = std::numeric_limits<double>::infinity();
  double max_m = 0.0;
  for (const auto& item : labeled) {
    if (item.record.length_bits < 2) continue;
    switch (item.label) {
      case GroupLabel::Structured: structured.push_back(&item.record); break;
      case GroupLabel::Random: random.push_back(&item.record); break;
      case GroupLabel::Compressed: compressed.push_back(&item.record); break;
      case GroupLabel::Indeterminate: continue;
    }
    if (item.label != GroupLabel::Structured) rest.push_back(&item.record);
    min_m = std::min(min_m, static_cast<double>(item.record.length_bits));
    max_m = std::max(max_m, static_cast<double>(item.record.length_bits));
  }

  constexpr std::size_t kMinPerGroup = 10;
  const int classes = !structured.empty() + !random.empty() + !compressed.empty();
  if (classes < 2) throw CalibrationError("calibration needs at least two labeled groups");
  if (structured.size() < kMinPerGroup) {
    throw CalibrationError("calibration needs >= 10 structured records");
  }
  for (const auto* group : {&random, &compressed}) {
    if (!group->empty() && group->size() < kMinPerGroup) {
      throw CalibrationError("calibration needs >= 10 records in every labeled group");
    }
  }
  if (std::log10(max_m / min_m) < 2.0) {
    throw CalibrationError("calibration records must span at least two decades of M");
  }

  CalibrationResult result;
  result.thresholds = defaults;
  result.random_mf_exponent = mf_exponent(random);
  result.compressed_mf_exponent = mf_exponent(compressed);
  result.structured_mf_exponent = mf_exponent(structured);

  const auto s_fit = fit_binned_df(structured);
  const auto r_fit = fit_binned_df(rest);
  result.structured_df_exponent = s_fit.bins >= 2 ? s_fit.fit.slope : kNaN;
  result.rest_df_exponent = r_fit.bins >= 2 ? r_fit.fit.slope : kNaN;
  if (s_fit.bins < 2 || r_fit.bins < 2) {
    result.degenerate = true;
    result.warnings.emplace_back("df fit needs two size bins per side; keeping default df_split");
  } else {
    Thresholds candidate = result.thresholds;
    candidate.df_split_gamma = 0.5 * (s_fit.fit.slope + r_fit.fit.slope);
    candidate.df_split_c = std::exp(0.5 * (s_fit.fit.intercept + r_fit.fit.intercept));
    const double mid_log_m = 0.5 * (std::log(min_m) + std::log(max_m));
    const bool ordered = s_fit.fit.intercept + s_fit.fit.slope * mid_log_m >
                         r_fit.fit.intercept + r_fit.fit.slope * mid_log_m;
    bool valid = ordered;
    if (valid) {
      try {
        candidate.validate();
      } catch (const ArgumentError&) {
        valid = false;
      }
    }
    if (valid) {
      result.thresholds = candidate;
    } else {
      result.degenerate = true;
      result.warnings.emplace_back(
          "fitted df_split is out of order or outside (1, M/100); keeping default df_split");
    }
  }

  if (random.empty() || compressed.empty()) {
    result.degenerate = true;
    result.warnings.emplace_back("alpha_split needs random and compressed records; kept default");
  } else {
    auto mean_alpha = [](const std::vector<const MetricsRecord*>& group) {
      double sum = 0.0;
      for (const auto* r : group) sum += features(*r).alpha;
      return sum / static_cast<double>(group.size());
    };
    const double ra = mean_alpha(random);
    const double ca = mean_alpha(compressed);
    const double mid = 0.5 * (ra + ca);
    if (ca > ra && mid > 1.0 && mid < 1.5) {
      result.thresholds.alpha_split = mid;
    } else {
      result.degenerate = true;
      result.warnings.emplace_back("alpha midpoint " + std::to_string(mid) +
                                   " is unusable; keeping default alpha_split");
    }
  }
  return result;
}

}  // namespace bitspectra
