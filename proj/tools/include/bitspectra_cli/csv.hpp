#pragma once

#include <cstdint>
#include <istream>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "bitspectra/metrics.hpp"

namespace bitspectra::cli {

inline constexpr std::string_view kMetricsHeader =
    "path,size_bytes,m_bits,popcount,mf,adj_mf,df,entropy,alpha,kernel,runtime_ms,error";

// One line of the metrics CSV. Rows with a non-empty `error` carry no metric values.
struct MetricsRow {
  std::string path;
  std::optional<std::uint64_t> size_bytes;
  std::uint64_t m_bits = 0;
  std::uint64_t popcount = 0;
  std::uint64_t mf = 0;
  double adj_mf = 0.0;
  double df = 0.0;
  double entropy = 0.0;
  double alpha = 0.0;
  std::string kernel;
  std::optional<double> runtime_ms;
  std::string error;
  // Columns after the frozen schema (e.g. group, confidence), keyed by header name.
  std::map<std::string, std::string> extra;

  bool ok() const { return error.empty(); }
  MetricsRecord to_record() const;
};

MetricsRow make_row(const std::string& path, std::uint64_t size_bytes, const MetricsRecord& r,
                    bool with_timing);
MetricsRow make_error_row(const std::string& path, std::optional<std::uint64_t> size_bytes,
                          std::string error);

// %.6g, as used for every real-valued column.
std::string format_real(double v);
std::string csv_escape(std::string_view field);
std::vector<std::string> split_csv_line(std::string_view line);

// Frozen schema columns only, no trailing newline.
std::string format_row(const MetricsRow& row);

struct MetricsTable {
  std::vector<std::string> extra_columns;
  std::vector<MetricsRow> rows;
};

// Throws CsvError naming the 1-based line on schema or value errors.
MetricsTable read_metrics_csv(std::istream& in);

class CsvError : public std::runtime_error {
 public:
  CsvError(std::size_t line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

}  // namespace bitspectra::cli
