#include "bitspectra_cli/csv.hpp"

#include <charconv>
#include <cstdio>
#include <cstdlib>

#include "bitspectra/classifier.hpp"

namespace bitspectra::cli {
namespace {

constexpr std::size_t kSchemaColumns = 12;

std::uint64_t parse_u64(std::string_view s, std::size_t line, const char* column) {
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) {
    throw CsvError(line, std::string("bad integer in column ") + column + ": '" +
                             std::string(s) + "'");
  }
  return v;
}

double parse_real(std::string_view s, std::size_t line, const char* column) {
  const std::string text(s);
  char* end = nullptr;
  const double v = std::strtod(text.c_str(), &end);
  if (text.empty() || end != text.c_str() + text.size()) {
    throw CsvError(line, std::string("bad number in column ") + column + ": '" + text + "'");
  }
  return v;
}

}  // namespace

MetricsRecord MetricsRow::to_record() const {
  MetricsRecord r;
  r.source = Origin{path, 0, size_bytes.value_or(0)};
  r.length_bits = m_bits;
  r.popcount = popcount;
  r.mf = mf;
  r.adj_mf = adj_mf;
  r.df = df;
  r.entropy_bits_per_byte = entropy;
  if (!kernel.empty()) r.kernel = parse_kernel(kernel);
  r.runtime_ms = runtime_ms.value_or(0.0);
  return r;
}

MetricsRow make_row(const std::string& path, std::uint64_t size_bytes, const MetricsRecord& r,
                    bool with_timing) {
  MetricsRow row;
  row.path = path;
  row.size_bytes = size_bytes;
  row.m_bits = r.length_bits;
  row.popcount = r.popcount;
  row.mf = r.mf;
  row.adj_mf = r.adj_mf;
  row.df = r.df;
  row.entropy = r.entropy_bits_per_byte;
  row.alpha = r.length_bits >= 2 ? features(r).alpha : 0.0;
  row.kernel = std::string(to_string(r.kernel));
  if (with_timing) row.runtime_ms = r.runtime_ms;
  return row;
}

MetricsRow make_error_row(const std::string& path, std::optional<std::uint64_t> size_bytes,
                          std::string error) {
  MetricsRow row;
  row.path = path;
  row.size_bytes = size_bytes;
  row.error = std::move(error);
  return row;
}

std::string format_real(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

std::string csv_escape(std::string_view field) {
  if (field.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(field);
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::vector<std::string> split_csv_line(std::string_view line) {
  std::vector<std::string> fields(1);
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        fields.back() += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        fields.back() += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.emplace_back();
    } else if (c != '\r') {
      fields.back() += c;
    }
  }
  return fields;
}

std::string format_row(const MetricsRow& row) {
  std::string out = csv_escape(row.path);
  out += ',';
  if (row.size_bytes) out += std::to_string(*row.size_bytes);
  if (row.ok()) {
    out += ',' + std::to_string(row.m_bits);
    out += ',' + std::to_string(row.popcount);
    out += ',' + std::to_string(row.mf);
    out += ',' + format_real(row.adj_mf);
    out += ',' + format_real(row.df);
    out += ',' + format_real(row.entropy);
    out += ',' + format_real(row.alpha);
    out += ',' + row.kernel;
    out += ',';
    if (row.runtime_ms) {
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.3f", *row.runtime_ms);
      out += buf;
    }
    out += ',';
  } else {
    out += ",,,,,,,,,,";
    out += csv_escape(row.error);
  }
  return out;
}

MetricsTable read_metrics_csv(std::istream& in) {
  MetricsTable table;
  std::string line;
  if (!std::getline(in, line)) throw CsvError(1, "missing header");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line.rfind(kMetricsHeader, 0) != 0) {
    throw CsvError(1, "header does not match the metrics schema");
  }
  const auto header = split_csv_line(line);
  table.extra_columns.assign(header.begin() + kSchemaColumns, header.end());

  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    const auto f = split_csv_line(line);
    if (f.size() != header.size()) {
      throw CsvError(line_no, "expected " + std::to_string(header.size()) + " fields, found " +
                                  std::to_string(f.size()));
    }
    MetricsRow row;
    row.path = f[0];
    if (!f[1].empty()) row.size_bytes = parse_u64(f[1], line_no, "size_bytes");
    row.error = f[11];
    if (row.ok()) {
      row.m_bits = parse_u64(f[2], line_no, "m_bits");
      row.popcount = parse_u64(f[3], line_no, "popcount");
      row.mf = parse_u64(f[4], line_no, "mf");
      row.adj_mf = parse_real(f[5], line_no, "adj_mf");
      row.df = parse_real(f[6], line_no, "df");
      row.entropy = parse_real(f[7], line_no, "entropy");
      row.alpha = parse_real(f[8], line_no, "alpha");
      row.kernel = f[9];
      if (!f[10].empty()) row.runtime_ms = parse_real(f[10], line_no, "runtime_ms");
      if (row.popcount > row.m_bits) throw CsvError(line_no, "popcount exceeds m_bits");
    }
    for (std::size_t i = kSchemaColumns; i < f.size(); ++i) row.extra[header[i]] = f[i];
    table.rows.push_back(std::move(row));
  }
  return table;
}

}  // namespace bitspectra::cli
