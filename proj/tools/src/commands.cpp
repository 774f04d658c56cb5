#include "bitspectra_cli/commands.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "bitspectra/errors.hpp"
#include "bitspectra/parallel.hpp"
#include "bitspectra/rng.hpp"
#include "bitspectra_cli/csv.hpp"
#include "bitspectra_cli/svg_plot.hpp"

namespace fs = std::filesystem;

namespace bitspectra::cli {
namespace {

MetricsRow analyze_path(const fs::path& file, const std::string& shown,
                        const AnalyzeOptions& options) {
  std::optional<std::uint64_t> size;
  try {
    const auto data = read_file_bytes(file);
    size = data.size();
    BitString bits;
    Origin origin{file.string(), 0, data.size()};
    if (options.raw_bits) {
      bits = BitString::from_ascii(
          std::string_view(reinterpret_cast<const char*>(data.data()), data.size()));
      if (bits.size() > options.max_bits) {
        throw SizeLimitError("input exceeds the max_bits limit of " +
                             std::to_string(options.max_bits));
      }
    } else {
      if (data.size() * 8 > options.max_bits) {
        throw SizeLimitError("input exceeds the max_bits limit of " +
                             std::to_string(options.max_bits));
      }
      bits = BitString::from_bytes(data, origin);
    }
    if (bits.empty()) return make_error_row(shown, size, "empty input");
    const auto record = analyze(bits, options.kernel, options.limits);
    return make_row(shown, *size, record, options.timing);
  } catch (const Error& e) {
    return make_error_row(shown, size, e.what());
  } catch (const std::bad_alloc&) {
    return make_error_row(shown, size, "out of memory");
  }
}

int write_rows(const std::vector<MetricsRow>& rows, std::ostream& out) {
  out << kMetricsHeader << '\n';
  bool any_error = false;
  for (const auto& row : rows) {
    out << format_row(row) << '\n';
    any_error = any_error || !row.ok();
  }
  return any_error ? kRowErrors : kSuccess;
}

std::optional<MetricsTable> load_table(const fs::path& csv, std::ostream& err) {
  std::ifstream in(csv);
  if (!in) {
    err << "error: cannot open " << csv.string() << '\n';
    return std::nullopt;
  }
  try {
    return read_metrics_csv(in);
  } catch (const CsvError& e) {
    err << "error: " << csv.string() << ": " << e.what() << '\n';
    return std::nullopt;
  } catch (const Error& e) {
    err << "error: " << csv.string() << ": " << e.what() << '\n';
    return std::nullopt;
  }
}

std::map<std::string, GroupLabel> manifest_labels(const fs::path& manifest) {
  std::map<std::string, GroupLabel> labels;
  for (const auto& e : CorpusManifest::load(manifest).entries) {
    labels[fs::path(e.path).lexically_normal().generic_string()] = e.group;
  }
  return labels;
}

std::optional<GroupLabel> row_label(const MetricsRow& row,
                                    const std::map<std::string, GroupLabel>& labels) {
  const auto key = fs::path(row.path).lexically_normal().generic_string();
  if (auto it = labels.find(key); it != labels.end()) return it->second;
  if (auto it = row.extra.find("group"); it != row.extra.end() && !it->second.empty()) {
    return parse_group_label(it->second);
  }
  return std::nullopt;
}

std::string fixed(double v, const char* fmt) {
  char buf[64];
  std::snprintf(buf, sizeof buf, fmt, v);
  return buf;
}

}  // namespace

int cmd_analyze(const std::vector<fs::path>& paths, const AnalyzeOptions& options,
                std::ostream& out, std::ostream& /*err*/) {
  std::vector<MetricsRow> rows;
  rows.reserve(paths.size());
  for (const auto& p : paths) rows.push_back(analyze_path(p, p.string(), options));
  return write_rows(rows, out);
}

int cmd_scan(const fs::path& root, const AnalyzeOptions& options, unsigned workers,
             std::ostream& out, std::ostream& err) {
  std::error_code ec;
  if (!fs::is_directory(root, ec)) {
    err << "error: " << root.string() << " is not a directory\n";
    return kFatal;
  }
  std::vector<std::string> files;
  fs::recursive_directory_iterator it(root, ec), end;
  if (ec) {
    err << "error: cannot traverse " << root.string() << ": " << ec.message() << '\n';
    return kFatal;
  }
  for (; it != end; it.increment(ec)) {
    if (ec) {
      err << "error: traversal failed under " << root.string() << ": " << ec.message() << '\n';
      return kFatal;
    }
    if (!it->is_regular_file(ec)) continue;
    if (it->path().filename() == "manifest.jsonl") continue;
    files.push_back(it->path().lexically_relative(root).generic_string());
  }
  if (ec) {
    err << "error: traversal failed under " << root.string() << ": " << ec.message() << '\n';
    return kFatal;
  }
  std::sort(files.begin(), files.end());

  std::vector<MetricsRow> rows(files.size());
  parallel_for(files.size(), workers, [&](std::size_t i) {
    rows[i] = analyze_path(root / files[i], files[i], options);
  });
  return write_rows(rows, out);
}

int cmd_corpus_gen(const fs::path& root, const CorpusSpec& spec, std::ostream& out,
                   std::ostream& err) {
  try {
    const auto manifest = generate_corpus(root, spec);
    std::map<std::string, std::size_t> counts;
    for (const auto& e : manifest.entries) ++counts[std::string(to_string(e.group))];
    out << "wrote " << manifest.entries.size() << " files to " << root.string() << " (";
    bool first = true;
    for (const auto& [group, n] : counts) {
      out << (first ? "" : ", ") << group << ' ' << n;
      first = false;
    }
    out << ")\nmanifest: " << (root / "manifest.jsonl").string() << '\n';
    return kSuccess;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kFatal;
  } catch (const fs::filesystem_error& e) {
    err << "error: " << e.what() << '\n';
    return kFatal;
  }
}

int cmd_corpus_verify(const fs::path& manifest_path, unsigned workers, std::ostream& out,
                      std::ostream& err) {
  CorpusManifest manifest;
  try {
    manifest = CorpusManifest::load(manifest_path);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kFatal;
  }
  const auto report = verify(manifest, manifest_path.parent_path(), workers);
  for (const auto& r : report.results) {
    if (r.status == VerifyStatus::Pass) continue;
    out << (r.status == VerifyStatus::Fail ? "FAIL " : "UNVERIFIABLE ") << r.path << ": "
        << r.message << '\n';
  }
  const auto fails = report.count(VerifyStatus::Fail);
  out << report.count(VerifyStatus::Pass) << " pass, " << fails << " fail, "
      << report.count(VerifyStatus::Unverifiable) << " unverifiable\n";
  return fails == 0 ? kSuccess : kRowErrors;
}

int cmd_calibrate(const fs::path& csv, const std::optional<fs::path>& manifest,
                  const std::optional<fs::path>& output, const Thresholds& defaults,
                  std::ostream& out, std::ostream& err) {
  const auto table = load_table(csv, err);
  if (!table) return kFatal;
  try {
    const auto labels = manifest ? manifest_labels(*manifest) : std::map<std::string, GroupLabel>{};
    std::vector<LabeledRecord> labeled;
    for (const auto& row : table->rows) {
      if (!row.ok() || row.m_bits < 2) continue;
      if (auto label = row_label(row, labels)) labeled.push_back({row.to_record(), *label});
    }
    const auto result = calibrate(labeled, defaults);
    const auto json = result.thresholds.to_json();
    if (output) {
      std::ofstream f(*output);
      if (!f) throw IoError("cannot write " + output->string());
      f << json;
    } else {
      out << json;
    }
    err << "calibrated on " << labeled.size() << " labeled rows\n"
        << "df exponent: structured " << fixed(result.structured_df_exponent, "%.3f")
        << ", rest " << fixed(result.rest_df_exponent, "%.3f") << '\n'
        << "mf exponent: structured " << fixed(result.structured_mf_exponent, "%.3f")
        << ", compressed " << fixed(result.compressed_mf_exponent, "%.3f") << ", random "
        << fixed(result.random_mf_exponent, "%.3f") << '\n';
    for (const auto& w : result.warnings) err << "warning: " << w << '\n';
    return kSuccess;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kFatal;
  }
}

int cmd_classify(const fs::path& csv, const Thresholds& thresholds, std::ostream& out,
                 std::ostream& err) {
  const auto table = load_table(csv, err);
  if (!table) return kFatal;
  out << kMetricsHeader;
  for (const auto& c : table->extra_columns) out << ',' << csv_escape(c);
  out << ",group,confidence\n";
  for (const auto& row : table->rows) {
    out << format_row(row);
    for (const auto& c : table->extra_columns) {
      const auto it = row.extra.find(c);
      out << ',' << csv_escape(it == row.extra.end() ? "" : it->second);
    }
    if (row.ok() && row.m_bits >= 2) {
      const auto c = classify(features(row.m_bits, row.mf, row.df), thresholds);
      out << ',' << to_string(c.label) << ',' << fixed(c.confidence, "%.4f") << '\n';
    } else {
      out << ",,\n";
    }
  }
  return kSuccess;
}

int cmd_report(const fs::path& csv, const std::string& prefix,
               const std::optional<fs::path>& manifest, bool skip_tiny, std::ostream& out,
               std::ostream& err) {
  const auto table = load_table(csv, err);
  if (!table) return kFatal;
  std::map<std::string, GroupLabel> labels;
  try {
    if (manifest) labels = manifest_labels(*manifest);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kFatal;
  }

  const std::vector<std::pair<std::string, std::string>> palette = {
      {"structured", "#1f77b4"}, {"compressed", "#ff7f0e"}, {"random", "#2ca02c"},
      {"indeterminate", "#7f7f7f"}, {"unlabeled", "#9467bd"}};
  std::map<std::string, std::array<PlotSeries, 3>> by_group;
  std::size_t used = 0;
  for (const auto& row : table->rows) {
    if (!row.ok() || row.m_bits == 0) continue;
    if (skip_tiny && row.size_bytes && *row.size_bytes < 100) continue;
    std::string group = "unlabeled";
    try {
      if (auto label = row_label(row, labels)) group = std::string(to_string(*label));
    } catch (const Error&) {
    }
    auto& series = by_group[group];
    const double m = static_cast<double>(row.m_bits);
    series[0].points.push_back(clamp_point(m, static_cast<double>(row.mf)));
    series[1].points.push_back(clamp_point(m, row.adj_mf));
    series[2].points.push_back(clamp_point(m, row.df));
    ++used;
  }
  if (used == 0) {
    err << "error: " << csv.string() << " has no analyzable rows\n";
    return kRowErrors;
  }

  std::array<ScatterPlot, 3> plots;
  plots[0] = {"M_F vs size", "M (bits)", "M_F", {}, {{"M^2", 1, 2}, {"M^1.5", 1, 1.5}, {"M", 1, 1}}};
  plots[1] = {"Adjusted M_F vs size", "M (bits)", "Adj. M_F", {}, {}};
  plots[2] = {"D_F vs size", "M (bits)", "D_F", {}, {{"M/100", 0.01, 1}, {"1", 1, 0}}};
  for (const auto& [name, color] : palette) {
    auto it = by_group.find(name);
    if (it == by_group.end()) continue;
    for (int f = 0; f < 3; ++f) {
      plots[f].series.push_back({name, color, std::move(it->second[f].points)});
    }
  }

  const fs::path base(prefix);
  if (base.has_parent_path()) fs::create_directories(base.parent_path());
  for (int f = 0; f < 3; ++f) {
    const auto file = prefix + "figure" + std::to_string(f + 1) + ".svg";
    std::ofstream svg(file);
    if (!svg) {
      err << "error: cannot write " << file << '\n';
      return kFatal;
    }
    svg << render_loglog_svg(plots[f]);
    out << "wrote " << file << '\n';
  }
  return kSuccess;
}

std::vector<BenchCell> run_bench(const BenchOptions& options) {
  std::vector<BenchCell> cells;
  for (Kernel kernel : options.kernels) {
    for (std::size_t m : options.sizes) {
      BenchCell cell;
      cell.kernel = kernel;
      cell.m_bits = m;
      cell.repetitions = options.repetitions;
      cell.low_confidence = options.repetitions < 3;
      // Working-set estimate: input words, profile, plus kernel scratch.
      const std::uint64_t profile_bytes = 8ULL * m;
      const std::uint64_t words_bytes = (m + 63) / 64 * 8;
      switch (kernel) {
        case Kernel::Reference: cell.peak_mem_bytes = words_bytes + m + profile_bytes; break;
        case Kernel::BitParallel: cell.peak_mem_bytes = 3 * words_bytes + 8 + profile_bytes; break;
        default:
          cell.peak_mem_bytes = words_bytes + 8ULL * m + 16ULL * (m / 2 + 1) + 8ULL * m + profile_bytes;
      }
      if (m == 0 || options.repetitions == 0) {
        cell.error = "invalid size or repetitions";
        cells.push_back(cell);
        continue;
      }
      Rng rng(derive_seed(options.seed, m));
      std::vector<std::uint8_t> bytes((m + 7) / 8);
      for (auto& b : bytes) b = static_cast<std::uint8_t>(rng.next() >> 56);
      auto full = BitString::from_bytes(bytes);
      std::vector<std::uint8_t> bits(m);
      for (std::size_t i = 0; i < m; ++i) bits[i] = full[i];
      const auto input = BitString::from_bits(bits);

      std::vector<double> times;
      try {
        for (unsigned r = 0; r < options.repetitions; ++r) {
          const auto start = std::chrono::steady_clock::now();
          LagProfile p;
          switch (kernel) {
            case Kernel::Reference: p = lag_profile_reference(input, options.limits); break;
            case Kernel::BitParallel: p = lag_profile_bitparallel(input, options.limits); break;
            default: p = lag_profile_fft(input, options.limits); break;
          }
          times.push_back(std::chrono::duration<double, std::milli>(
                              std::chrono::steady_clock::now() - start)
                              .count());
          if (p.length_bits() != m) throw InternalError("profile length mismatch");
        }
        std::sort(times.begin(), times.end());
        const std::size_t n = times.size();
        cell.median_ms = n % 2 ? times[n / 2] : 0.5 * (times[n / 2 - 1] + times[n / 2]);
      } catch (const SizeLimitError&) {
        cell.error = "size-limit";
      } catch (const Error& e) {
        cell.error = e.what();
      }
      cells.push_back(cell);
    }
  }
  return cells;
}

int cmd_bench(const BenchOptions& options, std::ostream& out, std::ostream& /*err*/) {
  const auto cells = run_bench(options);
  out << "kernel,m_bits,repetitions,median_ms,peak_mem_bytes,low_confidence,error\n";
  bool any_error = false;
  for (const auto& c : cells) {
    out << to_string(c.kernel) << ',' << c.m_bits << ',' << c.repetitions << ','
        << (c.error.empty() ? fixed(c.median_ms, "%.4f") : std::string()) << ','
        << c.peak_mem_bytes << ',' << (c.low_confidence ? 1 : 0) << ',' << csv_escape(c.error)
        << '\n';
    any_error = any_error || !c.error.empty();
  }
  return any_error ? kRowErrors : kSuccess;
}

}  // namespace bitspectra::cli
