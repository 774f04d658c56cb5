#pragma once

#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "bitspectra/classifier.hpp"
#include "bitspectra/corpus.hpp"
#include "bitspectra/metrics.hpp"

namespace bitspectra::cli {

enum ExitCode : int { kSuccess = 0, kRowErrors = 1, kFatal = 2 };

struct AnalyzeOptions {
  Kernel kernel = Kernel::Auto;
  KernelLimits limits;
  std::size_t max_bits = kDefaultMaxBits;
  // Inputs are ASCII 0/1 text rather than raw bytes.
  bool raw_bits = false;
  bool timing = true;
};

// One CSV row per input, in input order.
int cmd_analyze(const std::vector<std::filesystem::path>& paths, const AnalyzeOptions& options,
                std::ostream& out, std::ostream& err);

// Recursive, path-sorted; paths in the output are relative to root. Corpus manifests
// (manifest.jsonl) are skipped.
int cmd_scan(const std::filesystem::path& root, const AnalyzeOptions& options, unsigned workers,
             std::ostream& out, std::ostream& err);

int cmd_corpus_gen(const std::filesystem::path& root, const CorpusSpec& spec, std::ostream& out,
                   std::ostream& err);
int cmd_corpus_verify(const std::filesystem::path& manifest, unsigned workers, std::ostream& out,
                      std::ostream& err);

// Labels come from the manifest (joined on path) or, failing that, a `group` column.
int cmd_calibrate(const std::filesystem::path& csv, const std::optional<std::filesystem::path>& manifest,
                  const std::optional<std::filesystem::path>& output, const Thresholds& defaults,
                  std::ostream& out, std::ostream& err);

int cmd_classify(const std::filesystem::path& csv, const Thresholds& thresholds, std::ostream& out,
                 std::ostream& err);

// Writes <prefix>figure1.svg, <prefix>figure2.svg and <prefix>figure3.svg.
int cmd_report(const std::filesystem::path& csv, const std::string& prefix,
               const std::optional<std::filesystem::path>& manifest, bool skip_tiny,
               std::ostream& out, std::ostream& err);

struct BenchOptions {
  std::vector<std::size_t> sizes{1 << 10, 1 << 12, 1 << 14};
  std::vector<Kernel> kernels{Kernel::Reference, Kernel::BitParallel, Kernel::Fft};
  unsigned repetitions = 5;
  KernelLimits limits;
  std::uint64_t seed = 1;
};

struct BenchCell {
  Kernel kernel = Kernel::Auto;
  std::size_t m_bits = 0;
  unsigned repetitions = 0;
  double median_ms = 0.0;
  std::uint64_t peak_mem_bytes = 0;
  bool low_confidence = false;
  std::string error;
};

std::vector<BenchCell> run_bench(const BenchOptions& options);
int cmd_bench(const BenchOptions& options, std::ostream& out, std::ostream& err);

}  // namespace bitspectra::cli
