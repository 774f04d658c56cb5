#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "bitspectra/errors.hpp"
#include "bitspectra_cli/commands.hpp"
#include "bitspectra_cli/settings.hpp"

namespace fs = std::filesystem;
using namespace bitspectra;
using namespace bitspectra::cli;

namespace {

// Runs fn against the named output file, or stdout when the name is empty.
template <typename Fn>
int with_output(const std::string& path, Fn&& fn) {
  if (path.empty()) return fn(std::cout);
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    std::cerr << "error: cannot write " << path << '\n';
    return kFatal;
  }
  const int rc = fn(out);
  out.flush();
  if (!out) {
    std::cerr << "error: write to " << path << " failed\n";
    return kFatal;
  }
  return rc;
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> items;
  std::stringstream in(text);
  for (std::string item; std::getline(in, item, ',');) {
    if (!item.empty()) items.push_back(item);
  }
  return items;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bit-string spectral metrics: M_F, Adj.M_F and D_F"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Expand help for all subcommands");

  // Global settings. Values given here beat BITSPECTRA_* variables, which beat --config.
  std::map<std::string, std::string> given;
  std::string config_path;
  app.add_option("--config", config_path, "JSON config file (also BITSPECTRA_CONFIG)");
  std::map<std::string, std::string> raw;
  const std::vector<std::pair<std::string, std::string>> global_options = {
      {"kernel", "Lag-profile kernel: auto, reference, bitparallel, fft"},
      {"max_bits", "Largest input accepted, in bits"},
      {"reference_cap", "Largest M for the reference kernel"},
      {"bitparallel_cap", "Largest M for which auto picks the bit-parallel kernel"},
      {"fft_cap", "Largest M for the FFT kernel"},
      {"threads", "Threads used inside the bit-parallel kernel"},
      {"workers", "Files analyzed concurrently"},
      {"seed", "Corpus and benchmark seed"},
      {"thresholds", "Classifier thresholds JSON"},
  };
  for (const auto& [name, help] : global_options) {
    std::string flag = "--" + name;
    std::replace(flag.begin(), flag.end(), '_', '-');
    app.add_option(flag, raw[name], help);
  }

  bool timing = true;
  bool raw_bits = false;
  std::vector<std::string> inputs;
  std::string output;

  auto* analyze = app.add_subcommand("analyze", "Analyze files, one CSV row each");
  analyze->add_option("paths", inputs, "Input files")->required();
  analyze->add_flag("!--no-timing", timing, "Leave runtime_ms empty");
  analyze->add_flag("--raw-bits", raw_bits, "Inputs are ASCII 0/1 text")->group("");
  analyze->add_option("-o,--output", output, "Output CSV (default stdout)");

  std::string root;
  bool scan_timing = false;
  auto* scan = app.add_subcommand("scan", "Analyze every file under a directory");
  scan->add_option("root", root, "Directory")->required();
  scan->add_flag("--timing", scan_timing, "Fill runtime_ms (output then varies between runs)");
  scan->add_option("-o,--output", output, "Output CSV (default stdout)");

  auto* corpus = app.add_subcommand("corpus", "Generate or verify a labeled corpus");
  corpus->require_subcommand(1);
  CorpusSpec spec;
  std::string templates = "tabular,prose,records";
  bool no_compressed = false;
  bool no_gzip = false;
  bool no_bzip2 = false;
  bool no_whole = false;
  auto* gen = corpus->add_subcommand("gen", "Write a corpus and its manifest");
  gen->add_option("root", root, "Output directory")->required();
  gen->add_option("--random-count", spec.random_count, "Random files")->capture_default_str();
  gen->add_option("--random-min-bytes", spec.random_sizes.min_bytes)->capture_default_str();
  gen->add_option("--random-max-bytes", spec.random_sizes.max_bytes)->capture_default_str();
  gen->add_option("--structured-count", spec.structured_count, "Structured files, split across templates")
      ->capture_default_str();
  gen->add_option("--structured-min-bytes", spec.structured_sizes.min_bytes)->capture_default_str();
  gen->add_option("--structured-max-bytes", spec.structured_sizes.max_bytes)->capture_default_str();
  gen->add_option("--templates", templates, "Comma-separated: tabular, prose, records")
      ->capture_default_str();
  gen->add_flag("--no-compressed", no_compressed, "Skip the compressed group");
  gen->add_flag("--no-gzip", no_gzip);
  gen->add_flag("--no-bzip2", no_bzip2);
  gen->add_flag("--no-whole-files", no_whole, "Keep only slices of compressed files");
  gen->add_option("--slices", spec.slices.slices_per_file, "Slices per compressed file")
      ->capture_default_str();
  gen->add_option("--slice-min-fraction", spec.slices.min_fraction)->capture_default_str();
  gen->add_option("--slice-max-fraction", spec.slices.max_fraction)->capture_default_str();
  gen->add_flag("--os-random", spec.os_random, "Random group from the OS entropy source");

  std::string manifest;
  auto* verify_cmd = corpus->add_subcommand("verify", "Regenerate and compare every entry");
  verify_cmd->add_option("manifest", manifest, "manifest.jsonl")->required();

  std::string csv;
  auto* calibrate_cmd = app.add_subcommand("calibrate", "Fit thresholds to labeled metrics");
  calibrate_cmd->add_option("csv", csv, "Metrics CSV")->required();
  calibrate_cmd->add_option("--manifest", manifest, "Corpus manifest providing labels");
  calibrate_cmd->add_option("-o,--output", output, "Thresholds JSON (default stdout)");

  auto* classify_cmd = app.add_subcommand("classify", "Append group and confidence columns");
  classify_cmd->add_option("csv", csv, "Metrics CSV")->required();
  classify_cmd->add_option("-o,--output", output, "Output CSV (default stdout)");

  std::string prefix = "./";
  bool skip_tiny = false;
  auto* report = app.add_subcommand("report", "Write figure1.svg, figure2.svg, figure3.svg");
  report->add_option("csv", csv, "Metrics CSV")->required();
  report->add_option("--prefix", prefix, "Output path prefix")->capture_default_str();
  report->add_option("--manifest", manifest, "Corpus manifest providing labels");
  report->add_flag("--skip-tiny", skip_tiny, "Leave out files under 100 bytes");

  std::string sizes = "1024,4096,16384";
  std::string kernels = "reference,bitparallel,fft";
  unsigned repetitions = 5;
  auto* bench = app.add_subcommand("bench", "Time the lag-profile kernels");
  bench->add_option("--sizes", sizes, "Comma-separated sizes in bits")->capture_default_str();
  bench->add_option("--kernels", kernels)->capture_default_str();
  bench->add_option("--repetitions", repetitions)->capture_default_str();
  bench->add_option("-o,--output", output, "Output CSV (default stdout)");

  for (auto* sub : {analyze, scan, corpus, gen, verify_cmd, calibrate_cmd, classify_cmd, report,
                    bench}) {
    sub->fallthrough();
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kSuccess : kFatal;
  }

  Settings settings;
  try {
    for (const auto& [name, _] : global_options) {
      std::string flag = "--" + name;
      std::replace(flag.begin(), flag.end(), '_', '-');
      if (app.count(flag) > 0) given[name] = raw[name];
    }
    if (config_path.empty()) config_path = process_env("BITSPECTRA_CONFIG").value_or("");
    std::string config_text;
    if (!config_path.empty()) {
      std::ifstream in(config_path);
      if (!in) throw ArgumentError("cannot read config file " + config_path);
      std::stringstream buf;
      buf << in.rdbuf();
      config_text = buf.str();
    }
    settings = resolve_settings(given, process_env, config_text);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kFatal;
  }

  AnalyzeOptions analyze_options;
  analyze_options.kernel = settings.kernel;
  analyze_options.limits = settings.limits;
  analyze_options.max_bits = settings.max_bits;

  try {
    if (*analyze) {
      analyze_options.raw_bits = raw_bits;
      analyze_options.timing = timing;
      std::vector<fs::path> paths(inputs.begin(), inputs.end());
      return with_output(output, [&](std::ostream& out) {
        return cmd_analyze(paths, analyze_options, out, std::cerr);
      });
    }
    if (*scan) {
      analyze_options.timing = scan_timing;
      return with_output(output, [&](std::ostream& out) {
        return cmd_scan(root, analyze_options, settings.workers, out, std::cerr);
      });
    }
    if (*gen) {
      spec.seed = settings.seed;
      spec.workers = settings.workers;
      spec.compressed = !no_compressed;
      spec.slices.gzip = !no_gzip;
      spec.slices.bzip2 = !no_bzip2;
      spec.slices.whole_files = !no_whole;
      spec.templates.clear();
      for (const auto& t : split_list(templates)) spec.templates.push_back(parse_template(t));
      return cmd_corpus_gen(root, spec, std::cout, std::cerr);
    }
    if (*verify_cmd) return cmd_corpus_verify(manifest, settings.workers, std::cout, std::cerr);
    const std::optional<fs::path> manifest_opt =
        manifest.empty() ? std::nullopt : std::optional<fs::path>(manifest);
    if (*calibrate_cmd) {
      const std::optional<fs::path> out_opt =
          output.empty() ? std::nullopt : std::optional<fs::path>(output);
      return cmd_calibrate(csv, manifest_opt, out_opt, settings.thresholds, std::cout, std::cerr);
    }
    if (*classify_cmd) {
      return with_output(output, [&](std::ostream& out) {
        return cmd_classify(csv, settings.thresholds, out, std::cerr);
      });
    }
    if (*report) return cmd_report(csv, prefix, manifest_opt, skip_tiny, std::cout, std::cerr);
    if (*bench) {
      BenchOptions options;
      options.sizes.clear();
      for (const auto& s : split_list(sizes)) options.sizes.push_back(std::stoull(s));
      options.kernels.clear();
      for (const auto& k : split_list(kernels)) options.kernels.push_back(parse_kernel(k));
      options.repetitions = repetitions;
      options.limits = settings.limits;
      options.seed = settings.seed;
      return with_output(output, [&](std::ostream& out) {
        return cmd_bench(options, out, std::cerr);
      });
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kFatal;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kFatal;
  }
  return kFatal;
}
