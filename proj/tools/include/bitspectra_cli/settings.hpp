#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <string>

#include "bitspectra/classifier.hpp"
#include "bitspectra/metrics.hpp"

namespace bitspectra::cli {

// Settings shared by every command. Each is looked up in order: command-line flag,
// BITSPECTRA_<NAME> environment variable, JSON config file, built-in default.
struct Settings {
  Kernel kernel = Kernel::Auto;
  KernelLimits limits;
  std::size_t max_bits = kDefaultMaxBits;
  unsigned workers = 1;
  std::uint64_t seed = 1;
  Thresholds thresholds;
  std::optional<std::filesystem::path> thresholds_path;
};

// Names as used in config files; flags use dashes, env vars upper case.
inline constexpr const char* kSettingNames[] = {
    "kernel", "max_bits", "reference_cap", "bitparallel_cap", "fft_cap",
    "threads", "workers", "seed", "thresholds"};

using EnvLookup = std::function<std::optional<std::string>(const std::string&)>;

std::optional<std::string> process_env(const std::string& name);

// `flags` holds only the options given on the command line, keyed by config name.
// `config_text` is the JSON config file content, or empty. Throws ArgumentError.
Settings resolve_settings(const std::map<std::string, std::string>& flags, const EnvLookup& env,
                          const std::string& config_text);

std::string env_name(const std::string& setting);

}  // namespace bitspectra::cli
