#include "bitspectra_cli/settings.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "bitspectra/errors.hpp"

namespace bitspectra::cli {
namespace {

std::uint64_t parse_count(const std::string& name, const std::string& text, std::uint64_t min) {
  std::uint64_t v = 0;
  const auto* end = text.data() + text.size();
  const auto [p, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc{} || p != end) {
    throw ArgumentError(name + ": expected a non-negative integer, got '" + text + "'");
  }
  if (v < min) throw ArgumentError(name + " must be at least " + std::to_string(min));
  return v;
}

}  // namespace

std::string env_name(const std::string& setting) {
  std::string out = "BITSPECTRA_";
  for (char c : setting) out += static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return out;
}

std::optional<std::string> process_env(const std::string& name) {
  if (const char* v = std::getenv(name.c_str()); v != nullptr && *v != '\0') return std::string(v);
  return std::nullopt;
}

Settings resolve_settings(const std::map<std::string, std::string>& flags, const EnvLookup& env,
                          const std::string& config_text) {
  nlohmann::json config = nlohmann::json::object();
  if (!config_text.empty()) {
    try {
      config = nlohmann::json::parse(config_text);
    } catch (const nlohmann::json::exception& e) {
      throw ArgumentError(std::string("config file: ") + e.what());
    }
    if (!config.is_object()) throw ArgumentError("config file: expected a JSON object");
    for (const auto& [key, _] : config.items()) {
      if (std::find_if(std::begin(kSettingNames), std::end(kSettingNames),
                       [&](const char* n) { return key == n; }) == std::end(kSettingNames)) {
        throw ArgumentError("config file: unknown key '" + key + "'");
      }
    }
  }

  auto lookup = [&](const std::string& name) -> std::optional<std::string> {
    if (auto it = flags.find(name); it != flags.end()) return it->second;
    if (auto v = env(env_name(name))) return v;
    if (auto it = config.find(name); it != config.end()) {
      return it->is_string() ? it->get<std::string>() : it->dump();
    }
    return std::nullopt;
  };

  Settings s;
  if (auto v = lookup("kernel")) s.kernel = parse_kernel(*v);
  if (auto v = lookup("max_bits")) s.max_bits = parse_count("max_bits", *v, 1);
  if (auto v = lookup("reference_cap")) s.limits.reference_cap = parse_count("reference_cap", *v, 1);
  if (auto v = lookup("bitparallel_cap")) {
    s.limits.bitparallel_cap = parse_count("bitparallel_cap", *v, 1);
  }
  if (auto v = lookup("fft_cap")) s.limits.fft_cap = parse_count("fft_cap", *v, 1);
  if (auto v = lookup("threads")) {
    s.limits.threads = static_cast<unsigned>(parse_count("threads", *v, 1));
  }
  if (auto v = lookup("workers")) s.workers = static_cast<unsigned>(parse_count("workers", *v, 1));
  if (auto v = lookup("seed")) s.seed = parse_count("seed", *v, 0);
  if (auto v = lookup("thresholds")) {
    s.thresholds_path = *v;
    std::ifstream in(*v);
    if (!in) throw ArgumentError("cannot read thresholds file " + *v);
    std::stringstream buf;
    buf << in.rdbuf();
    s.thresholds = Thresholds::from_json(buf.str());
  }
  return s;
}

}  // namespace bitspectra::cli
