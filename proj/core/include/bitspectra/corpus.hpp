#pragma once

#include <cstdint>
#include <filesystem>
#include <nlohmann/json.hpp>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "bitspectra/classifier.hpp"

namespace bitspectra {

// One generated file. `path` and `parent` are relative to the corpus root (the directory
// holding the manifest).
struct ManifestEntry {
  std::string path;
  GroupLabel group = GroupLabel::Indeterminate;
  std::uint64_t size_bytes = 0;
  std::string generator;
  std::uint64_t seed = 0;
  std::optional<std::string> parent;
  nlohmann::ordered_json params = nlohmann::ordered_json::object();

  nlohmann::ordered_json to_json() const;
  static ManifestEntry from_json(const nlohmann::ordered_json& j);
};

// JSON-lines inventory, one entry per line.
struct CorpusManifest {
  std::uint64_t corpus_seed = 0;
  std::vector<ManifestEntry> entries;

  std::string to_jsonl() const;
  static CorpusManifest from_jsonl(std::string_view text);
  void save(const std::filesystem::path& file) const;
  static CorpusManifest load(const std::filesystem::path& file);
};

enum class Template { Tabular, Prose, Records };
std::string_view to_string(Template t);
Template parse_template(std::string_view name);

struct SizeRange {
  std::uint64_t min_bytes = 1;
  std::uint64_t max_bytes = 1;
};

// Byte-aligned slices cut from each compressed file; lengths are uniform in
// [min_fraction, max_fraction] of the compressed size.
struct SlicePolicy {
  double min_fraction = 0.25;
  double max_fraction = 0.75;
  unsigned slices_per_file = 1;
  bool whole_files = true;
  bool gzip = true;
  // bzip2 is produced only when the bzip2 executable is on PATH.
  bool bzip2 = true;
  int gzip_level = 9;
};

// --- Deterministic content generators (pure functions of their arguments) ---

// ChaCha20 keystream keyed by BLAKE2b(seed).
std::vector<std::uint8_t> random_bytes(std::uint64_t seed, std::size_t count);

// Complete rows/sentences/records are emitted until the size reaches target_bytes, so the
// result is at least target_bytes (and at least one unit past any header).
std::string structured_text(Template t, std::uint64_t seed, std::size_t target_bytes);

// RFC 1952 container, zeroed mtime, no file name.
std::vector<std::uint8_t> gzip_compress(std::span<const std::uint8_t> data, int level = 9);

bool bzip2_available();
// Runs `bzip2 -9 -c`. EnvironmentError when the executable is missing.
std::vector<std::uint8_t> bzip2_compress(std::span<const std::uint8_t> data);

// --- Generation into a corpus root ---

std::vector<ManifestEntry> gen_random(const std::filesystem::path& root, unsigned count,
                                      SizeRange sizes, std::uint64_t seed, unsigned workers = 1,
                                      bool os_random = false);

std::vector<ManifestEntry> gen_structured(const std::filesystem::path& root, unsigned count,
                                          SizeRange sizes, std::uint64_t seed, Template t,
                                          unsigned workers = 1);

std::vector<ManifestEntry> gen_compressed(const std::filesystem::path& root,
                                          std::span<const ManifestEntry> inputs,
                                          std::uint64_t seed, const SlicePolicy& policy = {},
                                          unsigned workers = 1);

struct CorpusSpec {
  std::uint64_t seed = 1;
  unsigned random_count = 10;
  SizeRange random_sizes{1024, 1 << 16};
  unsigned structured_count = 10;
  SizeRange structured_sizes{1024, 1 << 16};
  std::vector<Template> templates{Template::Tabular, Template::Prose, Template::Records};
  // Compressed files are made from the structured files.
  bool compressed = true;
  SlicePolicy slices;
  unsigned workers = 1;
  bool os_random = false;
};

// Writes every group under root and root/manifest.jsonl.
CorpusManifest generate_corpus(const std::filesystem::path& root, const CorpusSpec& spec);

enum class VerifyStatus { Pass, Fail, Unverifiable };
std::string_view to_string(VerifyStatus s);

struct VerifyResult {
  std::string path;
  VerifyStatus status = VerifyStatus::Fail;
  std::string message;
};

struct VerifyReport {
  std::vector<VerifyResult> results;
  bool all_passed() const;
  std::size_t count(VerifyStatus s) const;
};

// Regenerates every entry from (generator, seed, params) and compares bytes. Paths resolve
// against root. Missing files are reported as failures.
VerifyReport verify(const CorpusManifest& manifest, const std::filesystem::path& root,
                    unsigned workers = 1);

}  // namespace bitspectra
