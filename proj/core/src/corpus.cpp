#include "bitspectra/corpus.hpp"

#include <sodium.h>
#include <unistd.h>
#include <zlib.h>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <thread>

#include "bitspectra/bitstring.hpp"
#include "bitspectra/errors.hpp"
#include "bitspectra/parallel.hpp"
#include "bitspectra/rng.hpp"

namespace fs = std::filesystem;

namespace bitspectra {
namespace {

void ensure_sodium() {
  static const int rc = sodium_init();
  if (rc < 0) throw EnvironmentError("libsodium failed to initialise");
}

std::string numbered(std::string_view stem, unsigned index, std::string_view ext) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%05u", index);
  return std::string(stem) + "_" + buf + std::string(ext);
}

void write_file(const fs::path& file, std::span<const std::uint8_t> data) {
  fs::create_directories(file.parent_path());
  std::ofstream out(file, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot create " + file.string());
  out.write(reinterpret_cast<const char*>(data.data()), static_cast<std::streamsize>(data.size()));
  if (!out) throw IoError("write failed for " + file.string());
}

std::span<const std::uint8_t> as_bytes(const std::string& s) {
  return {reinterpret_cast<const std::uint8_t*>(s.data()), s.size()};
}

std::string_view template_extension(Template t) {
  switch (t) {
    case Template::Tabular: return ".csv";
    case Template::Prose: return ".txt";
    case Template::Records: return ".dat";
  }
  return ".txt";
}

std::vector<std::uint8_t> compress_with(std::string_view codec, std::span<const std::uint8_t> data,
                                        int level) {
  if (codec == "gzip") return gzip_compress(data, level);
  if (codec == "bzip2") return bzip2_compress(data);
  throw ArgumentError("unknown codec '" + std::string(codec) + "'");
}

struct SliceBounds {
  std::size_t min_bytes;
  std::size_t max_bytes;
};

SliceBounds slice_bounds(std::size_t total, const SlicePolicy& policy) {
  const auto lo = static_cast<std::size_t>(std::ceil(policy.min_fraction * static_cast<double>(total)));
  const auto hi = static_cast<std::size_t>(std::floor(policy.max_fraction * static_cast<double>(total)));
  SliceBounds b{std::clamp<std::size_t>(lo, 1, total), 0};
  b.max_bytes = std::clamp<std::size_t>(hi, b.min_bytes, total);
  return b;
}

std::string temp_name(std::string_view tag) {
  static std::atomic<unsigned> counter{0};
  return "bitspectra-" + std::to_string(::getpid()) + "-" + std::to_string(counter++) + "-" +
         std::string(tag);
}

std::string shell_quote(const std::string& s) {
  std::string out = "'";
  for (char c : s) {
    if (c == '\'') out += "'\\''";
    else out += c;
  }
  return out + "'";
}

}  // namespace

// ---------------------------------------------------------------------------
// Manifest

nlohmann::ordered_json ManifestEntry::to_json() const {
  nlohmann::ordered_json j;
  j["path"] = path;
  j["group"] = std::string(bitspectra::to_string(group));
  j["size_bytes"] = size_bytes;
  j["generator"] = generator;
  j["seed"] = seed;
  j["parent"] = parent ? nlohmann::ordered_json(*parent) : nlohmann::ordered_json(nullptr);
  j["params"] = params;
  return j;
}

ManifestEntry ManifestEntry::from_json(const nlohmann::ordered_json& j) {
  try {
    ManifestEntry e;
    e.path = j.at("path").get<std::string>();
    e.group = parse_group_label(j.at("group").get<std::string>());
    e.size_bytes = j.at("size_bytes").get<std::uint64_t>();
    e.generator = j.at("generator").get<std::string>();
    e.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("parent") && !j["parent"].is_null()) e.parent = j["parent"].get<std::string>();
    if (j.contains("params")) e.params = j["params"];
    return e;
  } catch (const nlohmann::json::exception& ex) {
    throw ArgumentError(std::string("manifest entry: ") + ex.what());
  }
}

std::string CorpusManifest::to_jsonl() const {
  std::string out;
  for (const auto& e : entries) out += e.to_json().dump() + "\n";
  return out;
}

CorpusManifest CorpusManifest::from_jsonl(std::string_view text) {
  CorpusManifest m;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    nlohmann::ordered_json j;
    try {
      j = nlohmann::ordered_json::parse(line);
    } catch (const nlohmann::json::exception& ex) {
      throw ArgumentError("manifest line " + std::to_string(line_no) + ": " + ex.what());
    }
    m.entries.push_back(ManifestEntry::from_json(j));
  }
  if (!m.entries.empty() && m.entries.front().params.contains("corpus_seed")) {
    m.corpus_seed = m.entries.front().params["corpus_seed"].get<std::uint64_t>();
  }
  return m;
}

void CorpusManifest::save(const fs::path& file) const {
  const auto text = to_jsonl();
  write_file(file, as_bytes(text));
}

CorpusManifest CorpusManifest::load(const fs::path& file) {
  const auto data = read_file_bytes(file);
  return from_jsonl(std::string_view(reinterpret_cast<const char*>(data.data()), data.size()));
}

std::string_view to_string(Template t) {
  switch (t) {
    case Template::Tabular: return "tabular";
    case Template::Prose: return "prose";
    case Template::Records: return "records";
  }
  return "prose";
}

Template parse_template(std::string_view name) {
  if (name == "tabular") return Template::Tabular;
  if (name == "prose") return Template::Prose;
  if (name == "records") return Template::Records;
  throw ArgumentError("unknown template '" + std::string(name) +
                      "' (expected tabular, prose or records)");
}

std::string_view to_string(VerifyStatus s) {
  switch (s) {
    case VerifyStatus::Pass: return "pass";
    case VerifyStatus::Fail: return "fail";
    case VerifyStatus::Unverifiable: return "unverifiable";
  }
  return "fail";
}

// ---------------------------------------------------------------------------
// Content

std::vector<std::uint8_t> random_bytes(std::uint64_t seed, std::size_t count) {
  ensure_sodium();
  std::array<unsigned char, 8> seed_le{};
  for (int i = 0; i < 8; ++i) seed_le[i] = static_cast<unsigned char>(seed >> (8 * i));
  std::array<unsigned char, randombytes_SEEDBYTES> key{};
  crypto_generichash(key.data(), key.size(), seed_le.data(), seed_le.size(), nullptr, 0);
  std::vector<std::uint8_t> out(count);
  randombytes_buf_deterministic(out.data(), out.size(), key.data());
  return out;
}

std::vector<std::uint8_t> gzip_compress(std::span<const std::uint8_t> data, int level) {
  z_stream zs{};
  // windowBits 15 + 16 selects the gzip wrapper; zlib writes mtime 0 and no name.
  if (deflateInit2(&zs, level, Z_DEFLATED, 15 + 16, 8, Z_DEFAULT_STRATEGY) != Z_OK) {
    throw EnvironmentError("zlib deflateInit2 failed");
  }
  std::vector<std::uint8_t> out(deflateBound(&zs, static_cast<uLong>(data.size())) + 64);
  zs.next_in = const_cast<Bytef*>(data.data());
  zs.avail_in = static_cast<uInt>(data.size());
  zs.next_out = out.data();
  zs.avail_out = static_cast<uInt>(out.size());
  const int rc = deflate(&zs, Z_FINISH);
  const auto produced = zs.total_out;
  deflateEnd(&zs);
  if (rc != Z_STREAM_END) throw InternalError("zlib deflate did not finish");
  out.resize(produced);
  return out;
}

bool bzip2_available() {
  const char* path = std::getenv("PATH");
  if (!path) return false;
  std::string_view rest(path);
  while (!rest.empty()) {
    const auto colon = rest.find(':');
    const auto dir = rest.substr(0, colon);
    if (!dir.empty()) {
      const auto candidate = fs::path(std::string(dir)) / "bzip2";
      if (::access(candidate.c_str(), X_OK) == 0) return true;
    }
    if (colon == std::string_view::npos) break;
    rest.remove_prefix(colon + 1);
  }
  return false;
}

std::vector<std::uint8_t> bzip2_compress(std::span<const std::uint8_t> data) {
  if (!bzip2_available()) throw EnvironmentError("bzip2 executable not found on PATH");
  const auto dir = fs::temp_directory_path();
  const auto in_path = dir / temp_name("in");
  const auto out_path = dir / temp_name("out.bz2");
  write_file(in_path, data);
  const std::string cmd = "bzip2 -9 -c < " + shell_quote(in_path.string()) + " > " +
                          shell_quote(out_path.string());
  const int rc = std::system(cmd.c_str());
  std::vector<std::uint8_t> out;
  std::error_code ec;
  if (rc == 0) out = read_file_bytes(out_path);
  fs::remove(in_path, ec);
  fs::remove(out_path, ec);
  if (rc != 0) throw EnvironmentError("bzip2 exited with status " + std::to_string(rc));
  return out;
}

// ---------------------------------------------------------------------------
// Generation

std::vector<ManifestEntry> gen_random(const fs::path& root, unsigned count, SizeRange sizes,
                                      std::uint64_t seed, unsigned workers, bool os_random) {
  if (count < 1) throw ArgumentError("gen_random: count must be >= 1");
  if (sizes.min_bytes < 1 || sizes.min_bytes > sizes.max_bytes) {
    throw ArgumentError("gen_random: need 1 <= min size <= max size");
  }
  Rng rng(seed);
  std::vector<ManifestEntry> entries(count);
  for (unsigned i = 0; i < count; ++i) {
    auto& e = entries[i];
    e.path = (fs::path("random") / numbered("random", i, ".bin")).generic_string();
    e.group = GroupLabel::Random;
    e.size_bytes = rng.log_uniform(sizes.min_bytes, sizes.max_bytes);
    e.generator = os_random ? "os-random" : "chacha20";
    e.seed = derive_seed(seed, i);
    e.params["size_bytes"] = e.size_bytes;
  }
  parallel_for(count, workers, [&](std::size_t i) {
    const auto& e = entries[i];
    std::vector<std::uint8_t> data;
    if (os_random) {
      ensure_sodium();
      data.resize(e.size_bytes);
      randombytes_buf(data.data(), data.size());
    } else {
      data = random_bytes(e.seed, e.size_bytes);
    }
    write_file(root / e.path, data);
  });
  return entries;
}

std::vector<ManifestEntry> gen_structured(const fs::path& root, unsigned count, SizeRange sizes,
                                          std::uint64_t seed, Template t, unsigned workers) {
  if (count < 1) throw ArgumentError("gen_structured: count must be >= 1");
  if (sizes.min_bytes < 1 || sizes.min_bytes > sizes.max_bytes) {
    throw ArgumentError("gen_structured: need 1 <= min size <= max size");
  }
  Rng rng(seed);
  std::vector<ManifestEntry> entries(count);
  std::vector<std::uint64_t> targets(count);
  for (unsigned i = 0; i < count; ++i) {
    auto& e = entries[i];
    targets[i] = rng.log_uniform(sizes.min_bytes, sizes.max_bytes);
    e.path = (fs::path("structured") / numbered(to_string(t), i, template_extension(t)))
                 .generic_string();
    e.group = GroupLabel::Structured;
    e.generator = "structured";
    e.seed = derive_seed(seed, i);
    e.params["template"] = std::string(to_string(t));
    e.params["target_bytes"] = targets[i];
  }
  parallel_for(count, workers, [&](std::size_t i) {
    auto& e = entries[i];
    const auto text = structured_text(t, e.seed, targets[i]);
    e.size_bytes = text.size();
    write_file(root / e.path, as_bytes(text));
  });
  return entries;
}

std::vector<ManifestEntry> gen_compressed(const fs::path& root,
                                          std::span<const ManifestEntry> inputs,
                                          std::uint64_t seed, const SlicePolicy& policy,
                                          unsigned workers) {
  if (inputs.empty()) throw ArgumentError("gen_compressed: no inputs");
  if (!(policy.min_fraction > 0.0 && policy.min_fraction <= policy.max_fraction &&
        policy.max_fraction <= 1.0)) {
    throw ArgumentError("gen_compressed: slice fractions must satisfy 0 < min <= max <= 1");
  }
  std::vector<std::string> codecs;
  if (policy.gzip) codecs.emplace_back("gzip");
  if (policy.bzip2 && bzip2_available()) codecs.emplace_back("bzip2");
  if (codecs.empty()) {
    throw EnvironmentError(std::string("no compressor available: gzip disabled") +
                           (policy.bzip2 ? ", bzip2 executable not found on PATH" : ""));
  }

  std::vector<std::vector<ManifestEntry>> per_input(inputs.size());
  parallel_for(inputs.size(), workers, [&](std::size_t i) {
    const auto& input = inputs[i];
    const auto data = read_file_bytes(root / input.path);
    const std::uint64_t input_seed = derive_seed(seed, i);
    const auto stem = fs::path(input.path).filename().string();
    auto& out = per_input[i];
    for (std::size_t c = 0; c < codecs.size(); ++c) {
      const auto& codec = codecs[c];
      const auto packed = compress_with(codec, data, policy.gzip_level);
      const std::string base =
          (fs::path("compressed") / (stem + (codec == "gzip" ? ".gz" : ".bz2"))).generic_string();
      if (policy.whole_files) {
        ManifestEntry e;
        e.path = base;
        e.group = GroupLabel::Compressed;
        e.size_bytes = packed.size();
        e.generator = codec;
        e.seed = input_seed;
        e.parent = input.path;
        if (codec == "gzip") e.params["level"] = policy.gzip_level;
        else e.params["level"] = 9;
        write_file(root / e.path, packed);
        out.push_back(std::move(e));
      }
      if (policy.slices_per_file == 0) continue;
      const auto bits = BitString::from_bytes(packed);
      const auto bounds = slice_bounds(packed.size(), policy);
      for (unsigned s = 0; s < policy.slices_per_file; ++s) {
        const std::uint64_t slice_seed = derive_seed(input_seed, c * 1000 + s);
        const auto slice = random_slice(bits, slice_seed, bounds.min_bytes, bounds.max_bytes);
        ManifestEntry e;
        e.path = base + ".slice" + std::to_string(s);
        e.group = GroupLabel::Compressed;
        e.size_bytes = slice.size() / 8;
        e.generator = "slice";
        e.seed = slice_seed;
        e.parent = input.path;
        e.params["codec"] = codec;
        e.params["level"] = codec == "gzip" ? policy.gzip_level : 9;
        e.params["min_bytes"] = bounds.min_bytes;
        e.params["max_bytes"] = bounds.max_bytes;
        e.params["offset"] = slice.origin()->byte_offset;
        e.params["length"] = slice.origin()->byte_length;
        write_file(root / e.path, slice.to_bytes());
        out.push_back(std::move(e));
      }
    }
  });

  std::vector<ManifestEntry> entries;
  for (auto& group : per_input) {
    std::move(group.begin(), group.end(), std::back_inserter(entries));
  }
  return entries;
}

CorpusManifest generate_corpus(const fs::path& root, const CorpusSpec& spec) {
  fs::create_directories(root);
  CorpusManifest manifest;
  manifest.corpus_seed = spec.seed;
  auto append = [&](std::vector<ManifestEntry> part) {
    std::move(part.begin(), part.end(), std::back_inserter(manifest.entries));
  };

  if (spec.random_count > 0) {
    append(gen_random(root, spec.random_count, spec.random_sizes, derive_seed(spec.seed, 0x52),
                      spec.workers, spec.os_random));
  }

  std::vector<ManifestEntry> structured;
  if (spec.structured_count > 0) {
    if (spec.templates.empty()) throw ArgumentError("corpus: no structured templates selected");
    const auto n_templates = static_cast<unsigned>(spec.templates.size());
    for (unsigned t = 0; t < n_templates; ++t) {
      const unsigned count = spec.structured_count / n_templates +
                             (t < spec.structured_count % n_templates ? 1 : 0);
      if (count == 0) continue;
      auto part = gen_structured(root, count, spec.structured_sizes,
                                 derive_seed(spec.seed, 0x100 + t), spec.templates[t],
                                 spec.workers);
      std::move(part.begin(), part.end(), std::back_inserter(structured));
    }
  }
  if (spec.compressed && !structured.empty()) {
    auto compressed =
        gen_compressed(root, structured, derive_seed(spec.seed, 0x43), spec.slices, spec.workers);
    append(std::move(structured));
    append(std::move(compressed));
  } else {
    append(std::move(structured));
  }

  for (auto& e : manifest.entries) e.params["corpus_seed"] = spec.seed;
  manifest.save(root / "manifest.jsonl");
  return manifest;
}

// ---------------------------------------------------------------------------
// Verification

namespace {

VerifyResult verify_entry(const ManifestEntry& e, const fs::path& root) {
  VerifyResult r{e.path, VerifyStatus::Fail, {}};
  const auto file = root / e.path;
  std::error_code ec;
  if (!fs::is_regular_file(file, ec)) {
    r.message = "missing file";
    return r;
  }
  const auto actual = read_file_bytes(file);
  if (actual.size() != e.size_bytes) {
    r.message = "size " + std::to_string(actual.size()) + " != manifest " +
                std::to_string(e.size_bytes);
    return r;
  }

  auto read_parent = [&]() {
    if (!e.parent) throw ArgumentError("entry has no parent");
    const auto parent_file = root / *e.parent;
    if (!fs::is_regular_file(parent_file, ec)) throw IoError("parent " + *e.parent + " missing");
    return read_file_bytes(parent_file);
  };

  std::vector<std::uint8_t> expected;
  try {
    if (e.generator == "chacha20") {
      expected = random_bytes(e.seed, e.params.at("size_bytes").get<std::uint64_t>());
    } else if (e.generator == "structured") {
      const auto text =
          structured_text(parse_template(e.params.at("template").get<std::string>()), e.seed,
                          e.params.at("target_bytes").get<std::uint64_t>());
      expected.assign(text.begin(), text.end());
    } else if (e.generator == "gzip" || e.generator == "bzip2") {
      if (e.generator == "bzip2" && !bzip2_available()) {
        r.status = VerifyStatus::Unverifiable;
        r.message = "bzip2 executable not available";
        return r;
      }
      expected = compress_with(e.generator, read_parent(), e.params.value("level", 9));
    } else if (e.generator == "slice") {
      const auto codec = e.params.at("codec").get<std::string>();
      if (codec == "bzip2" && !bzip2_available()) {
        r.status = VerifyStatus::Unverifiable;
        r.message = "bzip2 executable not available";
        return r;
      }
      const auto packed = compress_with(codec, read_parent(), e.params.value("level", 9));
      const auto slice = random_slice(BitString::from_bytes(packed), e.seed,
                                      e.params.at("min_bytes").get<std::size_t>(),
                                      e.params.at("max_bytes").get<std::size_t>());
      if (slice.origin()->byte_offset != e.params.at("offset").get<std::uint64_t>() ||
          slice.origin()->byte_length != e.params.at("length").get<std::uint64_t>()) {
        r.message = "slice offset/length differ from manifest";
        return r;
      }
      expected = slice.to_bytes();
    } else if (e.generator == "os-random") {
      r.status = VerifyStatus::Unverifiable;
      r.message = "operating-system randomness cannot be regenerated";
      return r;
    } else {
      r.status = VerifyStatus::Unverifiable;
      r.message = "unknown generator '" + e.generator + "'";
      return r;
    }
  } catch (const nlohmann::json::exception& ex) {
    r.message = std::string("bad params: ") + ex.what();
    return r;
  } catch (const Error& ex) {
    r.message = ex.what();
    return r;
  }

  if (expected != actual) {
    r.message = "content differs from regenerated bytes";
    return r;
  }
  r.status = VerifyStatus::Pass;
  return r;
}

}  // namespace

VerifyReport verify(const CorpusManifest& manifest, const fs::path& root, unsigned workers) {
  VerifyReport report;
  report.results.resize(manifest.entries.size());
  parallel_for(manifest.entries.size(), workers, [&](std::size_t i) {
    report.results[i] = verify_entry(manifest.entries[i], root);
  });
  return report;
}

bool VerifyReport::all_passed() const {
  return std::all_of(results.begin(), results.end(),
                     [](const VerifyResult& r) { return r.status == VerifyStatus::Pass; });
}

std::size_t VerifyReport::count(VerifyStatus s) const {
  return static_cast<std::size_t>(std::count_if(
      results.begin(), results.end(), [s](const VerifyResult& r) { return r.status == s; }));
}

}  // namespace bitspectra
