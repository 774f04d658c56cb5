#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include "bitspectra/corpus.hpp"
#include "bitspectra/errors.hpp"
#include "bitspectra/metrics.hpp"

namespace bitspectra {
namespace {

namespace fs = std::filesystem;

class CorpusTest : public ::testing::Test {
 protected:
  void SetUp() override {
    root_ = fs::temp_directory_path() /
            ("bitspectra_corpus_" + std::string(::testing::UnitTest::GetInstance()
                                                    ->current_test_info()
                                                    ->name()));
    fs::remove_all(root_);
    fs::create_directories(root_);
  }
  void TearDown() override { fs::remove_all(root_); }

  std::vector<std::uint8_t> bytes(const std::string& rel) const {
    return read_file_bytes(root_ / rel);
  }

  fs::path root_;
};

TEST(RandomBytes, Deterministic) {
  EXPECT_EQ(random_bytes(7, 100), random_bytes(7, 100));
  EXPECT_NE(random_bytes(7, 100), random_bytes(8, 100));
  // A prefix of a longer stream is the shorter stream.
  const auto longer = random_bytes(7, 200);
  const auto shorter = random_bytes(7, 100);
  EXPECT_TRUE(std::equal(shorter.begin(), shorter.end(), longer.begin()));
}

TEST_F(CorpusTest, GenRandomDeterministic) {
  const auto a = gen_random(root_ / "a", 1, {16, 16}, 7);
  const auto b = gen_random(root_ / "b", 1, {16, 16}, 7);
  ASSERT_EQ(a.size(), 1U);
  EXPECT_EQ(read_file_bytes(root_ / "a" / a[0].path), read_file_bytes(root_ / "b" / b[0].path));
  EXPECT_EQ(a[0].size_bytes, 16U);
  EXPECT_EQ(a[0].group, GroupLabel::Random);
}

TEST_F(CorpusTest, GenRandomEntropyAndSizes) {
  const auto entries = gen_random(root_, 8, {1 << 16, 1 << 18}, 3);
  for (const auto& e : entries) {
    EXPECT_GE(e.size_bytes, 1U << 16);
    EXPECT_LE(e.size_bytes, 1U << 18);
    const auto data = bytes(e.path);
    EXPECT_EQ(data.size(), e.size_bytes);
    EXPECT_GE(shannon_entropy_bytes(data), 7.9) << e.path;
  }
  EXPECT_THROW(gen_random(root_, 0, {1, 2}, 1), ArgumentError);
  EXPECT_THROW(gen_random(root_, 1, {5, 2}, 1), ArgumentError);
}

TEST(StructuredText, TabularSingleRow) {
  const auto text = structured_text(Template::Tabular, 1, 1);
  const auto newline = text.find('\n');
  ASSERT_NE(newline, std::string::npos);
  EXPECT_EQ(text.substr(0, newline), "id,customer,region,product,quantity,unit_price,order_date");
  const auto row = text.substr(newline + 1);
  EXPECT_EQ(std::count(row.begin(), row.end(), '\n'), 1);
  EXPECT_EQ(row.back(), '\n');
  EXPECT_EQ(row.rfind("1,", 0), 0U);
  EXPECT_EQ(std::count(row.begin(), row.end(), ','), 6);
}

TEST(StructuredText, IncrementingKeys) {
  const auto text = structured_text(Template::Tabular, 2, 2000);
  EXPECT_NE(text.find("\n2,"), std::string::npos);
  EXPECT_NE(text.find("\n3,"), std::string::npos);
  EXPECT_GE(text.size(), 2000U);
}

TEST(StructuredText, LowEntropyTemplates) {
  for (auto t : {Template::Tabular, Template::Prose, Template::Records}) {
    const auto text = structured_text(t, 9, 1 << 16);
    const auto* p = reinterpret_cast<const std::uint8_t*>(text.data());
    const double h = shannon_entropy_bytes(std::span(p, text.size()));
    EXPECT_LT(h, 7.0) << to_string(t);
    if (t == Template::Records) EXPECT_LT(h, 6.0);
  }
  EXPECT_EQ(structured_text(Template::Prose, 4, 5000), structured_text(Template::Prose, 4, 5000));
}

TEST(StructuredText, RecordsAreFixedWidth) {
  const auto text = structured_text(Template::Records, 5, 5000);
  std::size_t start = 0;
  while (start < text.size()) {
    const auto end = text.find('\n', start);
    ASSERT_NE(end, std::string::npos);
    EXPECT_EQ(end - start, 10U + 24U + 16U + 12U + 1U + 8U);
    start = end + 1;
  }
}

TEST(Compression, RepetitiveInputShrinks) {
  std::string text;
  while (text.size() < (1U << 20)) text += "00042,alpha,widget,north,17,12.50,2009-03-14\n";
  const auto* p = reinterpret_cast<const std::uint8_t*>(text.data());
  const auto gz = gzip_compress(std::span(p, text.size()));
  EXPECT_LT(gz.size(), text.size() / 10);
  ASSERT_GE(gz.size(), 10U);
  EXPECT_EQ(gz[0], 0x1f);
  EXPECT_EQ(gz[1], 0x8b);
  EXPECT_EQ(gz[4] | gz[5] | gz[6] | gz[7], 0);  // mtime
  EXPECT_EQ(gzip_compress(std::span(p, text.size())), gz);
  if (bzip2_available()) {
    const auto bz = bzip2_compress(std::span(p, text.size()));
    EXPECT_LT(bz.size(), text.size() / 10);
    EXPECT_EQ(bz[0], 'B');
    EXPECT_EQ(bz[1], 'Z');
    EXPECT_EQ(bz[2], 'h');
  }
}

TEST_F(CorpusTest, GenCompressedWholeAndSlices) {
  const auto inputs = gen_structured(root_, 2, {20000, 40000}, 11, Template::Prose);
  const auto a = gen_compressed(root_, inputs, 5);
  const std::size_t codecs = bzip2_available() ? 2 : 1;
  ASSERT_EQ(a.size(), inputs.size() * codecs * 2);
  for (const auto& e : a) {
    EXPECT_EQ(e.group, GroupLabel::Compressed);
    ASSERT_TRUE(e.parent.has_value());
    EXPECT_EQ(bytes(e.path).size(), e.size_bytes);
    if (e.generator == "slice") {
      const auto len = e.params["length"].get<std::uint64_t>();
      EXPECT_GE(len, e.params["min_bytes"].get<std::uint64_t>());
      EXPECT_LE(len, e.params["max_bytes"].get<std::uint64_t>());
    }
  }
  const auto b = gen_compressed(root_, inputs, 5);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_EQ(a[i].to_json(), b[i].to_json());
}

TEST_F(CorpusTest, GenCompressedNeedsACodec) {
  const auto inputs = gen_structured(root_, 1, {100, 100}, 1, Template::Tabular);
  SlicePolicy none;
  none.gzip = false;
  none.bzip2 = false;
  EXPECT_THROW(gen_compressed(root_, inputs, 1, none), EnvironmentError);
  EXPECT_THROW(gen_compressed(root_, {}, 1), ArgumentError);
}

CorpusSpec small_spec() {
  CorpusSpec spec;
  spec.seed = 42;
  spec.random_count = 3;
  spec.random_sizes = {100, 5000};
  spec.structured_count = 3;
  spec.structured_sizes = {100, 5000};
  return spec;
}

TEST_F(CorpusTest, ManifestRoundTrip) {
  const auto m = generate_corpus(root_, small_spec());
  const auto loaded = CorpusManifest::load(root_ / "manifest.jsonl");
  EXPECT_EQ(loaded.corpus_seed, 42U);
  EXPECT_EQ(loaded.to_jsonl(), m.to_jsonl());
  const auto first_line = m.to_jsonl().substr(0, m.to_jsonl().find('\n'));
  const auto j = nlohmann::ordered_json::parse(first_line);
  std::vector<std::string> keys;
  for (const auto& [k, v] : j.items()) keys.push_back(k);
  EXPECT_EQ(keys, (std::vector<std::string>{"path", "group", "size_bytes", "generator", "seed",
                                             "parent", "params"}));
  EXPECT_THROW(CorpusManifest::from_jsonl("{\"path\": 1}\n"), ArgumentError);
  EXPECT_THROW(CorpusManifest::from_jsonl("{oops\n"), ArgumentError);
}

TEST_F(CorpusTest, RegenerationIsBitExactAndWorkerIndependent) {
  auto spec = small_spec();
  const auto a = generate_corpus(root_ / "a", spec);
  spec.workers = 4;
  const auto b = generate_corpus(root_ / "b", spec);
  EXPECT_EQ(a.to_jsonl(), b.to_jsonl());
  for (const auto& e : a.entries) {
    EXPECT_EQ(read_file_bytes(root_ / "a" / e.path), read_file_bytes(root_ / "b" / e.path))
        << e.path;
  }
}

TEST_F(CorpusTest, VerifyDetectsTampering) {
  const auto m = generate_corpus(root_, small_spec());
  const auto clean = verify(m, root_);
  EXPECT_TRUE(clean.all_passed());
  EXPECT_EQ(clean.count(VerifyStatus::Pass), m.entries.size());

  const auto victim = m.entries[1].path;
  const auto size = fs::file_size(root_ / victim);
  fs::resize_file(root_ / victim, size - 1);
  const auto report = verify(m, root_, 3);
  EXPECT_EQ(report.count(VerifyStatus::Fail), 1U);
  for (const auto& r : report.results) {
    EXPECT_EQ(r.status == VerifyStatus::Fail, r.path == victim) << r.path;
  }
}

TEST_F(CorpusTest, VerifyContentChangeSameSize) {
  const auto m = generate_corpus(root_, small_spec());
  const auto victim = m.entries.back().path;
  {
    std::fstream f(root_ / victim, std::ios::binary | std::ios::in | std::ios::out);
    f.seekp(0);
    f.put('\x7f');
  }
  const auto report = verify(m, root_);
  EXPECT_EQ(report.count(VerifyStatus::Fail), 1U);
  EXPECT_EQ(report.results.back().status, VerifyStatus::Fail);
}

TEST_F(CorpusTest, VerifyMissingAndUnknown) {
  auto m = generate_corpus(root_, small_spec());
  m.entries[0].generator = "mystery";
  fs::remove(root_ / m.entries[2].path);
  const auto report = verify(m, root_);
  EXPECT_EQ(report.results[0].status, VerifyStatus::Unverifiable);
  EXPECT_EQ(report.results[2].status, VerifyStatus::Fail);
  EXPECT_EQ(report.results[2].message, "missing file");
  EXPECT_FALSE(report.all_passed());
}

TEST_F(CorpusTest, OsRandomIsUnverifiable) {
  auto spec = small_spec();
  spec.os_random = true;
  spec.structured_count = 0;
  const auto m = generate_corpus(root_, spec);
  const auto report = verify(m, root_);
  EXPECT_EQ(report.count(VerifyStatus::Unverifiable), 3U);
}

TEST(Templates, Names) {
  for (auto t : {Template::Tabular, Template::Prose, Template::Records}) {
    EXPECT_EQ(parse_template(to_string(t)), t);
  }
  EXPECT_THROW(parse_template("xls"), ArgumentError);
}

}  // namespace
}  // namespace bitspectra
