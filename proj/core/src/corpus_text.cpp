#include <array>
#include <cstdio>
#include <string>
#include <string_view>

#include "bitspectra/corpus.hpp"
#include "bitspectra/rng.hpp"

namespace bitspectra {
namespace {

constexpr std::array<std::string_view, 120> kWords = {
    "the",    "of",     "and",    "to",     "in",     "is",     "was",    "that",   "for",
    "it",     "with",   "as",     "his",    "on",     "be",     "at",     "by",     "had",
    "this",   "not",    "are",    "but",    "from",   "or",     "have",   "an",     "they",
    "which",  "one",    "you",    "were",   "her",    "all",    "she",    "there",  "would",
    "their",  "we",     "him",    "been",   "has",    "when",   "who",    "will",   "more",
    "no",     "if",     "out",    "so",     "said",   "what",   "up",     "its",    "about",
    "into",   "than",   "them",   "can",    "only",   "other",  "new",    "some",   "could",
    "time",   "these",  "two",    "may",    "then",   "do",     "first",  "any",    "my",
    "now",    "such",   "like",   "our",    "over",   "man",    "me",     "even",   "most",
    "made",   "after",  "also",   "did",    "many",   "before", "must",   "through", "back",
    "years",  "where",  "much",   "your",   "way",    "well",   "down",   "should", "because",
    "each",   "just",   "those",  "people", "how",    "too",    "little", "state",  "good",
    "very",   "make",   "world",  "still",  "own",    "see",    "men",    "work",   "long",
    "get",    "here",   "between"};

constexpr std::array<std::string_view, 24> kNames = {
    "Abbott",  "Baker",   "Chen",    "Dubois",   "Eriksen", "Fischer", "Garcia", "Hughes",
    "Ivanova", "Jensen",  "Kowalski", "Larsen",  "Moreau",  "Nakamura", "Olsen", "Patel",
    "Quinn",   "Rossi",   "Schmidt", "Tanaka",   "Umarov",  "Varga",   "Weber",  "Young"};

constexpr std::array<std::string_view, 6> kRegions = {"north", "south", "east",
                                                      "west",  "central", "export"};

constexpr std::array<std::string_view, 12> kProducts = {
    "widget",  "gadget",  "bracket", "spindle", "gasket", "bearing",
    "coupler", "flange",  "rotor",   "sensor",  "valve",  "housing"};

constexpr std::array<std::string_view, 10> kCities = {
    "Springfield", "Riverside", "Fairview", "Franklin", "Greenville",
    "Bristol",     "Clinton",   "Georgetown", "Salem",  "Madison"};

template <std::size_t N>
std::string_view pick(Rng& rng, const std::array<std::string_view, N>& list) {
  return list[rng.uniform(0, N - 1)];
}

// Low indices are much more likely, roughly like word frequencies in text.
std::string_view pick_skewed(Rng& rng) {
  const double u = rng.unit();
  return kWords[static_cast<std::size_t>(u * u * static_cast<double>(kWords.size()))];
}

std::string date_string(Rng& rng, bool dashes) {
  const auto year = 2000 + rng.uniform(0, 15);
  const auto month = rng.uniform(1, 12);
  const auto day = rng.uniform(1, 28);
  char buf[16];
  std::snprintf(buf, sizeof buf, dashes ? "%04llu-%02llu-%02llu" : "%04llu%02llu%02llu",
                static_cast<unsigned long long>(year), static_cast<unsigned long long>(month),
                static_cast<unsigned long long>(day));
  return buf;
}

void tabular_row(Rng& rng, std::uint64_t key, std::string& out) {
  // Draws are sequenced explicitly; argument evaluation order is unspecified.
  const auto name = pick(rng, kNames);
  const auto region = pick(rng, kRegions);
  const auto product = pick(rng, kProducts);
  const auto quantity = rng.uniform(1, 500);
  const auto cents = rng.uniform(100, 99999);
  const auto date = date_string(rng, true);
  char buf[160];
  std::snprintf(buf, sizeof buf, "%llu,%s,%s,%s,%llu,%llu.%02llu,%s\n",
                static_cast<unsigned long long>(key), name.data(), region.data(), product.data(),
                static_cast<unsigned long long>(quantity),
                static_cast<unsigned long long>(cents / 100),
                static_cast<unsigned long long>(cents % 100), date.c_str());
  out += buf;
}

void prose_paragraph(Rng& rng, std::string& out) {
  const auto sentences = rng.uniform(3, 7);
  for (std::uint64_t s = 0; s < sentences; ++s) {
    const auto words = rng.uniform(5, 17);
    for (std::uint64_t w = 0; w < words; ++w) {
      std::string word(pick_skewed(rng));
      if (w == 0) word[0] = static_cast<char>(word[0] - 'a' + 'A');
      out += word;
      if (w + 1 < words) out += (rng.uniform(0, 11) == 0) ? ", " : " ";
    }
    out += s + 1 < sentences ? ". " : ".\n\n";
  }
}

void fixed_record(Rng& rng, std::uint64_t key, std::string& out) {
  const auto name = pick(rng, kNames);
  const auto city = pick(rng, kCities);
  const auto amount = rng.uniform(0, 250000);
  const char status = "AOPC"[rng.uniform(0, 3)];
  const auto date = date_string(rng, false);
  char buf[128];
  std::snprintf(buf, sizeof buf, "%010llu%-24s%-16s%012llu%c%s\n",
                static_cast<unsigned long long>(key), name.data(), city.data(),
                static_cast<unsigned long long>(amount), status, date.c_str());
  out += buf;
}

}  // namespace

std::string structured_text(Template t, std::uint64_t seed, std::size_t target_bytes) {
  Rng rng(seed);
  std::string out;
  out.reserve(target_bytes + 256);
  switch (t) {
    case Template::Tabular: {
      out = "id,customer,region,product,quantity,unit_price,order_date\n";
      std::uint64_t key = 1;
      do {
        tabular_row(rng, key++, out);
      } while (out.size() < target_bytes);
      break;
    }
    case Template::Prose:
      do {
        prose_paragraph(rng, out);
      } while (out.size() < target_bytes);
      break;
    case Template::Records: {
      std::uint64_t key = 1;
      do {
        fixed_record(rng, key++, out);
      } while (out.size() < target_bytes);
      break;
    }
  }
  return out;
}

}  // namespace bitspectra
