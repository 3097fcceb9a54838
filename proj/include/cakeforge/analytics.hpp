#pragma once

#include <cstddef>
#include <set>
#include <string>
#include <unordered_set>
#include <vector>

namespace cake {

// Lowercases, splits on (Unicode) whitespace and strips leading/trailing
// punctuation per token. Internal apostrophes survive: "don't" is one token.
std::vector<std::string> tokenize(std::string_view text);

struct LengthCdfPoint {
  std::size_t length;
  double cumulative_fraction;
  friend bool operator==(const LengthCdfPoint&, const LengthCdfPoint&) = default;
};

struct LengthCdf {
  std::vector<LengthCdfPoint> points;  // strictly increasing lengths
};

// Token-count CDF over distinct answer lengths. Throws on empty input.
LengthCdf length_cdf(const std::vector<std::string>& answers);

struct WordCount {
  std::string word;
  std::size_t count;
  friend bool operator==(const WordCount&, const WordCount&) = default;
};

using StopwordSet = std::unordered_set<std::string>;

// Packaged English function-word list.
const StopwordSet& default_stopwords();

inline constexpr std::size_t kDefaultTopGenerated = 9;
inline constexpr std::size_t kDefaultTopCaption = 15;

// Count descending, ties lexicographic. k must be >= 1.
std::vector<WordCount> top_words(const std::vector<std::string>& texts, std::size_t k,
                                 const StopwordSet& stopwords = default_stopwords());

struct OverlapReport {
  std::vector<WordCount> generated_top;
  std::vector<WordCount> caption_top;
  std::set<std::string> overlap;
  double overlap_fraction = 0.0;  // |overlap| / k_gen
};

OverlapReport overlap_report(const std::vector<std::string>& answers, const std::vector<std::string>& captions,
                             std::size_t k_gen = kDefaultTopGenerated, std::size_t k_cap = kDefaultTopCaption,
                             const StopwordSet& stopwords = default_stopwords());

// CSV renderings for external plotting.
std::string length_cdf_csv(const LengthCdf& cdf);
std::string top_words_csv(const OverlapReport& report);

}  // namespace cake
