#include "cakeforge/analytics.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <map>
#include <string_view>
#include <unordered_map>

#include "cakeforge/error.hpp"

namespace cake {

namespace {

// Multi-byte UTF-8 whitespace code points (NBSP, en/em spaces, line and
// paragraph separators, ideographic space, ...).
constexpr std::string_view kUnicodeSpaces[] = {
    "\xC2\x85",     "\xC2\xA0",     "\xE1\x9A\x80", "\xE2\x80\x80", "\xE2\x80\x81", "\xE2\x80\x82",
    "\xE2\x80\x83", "\xE2\x80\x84", "\xE2\x80\x85", "\xE2\x80\x86", "\xE2\x80\x87", "\xE2\x80\x88",
    "\xE2\x80\x89", "\xE2\x80\x8A", "\xE2\x80\xA8", "\xE2\x80\xA9", "\xE2\x80\xAF", "\xE2\x81\x9F",
    "\xE3\x80\x80"};

// Common multi-byte punctuation stripped at token edges: curly quotes,
// dashes, ellipsis, guillemets, inverted marks.
constexpr std::string_view kUnicodePunct[] = {
    "\xE2\x80\x98", "\xE2\x80\x99", "\xE2\x80\x9C", "\xE2\x80\x9D", "\xE2\x80\x93", "\xE2\x80\x94",
    "\xE2\x80\xA6", "\xC2\xAB",     "\xC2\xBB",     "\xC2\xBF",     "\xC2\xA1"};

std::size_t space_len(std::string_view s, std::size_t i) {
  const auto c = static_cast<unsigned char>(s[i]);
  if (c < 0x80) return std::isspace(c) ? 1 : 0;
  for (auto sp : kUnicodeSpaces)
    if (s.substr(i, sp.size()) == sp) return sp.size();
  return 0;
}

void strip_edges(std::string_view& tok) {
  bool changed = true;
  while (changed && !tok.empty()) {
    changed = false;
    if (std::ispunct(static_cast<unsigned char>(tok.front()))) {
      tok.remove_prefix(1);
      changed = true;
      continue;
    }
    if (std::ispunct(static_cast<unsigned char>(tok.back()))) {
      tok.remove_suffix(1);
      changed = true;
      continue;
    }
    for (auto p : kUnicodePunct) {
      if (tok.starts_with(p)) {
        tok.remove_prefix(p.size());
        changed = true;
        break;
      }
      if (tok.ends_with(p)) {
        tok.remove_suffix(p.size());
        changed = true;
        break;
      }
    }
  }
}

}  // namespace

std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> out;
  std::size_t i = 0, start = 0;
  auto flush = [&](std::size_t end) {
    std::string_view tok = text.substr(start, end - start);
    strip_edges(tok);
    if (tok.empty()) return;
    std::string t(tok);
    for (char& c : t) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    out.push_back(std::move(t));
  };
  while (i < text.size()) {
    if (const auto n = space_len(text, i)) {
      flush(i);
      i += n;
      start = i;
    } else {
      ++i;
    }
  }
  flush(text.size());
  return out;
}

LengthCdf length_cdf(const std::vector<std::string>& answers) {
  if (answers.empty()) throw Error(ErrorKind::InvalidInput, "length_cdf needs at least one answer");
  std::map<std::size_t, std::size_t> histogram;
  for (const auto& a : answers) ++histogram[tokenize(a).size()];
  LengthCdf cdf;
  std::size_t running = 0;
  const auto total = static_cast<double>(answers.size());
  for (const auto& [len, count] : histogram) {
    running += count;
    cdf.points.push_back({len, static_cast<double>(running) / total});
  }
  return cdf;
}

const StopwordSet& default_stopwords() {
  static const StopwordSet words = {
      "a",     "an",    "the",   "and",  "or",    "but",   "if",    "of",    "to",    "in",
      "on",    "at",    "by",    "for",  "with",  "from",  "into",  "onto",  "up",    "down",
      "out",   "over",  "under", "about", "as",   "is",    "are",   "was",   "were",  "be",
      "been",  "being", "am",    "do",   "does",  "did",   "have",  "has",   "had",   "it",
      "its",   "this",  "that",  "these", "those", "there", "their", "they",  "them", "he",
      "she",   "his",   "her",   "him",  "we",    "our",   "you",   "your",  "so",    "than",
      "then",  "some",  "any",   "not",  "no",    "can",   "will",  "would", "could", "should",
      "while", "who",   "what",  "which", "when", "where", "why",   "how",   "all",   "each",
      "other", "very",  "just", "also",  "too",   "s"};
  return words;
}

std::vector<WordCount> top_words(const std::vector<std::string>& texts, std::size_t k,
                                 const StopwordSet& stopwords) {
  if (k == 0) throw Error(ErrorKind::InvalidInput, "top_words needs k >= 1");
  std::unordered_map<std::string, std::size_t> counts;
  for (const auto& t : texts)
    for (auto& tok : tokenize(t))
      if (!stopwords.contains(tok)) ++counts[tok];
  std::vector<WordCount> ranked;
  ranked.reserve(counts.size());
  for (auto& [w, c] : counts) ranked.push_back({w, c});
  std::sort(ranked.begin(), ranked.end(), [](const WordCount& a, const WordCount& b) {
    return a.count != b.count ? a.count > b.count : a.word < b.word;
  });
  if (ranked.size() > k) ranked.resize(k);
  return ranked;
}

OverlapReport overlap_report(const std::vector<std::string>& answers, const std::vector<std::string>& captions,
                             std::size_t k_gen, std::size_t k_cap, const StopwordSet& stopwords) {
  if (answers.empty() || captions.empty())
    throw Error(ErrorKind::InvalidInput, "overlap_report needs non-empty answer and caption corpora");
  OverlapReport r;
  r.generated_top = top_words(answers, k_gen, stopwords);
  r.caption_top = top_words(captions, k_cap, stopwords);
  std::set<std::string> cap;
  for (const auto& wc : r.caption_top) cap.insert(wc.word);
  for (const auto& wc : r.generated_top)
    if (cap.contains(wc.word)) r.overlap.insert(wc.word);
  r.overlap_fraction = static_cast<double>(r.overlap.size()) / static_cast<double>(k_gen);
  return r;
}

std::string length_cdf_csv(const LengthCdf& cdf) {
  std::string out = "length,cumulative_fraction\n";
  char buf[64];
  for (const auto& p : cdf.points) {
    std::snprintf(buf, sizeof buf, "%zu,%.17g\n", p.length, p.cumulative_fraction);
    out += buf;
  }
  return out;
}

std::string top_words_csv(const OverlapReport& report) {
  // Words never contain whitespace; quote only when a comma or quote slipped in.
  auto field = [](const std::string& w) {
    if (w.find_first_of(",\"") == std::string::npos) return w;
    std::string q = "\"";
    for (char c : w) {
      if (c == '"') q += '"';
      q += c;
    }
    return q + "\"";
  };
  std::string out = "word,count,corpus\n";
  for (const auto& wc : report.generated_top)
    out += field(wc.word) + "," + std::to_string(wc.count) + ",generated\n";
  for (const auto& wc : report.caption_top)
    out += field(wc.word) + "," + std::to_string(wc.count) + ",caption\n";
  return out;
}

}  // namespace cake
