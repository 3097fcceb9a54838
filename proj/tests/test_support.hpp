#pragma once

#include <filesystem>
#include <map>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "cakeforge/rng.hpp"

using cake::Rng;

namespace test_support {

// Fresh scratch directory under the system temp dir.
inline std::filesystem::path scratch_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("cakeforge_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

inline double choose2(double n) { return n * (n - 1.0) / 2.0; }

// Adjusted Rand index from the contingency table (Hubert & Arabie).
inline double adjusted_rand_index(const std::vector<std::size_t>& a, const std::vector<std::size_t>& b) {
  std::map<std::pair<std::size_t, std::size_t>, double> table;
  std::map<std::size_t, double> ra, rb;
  for (std::size_t i = 0; i < a.size(); ++i) {
    table[{a[i], b[i]}] += 1;
    ra[a[i]] += 1;
    rb[b[i]] += 1;
  }
  double index = 0, sa = 0, sb = 0;
  for (auto& [_, n] : table) index += choose2(n);
  for (auto& [_, n] : ra) sa += choose2(n);
  for (auto& [_, n] : rb) sb += choose2(n);
  const double total = choose2(static_cast<double>(a.size()));
  const double expected = sa * sb / total;
  const double max_index = 0.5 * (sa + sb);
  if (max_index == expected) return 1.0;
  return (index - expected) / (max_index - expected);
}

// Random printable text with commas, quotes, newlines and UTF-8 mixed in.
inline std::string random_text(Rng& rng, std::size_t max_len = 24) {
  static const std::vector<std::string> alphabet = {
      "a", "b", "c", "x", "y", "z", " ", " ", ",", "\"", "'", "\n", "?", "!", "\xC3\xA9", "\xE2\x80\x9C", "0", "9", "#"};
  std::string s = "t";  // never empty
  const std::size_t n = rng.uniform_index(max_len);
  for (std::size_t i = 0; i < n; ++i) s += alphabet[rng.uniform_index(alphabet.size())];
  return s;
}

}  // namespace test_support
