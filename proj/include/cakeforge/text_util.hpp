#pragma once

#include <string>
#include <string_view>
#include <vector>

// Small ASCII-oriented string helpers shared across modules.
namespace cake::text {

std::string trim(std::string_view s);
std::string to_lower(std::string_view s);
bool iequals(std::string_view a, std::string_view b);
bool istarts_with(std::string_view s, std::string_view prefix);
// Trim, lowercase and collapse internal whitespace; used as the identity key
// when comparing option texts.
std::string normalize_key(std::string_view s);
std::string collapse_whitespace(std::string_view s);
std::vector<std::string> split_ws(std::string_view s);
std::string join(const std::vector<std::string>& parts, std::string_view sep);
std::string read_file(const std::string& path);
void write_file(const std::string& path, std::string_view content);

}  // namespace cake::text
