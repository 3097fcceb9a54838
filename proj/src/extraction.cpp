#include "cakeforge/extraction.hpp"

#include <algorithm>
#include <cctype>
#include <nlohmann/json.hpp>
#include <set>
#include <sstream>

#include "cakeforge/analytics.hpp"
#include "cakeforge/error.hpp"
#include "cakeforge/text_util.hpp"

namespace cake {

namespace {

// Returns the length of a leading enumeration marker ("12. ", "3) ", "- ",
// "• "), or 0.
std::size_t enumeration_marker(std::string_view s) {
  static constexpr std::string_view kBullet = "\xE2\x80\xA2";
  std::size_t i = 0;
  while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
  if (i > 0) {
    if (i < s.size() && (s[i] == '.' || s[i] == ')')) ++i;
    else return 0;
  } else if (s.starts_with('-')) {
    i = 1;
  } else if (s.starts_with(kBullet)) {
    i = kBullet.size();
  } else {
    return 0;
  }
  if (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) return i + 1;
  return 0;
}

std::string strip_quotes(std::string s) {
  static constexpr std::string_view kPairs[][2] = {
      {"\"", "\""}, {"'", "'"}, {"\xE2\x80\x9C", "\xE2\x80\x9D"}, {"\xE2\x80\x98", "\xE2\x80\x99"}};
  bool changed = true;
  while (changed) {
    changed = false;
    for (const auto& p : kPairs) {
      if (s.size() >= p[0].size() + p[1].size() && s.starts_with(p[0]) && s.ends_with(p[1])) {
        s = text::trim(s.substr(p[0].size(), s.size() - p[0].size() - p[1].size()));
        changed = true;
      }
    }
  }
  return s;
}

}  // namespace

std::string clean_response(std::string_view raw) {
  std::string s = text::trim(raw);
  if (const auto nl = s.find_first_of("\r\n"); nl != std::string::npos) s = text::trim(s.substr(0, nl));
  if (text::istarts_with(s, "output:")) s = text::trim(s.substr(7));
  if (const auto n = enumeration_marker(s)) s = text::trim(s.substr(n));
  s = strip_quotes(std::move(s));
  return text::collapse_whitespace(s);
}

IntentionCandidate make_candidate(std::string text, std::string provider, std::size_t choice_index) {
  IntentionCandidate c;
  c.token_count = tokenize(text).size();
  c.text = std::move(text);
  c.source_provider = std::move(provider);
  c.choice_index = choice_index;
  return c;
}

namespace {

bool is_token_prefix(const std::vector<std::string>& part, const std::vector<std::string>& whole, bool suffix) {
  if (part.empty() || part.size() > whole.size()) return false;
  const std::size_t off = suffix ? whole.size() - part.size() : 0;
  return std::equal(part.begin(), part.end(), whole.begin() + static_cast<std::ptrdiff_t>(off));
}

double jaccard(const std::vector<std::string>& a, const std::vector<std::string>& b) {
  std::set<std::string> sa(a.begin(), a.end()), sb(b.begin(), b.end());
  if (sa.empty() && sb.empty()) return 1.0;
  std::size_t inter = 0;
  for (const auto& w : sa) inter += sb.count(w);
  return static_cast<double>(inter) / static_cast<double>(sa.size() + sb.size() - inter);
}

}  // namespace

std::vector<IntentionCandidate> filter_degenerate(const std::vector<IntentionCandidate>& candidates,
                                                  std::string_view caption, const FilterConfig& cfg) {
  const auto cap_tokens = tokenize(caption);
  const auto cap_key = text::normalize_key(caption);
  std::vector<IntentionCandidate> kept;
  std::set<std::string> seen;
  for (const auto& c : candidates) {
    if (text::trim(c.text).empty()) continue;
    const auto tokens = tokenize(c.text);
    if (tokens.empty()) continue;
    // copy errors
    if (text::normalize_key(c.text) == cap_key) continue;
    if (is_token_prefix(tokens, cap_tokens, false) || is_token_prefix(tokens, cap_tokens, true)) continue;
    if (jaccard(tokens, cap_tokens) > cfg.paraphrase_jaccard) continue;
    // length
    if (tokens.size() < cfg.min_tokens || tokens.size() > cfg.max_tokens_answer) continue;
    // context-irrelevant filler
    if (std::all_of(tokens.begin(), tokens.end(), [&](const std::string& t) { return cfg.filler.contains(t); }))
      continue;
    if (!seen.insert(c.text).second) continue;
    kept.push_back(c);
  }
  return kept;
}

std::vector<IntentionCandidate> extract_intentions(const CaptionRecord& record, const CompletionProvider& provider,
                                                   const PromptSpec& spec, const CompletionRequest& req_defaults,
                                                   const ExtractionOptions& opts) {
  if (text::trim(record.video_id).empty()) throw Error(ErrorKind::InvalidInput, "video_id is empty");
  CompletionRequest req = req_defaults;
  req.prompt = build_prompt(spec, record.caption);
  const auto resp = complete(provider, req);

  std::vector<IntentionCandidate> raw;
  raw.reserve(resp.choices.size());
  for (std::size_t i = 0; i < resp.choices.size(); ++i)
    raw.push_back(make_candidate(clean_response(resp.choices[i]), resp.provider_id, i));
  auto kept = filter_degenerate(raw, record.caption, opts.filter);
  if (opts.max_candidates > 0 && kept.size() > opts.max_candidates) kept.resize(opts.max_candidates);
  return kept;
}

ResponseRecord to_response_record(const CaptionRecord& record, const std::vector<IntentionCandidate>& candidates) {
  ResponseRecord r{record.video_id, record.caption, {}, {}, {}};
  for (const auto& c : candidates) {
    r.candidates.push_back(c.text);
    r.choice_indices.push_back(c.choice_index);
    if (r.provider.empty()) r.provider = c.source_provider;
  }
  return r;
}

std::string serialize_responses(const std::vector<ResponseRecord>& records) {
  std::string out;
  for (const auto& r : records) {
    nlohmann::ordered_json j;
    j["video_id"] = r.video_id;
    j["caption"] = r.caption;
    j["candidates"] = r.candidates;
    j["choice_indices"] = r.choice_indices;
    j["provider"] = r.provider;
    out += j.dump() + "\n";
  }
  return out;
}

std::vector<ResponseRecord> parse_responses(const std::string& content, const std::string& origin) {
  std::istringstream in(content);
  std::vector<ResponseRecord> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (text::trim(line).empty()) continue;
    const auto where = origin + ":" + std::to_string(line_no);
    ResponseRecord r;
    try {
      const auto j = nlohmann::json::parse(line);
      r.video_id = j.at("video_id").get<std::string>();
      r.caption = j.at("caption").get<std::string>();
      r.candidates = j.at("candidates").get<std::vector<std::string>>();
      if (j.contains("choice_indices")) {
        r.choice_indices = j["choice_indices"].get<std::vector<std::size_t>>();
      } else {
        for (std::size_t i = 0; i < r.candidates.size(); ++i) r.choice_indices.push_back(i);
      }
      if (j.contains("provider")) r.provider = j["provider"].get<std::string>();
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorKind::Parse, where + ": " + e.what());
    }
    if (r.choice_indices.size() != r.candidates.size())
      throw Error(ErrorKind::Parse, where + ": choice_indices and candidates differ in length");
    if (text::trim(r.video_id).empty()) throw Error(ErrorKind::Parse, where + ": empty video_id");
    out.push_back(std::move(r));
  }
  return out;
}

void write_responses(const std::string& path, const std::vector<ResponseRecord>& records) {
  text::write_file(path, serialize_responses(records));
}

std::vector<ResponseRecord> read_responses(const std::string& path) {
  return parse_responses(text::read_file(path), path);
}

}  // namespace cake
