#pragma once

#include <cstddef>
#include <string>
#include <unordered_set>
#include <vector>

#include "cakeforge/lm_backend.hpp"
#include "cakeforge/prompting.hpp"

namespace cake {

struct CaptionRecord {
  std::string video_id;
  std::string caption;
  friend bool operator==(const CaptionRecord&, const CaptionRecord&) = default;
};

struct IntentionCandidate {
  std::string text;
  std::string source_provider;
  std::size_t choice_index = 0;
  std::size_t token_count = 0;
  friend bool operator==(const IntentionCandidate&, const IntentionCandidate&) = default;
};

struct FilterConfig {
  std::size_t min_tokens = 2;
  std::size_t max_tokens_answer = 20;
  double paraphrase_jaccard = 0.8;  // token Jaccard above this counts as a copy
  std::unordered_set<std::string> filler = {"think", "like", "question", "know", "mean", "i", "don't"};
};

// Trim, cut at the first newline, drop an "Output:" echo, enumeration
// markers and surrounding quotes, collapse whitespace.
std::string clean_response(std::string_view raw);

IntentionCandidate make_candidate(std::string text, std::string provider, std::size_t choice_index);

// Drops empty, caption copies (equal, prefix, suffix or near-paraphrase),
// too short/long, filler-only and repeated candidates. Survivor order is
// preserved and the filter is idempotent.
std::vector<IntentionCandidate> filter_degenerate(const std::vector<IntentionCandidate>& candidates,
                                                  std::string_view caption, const FilterConfig& cfg = {});

struct ExtractionOptions {
  FilterConfig filter;
  std::size_t max_candidates = 0;  // per caption, 0 = keep all survivors
};

std::vector<IntentionCandidate> extract_intentions(const CaptionRecord& record, const CompletionProvider& provider,
                                                   const PromptSpec& spec, const CompletionRequest& req_defaults,
                                                   const ExtractionOptions& opts = {});

// One line of the intermediate responses file:
// {"video_id", "caption", "candidates": [text...], "choice_indices": [...], "provider"}
struct ResponseRecord {
  std::string video_id;
  std::string caption;
  std::vector<std::string> candidates;
  std::vector<std::size_t> choice_indices;  // parallel to candidates
  std::string provider;
  friend bool operator==(const ResponseRecord&, const ResponseRecord&) = default;
};

ResponseRecord to_response_record(const CaptionRecord& record, const std::vector<IntentionCandidate>& candidates);

std::string serialize_responses(const std::vector<ResponseRecord>& records);
std::vector<ResponseRecord> parse_responses(const std::string& content, const std::string& origin = "<memory>");
void write_responses(const std::string& path, const std::vector<ResponseRecord>& records);
std::vector<ResponseRecord> read_responses(const std::string& path);

}  // namespace cake
