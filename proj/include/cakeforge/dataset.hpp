#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "cakeforge/extraction.hpp"

namespace cake {

inline constexpr const char* kCsvHeader = "video_id,qid,qtype,question,a0,a1,a2,a3,a4,answer";
inline constexpr const char* kDefaultQtype = "causal_why";

struct MCQRecord {
  std::string video_id;
  std::string qid;
  std::string qtype = kDefaultQtype;
  std::string question;
  std::array<std::string, 5> options;
  int answer = 0;
  friend bool operator==(const MCQRecord&, const MCQRecord&) = default;
};

// Throws Validation naming the qid.
void validate(const MCQRecord& record);

// "{video_id}#{choice_index}"
std::string make_qid(const std::string& video_id, std::size_t choice_index);

// Accepts line-delimited {"video_id", "caption"} records or a two-column
// CSV (optional "video_id,caption" header). Rejects duplicate ids and empty
// captions with the offending line number.
std::vector<CaptionRecord> parse_captions(const std::string& content, const std::string& origin = "<memory>");
std::vector<CaptionRecord> load_captions(const std::string& path);
std::string serialize_captions(const std::vector<CaptionRecord>& captions);

struct CorpusSplit {
  std::vector<CaptionRecord> first;   // teacher-generation split
  std::vector<CaptionRecord> second;  // student-generation split
};

CorpusSplit split_corpus(const std::vector<CaptionRecord>& captions, std::size_t first_size, std::uint64_t seed);

struct DistillPair {
  std::string input;   // caption
  std::string output;  // teacher response
  friend bool operator==(const DistillPair&, const DistillPair&) = default;
};

std::vector<DistillPair> distill_pairs(const std::vector<ResponseRecord>& responses);
std::string serialize_distill(const std::vector<DistillPair>& pairs);
std::vector<DistillPair> parse_distill(const std::string& content, const std::string& origin = "<memory>");
// Writes line-delimited {"input", "output"} records; returns the count.
std::size_t export_distill_corpus(const std::vector<DistillPair>& pairs, const std::string& path);
std::vector<DistillPair> load_distill_corpus(const std::string& path);

// RFC 4180-style fields, LF line endings.
std::string csv_escape(const std::string& field);
std::vector<std::vector<std::string>> parse_csv_rows(const std::string& content, const std::string& origin);

std::string serialize_mcq_csv(const std::vector<MCQRecord>& records);
std::vector<MCQRecord> parse_mcq_csv(const std::string& content, const std::string& origin = "<memory>");
void emit_csv(const std::vector<MCQRecord>& records, const std::string& path);
std::vector<MCQRecord> load_csv(const std::string& path);

// Prefixes every qid with "{tag}:" and concatenates; collisions throw.
std::vector<MCQRecord> merge_datasets(const std::vector<MCQRecord>& a, const std::vector<MCQRecord>& b,
                                      const std::string& tag_a = "a", const std::string& tag_b = "b");

}  // namespace cake
