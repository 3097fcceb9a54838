#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "cakeforge/rng.hpp"

namespace cake {

struct FewShotExample {
  std::string input;   // declarative event description
  std::string output;  // its intention
  friend bool operator==(const FewShotExample&, const FewShotExample&) = default;
};

void validate(const FewShotExample& ex);

enum class PromptKind { ZeroShot, FewShot, Instruct };

PromptKind parse_prompt_kind(std::string_view name);
const char* to_string(PromptKind kind);

inline constexpr int kDefaultTopK = 5;
inline constexpr int kDefaultMaxLen = 20;
inline constexpr std::size_t kDefaultFewShotCount = 5;

struct PromptSpec {
  PromptKind kind = PromptKind::FewShot;
  std::vector<FewShotExample> examples;  // used only by FewShot
  int top_k = kDefaultTopK;
  int max_len = kDefaultMaxLen;
};

void validate(const PromptSpec& spec);

// "what is the intention of {caption}?"
std::string build_zero_shot(std::string_view caption);

// Input:/Output: lines for each example, then "Input: {caption}" and a bare
// "Output:" line, joined by '\n'.
std::string build_few_shot(const std::vector<FewShotExample>& examples, std::string_view caption);

// "what is the intention of {caption}? Provide {top_k} answers within {max_len}"
std::string build_instruct(std::string_view caption, int top_k, int max_len = kDefaultMaxLen);

std::string build_prompt(const PromptSpec& spec, std::string_view caption);

struct Declarative {
  std::string text;
  bool fallback = false;  // no known interrogative prefix matched
};

// Rule-based rewrite of a why/how question into a declarative event, used to
// turn QA pairs into few-shot inputs.
Declarative question_to_declarative(std::string_view question);

// The packaged pack of five examples (mirrors data/fewshot_default.jsonl).
const std::vector<FewShotExample>& default_few_shot_examples();

// Line-delimited {"input": ..., "output": ...} records.
std::vector<FewShotExample> load_few_shot_examples(const std::string& path);

// Seeded once per run: shuffles the pack and keeps the first k.
std::vector<FewShotExample> select_few_shot(std::vector<FewShotExample> pack, std::size_t k, Rng& rng);

}  // namespace cake
