#include "cakeforge/prompting.hpp"

#include <array>
#include <cctype>
#include <nlohmann/json.hpp>
#include <sstream>

#include "cakeforge/error.hpp"
#include "cakeforge/text_util.hpp"

namespace cake {

void validate(const FewShotExample& ex) {
  if (text::trim(ex.input).empty() || text::trim(ex.output).empty())
    throw Error(ErrorKind::InvalidInput, "few-shot example needs non-empty input and output");
  if (text::trim(ex.input).back() == '?')
    throw Error(ErrorKind::InvalidInput, "few-shot input must be declarative: '" + ex.input + "'");
}

PromptKind parse_prompt_kind(std::string_view name) {
  if (name == "zero_shot") return PromptKind::ZeroShot;
  if (name == "few_shot") return PromptKind::FewShot;
  if (name == "instruct") return PromptKind::Instruct;
  throw Error(ErrorKind::InvalidConfig, "unknown prompt kind '" + std::string(name) + "'");
}

const char* to_string(PromptKind kind) {
  switch (kind) {
    case PromptKind::ZeroShot: return "zero_shot";
    case PromptKind::FewShot: return "few_shot";
    case PromptKind::Instruct: return "instruct";
  }
  return "?";
}

void validate(const PromptSpec& spec) {
  if (spec.top_k < 1 || spec.max_len < 1) throw Error(ErrorKind::InvalidConfig, "top_k and max_len must be >= 1");
  if (spec.kind == PromptKind::FewShot && spec.examples.empty())
    throw Error(ErrorKind::InvalidConfig, "few_shot prompts need at least one example");
  for (const auto& ex : spec.examples) validate(ex);
}

namespace {
void require_caption(std::string_view caption) {
  if (text::trim(caption).empty()) throw Error(ErrorKind::InvalidInput, "caption is empty");
}
}  // namespace

std::string build_zero_shot(std::string_view caption) {
  require_caption(caption);
  return "what is the intention of " + std::string(caption) + "?";
}

std::string build_few_shot(const std::vector<FewShotExample>& examples, std::string_view caption) {
  if (examples.empty()) throw Error(ErrorKind::InvalidInput, "few-shot prompt needs at least one example");
  require_caption(caption);
  std::string out;
  for (const auto& ex : examples) {
    out += "Input: " + ex.input + "\n";
    out += "Output: " + ex.output + "\n";
  }
  out += "Input: " + std::string(caption) + "\nOutput:";
  return out;
}

std::string build_instruct(std::string_view caption, int top_k, int max_len) {
  if (top_k < 1 || max_len < 1) throw Error(ErrorKind::InvalidInput, "top_k and max_len must be >= 1");
  return build_zero_shot(caption) + " Provide " + std::to_string(top_k) + " answers within " +
         std::to_string(max_len);
}

std::string build_prompt(const PromptSpec& spec, std::string_view caption) {
  switch (spec.kind) {
    case PromptKind::ZeroShot: return build_zero_shot(caption);
    case PromptKind::FewShot: return build_few_shot(spec.examples, caption);
    case PromptKind::Instruct: return build_instruct(caption, spec.top_k, spec.max_len);
  }
  throw Error(ErrorKind::InvalidConfig, "unknown prompt kind");
}

namespace {

struct PrefixRule {
  std::string_view prefix;
  std::string_view verb;  // reinserted "to be" form, empty otherwise
};

constexpr std::array<PrefixRule, 8> kPrefixes{{
    {"why is", "is"},
    {"why was", "was"},
    {"why did", ""},
    {"why does", ""},
    {"why do", ""},
    {"why are", "are"},
    {"how did", ""},
    {"how does", ""},
}};

bool verb_like(const std::string& token) {
  auto ends = [&](std::string_view suf) {
    return token.size() > suf.size() + 1 && token.ends_with(suf);
  };
  return ends("ing") || ends("ed");
}

}  // namespace

Declarative question_to_declarative(std::string_view question) {
  std::string q = text::trim(question);
  while (!q.empty() && (q.back() == '?' || std::isspace(static_cast<unsigned char>(q.back())))) q.pop_back();

  const PrefixRule* rule = nullptr;
  for (const auto& r : kPrefixes) {
    if (text::istarts_with(q, r.prefix) &&
        (q.size() == r.prefix.size() || std::isspace(static_cast<unsigned char>(q[r.prefix.size()])))) {
      // "why do" is a prefix of "why does"; keep the longest match.
      if (!rule || r.prefix.size() > rule->prefix.size()) rule = &r;
    }
  }
  if (!rule) return {q, true};

  auto tokens = text::split_ws(std::string_view(q).substr(rule->prefix.size()));
  if (!rule->verb.empty() && !tokens.empty()) {
    std::size_t at = std::min<std::size_t>(2, tokens.size());
    for (std::size_t i = 1; i < tokens.size(); ++i) {
      if (verb_like(text::to_lower(tokens[i]))) {
        at = i;
        break;
      }
    }
    tokens.insert(tokens.begin() + static_cast<std::ptrdiff_t>(at), std::string(rule->verb));
  }
  std::string out = text::join(tokens, " ");
  if (!out.empty()) out[0] = static_cast<char>(std::tolower(static_cast<unsigned char>(out[0])));
  return {out, false};
}

const std::vector<FewShotExample>& default_few_shot_examples() {
  static const std::vector<FewShotExample> pack = {
      {"the boy is holding the dog's leash", "to keep the dog from running away"},
      {"the woman is clapping her hands", "to cheer for the performers"},
      {"the girl is wearing a helmet", "to protect her head while cycling"},
      {"the man bent down near the baby", "to pick up the baby"},
      {"the lady is holding an umbrella", "to shield herself from the rain"},
  };
  return pack;
}

std::vector<FewShotExample> load_few_shot_examples(const std::string& path) {
  std::istringstream in(text::read_file(path));
  std::vector<FewShotExample> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (text::trim(line).empty()) continue;
    const auto where = path + ":" + std::to_string(line_no);
    try {
      const auto j = nlohmann::json::parse(line);
      FewShotExample ex{j.at("input").get<std::string>(), j.at("output").get<std::string>()};
      validate(ex);
      out.push_back(std::move(ex));
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorKind::Parse, where + ": " + e.what());
    } catch (const Error& e) {
      throw Error(ErrorKind::Parse, where + ": " + e.what());
    }
  }
  if (out.empty()) throw Error(ErrorKind::Parse, path + ": no few-shot examples");
  return out;
}

std::vector<FewShotExample> select_few_shot(std::vector<FewShotExample> pack, std::size_t k, Rng& rng) {
  if (k == 0) throw Error(ErrorKind::InvalidConfig, "few-shot example count must be >= 1");
  rng.shuffle(pack);
  if (pack.size() > k) pack.resize(k);
  return pack;
}

}  // namespace cake
