#include "cakeforge/question_gen.hpp"

#include <cctype>

#include "cakeforge/error.hpp"
#include "cakeforge/text_util.hpp"

namespace cake {

std::string_view sample_prefix(Rng& rng) { return kQuestionPrefixes[rng.uniform_index(kQuestionPrefixes.size())]; }

namespace {

// Interrogative openers recognized for repeated-prefix collapse.
constexpr std::string_view kInterrogatives[] = {"why is",  "why was", "why did", "why does", "why do",
                                                "why are", "why were", "how did", "how does", "how is"};

std::size_t leading_interrogative(std::string_view s) {
  std::size_t best = 0;
  for (auto p : kInterrogatives) {
    if (text::istarts_with(s, p) && (s.size() == p.size() || s[p.size()] == ' ')) best = std::max(best, p.size());
  }
  return best;
}

bool sentence_punct(char c) { return c == '.' || c == '?' || c == '!' || c == ';' || c == ':' || c == ','; }

}  // namespace

std::string default_gc(std::string_view input) {
  std::string s = text::collapse_whitespace(input);
  while (!s.empty() && (sentence_punct(s.back()) || s.back() == ' ')) s.pop_back();

  // "why did why did he fall" -> "why did he fall"; when the caption brings
  // its own interrogative the sampled one is dropped.
  for (;;) {
    const auto first = leading_interrogative(s);
    if (first == 0 || first >= s.size()) break;
    const std::string_view rest = std::string_view(s).substr(first + 1);
    if (leading_interrogative(rest) == 0) break;
    s = std::string(rest);
  }

  if (!s.empty()) s[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(s[0])));
  s.push_back('?');
  return s;
}

QuestionDraft make_question(std::string_view caption, Rng& rng, const Corrector& corrector) {
  if (text::trim(caption).empty()) throw Error(ErrorKind::InvalidInput, "caption is empty");
  QuestionDraft d;
  d.prefix = std::string(sample_prefix(rng));
  d.q0 = d.prefix + " " + std::string(caption);
  try {
    d.q = default_gc(corrector(d.q0));
    if (d.q == "?") throw Error(ErrorKind::Protocol, "corrector returned empty text");
  } catch (const std::exception&) {
    d.q = default_gc(d.q0);
    d.corrector_failed = true;
  }
  return d;
}

Corrector make_completion_corrector(const CompletionProvider& provider, int max_tokens) {
  return [&provider, max_tokens](std::string_view q0) {
    CompletionRequest req;
    req.prompt = std::string(q0);
    req.num_choices = 1;
    req.temperature = 0.0;
    req.max_tokens = max_tokens;
    auto resp = complete(provider, req);
    auto out = text::trim(resp.choices.front());
    if (const auto nl = out.find('\n'); nl != std::string::npos) out = text::trim(out.substr(0, nl));
    return out;
  };
}

}  // namespace cake
