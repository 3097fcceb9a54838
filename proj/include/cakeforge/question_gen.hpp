#pragma once

#include <array>
#include <functional>
#include <string>
#include <string_view>

#include "cakeforge/lm_backend.hpp"
#include "cakeforge/rng.hpp"

namespace cake {

inline constexpr std::array<std::string_view, 3> kQuestionPrefixes = {"why is", "why did", "why does"};

struct QuestionDraft {
  std::string prefix;
  std::string q0;  // prefix + " " + caption
  std::string q;   // corrected question
  bool corrector_failed = false;
};

// Grammar corrector: any text-to-text transform. May throw.
using Corrector = std::function<std::string(std::string_view)>;

std::string_view sample_prefix(Rng& rng);

// Built-in rule pass: collapse whitespace, strip trailing sentence
// punctuation, collapse a repeated interrogative prefix, capitalize, append
// "?". Idempotent.
std::string default_gc(std::string_view text);

// q = corrector(q0). A throwing corrector falls back to default_gc and flags
// the draft; corrector output is passed through default_gc as well so the
// draft invariants (leading capital, single trailing "?") always hold.
QuestionDraft make_question(std::string_view caption, Rng& rng, const Corrector& corrector = default_gc);

// External corrector backed by a completion endpoint (one choice,
// temperature 0, prompt = q0).
Corrector make_completion_corrector(const CompletionProvider& provider, int max_tokens = 64);

}  // namespace cake
