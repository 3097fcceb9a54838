#include <gtest/gtest.h>

#include "cakeforge/error.hpp"
#include "cakeforge/prompting.hpp"
#include "cakeforge/rng.hpp"

using namespace cake;

namespace {

std::size_t count_of(const std::string& hay, const std::string& needle) {
  std::size_t n = 0;
  for (auto pos = hay.find(needle); pos != std::string::npos; pos = hay.find(needle, pos + needle.size())) ++n;
  return n;
}

std::vector<std::string> split_on(const std::string& s, const std::string& sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (auto pos = s.find(sep); pos != std::string::npos; pos = s.find(sep, start)) {
    out.push_back(s.substr(start, pos - start));
    start = pos + sep.size();
  }
  out.push_back(s.substr(start));
  return out;
}

}  // namespace

TEST(ZeroShot, LiteralTemplate) {
  EXPECT_EQ(build_zero_shot("the man is running"), "what is the intention of the man is running?");
  EXPECT_THROW(build_zero_shot(""), Error);
  EXPECT_THROW(build_zero_shot("   "), Error);
}

TEST(FewShot, SingleExampleLayout) {
  const std::vector<FewShotExample> ex = {{"a dog barking", "to alert its owner"}};
  EXPECT_EQ(build_few_shot(ex, "the man is running"),
            "Input: a dog barking\nOutput: to alert its owner\nInput: the man is running\nOutput:");
}

TEST(FewShot, EmptyExamplesRejected) { EXPECT_THROW(build_few_shot({}, "the man is running"), Error); }

TEST(FewShot, FiveExamplesGiveSixInputAndOutputLines) {
  const auto& pack = default_few_shot_examples();
  ASSERT_EQ(pack.size(), 5u);
  const auto prompt = build_few_shot(pack, "the man is running");
  EXPECT_EQ(count_of(prompt, "Input:"), 6u);
  EXPECT_EQ(count_of(prompt, "Output"), 6u);
}

TEST(FewShot, SplittingOnOutputGivesOneSegmentPerExamplePlusQuery) {
  Rng rng(5);
  const auto& pack = default_few_shot_examples();
  for (std::size_t k = 1; k <= pack.size(); ++k) {
    const auto ex = select_few_shot(pack, k, rng);
    ASSERT_EQ(ex.size(), k);
    const auto prompt = build_few_shot(ex, "a woman is dancing");
    const auto parts = split_on(prompt, "Output:");
    // The prompt ends on the open "Output:" slot, so the last piece is empty.
    ASSERT_EQ(parts.size(), k + 2);
    EXPECT_TRUE(parts.back().empty());
    std::string rejoined = parts[0];
    for (std::size_t i = 1; i < parts.size(); ++i) rejoined += "Output:" + parts[i];
    EXPECT_EQ(rejoined, prompt);
    for (std::size_t i = 0; i + 1 < parts.size(); ++i) EXPECT_FALSE(parts[i].empty());
  }
}

TEST(Instruct, LiteralTemplateWithoutPluralization) {
  EXPECT_EQ(build_instruct("soccer players kicking ball", 5, 20),
            "what is the intention of soccer players kicking ball? Provide 5 answers within 20");
  EXPECT_EQ(build_instruct("soccer players kicking ball", 1, 20),
            "what is the intention of soccer players kicking ball? Provide 1 answers within 20");
  EXPECT_THROW(build_instruct("", 5, 20), Error);
}

TEST(BuildPrompt, DispatchesOnKindAndIsPure) {
  PromptSpec spec;
  spec.kind = PromptKind::ZeroShot;
  EXPECT_EQ(build_prompt(spec, "a cat sleeping"), build_zero_shot("a cat sleeping"));
  spec.kind = PromptKind::Instruct;
  EXPECT_EQ(build_prompt(spec, "a cat sleeping"), build_instruct("a cat sleeping", 5, 20));
  spec.kind = PromptKind::FewShot;
  spec.examples = default_few_shot_examples();
  EXPECT_EQ(build_prompt(spec, "a cat sleeping"), build_prompt(spec, "a cat sleeping"));
  EXPECT_EQ(build_prompt(spec, "a cat sleeping"), build_few_shot(spec.examples, "a cat sleeping"));
}

TEST(PromptKind, ParsesNamesAndRejectsOthers) {
  EXPECT_EQ(parse_prompt_kind("zero_shot"), PromptKind::ZeroShot);
  EXPECT_EQ(parse_prompt_kind("few_shot"), PromptKind::FewShot);
  EXPECT_EQ(parse_prompt_kind("instruct"), PromptKind::Instruct);
  EXPECT_THROW(parse_prompt_kind("chain"), Error);
  EXPECT_STREQ(to_string(PromptKind::FewShot), "few_shot");
}

TEST(PromptSpec, ValidationRules) {
  PromptSpec spec;
  spec.kind = PromptKind::FewShot;
  EXPECT_THROW(validate(spec), Error);  // no examples
  spec.examples = default_few_shot_examples();
  EXPECT_NO_THROW(validate(spec));
  spec.top_k = 0;
  EXPECT_THROW(validate(spec), Error);
}

TEST(FewShotExample, InputMustBeDeclarative) {
  EXPECT_THROW(validate(FewShotExample{"why is he running?", "to win"}), Error);
  EXPECT_THROW(validate(FewShotExample{"he runs", ""}), Error);
  EXPECT_NO_THROW(validate(FewShotExample{"he runs", "to win"}));
}

TEST(Declarative, ToBeVerbIsReinserted) {
  const auto d = question_to_declarative("why is the man running?");
  EXPECT_EQ(d.text, "the man is running");
  EXPECT_FALSE(d.fallback);
  EXPECT_EQ(question_to_declarative("Why are the kids laughing?").text, "the kids are laughing");
}

TEST(Declarative, DidIsDroppedWithoutReinsertion) {
  const auto d = question_to_declarative("why did the toddler cry?");
  EXPECT_EQ(d.text, "the toddler cry");
  EXPECT_FALSE(d.fallback);
}

TEST(Declarative, UnknownPrefixFallsBack) {
  const auto d = question_to_declarative("what is happening?");
  EXPECT_EQ(d.text, "what is happening");
  EXPECT_TRUE(d.fallback);
}

TEST(Declarative, OutputsAreValidFewShotInputs) {
  for (const char* q : {"why is the man running?", "how did the boy fall?", "why does she smile?", "who?"}) {
    const auto d = question_to_declarative(q);
    EXPECT_FALSE(d.text.empty()) << q;
    EXPECT_NE(d.text.back(), '?') << q;
  }
}

TEST(FewShotPack, PackagedFileMatchesEmbeddedDefault) {
  EXPECT_EQ(load_few_shot_examples(std::string(CAKE_DATA_DIR) + "/fewshot_default.jsonl"),
            default_few_shot_examples());
}

TEST(FewShotPack, SelectionIsSeededPermutationPrefix) {
  const auto& pack = default_few_shot_examples();
  Rng a(9), b(9);
  EXPECT_EQ(select_few_shot(pack, 3, a), select_few_shot(pack, 3, b));
  Rng c(9);
  auto all = select_few_shot(pack, 99, c);
  EXPECT_EQ(all.size(), pack.size());
  for (const auto& ex : pack) EXPECT_NE(std::find(all.begin(), all.end(), ex), all.end());
}
