#include <gtest/gtest.h>

#include <map>

#include "cakeforge/analytics.hpp"
#include "cakeforge/error.hpp"
#include "cakeforge/rng.hpp"

using namespace cake;
using V = std::vector<std::string>;

TEST(Tokenize, Examples) {
  EXPECT_EQ(tokenize("To score a goal!"), (V{"to", "score", "a", "goal"}));
  EXPECT_EQ(tokenize(""), V{});
  EXPECT_EQ(tokenize("I don't know."), (V{"i", "don't", "know"}));
  EXPECT_EQ(tokenize("  \"quoted\" ,, words\t\nhere "), (V{"quoted", "words", "here"}));
  EXPECT_EQ(tokenize("caf\xC3\xA9\xE2\x80\x83ol\xC3\xA9\xE2\x80\xA6"), (V{"caf\xC3\xA9", "ol\xC3\xA9"}));
}

TEST(LengthCdf, Examples) {
  const auto cdf = length_cdf({"to win", "to eat", "to go home now"});
  ASSERT_EQ(cdf.points.size(), 2u);
  EXPECT_EQ(cdf.points[0].length, 2u);
  EXPECT_NEAR(cdf.points[0].cumulative_fraction, 0.667, 5e-4);
  EXPECT_EQ(cdf.points[1].length, 4u);
  EXPECT_DOUBLE_EQ(cdf.points[1].cumulative_fraction, 1.0);

  const auto single = length_cdf({"to score a goal"});
  ASSERT_EQ(single.points.size(), 1u);
  EXPECT_EQ(single.points[0], (LengthCdfPoint{4, 1.0}));
  EXPECT_THROW(length_cdf({}), Error);
}

TEST(LengthCdf, MatchesBruteForceCount) {
  Rng rng(21);
  for (int trial = 0; trial < 20; ++trial) {
    V answers;
    std::vector<std::size_t> lens;
    const std::size_t n = 1 + rng.uniform_index(300);
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t len = rng.uniform_index(12);
      std::string s;
      for (std::size_t w = 0; w < len; ++w) s += "w" + std::to_string(w) + " ";
      answers.push_back(s);
      lens.push_back(len);
    }
    const auto cdf = length_cdf(answers);
    std::map<std::size_t, std::size_t> le;
    for (auto l : lens) le[l] = 0;
    for (auto& [l, c] : le)
      for (auto x : lens) c += x <= l;
    ASSERT_EQ(cdf.points.size(), le.size());
    std::size_t i = 0;
    double prev = 0.0;
    for (const auto& [l, c] : le) {
      EXPECT_EQ(cdf.points[i].length, l);
      EXPECT_EQ(cdf.points[i].cumulative_fraction, static_cast<double>(c) / static_cast<double>(n));
      EXPECT_GT(cdf.points[i].cumulative_fraction, prev);
      prev = cdf.points[i].cumulative_fraction;
      ++i;
    }
    EXPECT_NEAR(prev, 1.0, 1e-9);
  }
}

TEST(TopWords, LexicographicTies) {
  const auto top = top_words({"to score a goal", "to win a game"}, 3, {"to", "a"});
  EXPECT_EQ(top, (std::vector<WordCount>{{"game", 1}, {"goal", 1}, {"score", 1}}));
}

TEST(TopWords, LargeKReturnsFullVocabulary) {
  const auto top = top_words({"b b a", "c b"}, 100, {});
  EXPECT_EQ(top, (std::vector<WordCount>{{"b", 3}, {"a", 1}, {"c", 1}}));
}

TEST(Overlap, DisjointVocabularies) {
  const auto r = overlap_report({"to score goals"}, {"cats sleeping quietly"});
  EXPECT_TRUE(r.overlap.empty());
  EXPECT_EQ(r.overlap_fraction, 0.0);
}

TEST(Overlap, IdenticalCorpora) {
  V corpus;
  for (int i = 0; i < 30; ++i) corpus.push_back("word" + std::to_string(i) + " word" + std::to_string(i % 7));
  const auto r = overlap_report(corpus, corpus, 9, 15);
  EXPECT_EQ(r.overlap.size(), 9u);
  EXPECT_DOUBLE_EQ(r.overlap_fraction, 1.0);
  const auto r2 = overlap_report(corpus, corpus, 15, 9);
  EXPECT_EQ(r2.overlap.size(), 9u);
  EXPECT_DOUBLE_EQ(r2.overlap_fraction, 9.0 / 15.0);
}

TEST(Overlap, CaptionWordsReappearingInAnswers) {
  const V captions = {"a man is playing a video game", "the man shows a video of the game",
                      "a man talks about the game in a video", "a woman is cooking"};
  const V answers = {"to show the man the video", "to win the game", "to make a video of the game",
                     "i think the man likes it", "to teach the man"};
  const auto r = overlap_report(answers, captions);
  for (const char* w : {"man", "video", "game"}) EXPECT_TRUE(r.overlap.count(w)) << w;
}

TEST(Reports, CsvLayouts) {
  EXPECT_EQ(length_cdf_csv(length_cdf({"a b", "a b c"})), "length,cumulative_fraction\n2,0.5\n3,1\n");
  const auto r = overlap_report({"goal goal"}, {"goal"}, 1, 1);
  EXPECT_EQ(top_words_csv(r), "word,count,corpus\ngoal,2,generated\ngoal,1,caption\n");
}
