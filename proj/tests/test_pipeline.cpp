#include <gtest/gtest.h>

#include <map>
#include <nlohmann/json.hpp>
#include <set>

#include "cakeforge/error.hpp"
#include "cakeforge/pipeline.hpp"
#include "cakeforge/text_util.hpp"
#include "test_support.hpp"

using namespace cake;
using nlohmann::json;

namespace {

const std::string kData = CAKE_DATA_DIR;

PipelineConfig mock_config() { return load_config(kData + "/mock_config.json"); }

std::string write_captions(const std::filesystem::path& dir, std::size_t n) {
  std::vector<CaptionRecord> caps;
  const auto all = load_captions(kData + "/captions_200.jsonl");
  caps.assign(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(n));
  const auto path = (dir / "captions.jsonl").string();
  text::write_file(path, serialize_captions(caps));
  return path;
}

json manifest_of(const std::string& out) { return json::parse(text::read_file(out + ".manifest.json")); }

// Fails every caption whose text contains "broken".
struct FlakyProvider : CompletionProvider {
  MockCompletionProvider inner{{}, 0};
  std::string id() const override { return "flaky"; }
  std::vector<std::string> generate(const CompletionRequest& req) const override {
    if (MockCompletionProvider::query_of(req.prompt).find("broken") != std::string::npos)
      throw Error(ErrorKind::Transport, "connection reset");
    return inner.generate(req);
  }
};

}  // namespace

TEST(Config, DefaultsAndStrictKeys) {
  const auto cfg = parse_config("{}");
  EXPECT_EQ(cfg.seed, 42u);
  EXPECT_EQ(cfg.max_in_flight, 8u);
  EXPECT_EQ(cfg.completion.num_choices, 5);
  EXPECT_EQ(cfg.pool.num_distractors, 4u);
  for (const char* bad : {"{\"sed\": 1}", "{\"provider\": {\"kind\": \"carrier-pigeon\"}}",
                          "{\"pool\": {\"num_distractors\": 3}}", "{\"max_in_flight\": 0}", "[1,2]", "{oops"}) {
    try {
      parse_config(bad);
      ADD_FAILURE() << bad;
    } catch (const Error& e) {
      EXPECT_EQ(e.kind(), ErrorKind::InvalidConfig) << bad;
    }
  }
}

TEST(Config, EveryDocumentedKeyIsAccepted) {
  const auto cfg = parse_config(R"({"seed": 42, "max_in_flight": 8,
 "provider": {"kind": "mock", "base_url": "https://api.openai.com/v1", "completion_model": "gpt-3.5-turbo-instruct", "embedding_model": "text-embedding-3-small", "mock_fixtures": "fixtures.json", "mock_embedding_dim": 64, "mock_seed": 0, "timeout_s": 60, "max_attempts": 3, "backoff_base_ms": 500, "embedding_batch_size": 256},
 "prompt": {"kind": "few_shot", "examples_path": "", "num_examples": 5, "top_k": 5, "max_len": 20},
 "completion": {"temperature": 0.7, "max_tokens": 20, "num_choices": 5, "stop": []},
 "filter": {"min_tokens": 2, "max_tokens_answer": 20, "paraphrase_jaccard": 0.8, "filler": ["think", "like", "question", "know", "mean", "i", "don't"]},
 "max_candidates_per_caption": 0, "corrector": {"kind": "rules"},
 "pool": {"num_pools": 0, "num_distractors": 4, "max_iterations": 100, "tolerance": 1e-6},
 "train": {"learning_rate": 0.01, "max_epochs": 25, "margin": 1.0, "plateau_patience": 2, "lr_decay_factor": 0.5}})");
  EXPECT_EQ(cfg.train.plateau_patience, 2u);
  EXPECT_EQ(cfg.filter.filler.size(), 7u);
  EXPECT_EQ(cfg.provider.embedding_batch_size, 256u);
}

TEST(Config, RelativePathsResolveAgainstConfigFile) {
  const auto cfg = mock_config();
  EXPECT_TRUE(std::filesystem::exists(cfg.provider.mock_fixtures)) << cfg.provider.mock_fixtures;
}

TEST(Config, HashIsCanonical) {
  const auto a = parse_config("{\"seed\": 7, \"max_in_flight\": 2}");
  const auto b = parse_config("{\"max_in_flight\": 2, \"seed\": 7}");
  EXPECT_EQ(config_hash(a), config_hash(b));
  EXPECT_EQ(config_hash(a).size(), 64u);
  EXPECT_NE(config_hash(a), config_hash(parse_config("{\"seed\": 8, \"max_in_flight\": 2}")));
}

TEST(Generate, BoundedOutputAndByteIdenticalReruns) {
  const auto dir = test_support::scratch_dir("generate");
  const auto caps = write_captions(dir, 10);
  const auto cfg = mock_config();
  const auto out1 = (dir / "r1.jsonl").string(), out2 = (dir / "r2.jsonl").string();
  const auto rep = run_generate(cfg, make_providers(cfg), caps, out1, false);
  EXPECT_EQ(rep.captions_in, 10u);
  EXPECT_LE(rep.responses_out, 50u);
  EXPECT_EQ(rep.skipped, 0u);
  auto cfg8 = cfg;
  cfg8.max_in_flight = 1;
  run_generate(cfg8, make_providers(cfg8), caps, out2, false);
  EXPECT_EQ(text::read_file(out1), text::read_file(out2));

  const auto m = manifest_of(out1);
  EXPECT_EQ(m["stage"], "generate");
  EXPECT_EQ(m["config_hash"], config_hash(cfg));
  EXPECT_EQ(m["master_seed"], 42);
  EXPECT_EQ(m["providers"]["completion"], "mock-completion");
  EXPECT_EQ(m["inputs"][0]["sha256"].get<std::string>().size(), 64u);
}

TEST(Generate, ProviderFailureSkipsOrAbortsWhenStrict) {
  const auto dir = test_support::scratch_dir("generate_strict");
  const auto caps = (dir / "c.jsonl").string();
  text::write_file(caps, serialize_captions({{"v1", "a man is running"}, {"v2", "a broken toy"}, {"v3", "a dog barks"}}));
  auto cfg = mock_config();
  Providers p = make_providers(cfg);
  p.completion = std::make_shared<FlakyProvider>();
  const auto rep = run_generate(cfg, p, caps, (dir / "r.jsonl").string(), false);
  EXPECT_EQ(rep.skipped, 1u);
  EXPECT_EQ(read_responses((dir / "r.jsonl").string()).size(), 2u);
  try {
    run_generate(cfg, p, caps, (dir / "r2.jsonl").string(), true);
    FAIL();
  } catch (const Error& e) {
    EXPECT_TRUE(e.provider_failure());
  }
}

TEST(Build, HundredResponsesGiveHundredValidRecords) {
  const auto dir = test_support::scratch_dir("build");
  std::vector<ResponseRecord> responses;
  for (int c = 0; c < 25; ++c) {
    ResponseRecord r{"vid" + std::to_string(c), "person " + std::to_string(c) + " is doing thing " + std::to_string(c % 5),
                     {}, {}, "test"};
    for (int k = 0; k < 4; ++k) {
      r.candidates.push_back("to reach goal " + std::to_string(c) + " via route " + std::to_string(k));
      r.choice_indices.push_back(static_cast<std::size_t>(k));
    }
    responses.push_back(r);
  }
  const auto in = (dir / "responses.jsonl").string();
  write_responses(in, responses);
  const auto cfg = mock_config();
  const auto out = (dir / "mcq.csv").string();
  const auto rep = run_build(cfg, make_providers(cfg), in, out);
  EXPECT_EQ(rep.records, 100u);

  const auto recs = load_csv(out);
  ASSERT_EQ(recs.size(), 100u);
  const auto m = manifest_of(out);
  const auto texts = m["responses"].get<std::vector<std::string>>();
  std::vector<std::size_t> pool_of;
  for (const auto& line : text::split_ws(text::read_file(out + ".pools.jsonl")))
    pool_of.push_back(json::parse(line)["pool_id"].get<std::size_t>());
  ASSERT_EQ(pool_of.size(), texts.size());

  for (std::size_t i = 0; i < recs.size(); ++i) {
    const auto& rec = recs[i];
    const std::set<std::string> distinct(rec.options.begin(), rec.options.end());
    EXPECT_EQ(distinct.size(), 5u);
    const auto& prov = m["records"][i];
    EXPECT_EQ(prov["qid"], rec.qid);
    const auto ans = prov["answer_response_index"].get<std::size_t>();
    EXPECT_EQ(rec.options[static_cast<std::size_t>(rec.answer)], texts[ans]);
    for (const auto& d : prov["distractors"]) {
      const auto di = d["response_index"].get<std::size_t>();
      EXPECT_NE(di, ans);
      EXPECT_EQ(d["pool_id"].get<std::size_t>(), pool_of[di]);
      if (!prov["fallback"].get<bool>()) EXPECT_EQ(pool_of[di], pool_of[ans]);
    }
  }

  const auto out2 = (dir / "mcq2.csv").string();
  run_build(cfg, make_providers(cfg), in, out2);
  EXPECT_EQ(text::read_file(out), text::read_file(out2));
}

TEST(Build, InsufficientCorpus) {
  const auto dir = test_support::scratch_dir("build_small");
  const auto in = (dir / "r.jsonl").string();
  write_responses(in, {{"v1", "a man runs", {"to win", "to eat", "To Win"}, {0, 1, 2}, "t"},
                       {"v2", "a dog runs", {"to play"}, {0}, "t"}});
  const auto cfg = mock_config();
  try {
    run_build(cfg, make_providers(cfg), in, (dir / "o.csv").string());
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::InsufficientCorpus);
  }
}

TEST(TrainEval, SeparableCorpusReachesFullAccuracy) {
  const auto dir = test_support::scratch_dir("train_eval");
  const std::vector<std::string> intents = {"to score a goal", "to win the game", "to help a friend", "to earn money",
                                            "to stay healthy"};
  const std::vector<std::string> scenery = {"a red car parked outside", "the sky over the hills", "green grass field",
                                            "an old wooden table", "rain on the window", "a quiet city street",
                                            "yellow flowers bloom", "a cold winter morning"};
  Rng rng(3);
  std::vector<MCQRecord> recs;
  for (std::size_t i = 0; i < 200; ++i) {
    MCQRecord r;
    r.video_id = "v" + std::to_string(i);
    r.qid = make_qid(r.video_id, 0);
    r.question = "Why is person " + std::to_string(i) + " here?";
    std::vector<std::string> pool = scenery;
    rng.shuffle(pool);
    pool.resize(4);
    pool.insert(pool.begin(), intents[i % intents.size()]);
    const auto o = assemble_options(pool[0], {pool.begin() + 1, pool.end()}, rng);
    std::copy(o.options.begin(), o.options.end(), r.options.begin());
    r.answer = static_cast<int>(o.correct_index);
    recs.push_back(r);
  }
  const auto csv = (dir / "d.csv").string(), scorer = (dir / "s.txt").string();
  emit_csv(recs, csv);
  const auto cfg = mock_config();
  const auto rep = run_train(cfg, make_providers(cfg), csv, scorer);
  EXPECT_EQ(rep.records, 200u);
  EXPECT_LE(rep.epochs, 25u);
  EXPECT_DOUBLE_EQ(run_eval(cfg, make_providers(cfg), csv, scorer), 1.0);
  EXPECT_TRUE(std::filesystem::exists(scorer + ".log.csv"));
  EXPECT_EQ(manifest_of(scorer)["stage"], "train");
}

TEST(Analyze, ResponsesFileReports) {
  const auto dir = test_support::scratch_dir("analyze");
  const auto in = (dir / "r.jsonl").string();
  write_responses(in, {{"v1", "a man is playing a video game", {"to win the game", "to have fun"}, {0, 1}, "t"},
                       {"v2", "a man is cooking", {"to eat dinner"}, {0}, "t"}});
  const auto r = run_analyze(in, (dir / "report").string(), 9, 15);
  ASSERT_FALSE(r.cdf.points.empty());
  EXPECT_DOUBLE_EQ(r.cdf.points.back().cumulative_fraction, 1.0);
  EXPECT_TRUE(r.overlap.overlap.count("game"));
  EXPECT_TRUE(std::filesystem::exists(dir / "report" / "length_cdf.csv"));
  EXPECT_TRUE(std::filesystem::exists(dir / "report" / "top_words.csv"));
}
