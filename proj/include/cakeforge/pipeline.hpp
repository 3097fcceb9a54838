#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "cakeforge/analytics.hpp"
#include "cakeforge/dataset.hpp"
#include "cakeforge/extraction.hpp"
#include "cakeforge/lm_backend.hpp"
#include "cakeforge/pooling.hpp"
#include "cakeforge/prompting.hpp"
#include "cakeforge/trainer.hpp"

// Staged orchestration behind the cake-forge CLI. Every stage persists its
// output plus a JSON manifest (config hash, seeds, provider ids, input
// digests) next to it, so a run is reproducible from the config, the master
// seed and the input files alone.
namespace cake {

struct ProviderConfig {
  std::string kind = "mock";  // "mock" | "http"
  std::string base_url = "https://api.openai.com/v1";
  std::string completion_model = "gpt-3.5-turbo-instruct";
  std::string embedding_model = "text-embedding-3-small";
  std::string mock_fixtures;  // keyword -> answers JSON; empty for the generic bank only
  std::size_t mock_embedding_dim = 64;
  std::uint64_t mock_seed = 0;
  int timeout_s = 60;
  int max_attempts = 3;
  int backoff_base_ms = 500;
  std::size_t embedding_batch_size = 256;
};

struct PromptConfig {
  std::string kind = "few_shot";
  std::string examples_path;  // empty: packaged default pack
  std::size_t num_examples = kDefaultFewShotCount;
  int top_k = kDefaultTopK;
  int max_len = kDefaultMaxLen;
};

struct CorrectorConfig {
  std::string kind = "rules";  // "rules" | "http"
  std::string base_url;
  std::string model;
};

struct PoolSettings {
  std::size_t num_pools = 0;  // 0: default_num_pools(|responses|)
  std::size_t num_distractors = kDefaultDistractors;
  std::size_t max_iterations = 100;
  double tolerance = 1e-6;
};

struct PipelineConfig {
  ProviderConfig provider;
  PromptConfig prompt;
  CompletionRequest completion;  // prompt/seed fields unused
  FilterConfig filter;
  std::size_t max_candidates_per_caption = 0;
  CorrectorConfig corrector;
  PoolSettings pool;
  TrainConfig train;  // seed is derived from the master seed
  std::uint64_t seed = 42;
  std::size_t max_in_flight = 8;
};

// Unknown keys are rejected so typos surface as config errors.
PipelineConfig parse_config(const std::string& json_text);
PipelineConfig load_config(const std::string& path);
std::string canonical_config(const PipelineConfig& cfg);
std::string config_hash(const PipelineConfig& cfg);

struct Providers {
  std::shared_ptr<const CompletionProvider> completion;
  std::shared_ptr<const EmbeddingProvider> embedding;
};

Providers make_providers(const PipelineConfig& cfg);

PromptSpec make_prompt_spec(const PipelineConfig& cfg);

struct GenerateReport {
  std::size_t captions_in = 0;
  std::size_t responses_out = 0;
  std::size_t filtered = 0;
  std::size_t skipped = 0;  // captions dropped after provider failure
};

// Throws the provider error for the first failing caption when strict.
GenerateReport run_generate(const PipelineConfig& cfg, const Providers& providers, const std::string& captions_path,
                            const std::string& out_path, bool strict);

struct BuildReport {
  std::size_t records = 0;
  std::size_t num_pools = 0;
  std::size_t fallback_records = 0;
  std::size_t corrector_fallbacks = 0;
};

// Writes out_csv plus out_csv.manifest.json, out_csv.pools.jsonl and
// out_csv.centroids.csv.
BuildReport run_build(const PipelineConfig& cfg, const Providers& providers, const std::string& responses_path,
                      const std::string& out_csv);

// Embeds questions and options, normalized, and featurizes each record.
std::vector<TrainingExample> featurize_records(const std::vector<MCQRecord>& records,
                                               const EmbeddingProvider& provider);

struct TrainReport {
  std::size_t records = 0;
  std::size_t epochs = 0;
  double train_accuracy = 0.0;
};

// Writes the scorer and scorer_path.log.csv.
TrainReport run_train(const PipelineConfig& cfg, const Providers& providers, const std::string& csv_path,
                      const std::string& scorer_path);
double run_eval(const PipelineConfig& cfg, const Providers& providers, const std::string& csv_path,
                const std::string& scorer_path);

CorpusSplit run_split(const PipelineConfig& cfg, const std::string& captions_path, std::size_t first_size,
                      const std::string& out_first, const std::string& out_second);

std::size_t run_distill_export(const std::string& responses_path, const std::string& out_path);

struct AnalyzeReport {
  LengthCdf cdf;
  OverlapReport overlap;
};

// Accepts a responses file or an MCQ CSV (by .csv extension); writes
// length_cdf.csv and top_words.csv into out_dir.
AnalyzeReport run_analyze(const std::string& input_path, const std::string& out_dir, std::size_t k_gen,
                          std::size_t k_cap);

std::size_t run_merge(const std::string& a_csv, const std::string& b_csv, const std::string& out_csv,
                      const std::string& tag_a, const std::string& tag_b);

}  // namespace cake
