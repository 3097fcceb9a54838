#pragma once

#include <chrono>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "cakeforge/lm_backend.hpp"

namespace cake {

struct RetryPolicy {
  int max_attempts = 3;
  std::chrono::milliseconds base_delay{500};
  std::chrono::milliseconds max_delay{8000};

  // Delay before attempt `attempt + 1`, given `attempt` failed (1-based).
  std::chrono::milliseconds backoff(int attempt, std::optional<double> retry_after) const;
};

struct HttpSettings {
  std::string base_url = "https://api.openai.com/v1";
  std::string completion_model;
  std::string embedding_model;
  std::optional<std::string> api_key;  // never logged
  std::chrono::seconds timeout{60};
  RetryPolicy retry;
  std::size_t embedding_batch_size = 256;
};

// Reads CAKE_FORGE_API_KEY; empty when unset.
std::optional<std::string> api_key_from_env();

// OpenAI-compatible completions + embeddings client. A fresh connection is
// opened per call so one instance can be shared across threads.
class HttpProvider final : public CompletionProvider, public EmbeddingProvider {
 public:
  explicit HttpProvider(HttpSettings settings);

  std::string id() const override;
  std::vector<std::string> generate(const CompletionRequest& req) const override;
  std::vector<EmbeddingVector> embed_batch(const std::vector<std::string>& texts) const override;

  // Hook for tests; defaults to std::this_thread::sleep_for.
  void set_sleeper(std::function<void(std::chrono::milliseconds)> sleeper) { sleep_ = std::move(sleeper); }

  // Parse the wire payloads. Exposed for tests.
  static std::vector<std::string> parse_completions(const std::string& body);
  static std::vector<EmbeddingVector> parse_embeddings(const std::string& body, std::size_t expected);

 private:
  std::string post_json(const std::string& path, const std::string& body) const;

  HttpSettings settings_;
  std::string origin_;       // scheme://host[:port]
  std::string path_prefix_;  // e.g. /v1
  std::function<void(std::chrono::milliseconds)> sleep_;
};

}  // namespace cake
