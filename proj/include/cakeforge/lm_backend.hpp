#pragma once

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdint>
#include <exception>
#include <optional>
#include <string>
#include <thread>
#include <type_traits>
#include <utility>
#include <vector>

#include "cakeforge/error.hpp"

namespace cake {

struct CompletionRequest {
  std::string prompt;
  double temperature = 0.7;
  int max_tokens = 20;   // passed through to the endpoint, not enforced locally
  int num_choices = 5;   // over-generation count
  std::vector<std::string> stop_sequences;
  std::optional<std::uint64_t> seed;
};

// Throws InvalidInput when the numeric fields are out of range.
void validate(const CompletionRequest& req);

struct CompletionResponse {
  std::vector<std::string> choices;
  std::string provider_id;
  std::chrono::nanoseconds raw_latency{0};
};

struct EmbeddingVector {
  std::vector<double> values;

  std::size_t dim() const noexcept { return values.size(); }
  friend bool operator==(const EmbeddingVector&, const EmbeddingVector&) = default;
};

double l2_norm(const EmbeddingVector& v);
// Throws InvalidInput on a zero (or non-finite) vector.
EmbeddingVector normalized(const EmbeddingVector& v);
double cosine_similarity(const EmbeddingVector& a, const EmbeddingVector& b);

// Providers are shared across worker threads; implementations must be safe
// to call concurrently through a const reference.
class CompletionProvider {
 public:
  virtual ~CompletionProvider() = default;
  virtual std::string id() const = 0;
  virtual std::vector<std::string> generate(const CompletionRequest& req) const = 0;
};

class EmbeddingProvider {
 public:
  virtual ~EmbeddingProvider() = default;
  virtual std::string id() const = 0;
  virtual std::vector<EmbeddingVector> embed_batch(const std::vector<std::string>& texts) const = 0;
};

// Validated entry points. complete() rejects zero-choice replies with an
// EmptyResponse error; embed() checks count and dimension consistency.
CompletionResponse complete(const CompletionProvider& provider, const CompletionRequest& req);
std::vector<EmbeddingVector> embed(const EmbeddingProvider& provider,
                                   const std::vector<std::string>& texts);

// Keyword fixture table for the mock completion provider, in file order.
struct MockFixture {
  std::string keyword;
  std::vector<std::string> answers;
};

std::vector<MockFixture> load_mock_fixtures(const std::string& path);

// Deterministic offline completion provider. The first fixture whose keyword
// occurs in the query part of the prompt supplies the leading choices (the
// longest keyword wins); remaining choices come from a generic bank indexed
// by a seeded hash of (query, choice index). Output is a pure function of
// (prompt, seed, num_choices).
class MockCompletionProvider final : public CompletionProvider {
 public:
  explicit MockCompletionProvider(std::vector<MockFixture> fixtures = {}, std::uint64_t seed = 0);

  std::string id() const override { return "mock-completion"; }
  std::vector<std::string> generate(const CompletionRequest& req) const override;

  // The caption part of a prompt: text after the last "Input:" line marker,
  // or the whole prompt when there is none.
  static std::string query_of(const std::string& prompt);

 private:
  std::vector<MockFixture> fixtures_;
  std::uint64_t seed_;
};

// Bag-of-words hash projection: each token maps to a seeded pseudo-random
// vector in [-1, 1]^dim and a text embeds as the sum over its tokens. Texts
// sharing words land close together, which is all pooling needs.
class MockEmbeddingProvider final : public EmbeddingProvider {
 public:
  explicit MockEmbeddingProvider(std::size_t dim = 64, std::uint64_t seed = 0);

  std::string id() const override;
  std::vector<EmbeddingVector> embed_batch(const std::vector<std::string>& texts) const override;
  std::size_t dim() const noexcept { return dim_; }

 private:
  std::size_t dim_;
  std::uint64_t seed_;
};

template <typename T>
struct Outcome {
  std::optional<T> value;
  std::exception_ptr error;

  bool ok() const noexcept { return value.has_value(); }
};

// Runs fn over items with at most max_in_flight concurrent calls and returns
// the results in input order. Exceptions are captured per item.
template <typename In, typename Fn>
auto bounded_map(const std::vector<In>& items, std::size_t max_in_flight, Fn&& fn)
    -> std::vector<Outcome<std::invoke_result_t<Fn&, const In&>>> {
  using Out = std::invoke_result_t<Fn&, const In&>;
  std::vector<Outcome<Out>> results(items.size());
  if (items.empty()) return results;
  if (max_in_flight == 0) throw Error(ErrorKind::InvalidConfig, "max_in_flight must be >= 1");

  std::atomic<std::size_t> cursor{0};
  auto worker = [&] {
    for (;;) {
      const std::size_t i = cursor.fetch_add(1);
      if (i >= items.size()) return;
      try {
        results[i].value.emplace(fn(items[i]));
      } catch (...) {
        results[i].error = std::current_exception();
      }
    }
  };
  const std::size_t n_workers = std::min(max_in_flight, items.size());
  {
    std::vector<std::jthread> pool;
    pool.reserve(n_workers);
    for (std::size_t w = 0; w < n_workers; ++w) pool.emplace_back(worker);
  }
  return results;
}

}  // namespace cake
