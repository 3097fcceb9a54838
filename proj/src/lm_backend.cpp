#include "cakeforge/lm_backend.hpp"

#include <cmath>
#include <nlohmann/json.hpp>

#include "cakeforge/analytics.hpp"
#include "cakeforge/rng.hpp"
#include "cakeforge/text_util.hpp"

namespace cake {

void validate(const CompletionRequest& req) {
  if (req.num_choices < 1) throw Error(ErrorKind::InvalidInput, "num_choices must be >= 1");
  if (req.max_tokens < 1) throw Error(ErrorKind::InvalidInput, "max_tokens must be >= 1");
  if (!(req.temperature >= 0.0 && req.temperature <= 2.0))
    throw Error(ErrorKind::InvalidInput, "temperature must lie in [0, 2]");
}

double l2_norm(const EmbeddingVector& v) {
  double s = 0.0;
  for (double x : v.values) s += x * x;
  return std::sqrt(s);
}

EmbeddingVector normalized(const EmbeddingVector& v) {
  const double n = l2_norm(v);
  if (!(n > 0.0) || !std::isfinite(n))
    throw Error(ErrorKind::InvalidInput, "cannot normalize a zero or non-finite vector");
  EmbeddingVector out = v;
  for (double& x : out.values) x /= n;
  return out;
}

double cosine_similarity(const EmbeddingVector& a, const EmbeddingVector& b) {
  if (a.dim() != b.dim()) throw Error(ErrorKind::InvalidInput, "dimension mismatch");
  const auto na = normalized(a), nb = normalized(b);
  double dot = 0.0;
  for (std::size_t i = 0; i < na.dim(); ++i) dot += na.values[i] * nb.values[i];
  return dot;
}

CompletionResponse complete(const CompletionProvider& provider, const CompletionRequest& req) {
  validate(req);
  const auto start = std::chrono::steady_clock::now();
  CompletionResponse resp;
  resp.choices = provider.generate(req);
  resp.raw_latency = std::chrono::steady_clock::now() - start;
  resp.provider_id = provider.id();
  if (resp.choices.empty())
    throw Error(ErrorKind::EmptyResponse, "provider " + resp.provider_id + " returned no choices");
  return resp;
}

std::vector<EmbeddingVector> embed(const EmbeddingProvider& provider,
                                   const std::vector<std::string>& texts) {
  if (texts.empty()) throw Error(ErrorKind::InvalidInput, "embed requires at least one text");
  for (std::size_t i = 0; i < texts.size(); ++i)
    if (text::trim(texts[i]).empty())
      throw Error(ErrorKind::InvalidInput, "text " + std::to_string(i) + " is empty");

  auto out = provider.embed_batch(texts);
  if (out.size() != texts.size())
    throw Error(ErrorKind::Protocol, "expected " + std::to_string(texts.size()) +
                                         " embeddings, got " + std::to_string(out.size()));
  const std::size_t dim = out.front().dim();
  if (dim == 0) throw Error(ErrorKind::Protocol, "zero-length embedding");
  for (const auto& v : out)
    if (v.dim() != dim) throw Error(ErrorKind::Protocol, "embedding dimension mismatch in batch");
  return out;
}

std::vector<MockFixture> load_mock_fixtures(const std::string& path) {
  nlohmann::ordered_json doc;
  try {
    doc = nlohmann::ordered_json::parse(text::read_file(path));
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::Parse, path + ": " + e.what());
  }
  if (!doc.is_object()) throw Error(ErrorKind::Parse, path + ": expected an object keyword -> answers");
  std::vector<MockFixture> fixtures;
  for (const auto& [key, value] : doc.items()) {
    if (!value.is_array()) throw Error(ErrorKind::Parse, path + ": answers for '" + key + "' must be a list");
    MockFixture f{key, {}};
    for (const auto& a : value) {
      if (!a.is_string()) throw Error(ErrorKind::Parse, path + ": non-string answer under '" + key + "'");
      f.answers.push_back(a.get<std::string>());
    }
    fixtures.push_back(std::move(f));
  }
  return fixtures;
}

namespace {

constexpr const char* kBankVerbs[] = {
    "win", "catch", "find", "reach", "help", "show", "enjoy", "practice", "impress", "escape",
    "finish", "protect", "clean", "entertain", "celebrate", "relax", "learn", "teach", "earn",
    "avoid", "meet", "prepare", "feed", "fix", "build", "save", "explore", "record", "share",
    "comfort", "warm up", "cool down", "get", "test", "greet", "support", "follow", "sell",
    "promote", "stay"};
constexpr const char* kBankObjects[] = {
    "the game", "the bus", "a friend", "the audience", "some money", "the trophy", "the dog",
    "the children", "the car", "the house", "the crowd", "a new skill", "the team", "the food",
    "the music", "the rain", "the family", "the prize", "a good time", "the camera",
    "the customers", "the class", "the river", "the garden", "the record", "the show",
    "the baby", "the neighbors", "the match", "the party", "the video", "a break",
    "the weather", "the stage", "the ball", "the fans", "the machine", "the story",
    "the kitchen", "the mountain"};
// Noise shapes observed from real LMs; cleaned or filtered downstream.
constexpr const char* kNoise[] = {"i don't know", "I think", "question", "i mean i know"};

std::string bank_answer(std::uint64_t h) {
  constexpr std::size_t nv = std::size(kBankVerbs), no = std::size(kBankObjects);
  std::string core = std::string("to ") + kBankVerbs[h % nv] + " " + kBankObjects[(h >> 17) % no];
  switch ((h >> 40) % 32) {
    case 0: return kNoise[(h >> 45) % std::size(kNoise)];
    case 1: return "1. " + core;
    case 2: return "Output: " + core;
    case 3: return "\"" + core + "\"";
    case 4: return core + "\nInput: unrelated continuation";
    default: return core;
  }
}

}  // namespace

MockCompletionProvider::MockCompletionProvider(std::vector<MockFixture> fixtures, std::uint64_t seed)
    : fixtures_(std::move(fixtures)), seed_(seed) {}

std::string MockCompletionProvider::query_of(const std::string& prompt) {
  constexpr std::string_view marker = "Input:";
  const auto pos = prompt.rfind(marker);
  if (pos == std::string::npos) return prompt;
  auto rest = prompt.substr(pos + marker.size());
  const auto nl = rest.find('\n');
  return text::trim(nl == std::string::npos ? rest : rest.substr(0, nl));
}

std::vector<std::string> MockCompletionProvider::generate(const CompletionRequest& req) const {
  const std::string query = text::to_lower(query_of(req.prompt));
  const std::uint64_t seed = req.seed.value_or(seed_);

  const MockFixture* match = nullptr;
  for (const auto& f : fixtures_) {
    if (f.keyword.empty() || query.find(text::to_lower(f.keyword)) == std::string::npos) continue;
    if (!match || f.keyword.size() > match->keyword.size()) match = &f;
  }

  std::vector<std::string> out;
  out.reserve(static_cast<std::size_t>(req.num_choices));
  const std::uint64_t base = splitmix64(fnv1a64(query) ^ splitmix64(seed));
  for (int i = 0; i < req.num_choices; ++i) {
    const auto idx = static_cast<std::size_t>(i);
    if (match && idx < match->answers.size())
      out.push_back(match->answers[idx]);
    else
      out.push_back(bank_answer(splitmix64(base + static_cast<std::uint64_t>(i))));
  }
  return out;
}

MockEmbeddingProvider::MockEmbeddingProvider(std::size_t dim, std::uint64_t seed) : dim_(dim), seed_(seed) {
  if (dim_ == 0) throw Error(ErrorKind::InvalidConfig, "embedding dim must be >= 1");
}

std::string MockEmbeddingProvider::id() const { return "mock-embedding/dim" + std::to_string(dim_); }

std::vector<EmbeddingVector> MockEmbeddingProvider::embed_batch(const std::vector<std::string>& texts) const {
  std::vector<EmbeddingVector> out;
  out.reserve(texts.size());
  for (const auto& t : texts) {
    auto tokens = tokenize(t);
    if (tokens.empty()) tokens.push_back(text::trim(t));
    EmbeddingVector v{std::vector<double>(dim_, 0.0)};
    for (const auto& tok : tokens) {
      std::uint64_t state = splitmix64(fnv1a64(tok) ^ splitmix64(seed_ + 1));
      for (std::size_t d = 0; d < dim_; ++d) {
        state = splitmix64(state);
        v.values[d] += static_cast<double>(state >> 11) * 0x1.0p-52 - 1.0;
      }
    }
    out.push_back(std::move(v));
  }
  return out;
}

}  // namespace cake
