#include "cakeforge/http_provider.hpp"

#include <httplib.h>

#include <cstdlib>
#include <iostream>
#include <nlohmann/json.hpp>
#include <thread>

#include "cakeforge/text_util.hpp"

namespace cake {

using nlohmann::json;

std::chrono::milliseconds RetryPolicy::backoff(int attempt, std::optional<double> retry_after) const {
  auto delay = base_delay;
  for (int i = 1; i < attempt && delay < max_delay; ++i) delay *= 2;
  delay = std::min(delay, max_delay);
  if (retry_after && *retry_after >= 0.0) {
    const auto hinted = std::chrono::milliseconds(static_cast<long long>(*retry_after * 1000.0));
    delay = std::max(delay, hinted);
  }
  return delay;
}

std::optional<std::string> api_key_from_env() {
  const char* v = std::getenv("CAKE_FORGE_API_KEY");
  if (!v || !*v) return std::nullopt;
  return std::string(v);
}

HttpProvider::HttpProvider(HttpSettings settings)
    : settings_(std::move(settings)),
      sleep_([](std::chrono::milliseconds d) { std::this_thread::sleep_for(d); }) {
  const auto& url = settings_.base_url;
  const auto scheme_end = url.find("://");
  if (scheme_end == std::string::npos)
    throw Error(ErrorKind::InvalidConfig, "base_url must include a scheme: " + url);
  const auto path_start = url.find('/', scheme_end + 3);
  origin_ = url.substr(0, path_start);
  path_prefix_ = path_start == std::string::npos ? "" : url.substr(path_start);
  while (!path_prefix_.empty() && path_prefix_.back() == '/') path_prefix_.pop_back();
  if (settings_.retry.max_attempts < 1)
    throw Error(ErrorKind::InvalidConfig, "retry max_attempts must be >= 1");
}

std::string HttpProvider::id() const {
  return "openai-compatible:" + settings_.completion_model + "|" + settings_.embedding_model;
}

std::string HttpProvider::post_json(const std::string& path, const std::string& body) const {
  httplib::Headers headers;
  if (settings_.api_key) headers.emplace("Authorization", "Bearer " + *settings_.api_key);

  const std::string full_path = path_prefix_ + path;
  std::optional<Error> last;
  for (int attempt = 1; attempt <= settings_.retry.max_attempts; ++attempt) {
    httplib::Client client(origin_);
    client.set_connection_timeout(settings_.timeout);
    client.set_read_timeout(settings_.timeout);
    client.set_write_timeout(settings_.timeout);

    auto res = client.Post(full_path, headers, body, "application/json");
    if (!res) {
      last = Error(ErrorKind::Transport, "POST " + full_path + ": " + httplib::to_string(res.error()));
    } else if (res->status >= 200 && res->status < 300) {
      return res->body;
    } else if (res->status == 429) {
      Error e(ErrorKind::RateLimit, "POST " + full_path + " returned 429");
      if (res->has_header("Retry-After")) {
        try {
          e.with_retry_after(std::stod(res->get_header_value("Retry-After")));
        } catch (const std::exception&) {
          // HTTP-date form; fall back to plain backoff
        }
      }
      last = e;
    } else if (res->status >= 500) {
      last = Error(ErrorKind::Transport, "POST " + full_path + " returned " + std::to_string(res->status));
    } else {
      throw Error(ErrorKind::HttpStatus, "POST " + full_path + " returned " + std::to_string(res->status));
    }
    if (attempt < settings_.retry.max_attempts) {
      const auto delay = settings_.retry.backoff(attempt, last->retry_after());
      std::cerr << "[cake-forge] retrying " << full_path << " in " << delay.count() << " ms ("
                << last->what() << ")\n";
      sleep_(delay);
    }
  }
  throw *last;
}

std::vector<std::string> HttpProvider::parse_completions(const std::string& body) {
  json doc;
  try {
    doc = json::parse(body);
  } catch (const json::exception& e) {
    throw Error(ErrorKind::Protocol, std::string("completion payload is not JSON: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("choices") || !doc["choices"].is_array())
    throw Error(ErrorKind::Protocol, "completion payload lacks a choices array");
  std::vector<std::string> out;
  for (const auto& c : doc["choices"]) {
    if (!c.is_object() || !c.contains("text") || !c["text"].is_string())
      throw Error(ErrorKind::Protocol, "completion choice lacks a text field");
    out.push_back(c["text"].get<std::string>());
  }
  if (out.empty()) throw Error(ErrorKind::EmptyResponse, "completion payload has zero choices");
  return out;
}

std::vector<EmbeddingVector> HttpProvider::parse_embeddings(const std::string& body, std::size_t expected) {
  json doc;
  try {
    doc = json::parse(body);
  } catch (const json::exception& e) {
    throw Error(ErrorKind::Protocol, std::string("embedding payload is not JSON: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("data") || !doc["data"].is_array())
    throw Error(ErrorKind::Protocol, "embedding payload lacks a data array");
  std::vector<EmbeddingVector> out;
  for (const auto& item : doc["data"]) {
    if (!item.is_object() || !item.contains("embedding") || !item["embedding"].is_array())
      throw Error(ErrorKind::Protocol, "embedding item lacks an embedding list");
    EmbeddingVector v;
    for (const auto& x : item["embedding"]) {
      if (!x.is_number()) throw Error(ErrorKind::Protocol, "non-numeric embedding component");
      v.values.push_back(x.get<double>());
    }
    out.push_back(std::move(v));
  }
  if (out.size() != expected)
    throw Error(ErrorKind::Protocol, "expected " + std::to_string(expected) + " embeddings, got " +
                                         std::to_string(out.size()));
  for (const auto& v : out)
    if (v.dim() != out.front().dim()) throw Error(ErrorKind::Protocol, "embedding dimension mismatch in batch");
  return out;
}

std::vector<std::string> HttpProvider::generate(const CompletionRequest& req) const {
  json body = {{"model", settings_.completion_model},
               {"prompt", req.prompt},
               {"temperature", req.temperature},
               {"max_tokens", req.max_tokens},
               {"n", req.num_choices}};
  if (!req.stop_sequences.empty()) body["stop"] = req.stop_sequences;
  return parse_completions(post_json("/completions", body.dump()));
}

std::vector<EmbeddingVector> HttpProvider::embed_batch(const std::vector<std::string>& texts) const {
  std::vector<EmbeddingVector> out;
  out.reserve(texts.size());
  const std::size_t step = std::max<std::size_t>(1, settings_.embedding_batch_size);
  for (std::size_t b = 0; b < texts.size(); b += step) {
    const auto e = std::min(texts.size(), b + step);
    std::vector<std::string> chunk(texts.begin() + static_cast<std::ptrdiff_t>(b),
                                   texts.begin() + static_cast<std::ptrdiff_t>(e));
    json body = {{"model", settings_.embedding_model}, {"input", chunk}};
    auto part = parse_embeddings(post_json("/embeddings", body.dump()), chunk.size());
    for (auto& v : part) out.push_back(std::move(v));
  }
  return out;
}

}  // namespace cake
