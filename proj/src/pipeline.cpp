#include "cakeforge/pipeline.hpp"

#include <filesystem>
#include <iostream>
#include <map>
#include <nlohmann/json.hpp>
#include <set>

#include "cakeforge/digest.hpp"
#include "cakeforge/error.hpp"
#include "cakeforge/http_provider.hpp"
#include "cakeforge/question_gen.hpp"
#include "cakeforge/rng.hpp"
#include "cakeforge/text_util.hpp"

namespace cake {

using nlohmann::json;
namespace fs = std::filesystem;

// ---------------------------------------------------------------------------
// Config

namespace {

// Reads known keys from one config section and rejects the rest.
class Section {
 public:
  Section(const json& obj, std::string name) : obj_(obj), name_(std::move(name)) {
    if (!obj_.is_object()) throw Error(ErrorKind::InvalidConfig, "section '" + name_ + "' must be an object");
  }

  template <typename T>
  void get(const char* key, T& out) {
    seen_.insert(key);
    if (!obj_.contains(key)) return;
    try {
      out = obj_.at(key).get<T>();
    } catch (const json::exception& e) {
      throw Error(ErrorKind::InvalidConfig, name_ + "." + key + ": " + e.what());
    }
  }

  const json* sub(const char* key) {
    seen_.insert(key);
    return obj_.contains(key) ? &obj_.at(key) : nullptr;
  }

  void finish() const {
    for (const auto& [k, _] : obj_.items())
      if (!seen_.contains(k)) throw Error(ErrorKind::InvalidConfig, "unknown key '" + name_ + "." + k + "'");
  }

 private:
  const json& obj_;
  std::string name_;
  std::set<std::string> seen_;
};

json to_json(const PipelineConfig& c) {
  json j;
  j["seed"] = c.seed;
  j["max_in_flight"] = c.max_in_flight;
  j["max_candidates_per_caption"] = c.max_candidates_per_caption;
  j["provider"] = {{"kind", c.provider.kind},
                   {"base_url", c.provider.base_url},
                   {"completion_model", c.provider.completion_model},
                   {"embedding_model", c.provider.embedding_model},
                   {"mock_fixtures", c.provider.mock_fixtures},
                   {"mock_embedding_dim", c.provider.mock_embedding_dim},
                   {"mock_seed", c.provider.mock_seed},
                   {"timeout_s", c.provider.timeout_s},
                   {"max_attempts", c.provider.max_attempts},
                   {"backoff_base_ms", c.provider.backoff_base_ms},
                   {"embedding_batch_size", c.provider.embedding_batch_size}};
  j["prompt"] = {{"kind", c.prompt.kind},
                 {"examples_path", c.prompt.examples_path},
                 {"num_examples", c.prompt.num_examples},
                 {"top_k", c.prompt.top_k},
                 {"max_len", c.prompt.max_len}};
  j["completion"] = {{"temperature", c.completion.temperature},
                     {"max_tokens", c.completion.max_tokens},
                     {"num_choices", c.completion.num_choices},
                     {"stop", c.completion.stop_sequences}};
  std::vector<std::string> filler(c.filter.filler.begin(), c.filter.filler.end());
  std::sort(filler.begin(), filler.end());
  j["filter"] = {{"min_tokens", c.filter.min_tokens},
                 {"max_tokens_answer", c.filter.max_tokens_answer},
                 {"paraphrase_jaccard", c.filter.paraphrase_jaccard},
                 {"filler", filler}};
  j["corrector"] = {{"kind", c.corrector.kind}, {"base_url", c.corrector.base_url}, {"model", c.corrector.model}};
  j["pool"] = {{"num_pools", c.pool.num_pools},
               {"num_distractors", c.pool.num_distractors},
               {"max_iterations", c.pool.max_iterations},
               {"tolerance", c.pool.tolerance}};
  j["train"] = {{"learning_rate", c.train.learning_rate},
                {"max_epochs", c.train.max_epochs},
                {"margin", c.train.margin},
                {"plateau_patience", c.train.plateau_patience},
                {"lr_decay_factor", c.train.lr_decay_factor}};
  return j;
}

void check(const PipelineConfig& c) {
  if (c.provider.kind != "mock" && c.provider.kind != "http")
    throw Error(ErrorKind::InvalidConfig, "provider.kind must be 'mock' or 'http'");
  if (c.corrector.kind != "rules" && c.corrector.kind != "http")
    throw Error(ErrorKind::InvalidConfig, "corrector.kind must be 'rules' or 'http'");
  parse_prompt_kind(c.prompt.kind);
  if (c.max_in_flight < 1) throw Error(ErrorKind::InvalidConfig, "max_in_flight must be >= 1");
  if (c.pool.num_distractors < 1) throw Error(ErrorKind::InvalidConfig, "pool.num_distractors must be >= 1");
  if (c.pool.num_distractors != kDefaultDistractors)
    throw Error(ErrorKind::InvalidConfig, "the CSV layout fixes five options, so pool.num_distractors must be 4");
  try {
    validate(c.completion);
  } catch (const Error& e) {
    throw Error(ErrorKind::InvalidConfig, e.what());
  }
  validate(c.train);
}

}  // namespace

PipelineConfig parse_config(const std::string& json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::exception& e) {
    throw Error(ErrorKind::InvalidConfig, std::string("config is not valid JSON: ") + e.what());
  }
  PipelineConfig c;
  Section root(doc, "config");
  root.get("seed", c.seed);
  root.get("max_in_flight", c.max_in_flight);
  root.get("max_candidates_per_caption", c.max_candidates_per_caption);
  if (const auto* s = root.sub("provider")) {
    Section p(*s, "provider");
    p.get("kind", c.provider.kind);
    p.get("base_url", c.provider.base_url);
    p.get("completion_model", c.provider.completion_model);
    p.get("embedding_model", c.provider.embedding_model);
    p.get("mock_fixtures", c.provider.mock_fixtures);
    p.get("mock_embedding_dim", c.provider.mock_embedding_dim);
    p.get("mock_seed", c.provider.mock_seed);
    p.get("timeout_s", c.provider.timeout_s);
    p.get("max_attempts", c.provider.max_attempts);
    p.get("backoff_base_ms", c.provider.backoff_base_ms);
    p.get("embedding_batch_size", c.provider.embedding_batch_size);
    p.finish();
  }
  if (const auto* s = root.sub("prompt")) {
    Section p(*s, "prompt");
    p.get("kind", c.prompt.kind);
    p.get("examples_path", c.prompt.examples_path);
    p.get("num_examples", c.prompt.num_examples);
    p.get("top_k", c.prompt.top_k);
    p.get("max_len", c.prompt.max_len);
    p.finish();
  }
  if (const auto* s = root.sub("completion")) {
    Section p(*s, "completion");
    p.get("temperature", c.completion.temperature);
    p.get("max_tokens", c.completion.max_tokens);
    p.get("num_choices", c.completion.num_choices);
    p.get("stop", c.completion.stop_sequences);
    p.finish();
  }
  if (const auto* s = root.sub("filter")) {
    Section p(*s, "filter");
    p.get("min_tokens", c.filter.min_tokens);
    p.get("max_tokens_answer", c.filter.max_tokens_answer);
    p.get("paraphrase_jaccard", c.filter.paraphrase_jaccard);
    std::vector<std::string> filler(c.filter.filler.begin(), c.filter.filler.end());
    p.get("filler", filler);
    c.filter.filler = {filler.begin(), filler.end()};
    p.finish();
  }
  if (const auto* s = root.sub("corrector")) {
    Section p(*s, "corrector");
    p.get("kind", c.corrector.kind);
    p.get("base_url", c.corrector.base_url);
    p.get("model", c.corrector.model);
    p.finish();
  }
  if (const auto* s = root.sub("pool")) {
    Section p(*s, "pool");
    p.get("num_pools", c.pool.num_pools);
    p.get("num_distractors", c.pool.num_distractors);
    p.get("max_iterations", c.pool.max_iterations);
    p.get("tolerance", c.pool.tolerance);
    p.finish();
  }
  if (const auto* s = root.sub("train")) {
    Section p(*s, "train");
    p.get("learning_rate", c.train.learning_rate);
    p.get("max_epochs", c.train.max_epochs);
    p.get("margin", c.train.margin);
    p.get("plateau_patience", c.train.plateau_patience);
    p.get("lr_decay_factor", c.train.lr_decay_factor);
    p.finish();
  }
  root.finish();
  check(c);
  return c;
}

PipelineConfig load_config(const std::string& path) {
  std::string content;
  try {
    content = text::read_file(path);
  } catch (const Error& e) {
    throw Error(ErrorKind::InvalidConfig, e.what());
  }
  auto cfg = parse_config(content);
  // Relative data paths are taken relative to the config file.
  const auto base = std::filesystem::path(path).parent_path();
  for (auto* p : {&cfg.provider.mock_fixtures, &cfg.prompt.examples_path}) {
    if (!p->empty() && std::filesystem::path(*p).is_relative()) *p = (base / *p).lexically_normal().string();
  }
  return cfg;
}

std::string canonical_config(const PipelineConfig& cfg) { return to_json(cfg).dump(); }

std::string config_hash(const PipelineConfig& cfg) { return sha256_hex(canonical_config(cfg)); }

// ---------------------------------------------------------------------------
// Providers

Providers make_providers(const PipelineConfig& cfg) {
  check(cfg);
  Providers p;
  if (cfg.provider.kind == "mock") {
    std::vector<MockFixture> fixtures;
    if (!cfg.provider.mock_fixtures.empty()) {
      try {
        fixtures = load_mock_fixtures(cfg.provider.mock_fixtures);
      } catch (const Error& e) {
        throw Error(ErrorKind::InvalidConfig, e.what());
      }
    }
    p.completion = std::make_shared<MockCompletionProvider>(std::move(fixtures), cfg.provider.mock_seed);
    p.embedding = std::make_shared<MockEmbeddingProvider>(cfg.provider.mock_embedding_dim, cfg.provider.mock_seed);
    return p;
  }
  HttpSettings s;
  s.base_url = cfg.provider.base_url;
  s.completion_model = cfg.provider.completion_model;
  s.embedding_model = cfg.provider.embedding_model;
  s.api_key = api_key_from_env();
  s.timeout = std::chrono::seconds(cfg.provider.timeout_s);
  s.retry.max_attempts = cfg.provider.max_attempts;
  s.retry.base_delay = std::chrono::milliseconds(cfg.provider.backoff_base_ms);
  s.embedding_batch_size = cfg.provider.embedding_batch_size;
  auto http = std::make_shared<HttpProvider>(std::move(s));
  p.completion = http;
  p.embedding = http;
  return p;
}

PromptSpec make_prompt_spec(const PipelineConfig& cfg) {
  PromptSpec spec;
  spec.kind = parse_prompt_kind(cfg.prompt.kind);
  spec.top_k = cfg.prompt.top_k;
  spec.max_len = cfg.prompt.max_len;
  if (spec.kind == PromptKind::FewShot) {
    auto pack = cfg.prompt.examples_path.empty() ? default_few_shot_examples()
                                                 : load_few_shot_examples(cfg.prompt.examples_path);
    Rng rng(derive_seed(cfg.seed, "fewshot"));
    spec.examples = select_few_shot(std::move(pack), cfg.prompt.num_examples, rng);
  }
  validate(spec);
  return spec;
}

// ---------------------------------------------------------------------------
// Manifests

namespace {

std::string basename_of(const std::string& path) { return fs::path(path).filename().string(); }

json input_entry(const std::string& path) {
  return {{"file", basename_of(path)}, {"sha256", file_sha256_hex(path)}};
}

json base_manifest(const std::string& stage, const PipelineConfig* cfg) {
  json m;
  m["tool"] = "cake-forge";
  m["manifest_version"] = 1;
  m["stage"] = stage;
  if (cfg) {
    m["config_hash"] = config_hash(*cfg);
    m["master_seed"] = cfg->seed;
  }
  return m;
}

void write_manifest(const std::string& output_path, const json& manifest) {
  text::write_file(output_path + ".manifest.json", manifest.dump(2) + "\n");
}

void log_line(const std::string& msg) { std::cerr << "[cake-forge] " << msg << "\n"; }

}  // namespace

// ---------------------------------------------------------------------------
// generate

GenerateReport run_generate(const PipelineConfig& cfg, const Providers& providers, const std::string& captions_path,
                            const std::string& out_path, bool strict) {
  const auto captions = load_captions(captions_path);
  const auto spec = make_prompt_spec(cfg);
  CompletionRequest req = cfg.completion;
  req.seed = derive_seed(cfg.seed, "completion");
  ExtractionOptions opts{cfg.filter, cfg.max_candidates_per_caption};

  const auto outcomes = bounded_map(captions, cfg.max_in_flight, [&](const CaptionRecord& rec) {
    return extract_intentions(rec, *providers.completion, spec, req, opts);
  });

  GenerateReport report;
  report.captions_in = captions.size();
  std::vector<ResponseRecord> records;
  for (std::size_t i = 0; i < captions.size(); ++i) {
    const auto& o = outcomes[i];
    if (!o.ok()) {
      try {
        std::rethrow_exception(o.error);
      } catch (const Error& e) {
        if (!e.provider_failure() || strict) throw;
        log_line("skipping " + captions[i].video_id + ": " + e.what());
        ++report.skipped;
        continue;
      }
    }
    report.responses_out += o.value->size();
    report.filtered += static_cast<std::size_t>(req.num_choices) - std::min<std::size_t>(o.value->size(), req.num_choices);
    records.push_back(to_response_record(captions[i], *o.value));
  }
  write_responses(out_path, records);

  auto m = base_manifest("generate", &cfg);
  m["seeds"] = {{"fewshot", derive_seed(cfg.seed, "fewshot")}, {"completion", *req.seed}};
  m["providers"] = {{"completion", providers.completion->id()}};
  m["prompt"] = {{"kind", to_string(spec.kind)}, {"examples", spec.examples.size()}};
  m["inputs"] = json::array({input_entry(captions_path)});
  m["outputs"] = json::array({basename_of(out_path)});
  m["counts"] = {{"captions_in", report.captions_in},
                 {"responses_out", report.responses_out},
                 {"filtered", report.filtered},
                 {"skipped", report.skipped}};
  write_manifest(out_path, m);
  return report;
}

// ---------------------------------------------------------------------------
// build

namespace {

struct FlatResponse {
  std::size_t caption_index;
  std::size_t choice_index;
  std::string text;
};

std::string format_real(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace

BuildReport run_build(const PipelineConfig& cfg, const Providers& providers, const std::string& responses_path,
                      const std::string& out_csv) {
  const auto responses = read_responses(responses_path);

  std::vector<FlatResponse> flat;
  std::vector<std::string> texts;
  for (std::size_t c = 0; c < responses.size(); ++c) {
    for (std::size_t k = 0; k < responses[c].candidates.size(); ++k) {
      flat.push_back({c, responses[c].choice_indices[k], responses[c].candidates[k]});
      texts.push_back(responses[c].candidates[k]);
    }
  }
  std::set<std::string> distinct;
  for (const auto& t : texts) distinct.insert(text::normalize_key(t));
  if (distinct.size() < cfg.pool.num_distractors + 1)
    throw Error(ErrorKind::InsufficientCorpus, "need at least " + std::to_string(cfg.pool.num_distractors + 1) +
                                                   " distinct responses, found " + std::to_string(distinct.size()));

  const auto embeddings = embed(*providers.embedding, texts);

  PoolConfig pc;
  pc.num_pools = cfg.pool.num_pools ? cfg.pool.num_pools : default_num_pools(texts.size());
  pc.num_distractors = cfg.pool.num_distractors;
  pc.max_iterations = cfg.pool.max_iterations;
  pc.tolerance = cfg.pool.tolerance;
  pc.seed = derive_seed(cfg.seed, "pooling");
  const auto pools = cluster_responses(embeddings, pc);

  // Questions are drawn per caption in file order before any record work.
  std::shared_ptr<HttpProvider> corrector_backend;
  Corrector corrector = default_gc;
  if (cfg.corrector.kind == "http") {
    HttpSettings s;
    s.base_url = cfg.corrector.base_url.empty() ? cfg.provider.base_url : cfg.corrector.base_url;
    s.completion_model = cfg.corrector.model;
    s.api_key = api_key_from_env();
    s.retry.max_attempts = cfg.provider.max_attempts;
    s.retry.base_delay = std::chrono::milliseconds(cfg.provider.backoff_base_ms);
    corrector_backend = std::make_shared<HttpProvider>(std::move(s));
    corrector = make_completion_corrector(*corrector_backend);
  }
  BuildReport report;
  Rng qrng(derive_seed(cfg.seed, "questions"));
  std::vector<QuestionDraft> questions;
  questions.reserve(responses.size());
  for (const auto& r : responses) {
    questions.push_back(make_question(r.caption, qrng, corrector));
    report.corrector_fallbacks += questions.back().corrector_failed;
  }

  const std::uint64_t record_seed = derive_seed(cfg.seed, "records");
  std::vector<MCQRecord> records;
  records.reserve(flat.size());
  json provenance = json::array();
  std::set<std::string> qids;
  for (std::size_t r = 0; r < flat.size(); ++r) {
    const auto& f = flat[r];
    const auto& src = responses[f.caption_index];
    Rng rng(derive_seed(record_seed, static_cast<std::uint64_t>(r)));
    const auto draw = sample_distractors(r, texts, pools, pc, rng);
    std::vector<std::string> distractor_texts;
    for (const auto& d : draw.distractors) distractor_texts.push_back(d.text);
    const auto assembled = assemble_options(f.text, distractor_texts, rng);

    MCQRecord rec;
    rec.video_id = src.video_id;
    rec.qid = make_qid(src.video_id, f.choice_index);
    rec.question = questions[f.caption_index].q;
    for (std::size_t i = 0; i < kNumOptions; ++i) rec.options[i] = assembled.options[i];
    rec.answer = static_cast<int>(assembled.correct_index);
    validate(rec);
    if (!qids.insert(rec.qid).second) throw Error(ErrorKind::DuplicateId, "duplicate qid " + rec.qid);

    json dj = json::array();
    for (const auto& d : draw.distractors) dj.push_back({{"response_index", d.response_index}, {"pool_id", d.pool_id}});
    provenance.push_back({{"qid", rec.qid},
                          {"answer_response_index", r},
                          {"pool_id", pools.assignment[r]},
                          {"distractors", dj},
                          {"fallback", draw.used_fallback}});
    report.fallback_records += draw.used_fallback;
    records.push_back(std::move(rec));
  }
  report.records = records.size();
  report.num_pools = pools.num_pools();

  emit_csv(records, out_csv);

  std::string pools_out;
  for (std::size_t i = 0; i < pools.assignment.size(); ++i)
    pools_out += json{{"response_index", i}, {"pool_id", pools.assignment[i]}}.dump() + "\n";
  text::write_file(out_csv + ".pools.jsonl", pools_out);
  std::string centroids_out;
  for (const auto& c : pools.centroids) {
    for (std::size_t d = 0; d < c.dim(); ++d) centroids_out += (d ? "," : "") + format_real(c.values[d]);
    centroids_out += "\n";
  }
  text::write_file(out_csv + ".centroids.csv", centroids_out);

  auto m = base_manifest("build", &cfg);
  m["seeds"] = {{"pooling", pc.seed}, {"questions", derive_seed(cfg.seed, "questions")}, {"records", record_seed}};
  m["providers"] = {{"embedding", providers.embedding->id()},
                    {"corrector", corrector_backend ? corrector_backend->id() : std::string("rules")}};
  m["inputs"] = json::array({input_entry(responses_path)});
  m["outputs"] = json::array({basename_of(out_csv), basename_of(out_csv) + ".pools.jsonl",
                              basename_of(out_csv) + ".centroids.csv"});
  m["pooling"] = {{"num_pools", pc.num_pools}, {"iterations", pools.iterations}};
  m["counts"] = {{"responses", texts.size()},
                 {"records", report.records},
                 {"fallback_records", report.fallback_records},
                 {"corrector_fallbacks", report.corrector_fallbacks}};
  m["responses"] = texts;
  m["records"] = std::move(provenance);
  write_manifest(out_csv, m);
  return report;
}

// ---------------------------------------------------------------------------
// train / eval

std::vector<TrainingExample> featurize_records(const std::vector<MCQRecord>& records,
                                               const EmbeddingProvider& provider) {
  std::map<std::string, std::size_t> index;
  std::vector<std::string> unique;
  auto intern = [&](const std::string& t) {
    auto [it, inserted] = index.emplace(t, unique.size());
    if (inserted) unique.push_back(t);
    return it->second;
  };
  std::vector<std::array<std::size_t, kNumOptions + 1>> refs;
  refs.reserve(records.size());
  for (const auto& r : records) {
    std::array<std::size_t, kNumOptions + 1> ids{};
    ids[0] = intern(r.question);
    for (std::size_t i = 0; i < kNumOptions; ++i) ids[i + 1] = intern(r.options[i]);
    refs.push_back(ids);
  }
  if (unique.empty()) return {};
  auto vecs = embed(provider, unique);
  for (auto& v : vecs) v = normalized(v);

  std::vector<TrainingExample> out;
  out.reserve(records.size());
  for (std::size_t r = 0; r < records.size(); ++r) {
    TrainingExample ex;
    ex.correct_index = static_cast<std::size_t>(records[r].answer);
    for (std::size_t i = 0; i < kNumOptions; ++i) ex.options.push_back(featurize(vecs[refs[r][0]], vecs[refs[r][i + 1]]));
    out.push_back(std::move(ex));
  }
  return out;
}

TrainReport run_train(const PipelineConfig& cfg, const Providers& providers, const std::string& csv_path,
                      const std::string& scorer_path) {
  const auto records = load_csv(csv_path);
  const auto examples = featurize_records(records, *providers.embedding);
  TrainConfig tc = cfg.train;
  tc.seed = derive_seed(cfg.seed, "train");
  const auto result = train(examples, tc);

  const auto hash = config_hash(cfg);
  save_scorer(result.scorer, hash, scorer_path);
  text::write_file(scorer_path + ".log.csv", training_log_csv(result.log));

  auto m = base_manifest("train", &cfg);
  m["seeds"] = {{"train", tc.seed}};
  m["providers"] = {{"embedding", providers.embedding->id()}};
  m["inputs"] = json::array({input_entry(csv_path)});
  m["outputs"] = json::array({basename_of(scorer_path), basename_of(scorer_path) + ".log.csv"});
  m["counts"] = {{"records", records.size()}, {"epochs", result.log.size()}};
  write_manifest(scorer_path, m);

  TrainReport report;
  report.records = records.size();
  report.epochs = result.log.size();
  report.train_accuracy = result.log.empty() ? 0.0 : result.log.back().accuracy;
  return report;
}

double run_eval(const PipelineConfig&, const Providers& providers, const std::string& csv_path,
                const std::string& scorer_path) {
  const auto records = load_csv(csv_path);
  const auto scorer = load_scorer(scorer_path);
  const auto examples = featurize_records(records, *providers.embedding);
  if (!examples.empty() && examples.front().options.front().size() != scorer.weights.size())
    throw Error(ErrorKind::InvalidConfig, "scorer expects " + std::to_string(scorer.weights.size()) +
                                              " features but the embedding provider yields " +
                                              std::to_string(examples.front().options.front().size()));
  return evaluate(scorer, examples);
}

// ---------------------------------------------------------------------------
// split / distill-export / analyze / merge

CorpusSplit run_split(const PipelineConfig& cfg, const std::string& captions_path, std::size_t first_size,
                      const std::string& out_first, const std::string& out_second) {
  const auto captions = load_captions(captions_path);
  const auto seed = derive_seed(cfg.seed, "split");
  auto split = split_corpus(captions, first_size, seed);
  text::write_file(out_first, serialize_captions(split.first));
  text::write_file(out_second, serialize_captions(split.second));
  for (const auto& [path, n] : {std::pair{out_first, split.first.size()}, std::pair{out_second, split.second.size()}}) {
    auto m = base_manifest("split", &cfg);
    m["seeds"] = {{"split", seed}};
    m["inputs"] = json::array({input_entry(captions_path)});
    m["outputs"] = json::array({basename_of(out_first), basename_of(out_second)});
    m["counts"] = {{"captions_in", captions.size()}, {"records", n}};
    write_manifest(path, m);
  }
  return split;
}

std::size_t run_distill_export(const std::string& responses_path, const std::string& out_path) {
  const auto pairs = distill_pairs(read_responses(responses_path));
  const auto n = export_distill_corpus(pairs, out_path);
  auto m = base_manifest("distill-export", nullptr);
  m["inputs"] = json::array({input_entry(responses_path)});
  m["outputs"] = json::array({basename_of(out_path)});
  m["counts"] = {{"pairs", n}};
  write_manifest(out_path, m);
  return n;
}

AnalyzeReport run_analyze(const std::string& input_path, const std::string& out_dir, std::size_t k_gen,
                          std::size_t k_cap) {
  std::vector<std::string> answers, captions;
  if (fs::path(input_path).extension() == ".csv") {
    for (const auto& r : load_csv(input_path)) {
      answers.push_back(r.options[static_cast<std::size_t>(r.answer)]);
      captions.push_back(r.question);
    }
  } else {
    for (const auto& r : read_responses(input_path)) {
      captions.push_back(r.caption);
      answers.insert(answers.end(), r.candidates.begin(), r.candidates.end());
    }
  }
  AnalyzeReport report;
  report.cdf = length_cdf(answers);
  report.overlap = overlap_report(answers, captions, k_gen, k_cap);
  fs::create_directories(out_dir);
  text::write_file((fs::path(out_dir) / "length_cdf.csv").string(), length_cdf_csv(report.cdf));
  text::write_file((fs::path(out_dir) / "top_words.csv").string(), top_words_csv(report.overlap));
  return report;
}

std::size_t run_merge(const std::string& a_csv, const std::string& b_csv, const std::string& out_csv,
                      const std::string& tag_a, const std::string& tag_b) {
  const auto merged = merge_datasets(load_csv(a_csv), load_csv(b_csv), tag_a, tag_b);
  emit_csv(merged, out_csv);
  auto m = base_manifest("merge", nullptr);
  m["inputs"] = json::array({input_entry(a_csv), input_entry(b_csv)});
  m["outputs"] = json::array({basename_of(out_csv)});
  m["tags"] = {tag_a, tag_b};
  m["counts"] = {{"records", merged.size()}};
  write_manifest(out_csv, m);
  return merged.size();
}

}  // namespace cake
