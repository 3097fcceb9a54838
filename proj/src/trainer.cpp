#include "cakeforge/trainer.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>
#include <sstream>

#include "cakeforge/error.hpp"
#include "cakeforge/rng.hpp"
#include "cakeforge/text_util.hpp"

namespace cake {

FeatureVector featurize(const EmbeddingVector& question, const EmbeddingVector& answer) {
  if (question.dim() != answer.dim())
    throw Error(ErrorKind::InvalidInput, "question and answer embeddings differ in dimension (" +
                                             std::to_string(question.dim()) + " vs " + std::to_string(answer.dim()) + ")");
  FeatureVector f;
  f.reserve(question.dim() * 2);
  f.insert(f.end(), question.values.begin(), question.values.end());
  f.insert(f.end(), answer.values.begin(), answer.values.end());
  return f;
}

HingeResult hinge_loss(std::span<const double> scores, std::size_t correct_index, double margin) {
  if (correct_index >= scores.size()) throw Error(ErrorKind::InvalidInput, "correct index out of range");
  HingeResult r;
  r.grad.assign(scores.size(), 0.0);
  const double sc = scores[correct_index];
  for (std::size_t j = 0; j < scores.size(); ++j) {
    if (j == correct_index) continue;
    const double v = margin + scores[j] - sc;
    if (v > 0.0) {
      r.loss += v;
      r.grad[j] += 1.0;
      r.grad[correct_index] -= 1.0;
    }
  }
  return r;
}

double LinearScorer::score(std::span<const double> features) const {
  if (features.size() != weights.size())
    throw Error(ErrorKind::InvalidInput, "feature length " + std::to_string(features.size()) +
                                             " does not match scorer length " + std::to_string(weights.size()));
  return std::inner_product(weights.begin(), weights.end(), features.begin(), bias);
}

void validate(const TrainConfig& cfg) {
  if (!(cfg.learning_rate > 0.0) || cfg.max_epochs < 1 || !(cfg.margin > 0.0) || cfg.plateau_patience < 1)
    throw Error(ErrorKind::InvalidConfig, "learning_rate, max_epochs, margin and plateau_patience must be positive");
  if (!(cfg.lr_decay_factor > 0.0 && cfg.lr_decay_factor < 1.0))
    throw Error(ErrorKind::InvalidConfig, "lr_decay_factor must lie in (0, 1)");
}

namespace {

std::size_t check_dataset(const std::vector<TrainingExample>& dataset) {
  if (dataset.empty()) throw Error(ErrorKind::InvalidInput, "dataset is empty");
  const std::size_t len = dataset.front().options.empty() ? 0 : dataset.front().options.front().size();
  if (len == 0) throw Error(ErrorKind::InvalidInput, "empty feature vectors");
  for (const auto& ex : dataset) {
    if (ex.options.empty() || ex.correct_index >= ex.options.size())
      throw Error(ErrorKind::InvalidInput, "example without options or with out-of-range answer");
    for (const auto& f : ex.options)
      if (f.size() != len) throw Error(ErrorKind::InvalidInput, "non-uniform feature dimensions");
  }
  return len;
}

}  // namespace

std::size_t predict(const LinearScorer& scorer, const TrainingExample& example) {
  std::size_t best = 0;
  double best_s = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < example.options.size(); ++i) {
    const double s = scorer.score(example.options[i]);
    if (s > best_s) {
      best_s = s;
      best = i;
    }
  }
  return best;
}

double evaluate(const LinearScorer& scorer, const std::vector<TrainingExample>& dataset) {
  if (dataset.empty()) throw Error(ErrorKind::InvalidInput, "dataset is empty");
  std::size_t correct = 0;
  for (const auto& ex : dataset) correct += predict(scorer, ex) == ex.correct_index;
  return static_cast<double>(correct) / static_cast<double>(dataset.size());
}

TrainResult train(const std::vector<TrainingExample>& dataset, const TrainConfig& cfg) {
  validate(cfg);
  const std::size_t len = check_dataset(dataset);

  TrainResult out;
  auto& w = out.scorer.weights;
  w.assign(len, 0.0);
  double lr = cfg.learning_rate;
  double best_loss = std::numeric_limits<double>::infinity();
  std::size_t bad_epochs = 0;

  Rng rng(cfg.seed);
  std::vector<std::size_t> order(dataset.size());
  std::iota(order.begin(), order.end(), 0);
  std::vector<double> scores;

  for (std::size_t epoch = 1; epoch <= cfg.max_epochs; ++epoch) {
    rng.shuffle(order);
    double total = 0.0;
    for (std::size_t idx : order) {
      const auto& ex = dataset[idx];
      scores.resize(ex.options.size());
      for (std::size_t i = 0; i < ex.options.size(); ++i) scores[i] = out.scorer.score(ex.options[i]);
      const auto h = hinge_loss(scores, ex.correct_index, cfg.margin);
      total += h.loss;
      if (h.loss == 0.0) continue;
      for (std::size_t i = 0; i < ex.options.size(); ++i) {
        if (h.grad[i] == 0.0) continue;
        const double step = lr * h.grad[i];
        const auto& f = ex.options[i];
        for (std::size_t d = 0; d < len; ++d) w[d] -= step * f[d];
        out.scorer.bias -= step;
      }
    }
    const double mean_loss = total / static_cast<double>(dataset.size());
    out.log.push_back({epoch, mean_loss, evaluate(out.scorer, dataset), lr});

    if (mean_loss < best_loss) {
      best_loss = mean_loss;
      bad_epochs = 0;
    } else if (++bad_epochs >= cfg.plateau_patience) {
      lr *= cfg.lr_decay_factor;
      bad_epochs = 0;
    }
    if (lr < cfg.min_learning_rate) break;
  }
  return out;
}

void save_scorer(const LinearScorer& scorer, const std::string& config_hash, const std::string& path) {
  std::string out = "cake-forge-scorer v1\n";
  char buf[64];
  out += "dim " + std::to_string(scorer.embedding_dim()) + "\n";
  std::snprintf(buf, sizeof buf, "bias %.17g\n", scorer.bias);
  out += buf;
  out += "config_hash " + config_hash + "\n";
  for (double x : scorer.weights) {
    std::snprintf(buf, sizeof buf, "%.17g\n", x);
    out += buf;
  }
  text::write_file(path, out);
}

LinearScorer load_scorer(const std::string& path, std::string* config_hash) {
  std::istringstream in(text::read_file(path));
  auto fail = [&](const std::string& why) { return Error(ErrorKind::Parse, path + ": " + why); };
  std::string line, key;
  if (!std::getline(in, line) || line != "cake-forge-scorer v1") throw fail("bad scorer header");
  std::size_t dim = 0;
  LinearScorer s;
  std::string hash;
  if (!(in >> key >> dim) || key != "dim") throw fail("missing dim");
  if (!(in >> key >> s.bias) || key != "bias") throw fail("missing bias");
  if (!(in >> key >> hash) || key != "config_hash") throw fail("missing config_hash");
  s.weights.resize(2 * dim);
  for (auto& x : s.weights)
    if (!(in >> x)) throw fail("expected " + std::to_string(2 * dim) + " weights");
  if (in >> key) throw fail("trailing data after weights");
  if (config_hash) *config_hash = hash;
  return s;
}

std::string training_log_csv(const std::vector<EpochLog>& log) {
  std::string out = "epoch,mean_loss,accuracy,learning_rate\n";
  char buf[128];
  for (const auto& e : log) {
    std::snprintf(buf, sizeof buf, "%zu,%.17g,%.17g,%.17g\n", e.epoch, e.mean_loss, e.accuracy, e.learning_rate);
    out += buf;
  }
  return out;
}

}  // namespace cake
