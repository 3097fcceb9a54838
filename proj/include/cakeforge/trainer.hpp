#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "cakeforge/lm_backend.hpp"

namespace cake {

using FeatureVector = std::vector<double>;

// [question ; answer], length 2 * dim.
FeatureVector featurize(const EmbeddingVector& question, const EmbeddingVector& answer);

struct HingeResult {
  double loss = 0.0;
  std::vector<double> grad;  // d loss / d scores
};

// Multi-class hinge, summed over violators:
//   loss = sum_{j != c} max(0, margin + s_j - s_c)
// Each violator contributes +1 to its own subgradient and -1 to s_c.
HingeResult hinge_loss(std::span<const double> scores, std::size_t correct_index, double margin);

struct LinearScorer {
  std::vector<double> weights;
  double bias = 0.0;

  double score(std::span<const double> features) const;
  std::size_t embedding_dim() const noexcept { return weights.size() / 2; }
};

struct TrainConfig {
  double learning_rate = 0.01;
  std::size_t max_epochs = 25;
  double margin = 1.0;
  std::uint64_t seed = 0;
  std::size_t plateau_patience = 2;
  double lr_decay_factor = 0.5;
  double min_learning_rate = 1e-6;
};

void validate(const TrainConfig& cfg);

struct TrainingExample {
  std::vector<FeatureVector> options;  // one feature vector per answer option
  std::size_t correct_index = 0;
};

struct EpochLog {
  std::size_t epoch = 0;
  double mean_loss = 0.0;
  double accuracy = 0.0;
  double learning_rate = 0.0;
};

struct TrainResult {
  LinearScorer scorer;
  std::vector<EpochLog> log;
};

// Zero-initialized plain SGD with a per-epoch seeded shuffle and a
// reduce-on-plateau learning-rate schedule keyed on epoch mean loss.
TrainResult train(const std::vector<TrainingExample>& dataset, const TrainConfig& cfg);

// Highest-scoring option, ties to the lowest index.
std::size_t predict(const LinearScorer& scorer, const TrainingExample& example);
double evaluate(const LinearScorer& scorer, const std::vector<TrainingExample>& dataset);

// Flat text format: a small header (dim, bias, config hash) then one weight
// per line.
void save_scorer(const LinearScorer& scorer, const std::string& config_hash, const std::string& path);
LinearScorer load_scorer(const std::string& path, std::string* config_hash = nullptr);

std::string training_log_csv(const std::vector<EpochLog>& log);

}  // namespace cake
