#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "cakeforge/lm_backend.hpp"
#include "cakeforge/rng.hpp"

namespace cake {

inline constexpr std::size_t kNumOptions = 5;
inline constexpr std::size_t kDefaultDistractors = kNumOptions - 1;

struct PoolConfig {
  std::size_t num_pools = 2;
  std::size_t num_distractors = kDefaultDistractors;
  std::uint64_t seed = 0;
  std::size_t max_iterations = 100;
  double tolerance = 1e-6;
};

struct PoolAssignment {
  std::vector<std::size_t> assignment;     // response index -> pool id
  std::vector<EmbeddingVector> centroids;  // unit vectors, one per pool
  std::vector<double> objective_history;   // sum of squared distances after each assignment step
  std::size_t iterations = 0;

  std::size_t num_pools() const noexcept { return centroids.size(); }
};

// max(2, floor(sqrt(n / 2))), capped at n.
std::size_t default_num_pools(std::size_t num_responses);

// Spherical k-means: inputs are L2-normalized, seeding is k-means++, the
// metric is squared Euclidean on the unit sphere and centroids are
// renormalized means. Empty pools are re-seeded from the point farthest from
// its centroid. Deterministic given (embeddings, cfg).
PoolAssignment cluster_responses(const std::vector<EmbeddingVector>& embeddings, const PoolConfig& cfg);

struct Distractor {
  std::size_t response_index;
  std::size_t pool_id;
  std::string text;
};

struct DistractorDraw {
  std::vector<Distractor> distractors;
  bool used_fallback = false;  // topped up from neighbouring pools
};

// Samples |D| distinct distractor texts for texts[answer_index], uniformly
// from the answer's pool, topping up from pools in order of centroid
// distance when the home pool runs short. Never returns a text that matches
// the answer (case-insensitive, whitespace-normalized).
DistractorDraw sample_distractors(std::size_t answer_index, const std::vector<std::string>& texts,
                                  const PoolAssignment& pools, const PoolConfig& cfg, Rng& rng);

struct AssembledOptions {
  std::vector<std::string> options;
  std::size_t correct_index = 0;
  std::vector<std::size_t> permutation;  // options[i] = ([answer] ++ distractors)[permutation[i]]
};

// Fisher-Yates shuffle of [answer] ++ distractors.
AssembledOptions assemble_options(const std::string& answer, const std::vector<std::string>& distractors, Rng& rng);

}  // namespace cake
