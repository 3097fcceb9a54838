#include "cakeforge/pooling.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>

#include "cakeforge/error.hpp"
#include "cakeforge/text_util.hpp"

namespace cake {

std::size_t default_num_pools(std::size_t num_responses) {
  if (num_responses == 0) throw Error(ErrorKind::InvalidInput, "need at least one response");
  const auto root = static_cast<std::size_t>(std::floor(std::sqrt(static_cast<double>(num_responses) / 2.0)));
  return std::min(std::max<std::size_t>(2, root), num_responses);
}

namespace {

using Matrix = std::vector<std::vector<double>>;

double sq_dist(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return s;
}

std::size_t nearest(const std::vector<double>& x, const Matrix& centroids, double* dist = nullptr) {
  std::size_t best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (std::size_t c = 0; c < centroids.size(); ++c) {
    const double d = sq_dist(x, centroids[c]);
    if (d < best_d) {
      best_d = d;
      best = c;
    }
  }
  if (dist) *dist = best_d;
  return best;
}

bool normalize_in_place(std::vector<double>& v) {
  double n = 0.0;
  for (double x : v) n += x * x;
  n = std::sqrt(n);
  if (!(n > 1e-12)) return false;
  for (double& x : v) x /= n;
  return true;
}

Matrix seed_plus_plus(const Matrix& pts, std::size_t k, Rng& rng) {
  Matrix centroids;
  centroids.push_back(pts[rng.uniform_index(pts.size())]);
  std::vector<double> d2(pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) d2[i] = sq_dist(pts[i], centroids[0]);
  while (centroids.size() < k) {
    const double total = std::accumulate(d2.begin(), d2.end(), 0.0);
    std::size_t pick = 0;
    if (total > 0.0) {
      double r = rng.uniform01() * total;
      pick = pts.size() - 1;
      for (std::size_t i = 0; i < pts.size(); ++i) {
        r -= d2[i];
        if (r < 0.0 && d2[i] > 0.0) {
          pick = i;
          break;
        }
      }
    } else {
      // Every point coincides with a chosen centroid.
      pick = rng.uniform_index(pts.size());
    }
    centroids.push_back(pts[pick]);
    for (std::size_t i = 0; i < pts.size(); ++i) d2[i] = std::min(d2[i], sq_dist(pts[i], centroids.back()));
  }
  return centroids;
}

}  // namespace

PoolAssignment cluster_responses(const std::vector<EmbeddingVector>& embeddings, const PoolConfig& cfg) {
  if (embeddings.empty()) throw Error(ErrorKind::InvalidInput, "no embeddings to cluster");
  if (cfg.num_pools < 1) throw Error(ErrorKind::InvalidConfig, "num_pools must be >= 1");
  if (cfg.num_pools > embeddings.size())
    throw Error(ErrorKind::InvalidConfig, "num_pools (" + std::to_string(cfg.num_pools) + ") exceeds response count (" +
                                              std::to_string(embeddings.size()) + ")");
  if (cfg.max_iterations < 1 || !(cfg.tolerance > 0.0))
    throw Error(ErrorKind::InvalidConfig, "max_iterations and tolerance must be positive");

  const std::size_t dim = embeddings.front().dim();
  Matrix pts;
  pts.reserve(embeddings.size());
  for (std::size_t i = 0; i < embeddings.size(); ++i) {
    if (embeddings[i].dim() != dim) throw Error(ErrorKind::InvalidInput, "embedding dimension mismatch");
    try {
      pts.push_back(normalized(embeddings[i]).values);
    } catch (const Error&) {
      throw Error(ErrorKind::InvalidInput, "embedding " + std::to_string(i) + " is a zero vector");
    }
  }

  const std::size_t k = cfg.num_pools;
  Rng rng(cfg.seed);
  Matrix centroids = seed_plus_plus(pts, k, rng);

  PoolAssignment out;
  out.assignment.assign(pts.size(), 0);
  std::vector<double> dist(pts.size());

  for (std::size_t iter = 0; iter < cfg.max_iterations; ++iter) {
    out.iterations = iter + 1;
    // Assignment step.
    std::vector<std::size_t> sizes(k, 0);
    double objective = 0.0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
      out.assignment[i] = nearest(pts[i], centroids, &dist[i]);
      ++sizes[out.assignment[i]];
      objective += dist[i];
    }

    // Re-seed empty pools from the farthest points, then reassign.
    std::set<std::size_t> used;
    bool reseeded = false;
    for (std::size_t c = 0; c < k; ++c) {
      if (sizes[c] != 0) continue;
      std::size_t far = pts.size();
      double far_d = -1.0;
      for (std::size_t i = 0; i < pts.size(); ++i) {
        if (used.contains(i) || sizes[out.assignment[i]] <= 1) continue;
        if (dist[i] > far_d) {
          far_d = dist[i];
          far = i;
        }
      }
      if (far == pts.size()) continue;
      used.insert(far);
      centroids[c] = pts[far];
      reseeded = true;
    }
    if (reseeded) {
      std::fill(sizes.begin(), sizes.end(), 0);
      objective = 0.0;
      for (std::size_t i = 0; i < pts.size(); ++i) {
        out.assignment[i] = nearest(pts[i], centroids, &dist[i]);
        ++sizes[out.assignment[i]];
        objective += dist[i];
      }
    }
    out.objective_history.push_back(objective);

    // Update step: renormalized member means.
    Matrix next = centroids;
    std::vector<std::vector<double>> sums(k, std::vector<double>(dim, 0.0));
    for (std::size_t i = 0; i < pts.size(); ++i)
      for (std::size_t d = 0; d < dim; ++d) sums[out.assignment[i]][d] += pts[i][d];
    for (std::size_t c = 0; c < k; ++c)
      if (sizes[c] > 0 && normalize_in_place(sums[c])) next[c] = std::move(sums[c]);

    double shift = 0.0;
    for (std::size_t c = 0; c < k; ++c) shift = std::max(shift, std::sqrt(sq_dist(next[c], centroids[c])));
    centroids = std::move(next);
    if (shift < cfg.tolerance) break;
  }

  // Final assignment against the converged centroids.
  double objective = 0.0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    out.assignment[i] = nearest(pts[i], centroids, &dist[i]);
    objective += dist[i];
  }
  out.objective_history.push_back(objective);

  out.centroids.reserve(k);
  for (auto& c : centroids) {
    normalize_in_place(c);
    out.centroids.push_back(EmbeddingVector{std::move(c)});
  }
  return out;
}

DistractorDraw sample_distractors(std::size_t answer_index, const std::vector<std::string>& texts,
                                  const PoolAssignment& pools, const PoolConfig& cfg, Rng& rng) {
  if (answer_index >= texts.size()) throw Error(ErrorKind::InvalidInput, "answer index out of range");
  if (pools.assignment.size() != texts.size())
    throw Error(ErrorKind::InvalidInput, "pool assignment does not cover the texts");
  const std::size_t want = cfg.num_distractors;
  if (want < 1) throw Error(ErrorKind::InvalidConfig, "num_distractors must be >= 1");

  std::set<std::string> distinct;
  for (const auto& t : texts) distinct.insert(text::normalize_key(t));
  if (distinct.size() < want + 1)
    throw Error(ErrorKind::InsufficientCorpus, "need at least " + std::to_string(want + 1) +
                                                   " distinct responses, corpus has " + std::to_string(distinct.size()));

  const std::size_t home = pools.assignment[answer_index];
  // Pools ordered by centroid distance from the answer's pool; ties by id.
  std::vector<std::size_t> order(pools.num_pools());
  std::iota(order.begin(), order.end(), 0);
  std::vector<double> cd(order.size());
  for (std::size_t p = 0; p < order.size(); ++p)
    cd[p] = p == home ? -1.0 : sq_dist(pools.centroids[p].values, pools.centroids[home].values);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return cd[a] < cd[b]; });

  std::vector<std::vector<std::size_t>> members(pools.num_pools());
  for (std::size_t i = 0; i < texts.size(); ++i) members[pools.assignment[i]].push_back(i);

  std::set<std::string> taken{text::normalize_key(texts[answer_index])};
  DistractorDraw draw;
  for (std::size_t pool : order) {
    if (draw.distractors.size() == want) break;
    // First occurrence of each new text in this pool is eligible.
    std::vector<std::size_t> eligible;
    std::set<std::string> local;
    for (std::size_t i : members[pool]) {
      if (i == answer_index) continue;
      auto key = text::normalize_key(texts[i]);
      if (taken.contains(key) || !local.insert(key).second) continue;
      eligible.push_back(i);
    }
    // Partial Fisher-Yates.
    const std::size_t need = std::min(want - draw.distractors.size(), eligible.size());
    for (std::size_t j = 0; j < need; ++j) {
      const std::size_t r = j + rng.uniform_index(eligible.size() - j);
      std::swap(eligible[j], eligible[r]);
      const std::size_t idx = eligible[j];
      taken.insert(text::normalize_key(texts[idx]));
      draw.distractors.push_back({idx, pool, texts[idx]});
      if (pool != home) draw.used_fallback = true;
    }
  }
  if (draw.distractors.size() < want)
    throw Error(ErrorKind::InsufficientCorpus, "could not find " + std::to_string(want) + " distinct distractors");
  return draw;
}

AssembledOptions assemble_options(const std::string& answer, const std::vector<std::string>& distractors, Rng& rng) {
  std::vector<std::string> all;
  all.reserve(distractors.size() + 1);
  all.push_back(answer);
  all.insert(all.end(), distractors.begin(), distractors.end());
  std::set<std::string> keys;
  for (const auto& o : all) {
    if (text::trim(o).empty()) throw Error(ErrorKind::InvalidInput, "empty option text");
    if (!keys.insert(text::normalize_key(o)).second)
      throw Error(ErrorKind::InvalidInput, "duplicate option text '" + o + "'");
  }

  std::vector<std::size_t> perm(all.size());
  std::iota(perm.begin(), perm.end(), 0);
  rng.shuffle(perm);

  AssembledOptions out;
  out.permutation = perm;
  out.options.reserve(all.size());
  for (std::size_t i = 0; i < perm.size(); ++i) {
    out.options.push_back(all[perm[i]]);
    if (perm[i] == 0) out.correct_index = i;
  }
  return out;
}

}  // namespace cake
