#include "discotec/kmeans.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "discotec/rng.hpp"

namespace discotec {
namespace {

double sq_dist(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) {
    const double diff = a[j] - b[j];
    s += diff * diff;
  }
  return s;
}

std::vector<double> init_centroids(const DataMatrix& x, const KMeansConfig& cfg,
                                   Rng& rng) {
  const int k = cfg.k;
  const int d = x.d();
  std::vector<double> cent(static_cast<std::size_t>(k) * static_cast<std::size_t>(d));
  auto put = [&](int slot, int point) {
    const auto row = x.row(point);
    std::copy(row.begin(), row.end(),
              cent.begin() + static_cast<std::ptrdiff_t>(slot) * d);
  };

  if (cfg.init == KMeansInit::RandomPoints) {
    const std::vector<int> chosen = rng.sample_without_replacement(x.n(), k);
    for (int c = 0; c < k; ++c) put(c, chosen[static_cast<std::size_t>(c)]);
    return cent;
  }

  // kmeans++: next centroid drawn with probability proportional to the
  // squared distance to the nearest one chosen so far.
  put(0, static_cast<int>(rng.uniform_below(static_cast<std::uint64_t>(x.n()))));
  std::vector<double> best(static_cast<std::size_t>(x.n()),
                           std::numeric_limits<double>::infinity());
  for (int c = 1; c < k; ++c) {
    double total = 0.0;
    for (int i = 0; i < x.n(); ++i) {
      const double dist = sq_dist(
          x.row(i), std::span<const double>(
                        cent.data() + static_cast<std::size_t>(c - 1) *
                                          static_cast<std::size_t>(d),
                        static_cast<std::size_t>(d)));
      best[static_cast<std::size_t>(i)] =
          std::min(best[static_cast<std::size_t>(i)], dist);
      total += best[static_cast<std::size_t>(i)];
    }
    int pick = 0;
    if (total > 0.0) {
      const double target = rng.uniform() * total;
      double cumulative = 0.0;
      pick = x.n() - 1;
      for (int i = 0; i < x.n(); ++i) {
        cumulative += best[static_cast<std::size_t>(i)];
        if (cumulative > target) {
          pick = i;
          break;
        }
      }
    } else {
      // All mass at the chosen centroids (duplicated points); any point works.
      pick = static_cast<int>(rng.uniform_below(static_cast<std::uint64_t>(x.n())));
    }
    put(c, pick);
  }
  return cent;
}

}  // namespace

KMeansResult kmeans_detailed(const DataMatrix& x, const KMeansConfig& cfg) {
  const int n = x.n();
  const int d = x.d();
  const int k = cfg.k;
  if (k < 1) throw std::invalid_argument("kmeans needs k >= 1");
  if (k > n) throw std::invalid_argument("kmeans needs k <= n");
  if (cfg.max_iterations < 1) {
    throw std::invalid_argument("kmeans needs at least one iteration");
  }
  if (cfg.tolerance < 0.0) {
    throw std::invalid_argument("kmeans tolerance must be non-negative");
  }

  Rng rng(mix64(cfg.seed));
  std::vector<double> cent = init_centroids(x, cfg, rng);
  std::vector<Label> assign(static_cast<std::size_t>(n), 0);
  std::vector<double> point_dist(static_cast<std::size_t>(n), 0.0);

  KMeansResult result{Partition(std::vector<Label>(1, 0)), {}, 0};

  for (int iter = 0; iter < cfg.max_iterations; ++iter) {
    // Assignment; ties go to the smaller centroid index.
    double objective = 0.0;
#pragma omp parallel for schedule(static) reduction(+ : objective)
    for (int i = 0; i < n; ++i) {
      int best_c = 0;
      double best_dist = std::numeric_limits<double>::infinity();
      for (int c = 0; c < k; ++c) {
        const double dist = sq_dist(
            x.row(i),
            std::span<const double>(cent.data() + static_cast<std::size_t>(c) *
                                                      static_cast<std::size_t>(d),
                                    static_cast<std::size_t>(d)));
        if (dist < best_dist) {
          best_dist = dist;
          best_c = c;
        }
      }
      assign[static_cast<std::size_t>(i)] = static_cast<Label>(best_c);
      point_dist[static_cast<std::size_t>(i)] = best_dist;
      objective += best_dist;
    }

    // Re-seed empty clusters from the farthest point; farthest points are
    // claimed in cluster order so two empties never grab the same one.
    std::vector<int> sizes(static_cast<std::size_t>(k), 0);
    for (int i = 0; i < n; ++i) ++sizes[static_cast<std::size_t>(assign[static_cast<std::size_t>(i)])];
    for (int c = 0; c < k; ++c) {
      if (sizes[static_cast<std::size_t>(c)] > 0) continue;
      int far = -1;
      double far_dist = -1.0;
      for (int i = 0; i < n; ++i) {
        if (sizes[static_cast<std::size_t>(assign[static_cast<std::size_t>(i)])] <= 1) continue;
        if (point_dist[static_cast<std::size_t>(i)] > far_dist) {
          far_dist = point_dist[static_cast<std::size_t>(i)];
          far = i;
        }
      }
      if (far < 0) break;  // nothing left to take; leave cluster empty
      --sizes[static_cast<std::size_t>(assign[static_cast<std::size_t>(far)])];
      assign[static_cast<std::size_t>(far)] = static_cast<Label>(c);
      sizes[static_cast<std::size_t>(c)] = 1;
      point_dist[static_cast<std::size_t>(far)] = 0.0;
    }

    result.objective_history.push_back(objective);
    result.iterations = iter + 1;

    // Update step, accumulated in observation order for thread-count
    // independent results.
    std::vector<double> next(static_cast<std::size_t>(k) * static_cast<std::size_t>(d),
                             0.0);
    for (int i = 0; i < n; ++i) {
      const auto g = static_cast<std::size_t>(assign[static_cast<std::size_t>(i)]);
      const auto row = x.row(i);
      for (int j = 0; j < d; ++j) {
        next[g * static_cast<std::size_t>(d) + static_cast<std::size_t>(j)] +=
            row[static_cast<std::size_t>(j)];
      }
    }
    double movement = 0.0;
    for (int c = 0; c < k; ++c) {
      if (sizes[static_cast<std::size_t>(c)] == 0) continue;
      double dist = 0.0;
      for (int j = 0; j < d; ++j) {
        const auto idx = static_cast<std::size_t>(c) * static_cast<std::size_t>(d) +
                         static_cast<std::size_t>(j);
        next[idx] /= static_cast<double>(sizes[static_cast<std::size_t>(c)]);
        const double diff = next[idx] - cent[idx];
        dist += diff * diff;
        cent[idx] = next[idx];
      }
      movement = std::max(movement, std::sqrt(dist));
    }
    if (movement < cfg.tolerance) break;
  }

  result.partition = canonicalise(Partition(std::move(assign)));
  return result;
}

Partition kmeans(const DataMatrix& x, const KMeansConfig& cfg) {
  return kmeans_detailed(x, cfg).partition;
}

Ensemble generate_pool(const DataMatrix& x, KRange k_range, int repeats,
                       std::uint64_t seed) {
  if (k_range.lo < 1 || k_range.hi < k_range.lo) {
    throw std::invalid_argument("empty or invalid k range");
  }
  if (k_range.hi > x.n()) {
    throw std::invalid_argument("k range exceeds the number of observations");
  }
  if (repeats < 1) throw std::invalid_argument("repeats must be positive");

  const int span = k_range.hi - k_range.lo + 1;
  const int total = span * repeats;
  std::vector<std::vector<Label>> runs(static_cast<std::size_t>(total));

#pragma omp parallel for schedule(dynamic)
  for (int idx = 0; idx < total; ++idx) {
    KMeansConfig cfg;
    cfg.k = k_range.lo + idx / repeats;
    cfg.seed = Rng::stream(seed, static_cast<std::uint64_t>(idx)).next_u64();
    const Partition p = kmeans(x, cfg);
    auto labels = p.labels();
    runs[static_cast<std::size_t>(idx)].assign(labels.begin(), labels.end());
  }

  std::vector<Partition> kept;
  for (auto& labels : runs) {
    Partition p{std::move(labels)};
    if (!is_degenerate(p)) kept.push_back(std::move(p));
  }
  if (kept.empty()) {
    throw std::invalid_argument("every pool member came out degenerate");
  }
  return Ensemble(std::move(kept));
}

}  // namespace discotec
