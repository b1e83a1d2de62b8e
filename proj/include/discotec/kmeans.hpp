#pragma once

#include <cstdint>
#include <vector>

#include "discotec/indices.hpp"
#include "discotec/partition.hpp"

namespace discotec {

enum class KMeansInit { RandomPoints, KMeansPlusPlus };

struct KMeansConfig {
  int k = 2;
  int max_iterations = 100;
  double tolerance = 1e-6;  // on the largest centroid movement
  std::uint64_t seed = 0;
  KMeansInit init = KMeansInit::KMeansPlusPlus;
};

struct KMeansResult {
  Partition partition;
  std::vector<double> objective_history;  // assignment WGSS per iteration
  int iterations = 0;
};

// Lloyd iterations until the largest centroid movement drops below the
// tolerance or max_iterations is hit. Empty clusters are re-seeded from
// the point farthest from its assigned centroid. Deterministic per seed,
// independent of the thread count; the returned partition is canonical.
KMeansResult kmeans_detailed(const DataMatrix& x, const KMeansConfig& cfg);
Partition kmeans(const DataMatrix& x, const KMeansConfig& cfg);

struct KRange {
  int lo = 2;
  int hi = 2;  // inclusive
};

// One run per (k, repeat) pair with seeds split per pair index; degenerate
// results are dropped.
Ensemble generate_pool(const DataMatrix& x, KRange k_range, int repeats,
                       std::uint64_t seed);

}  // namespace discotec
