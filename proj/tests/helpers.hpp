#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "discotec/indices.hpp"
#include "discotec/partition.hpp"
#include "discotec/rng.hpp"

namespace testutil {

using discotec::DataMatrix;
using discotec::Ensemble;
using discotec::Label;
using discotec::Partition;
using discotec::Rng;

inline double rel_err(double got, double want) {
  if (got == want) return 0.0;
  const double scale = std::max(std::abs(got), std::abs(want));
  return std::abs(got - want) / (scale == 0.0 ? 1.0 : scale);
}

// Labels uniform over [0, k_hint); the realised k may be smaller.
inline Partition random_partition(Rng& rng, int n, int k_hint) {
  std::vector<Label> labels(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    labels[static_cast<std::size_t>(i)] = static_cast<Label>(
        rng.uniform_below(static_cast<std::uint64_t>(k_hint)));
  }
  return Partition(std::move(labels));
}

inline Partition random_nondegenerate_partition(Rng& rng, int n, int k_hint) {
  for (;;) {
    Partition p = random_partition(rng, n, k_hint);
    if (!discotec::is_degenerate(p)) return p;
  }
}

inline Ensemble random_ensemble(Rng& rng, int n, int t, int k_hint) {
  std::vector<Partition> parts;
  parts.reserve(static_cast<std::size_t>(t));
  for (int m = 0; m < t; ++m) {
    parts.push_back(random_nondegenerate_partition(rng, n, k_hint));
  }
  return Ensemble(std::move(parts));
}

// Applies a random bijection to the label values (same clustering, new ids).
inline Partition relabel_randomly(const Partition& p, Rng& rng) {
  std::vector<Label> ids(static_cast<std::size_t>(p.k()));
  for (int g = 0; g < p.k(); ++g) {
    ids[static_cast<std::size_t>(g)] = static_cast<Label>(g * 3 + 1);
  }
  for (std::size_t i = ids.size(); i > 1; --i) {
    std::swap(ids[i - 1], ids[rng.uniform_below(i)]);
  }
  std::vector<Label> labels(static_cast<std::size_t>(p.n()));
  const auto canon = p.canonical_labels();
  for (int i = 0; i < p.n(); ++i) {
    labels[static_cast<std::size_t>(i)] =
        ids[static_cast<std::size_t>(canon[static_cast<std::size_t>(i)])];
  }
  return Partition(std::move(labels));
}

// Gaussian blobs around the given centres; returns the data and the
// generating labels.
struct BlobData {
  DataMatrix data;
  Partition labels;
};

inline BlobData make_blobs(Rng& rng,
                           const std::vector<std::vector<double>>& centres,
                           int points_per_blob, double spread) {
  const int d = static_cast<int>(centres.front().size());
  std::vector<double> values;
  std::vector<Label> labels;
  for (std::size_t c = 0; c < centres.size(); ++c) {
    for (int i = 0; i < points_per_blob; ++i) {
      for (int j = 0; j < d; ++j) {
        values.push_back(centres[c][static_cast<std::size_t>(j)] +
                         spread * rng.gaussian());
      }
      labels.push_back(static_cast<Label>(c));
    }
  }
  const int n = static_cast<int>(labels.size());
  return BlobData{DataMatrix(n, d, std::move(values)), Partition(std::move(labels))};
}

// The worked 4-point fixture: pool {[0,0,1,1], [0,0,1,1], [0,1,0,1]}.
inline Ensemble four_point_fixture() {
  return Ensemble({Partition({0, 0, 1, 1}), Partition({0, 0, 1, 1}),
                   Partition({0, 1, 0, 1})});
}

}  // namespace testutil
