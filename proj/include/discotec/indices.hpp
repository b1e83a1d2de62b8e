#pragma once

#include <span>
#include <vector>

#include "discotec/partition.hpp"

namespace discotec {

// Row-major n-by-d matrix of real-valued observations.
class DataMatrix {
 public:
  DataMatrix(int n, int d, std::vector<double> values);

  int n() const { return n_; }
  int d() const { return d_; }
  std::span<const double> row(int i) const {
    return {values_.data() +
                static_cast<std::size_t>(i) * static_cast<std::size_t>(d_),
            static_cast<std::size_t>(d_)};
  }
  std::span<const double> values() const { return values_; }

 private:
  int n_ = 0;
  int d_ = 0;
  std::vector<double> values_;
};

// Within-group sum of squares: squared Euclidean distances of members to
// their cluster centroid. Lower is better.
double wgss(const DataMatrix& x, const Partition& p);

// Calinski-Harabasz variance-ratio criterion, defined for 2 <= k <= n-1.
// A zero within-group dispersion yields +infinity ("best possible").
double chi(const DataMatrix& x, const Partition& p);

// Mean silhouette width, defined for 2 <= k <= n-1. Singleton samples and
// 0/0 cases contribute 0.
double silhouette(const DataMatrix& x, const Partition& p);

// Davies-Bouldin index, defined for 2 <= k <= n. Coincident centroids make
// the affected pair +infinity. Lower is better.
double dbi(const DataMatrix& x, const Partition& p);

}  // namespace discotec
