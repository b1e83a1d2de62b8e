#include "discotec/indices.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace discotec {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_match(const DataMatrix& x, const Partition& p) {
  if (x.n() != p.n()) {
    throw std::invalid_argument("data and partition cover different observations");
  }
}

// Cluster centroids in canonical-label order.
std::vector<double> centroids(const DataMatrix& x, const Partition& p,
                              std::vector<int>* sizes_out = nullptr) {
  const int k = p.k();
  const int d = x.d();
  std::vector<double> cent(static_cast<std::size_t>(k) * static_cast<std::size_t>(d),
                           0.0);
  std::vector<int> sizes(static_cast<std::size_t>(k), 0);
  const auto canon = p.canonical_labels();
  for (int i = 0; i < x.n(); ++i) {
    const auto g = static_cast<std::size_t>(canon[static_cast<std::size_t>(i)]);
    ++sizes[g];
    const auto row = x.row(i);
    for (int j = 0; j < d; ++j) {
      cent[g * static_cast<std::size_t>(d) + static_cast<std::size_t>(j)] +=
          row[static_cast<std::size_t>(j)];
    }
  }
  for (int g = 0; g < k; ++g) {
    for (int j = 0; j < d; ++j) {
      cent[static_cast<std::size_t>(g) * static_cast<std::size_t>(d) +
           static_cast<std::size_t>(j)] /= static_cast<double>(sizes[static_cast<std::size_t>(g)]);
    }
  }
  if (sizes_out != nullptr) *sizes_out = std::move(sizes);
  return cent;
}

double sq_dist(std::span<const double> a, const double* b) {
  double s = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) {
    const double diff = a[j] - b[j];
    s += diff * diff;
  }
  return s;
}

}  // namespace

DataMatrix::DataMatrix(int n, int d, std::vector<double> values)
    : n_(n), d_(d), values_(std::move(values)) {
  if (n <= 0 || d <= 0) {
    throw std::invalid_argument("data matrix needs n > 0 and d > 0");
  }
  if (values_.size() != static_cast<std::size_t>(n) * static_cast<std::size_t>(d)) {
    throw std::invalid_argument("data buffer has the wrong size");
  }
  for (const double v : values_) {
    if (!std::isfinite(v)) {
      throw std::invalid_argument("data matrix entries must be finite");
    }
  }
}

double wgss(const DataMatrix& x, const Partition& p) {
  require_match(x, p);
  const auto cent = centroids(x, p);
  const auto canon = p.canonical_labels();
  double sum = 0.0;
  for (int i = 0; i < x.n(); ++i) {
    const auto g = static_cast<std::size_t>(canon[static_cast<std::size_t>(i)]);
    sum += sq_dist(x.row(i), cent.data() + g * static_cast<std::size_t>(x.d()));
  }
  return sum;
}

double chi(const DataMatrix& x, const Partition& p) {
  require_match(x, p);
  const int n = x.n();
  const int k = p.k();
  if (k < 2 || k > n - 1) {
    throw std::domain_error("Calinski-Harabasz needs 2 <= k <= n-1");
  }
  std::vector<int> sizes;
  const auto cent = centroids(x, p, &sizes);

  std::vector<double> mean(static_cast<std::size_t>(x.d()), 0.0);
  for (int i = 0; i < n; ++i) {
    const auto row = x.row(i);
    for (int j = 0; j < x.d(); ++j) {
      mean[static_cast<std::size_t>(j)] += row[static_cast<std::size_t>(j)];
    }
  }
  for (double& v : mean) v /= static_cast<double>(n);

  double between = 0.0;
  for (int g = 0; g < k; ++g) {
    between +=
        static_cast<double>(sizes[static_cast<std::size_t>(g)]) *
        sq_dist(std::span<const double>(mean),
                cent.data() + static_cast<std::size_t>(g) * static_cast<std::size_t>(x.d()));
  }
  const double within = wgss(x, p);
  if (within == 0.0) return kInf;
  return (between / static_cast<double>(k - 1)) /
         (within / static_cast<double>(n - k));
}

double silhouette(const DataMatrix& x, const Partition& p) {
  require_match(x, p);
  const int n = x.n();
  const int k = p.k();
  if (k < 2 || k > n - 1) {
    throw std::domain_error("silhouette needs 2 <= k <= n-1");
  }
  const auto canon = p.canonical_labels();
  std::vector<int> sizes(static_cast<std::size_t>(k), 0);
  for (int i = 0; i < n; ++i) {
    ++sizes[static_cast<std::size_t>(canon[static_cast<std::size_t>(i)])];
  }

  std::vector<double> widths(static_cast<std::size_t>(n), 0.0);
#pragma omp parallel for schedule(dynamic, 16)
  for (int i = 0; i < n; ++i) {
    const auto gi = static_cast<std::size_t>(canon[static_cast<std::size_t>(i)]);
    if (sizes[gi] == 1) continue;  // singleton convention

    std::vector<double> dist_sums(static_cast<std::size_t>(k), 0.0);
    const auto ri = x.row(i);
    for (int j = 0; j < n; ++j) {
      if (j == i) continue;
      const auto gj = static_cast<std::size_t>(canon[static_cast<std::size_t>(j)]);
      dist_sums[gj] += std::sqrt(sq_dist(ri, x.row(j).data()));
    }
    const double a = dist_sums[gi] / static_cast<double>(sizes[gi] - 1);
    double b = kInf;
    for (int g = 0; g < k; ++g) {
      if (static_cast<std::size_t>(g) == gi) continue;
      b = std::min(b, dist_sums[static_cast<std::size_t>(g)] /
                          static_cast<double>(sizes[static_cast<std::size_t>(g)]));
    }
    const double denom = std::max(a, b);
    widths[static_cast<std::size_t>(i)] = denom == 0.0 ? 0.0 : (b - a) / denom;
  }

  double sum = 0.0;
  for (const double w : widths) sum += w;
  return sum / static_cast<double>(n);
}

double dbi(const DataMatrix& x, const Partition& p) {
  require_match(x, p);
  const int n = x.n();
  const int k = p.k();
  if (k < 2 || k > n) {
    throw std::domain_error("Davies-Bouldin needs 2 <= k <= n");
  }
  std::vector<int> sizes;
  const auto cent = centroids(x, p, &sizes);
  const auto canon = p.canonical_labels();

  std::vector<double> scatter(static_cast<std::size_t>(k), 0.0);
  for (int i = 0; i < n; ++i) {
    const auto g = static_cast<std::size_t>(canon[static_cast<std::size_t>(i)]);
    scatter[g] += std::sqrt(
        sq_dist(x.row(i), cent.data() + g * static_cast<std::size_t>(x.d())));
  }
  for (int g = 0; g < k; ++g) {
    scatter[static_cast<std::size_t>(g)] /=
        static_cast<double>(sizes[static_cast<std::size_t>(g)]);
  }

  double sum = 0.0;
  for (int g = 0; g < k; ++g) {
    double worst = 0.0;
    for (int h = 0; h < k; ++h) {
      if (h == g) continue;
      const double sep = std::sqrt(sq_dist(
          std::span<const double>(
              cent.data() + static_cast<std::size_t>(g) * static_cast<std::size_t>(x.d()),
              static_cast<std::size_t>(x.d())),
          cent.data() + static_cast<std::size_t>(h) * static_cast<std::size_t>(x.d())));
      const double mix = scatter[static_cast<std::size_t>(g)] +
                         scatter[static_cast<std::size_t>(h)];
      worst = std::max(worst, sep == 0.0 ? kInf : mix / sep);
    }
    sum += worst;
  }
  return sum / static_cast<double>(k);
}

}  // namespace discotec
