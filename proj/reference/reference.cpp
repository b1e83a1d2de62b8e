#include "reference.hpp"

#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>

namespace discotec::ref {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double euclidean(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) {
    s += (a[j] - b[j]) * (a[j] - b[j]);
  }
  return std::sqrt(s);
}

// label -> member list, keyed by raw label value.
std::map<Label, std::vector<int>> groups_of(const Partition& p) {
  std::map<Label, std::vector<int>> groups;
  for (int i = 0; i < p.n(); ++i) groups[p.label(i)].push_back(i);
  return groups;
}

}  // namespace

std::vector<std::vector<int>> connectivity_dense(const Partition& p) {
  const int n = p.n();
  std::vector<std::vector<int>> m(static_cast<std::size_t>(n),
                                  std::vector<int>(static_cast<std::size_t>(n), 0));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      m[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
          p.label(i) == p.label(j) ? 1 : 0;
    }
  }
  return m;
}

std::vector<std::vector<double>> consensus_dense(const Ensemble& e) {
  const int n = e.n();
  std::vector<std::vector<double>> c(
      static_cast<std::size_t>(n),
      std::vector<double>(static_cast<std::size_t>(n), 0.0));
  for (int t = 0; t < e.size(); ++t) {
    const auto a = connectivity_dense(e[t]);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        c[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] +=
            a[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
      }
    }
  }
  for (auto& row : c) {
    for (double& v : row) v /= static_cast<double>(e.size());
  }
  return c;
}

double consensus_mean(const std::vector<std::vector<double>>& c) {
  double sum = 0.0;
  for (const auto& row : c) {
    for (const double v : row) sum += v;
  }
  return sum / (static_cast<double>(c.size()) * static_cast<double>(c.size()));
}

std::vector<std::vector<int>> binarise_dense(
    const std::vector<std::vector<double>>& c) {
  const double mu = consensus_mean(c);
  std::vector<std::vector<int>> q(c.size(),
                                  std::vector<int>(c.size(), 0));
  for (std::size_t i = 0; i < c.size(); ++i) {
    for (std::size_t j = 0; j < c.size(); ++j) {
      q[i][j] = c[i][j] >= mu ? 1 : 0;
    }
  }
  return q;
}

double pair_distance(DistanceKind kind, int a, double c) {
  switch (kind) {
    case DistanceKind::KL:
      return a == 0 ? -std::log(1.0 - c) : -std::log(c);
    case DistanceKind::TV:
      return a == 0 ? c : 1.0 - c;
    case DistanceKind::H2:
      return a == 0 ? 1.0 - std::sqrt(1.0 - c) : 1.0 - std::sqrt(c);
    case DistanceKind::Binary:
      throw std::invalid_argument("no per-pair distance for the binary variant");
  }
  return 0.0;
}

double discotec_score(const Partition& model, const Ensemble& e,
                      DistanceKind kind) {
  const auto c = consensus_dense(e);
  const int n = model.n();
  double sum = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const int a = model.label(i) == model.label(j) ? 1 : 0;
      sum += ref::pair_distance(kind, a,
                           c[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]);
    }
  }
  return sum / (static_cast<double>(n) * static_cast<double>(n));
}

double binary_discotec_score(const Partition& model, const Ensemble& e) {
  const auto q = binarise_dense(consensus_dense(e));
  const int n = model.n();
  double sum = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const int a = model.label(i) == model.label(j) ? 1 : 0;
      sum += std::abs(q[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] - a);
    }
  }
  return sum / (static_cast<double>(n) * static_cast<double>(n));
}

double informativeness(const Partition& model,
                       const std::vector<std::pair<int, int>>& must_link,
                       const std::vector<std::pair<int, int>>& cannot_link) {
  double violations = 0.0;
  for (const auto& [a, b] : must_link) {
    violations += model.label(a) == model.label(b) ? 0.0 : 1.0;
  }
  for (const auto& [a, b] : cannot_link) {
    violations += model.label(a) == model.label(b) ? 1.0 : 0.0;
  }
  return violations /
         static_cast<double>(must_link.size() + cannot_link.size());
}

double ari(const Partition& p, const Partition& q) {
  const int n = p.n();
  std::int64_t ss = 0;  // same in both
  std::int64_t sd = 0;  // same in p, different in q
  std::int64_t ds = 0;
  std::int64_t dd = 0;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const bool in_p = p.label(i) == p.label(j);
      const bool in_q = q.label(i) == q.label(j);
      if (in_p && in_q) ++ss;
      else if (in_p) ++sd;
      else if (in_q) ++ds;
      else ++dd;
    }
  }
  const double numerator = 2.0 * (static_cast<double>(ss) * static_cast<double>(dd) -
                                  static_cast<double>(sd) * static_cast<double>(ds));
  const double denominator =
      (static_cast<double>(ss) + static_cast<double>(sd)) *
          (static_cast<double>(sd) + static_cast<double>(dd)) +
      (static_cast<double>(ss) + static_cast<double>(ds)) *
          (static_cast<double>(ds) + static_cast<double>(dd));
  if (denominator == 0.0) {
    // Both partitions single-cluster or both all-singletons.
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) {
        if ((p.label(i) == p.label(j)) != (q.label(i) == q.label(j))) {
          return 0.0;
        }
      }
    }
    return 1.0;
  }
  return numerator / denominator;
}

double nmi(const Partition& p, const Partition& q) {
  const int n = p.n();
  std::map<Label, double> pp;
  std::map<Label, double> pq;
  std::map<std::pair<Label, Label>, double> joint;
  for (int i = 0; i < n; ++i) {
    pp[p.label(i)] += 1.0 / n;
    pq[q.label(i)] += 1.0 / n;
    joint[{p.label(i), q.label(i)}] += 1.0 / n;
  }
  double h1 = 0.0;
  for (const auto& [label, prob] : pp) h1 -= prob * std::log(prob);
  double h2 = 0.0;
  for (const auto& [label, prob] : pq) h2 -= prob * std::log(prob);
  if (h1 == 0.0 && h2 == 0.0) return 1.0;
  if (h1 == 0.0 || h2 == 0.0) return 0.0;
  double mi = 0.0;
  for (const auto& [labels, prob] : joint) {
    mi += prob * std::log(prob / (pp[labels.first] * pq[labels.second]));
  }
  const double value = mi / std::sqrt(h1 * h2);
  return value < 0.0 ? 0.0 : (value > 1.0 ? 1.0 : value);
}

double aari(const Ensemble& e, int t) {
  double sum = 0.0;
  for (int other = 0; other < e.size(); ++other) {
    if (other != t) sum += ari(e[t], e[other]);
  }
  return sum / static_cast<double>(e.size() - 1);
}

double anmi(const Ensemble& e, int t) {
  double sum = 0.0;
  for (int other = 0; other < e.size(); ++other) {
    if (other != t) sum += nmi(e[t], e[other]);
  }
  return sum / static_cast<double>(e.size() - 1);
}

double kendall_tau_b(std::span<const double> x, std::span<const double> y) {
  const auto n = static_cast<std::int64_t>(x.size());
  std::int64_t concordant = 0;
  std::int64_t discordant = 0;
  std::int64_t ties_x = 0;
  std::int64_t ties_y = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    for (std::size_t j = i + 1; j < x.size(); ++j) {
      const bool tie_x = x[i] == x[j];
      const bool tie_y = y[i] == y[j];
      if (tie_x) ++ties_x;
      if (tie_y) ++ties_y;
      if (tie_x || tie_y) continue;
      const bool same_order = (x[i] < x[j]) == (y[i] < y[j]);
      if (same_order) ++concordant;
      else ++discordant;
    }
  }
  const std::int64_t total = n * (n - 1) / 2;
  if (ties_x == total || ties_y == total) {
    throw std::domain_error("kendall tau-b is undefined for a constant vector");
  }
  return static_cast<double>(concordant - discordant) /
         std::sqrt(static_cast<double>(total - ties_x) *
                   static_cast<double>(total - ties_y));
}

double pearson(std::span<const double> x, std::span<const double> y) {
  const auto n = static_cast<double>(x.size());
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0.0;
  double sxx = 0.0;
  double syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0.0 || syy == 0.0) {
    throw std::domain_error("pearson correlation is undefined for a constant vector");
  }
  return sxy / std::sqrt(sxx * syy);
}

double wgss(const DataMatrix& x, const Partition& p) {
  double sum = 0.0;
  for (const auto& [label, members] : groups_of(p)) {
    std::vector<double> centroid(static_cast<std::size_t>(x.d()), 0.0);
    for (const int i : members) {
      const auto row = x.row(i);
      for (int j = 0; j < x.d(); ++j) {
        centroid[static_cast<std::size_t>(j)] += row[static_cast<std::size_t>(j)];
      }
    }
    for (double& v : centroid) v /= static_cast<double>(members.size());
    for (const int i : members) {
      const auto row = x.row(i);
      for (int j = 0; j < x.d(); ++j) {
        const double diff =
            row[static_cast<std::size_t>(j)] - centroid[static_cast<std::size_t>(j)];
        sum += diff * diff;
      }
    }
  }
  return sum;
}

double chi(const DataMatrix& x, const Partition& p) {
  const int n = x.n();
  const int k = p.k();
  if (k < 2 || k > n - 1) {
    throw std::domain_error("Calinski-Harabasz needs 2 <= k <= n-1");
  }
  std::vector<double> mean(static_cast<std::size_t>(x.d()), 0.0);
  for (int i = 0; i < n; ++i) {
    const auto row = x.row(i);
    for (int j = 0; j < x.d(); ++j) {
      mean[static_cast<std::size_t>(j)] += row[static_cast<std::size_t>(j)] / n;
    }
  }
  double between = 0.0;
  for (const auto& [label, members] : groups_of(p)) {
    std::vector<double> centroid(static_cast<std::size_t>(x.d()), 0.0);
    for (const int i : members) {
      const auto row = x.row(i);
      for (int j = 0; j < x.d(); ++j) {
        centroid[static_cast<std::size_t>(j)] += row[static_cast<std::size_t>(j)];
      }
    }
    for (double& v : centroid) v /= static_cast<double>(members.size());
    double dist = 0.0;
    for (int j = 0; j < x.d(); ++j) {
      const double diff = centroid[static_cast<std::size_t>(j)] -
                          mean[static_cast<std::size_t>(j)];
      dist += diff * diff;
    }
    between += static_cast<double>(members.size()) * dist;
  }
  const double within = ref::wgss(x, p);
  if (within == 0.0) return kInf;
  return (between / (k - 1.0)) / (within / (n - k));
}

double silhouette(const DataMatrix& x, const Partition& p) {
  const int n = x.n();
  const int k = p.k();
  if (k < 2 || k > n - 1) {
    throw std::domain_error("silhouette needs 2 <= k <= n-1");
  }
  const auto groups = groups_of(p);
  double total = 0.0;
  for (int i = 0; i < n; ++i) {
    const auto& own = groups.at(p.label(i));
    if (own.size() == 1) continue;
    double a = 0.0;
    for (const int j : own) {
      if (j != i) a += euclidean(x.row(i), x.row(j));
    }
    a /= static_cast<double>(own.size() - 1);
    double b = kInf;
    for (const auto& [label, members] : groups) {
      if (label == p.label(i)) continue;
      double mean_dist = 0.0;
      for (const int j : members) mean_dist += euclidean(x.row(i), x.row(j));
      mean_dist /= static_cast<double>(members.size());
      b = std::min(b, mean_dist);
    }
    const double denom = std::max(a, b);
    total += denom == 0.0 ? 0.0 : (b - a) / denom;
  }
  return total / static_cast<double>(n);
}

double dbi(const DataMatrix& x, const Partition& p) {
  const int n = x.n();
  const int k = p.k();
  if (k < 2 || k > n) {
    throw std::domain_error("Davies-Bouldin needs 2 <= k <= n");
  }
  const auto groups = groups_of(p);
  std::vector<std::vector<double>> cents;
  std::vector<double> scatters;
  for (const auto& [label, members] : groups) {
    std::vector<double> centroid(static_cast<std::size_t>(x.d()), 0.0);
    for (const int i : members) {
      const auto row = x.row(i);
      for (int j = 0; j < x.d(); ++j) {
        centroid[static_cast<std::size_t>(j)] += row[static_cast<std::size_t>(j)];
      }
    }
    for (double& v : centroid) v /= static_cast<double>(members.size());
    double s = 0.0;
    for (const int i : members) s += euclidean(x.row(i), centroid);
    scatters.push_back(s / static_cast<double>(members.size()));
    cents.push_back(std::move(centroid));
  }
  double sum = 0.0;
  for (std::size_t g = 0; g < cents.size(); ++g) {
    double worst = 0.0;
    for (std::size_t h = 0; h < cents.size(); ++h) {
      if (h == g) continue;
      const double sep = euclidean(cents[g], cents[h]);
      worst = std::max(worst, sep == 0.0 ? kInf : (scatters[g] + scatters[h]) / sep);
    }
    sum += worst;
  }
  return sum / static_cast<double>(cents.size());
}

}  // namespace discotec::ref
