#include "discotec/agreement.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace discotec {
namespace {

void require_same_n(const Partition& p, const Partition& q) {
  if (p.n() != q.n()) {
    throw std::invalid_argument("partitions cover different observation counts");
  }
}

std::int64_t pairs_of(std::int64_t m) { return m * (m - 1) / 2; }

bool same_clustering(const Partition& p, const Partition& q) {
  const auto a = p.canonical_labels();
  const auto b = q.canonical_labels();
  return std::equal(a.begin(), a.end(), b.begin());
}

}  // namespace

ContingencyTable ContingencyTable::build(const Partition& p,
                                         const Partition& q) {
  require_same_n(p, q);
  ContingencyTable tab;
  tab.k1 = p.k();
  tab.k2 = q.k();
  tab.n = p.n();
  tab.counts.assign(
      static_cast<std::size_t>(tab.k1) * static_cast<std::size_t>(tab.k2), 0);
  tab.row_marginals.assign(static_cast<std::size_t>(tab.k1), 0);
  tab.col_marginals.assign(static_cast<std::size_t>(tab.k2), 0);

  const auto a = p.canonical_labels();
  const auto b = q.canonical_labels();
  for (int i = 0; i < tab.n; ++i) {
    const auto r = static_cast<std::size_t>(a[static_cast<std::size_t>(i)]);
    const auto c = static_cast<std::size_t>(b[static_cast<std::size_t>(i)]);
    ++tab.counts[r * static_cast<std::size_t>(tab.k2) + c];
    ++tab.row_marginals[r];
    ++tab.col_marginals[c];
  }
  return tab;
}

double ari(const Partition& p, const Partition& q) {
  const auto tab = ContingencyTable::build(p, q);

  std::int64_t index = 0;
  for (const std::int64_t c : tab.counts) index += pairs_of(c);
  std::int64_t sum_rows = 0;
  for (const std::int64_t m : tab.row_marginals) sum_rows += pairs_of(m);
  std::int64_t sum_cols = 0;
  for (const std::int64_t m : tab.col_marginals) sum_cols += pairs_of(m);
  const std::int64_t total_pairs = pairs_of(tab.n);

  // Cross-multiplied Hubert-Arabie form: everything stays integer until one
  // final division, so small rational values (e.g. -1/2) come out exact.
  // numerator = 2*(total*index - sum_rows*sum_cols),
  // denominator = total*(sum_rows+sum_cols) - 2*sum_rows*sum_cols = 2*(max - expected)*total.
  const std::int64_t numerator =
      2 * (total_pairs * index - sum_rows * sum_cols);
  const std::int64_t denominator =
      total_pairs * (sum_rows + sum_cols) - 2 * sum_rows * sum_cols;
  if (denominator == 0) {
    // Both partitions single-cluster or both all-singletons.
    return same_clustering(p, q) ? 1.0 : 0.0;
  }
  return static_cast<double>(numerator) / static_cast<double>(denominator);
}

double nmi(const Partition& p, const Partition& q) {
  // Fix the argument order so nmi(p,q) == nmi(q,p) bit-for-bit: the mutual
  // information sum would otherwise accumulate in transposed order.
  {
    const auto a = p.canonical_labels();
    const auto b = q.canonical_labels();
    if (std::lexicographical_compare(b.begin(), b.end(), a.begin(), a.end())) {
      return nmi(q, p);
    }
  }
  const auto tab = ContingencyTable::build(p, q);
  const auto n = static_cast<double>(tab.n);

  double h1 = 0.0;
  for (const std::int64_t m : tab.row_marginals) {
    if (m > 0) {
      const double f = static_cast<double>(m) / n;
      h1 -= f * std::log(f);
    }
  }
  double h2 = 0.0;
  for (const std::int64_t m : tab.col_marginals) {
    if (m > 0) {
      const double f = static_cast<double>(m) / n;
      h2 -= f * std::log(f);
    }
  }
  if (h1 == 0.0 && h2 == 0.0) return 1.0;
  if (h1 == 0.0 || h2 == 0.0) return 0.0;

  double mi = 0.0;
  for (int r = 0; r < tab.k1; ++r) {
    for (int c = 0; c < tab.k2; ++c) {
      const std::int64_t joint = tab.at(r, c);
      if (joint == 0) continue;
      const double pj = static_cast<double>(joint) / n;
      mi += pj * std::log(
                     pj / ((static_cast<double>(
                                tab.row_marginals[static_cast<std::size_t>(r)]) /
                            n) *
                           (static_cast<double>(
                                tab.col_marginals[static_cast<std::size_t>(c)]) /
                            n)));
    }
  }
  return std::clamp(mi / std::sqrt(h1 * h2), 0.0, 1.0);
}

namespace {

double average_against_others(const Ensemble& e, int t, AgreementMetric metric) {
  if (e.size() < 2) {
    throw std::invalid_argument("ensemble averages need at least two models");
  }
  if (t < 0 || t >= e.size()) {
    throw std::invalid_argument("model index out of range");
  }
  double sum = 0.0;
  for (int other = 0; other < e.size(); ++other) {
    if (other == t) continue;
    sum += metric == AgreementMetric::Ari ? ari(e[t], e[other])
                                          : nmi(e[t], e[other]);
  }
  return sum / static_cast<double>(e.size() - 1);
}

}  // namespace

double aari(const Ensemble& e, int t) {
  return average_against_others(e, t, AgreementMetric::Ari);
}

double anmi(const Ensemble& e, int t) {
  return average_against_others(e, t, AgreementMetric::Nmi);
}

EnsembleAgreement average_agreement(const Ensemble& e, AgreementMetric metric) {
  const int t = e.size();
  if (t < 2) {
    throw std::invalid_argument("ensemble averages need at least two models");
  }

  std::vector<std::pair<int, int>> pairs;
  pairs.reserve(static_cast<std::size_t>(t) * (t - 1) / 2);
  for (int a = 0; a < t; ++a) {
    for (int b = a + 1; b < t; ++b) pairs.emplace_back(a, b);
  }

  EnsembleAgreement out;
  out.pairwise.assign(static_cast<std::size_t>(t) * static_cast<std::size_t>(t),
                      0.0);
  std::uint64_t evaluations = 0;
  const auto num_pairs = static_cast<std::int64_t>(pairs.size());
#pragma omp parallel for schedule(dynamic, 8) reduction(+ : evaluations)
  for (std::int64_t idx = 0; idx < num_pairs; ++idx) {
    const auto [a, b] = pairs[static_cast<std::size_t>(idx)];
    const double v = metric == AgreementMetric::Ari ? ari(e[a], e[b])
                                                    : nmi(e[a], e[b]);
    out.pairwise[static_cast<std::size_t>(a) * static_cast<std::size_t>(t) +
                 static_cast<std::size_t>(b)] = v;
    out.pairwise[static_cast<std::size_t>(b) * static_cast<std::size_t>(t) +
                 static_cast<std::size_t>(a)] = v;
    evaluations += 1;
  }
  out.pair_evaluations = evaluations;

  out.average.resize(static_cast<std::size_t>(t));
  for (int m = 0; m < t; ++m) {
    double sum = 0.0;
    for (int other = 0; other < t; ++other) {
      sum += out.pairwise[static_cast<std::size_t>(m) * static_cast<std::size_t>(t) +
                          static_cast<std::size_t>(other)];
    }
    out.average[static_cast<std::size_t>(m)] = sum / static_cast<double>(t - 1);
  }
  return out;
}

}  // namespace discotec
