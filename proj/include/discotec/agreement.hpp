#pragma once

#include <cstdint>
#include <vector>

#include "discotec/partition.hpp"

namespace discotec {

// Co-occurrence counts between the clusters of two partitions plus the
// marginal cluster sizes.
struct ContingencyTable {
  int k1 = 0;
  int k2 = 0;
  int n = 0;
  std::vector<std::int64_t> counts;         // k1 * k2, row-major
  std::vector<std::int64_t> row_marginals;  // k1
  std::vector<std::int64_t> col_marginals;  // k2

  static ContingencyTable build(const Partition& p, const Partition& q);

  std::int64_t at(int i, int j) const {
    return counts[static_cast<std::size_t>(i) * static_cast<std::size_t>(k2) +
                  static_cast<std::size_t>(j)];
  }
};

// Hubert-Arabie adjusted Rand index. When the adjustment denominator is
// zero (both partitions single-cluster or both all-singletons) returns 1
// for identical partitions and 0 otherwise.
double ari(const Partition& p, const Partition& q);

// Mutual information normalised by the geometric mean of the label
// entropies. Both entropies zero -> 1 (the partitions are then identical);
// exactly one zero -> 0.
double nmi(const Partition& p, const Partition& q);

// Mean agreement of model t with every other ensemble member.
double aari(const Ensemble& e, int t);
double anmi(const Ensemble& e, int t);

enum class AgreementMetric { Ari, Nmi };

struct EnsembleAgreement {
  std::vector<double> average;         // per model, mean over the T-1 others
  std::vector<double> pairwise;       // T x T symmetric, zero diagonal
  std::uint64_t pair_evaluations = 0;  // always T(T-1)/2
};

// Fills the full pairwise matrix once and derives every model's average
// from it; pair_evaluations counts the metric computations performed.
EnsembleAgreement average_agreement(const Ensemble& e, AgreementMetric metric);

}  // namespace discotec
