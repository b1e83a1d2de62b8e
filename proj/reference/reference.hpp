#pragma once

// Naive serial reference implementations used as test oracles and as the
// baseline in the kernel benchmark. Everything here is written from the
// definitions with plain double loops and dense storage; none of it calls
// into the optimised library paths.

#include <cstdint>
#include <span>
#include <vector>

#include "discotec/indices.hpp"
#include "discotec/partition.hpp"
#include "discotec/scoring.hpp"

namespace discotec::ref {

std::vector<std::vector<int>> connectivity_dense(const Partition& p);
std::vector<std::vector<double>> consensus_dense(const Ensemble& e);
double consensus_mean(const std::vector<std::vector<double>>& c);
std::vector<std::vector<int>> binarise_dense(
    const std::vector<std::vector<double>>& c);

double pair_distance(DistanceKind kind, int a, double c);
double discotec_score(const Partition& model, const Ensemble& e,
                      DistanceKind kind);
double binary_discotec_score(const Partition& model, const Ensemble& e);
double informativeness(const Partition& model,
                       const std::vector<std::pair<int, int>>& must_link,
                       const std::vector<std::pair<int, int>>& cannot_link);

// Pair-counting route (over all n(n-1)/2 observation pairs), unlike the
// library's contingency-table algebra.
double ari(const Partition& p, const Partition& q);
// Direct joint-distribution entropies and mutual information.
double nmi(const Partition& p, const Partition& q);
double aari(const Ensemble& e, int t);
double anmi(const Ensemble& e, int t);

// O(n^2) concordant/discordant enumeration with tie counting.
double kendall_tau_b(std::span<const double> x, std::span<const double> y);
double pearson(std::span<const double> x, std::span<const double> y);

double wgss(const DataMatrix& x, const Partition& p);
double chi(const DataMatrix& x, const Partition& p);
double silhouette(const DataMatrix& x, const Partition& p);
double dbi(const DataMatrix& x, const Partition& p);

}  // namespace discotec::ref
