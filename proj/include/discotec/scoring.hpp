#pragma once

#include <string>
#include <utility>
#include <vector>

#include "discotec/consensus.hpp"
#include "discotec/partition.hpp"

namespace discotec {

// Statistical distance used between a connectivity entry and the matching
// consensus entry. Binary bypasses the per-pair distances and compares
// against the mean-binarised consensus instead.
enum class DistanceKind { KL, TV, H2, Binary };

const char* to_string(DistanceKind kind);

// Unordered must-link / cannot-link index pairs. Pairs are stored
// normalised (a < b) and deduplicated; a pair present in both sets is a
// construction error, as are self-pairs and negative indices.
class ConstraintSet {
 public:
  ConstraintSet() = default;
  ConstraintSet(std::vector<std::pair<int, int>> must_link,
                std::vector<std::pair<int, int>> cannot_link);

  const std::vector<std::pair<int, int>>& must_link() const { return ml_; }
  const std::vector<std::pair<int, int>>& cannot_link() const { return cl_; }
  std::size_t size() const { return ml_.size() + cl_.size(); }
  bool empty() const { return ml_.empty() && cl_.empty(); }

  // Throws if any index falls outside [0, n).
  void validate_for(int n) const;

 private:
  std::vector<std::pair<int, int>> ml_;
  std::vector<std::pair<int, int>> cl_;
};

// D(B(a) || B(c)) for a single entry pair. a must be 0 or 1, c in [0,1];
// (a=0,c=1) and (a=1,c=0) cannot arise from a consensus containing the
// model and are rejected.
double pair_distance(DistanceKind kind, int a, double c);

// Mean pair distance over all n^2 ordered entries (kind != Binary).
double discotec_score(const ConnectivityMatrix& a, const ConsensusMatrix& c,
                      DistanceKind kind);

// Fraction of entries where the connectivity disagrees with the binarised
// consensus, over all n^2 ordered entries.
double binary_discotec_score(const ConnectivityMatrix& a,
                             const BinarisedConsensus& q);

// Fraction of violated constraints (approximate measure of
// informativeness). Requires at least one constraint.
double informativeness(const ConnectivityMatrix& a, const ConstraintSet& cs);
double informativeness(const Partition& p, const ConstraintSet& cs);

enum class Orientation { Minimise, Maximise };

// Scores and induced ranking for one method over one ensemble. `total` is
// always minimise-oriented: for maximise-oriented raw scores (AARI/ANMI)
// it is the negated raw score plus the regularisation, so the ranking rule
// (ascending by total, ties by model index) is uniform across methods.
struct ScoreReport {
  std::string method;
  Orientation raw_orientation = Orientation::Minimise;
  std::vector<double> raw;
  std::vector<double> regularisation;
  std::vector<double> total;
  std::vector<int> ranking;
  std::vector<std::string> warnings;
};

// Ascending by value, ties broken by smaller index.
std::vector<int> rank_ascending(const std::vector<double>& totals);

// Scores every ensemble member against the shared consensus and ranks
// them. Constraints are optional; an empty set behaves like none.
ScoreReport rank_ensemble(const Ensemble& e, DistanceKind kind,
                          const ConstraintSet* cs = nullptr);

}  // namespace discotec
