#include "discotec/scoring.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace discotec {
namespace {

std::vector<std::pair<int, int>> normalise_pairs(
    std::vector<std::pair<int, int>> pairs, const char* what) {
  for (auto& [a, b] : pairs) {
    if (a < 0 || b < 0) {
      throw std::invalid_argument(std::string(what) +
                                  " constraint has a negative index");
    }
    if (a == b) {
      throw std::invalid_argument(std::string(what) +
                                  " constraint pairs an observation with itself");
    }
    if (a > b) std::swap(a, b);
  }
  std::sort(pairs.begin(), pairs.end());
  pairs.erase(std::unique(pairs.begin(), pairs.end()), pairs.end());
  return pairs;
}

// Distance values tabulated per co-association count. Infeasible entries
// (a=0 with count==t, a=1 with count==0) are NaN so they can be detected
// after a scan instead of branching per pair.
struct DistanceTables {
  std::vector<double> zero;
  std::vector<double> one;

  static DistanceTables build(DistanceKind kind, int t) {
    DistanceTables tab;
    const auto nan = std::numeric_limits<double>::quiet_NaN();
    tab.zero.resize(static_cast<std::size_t>(t) + 1, nan);
    tab.one.resize(static_cast<std::size_t>(t) + 1, nan);
    for (int c = 0; c < t; ++c) {
      tab.zero[static_cast<std::size_t>(c)] =
          pair_distance(kind, 0, static_cast<double>(c) / t);
    }
    for (int c = 1; c <= t; ++c) {
      tab.one[static_cast<std::size_t>(c)] =
          pair_distance(kind, 1, static_cast<double>(c) / t);
    }
    return tab;
  }
};

double score_labels_against_consensus(std::span<const Label> canon,
                                      const ConsensusMatrix& c,
                                      const DistanceTables& tab) {
  const int n = c.n();
  double sum = 0.0;
  for (int i = 0; i < n; ++i) {
    const Label li = canon[static_cast<std::size_t>(i)];
    const auto row = c.count_row(i);
    double row_sum = 0.0;
    for (int j = 0; j < n; ++j) {
      const auto cnt = static_cast<std::size_t>(row[static_cast<std::size_t>(j)]);
      row_sum += (canon[static_cast<std::size_t>(j)] == li) ? tab.one[cnt]
                                                            : tab.zero[cnt];
    }
    sum += row_sum;
  }
  if (std::isnan(sum)) {
    throw std::domain_error(
        "infeasible connectivity/consensus combination encountered");
  }
  return sum / (static_cast<double>(n) * static_cast<double>(n));
}

}  // namespace

const char* to_string(DistanceKind kind) {
  switch (kind) {
    case DistanceKind::KL: return "kl";
    case DistanceKind::TV: return "tv";
    case DistanceKind::H2: return "h2";
    case DistanceKind::Binary: return "binary";
  }
  return "?";
}

ConstraintSet::ConstraintSet(std::vector<std::pair<int, int>> must_link,
                             std::vector<std::pair<int, int>> cannot_link)
    : ml_(normalise_pairs(std::move(must_link), "must-link")),
      cl_(normalise_pairs(std::move(cannot_link), "cannot-link")) {
  std::vector<std::pair<int, int>> both;
  std::set_intersection(ml_.begin(), ml_.end(), cl_.begin(), cl_.end(),
                        std::back_inserter(both));
  if (!both.empty()) {
    throw std::invalid_argument("pair appears as both must-link and cannot-link");
  }
}

void ConstraintSet::validate_for(int n) const {
  for (const auto& pairs : {ml_, cl_}) {
    for (const auto& [a, b] : pairs) {
      if (b >= n) {
        throw std::invalid_argument("constraint index out of range");
      }
    }
  }
}

double pair_distance(DistanceKind kind, int a, double c) {
  if (kind == DistanceKind::Binary) {
    throw std::invalid_argument(
        "pair_distance is undefined for the binarised variant");
  }
  if (a != 0 && a != 1) {
    throw std::invalid_argument("connectivity entry must be 0 or 1");
  }
  if (!(c >= 0.0 && c <= 1.0)) {
    throw std::invalid_argument("consensus entry must lie in [0,1]");
  }
  if ((a == 0 && c == 1.0) || (a == 1 && c == 0.0)) {
    throw std::domain_error(
        "infeasible connectivity/consensus combination (consensus is an average "
        "that includes the model)");
  }
  switch (kind) {
    case DistanceKind::KL:
      return a == 0 ? -std::log(1.0 - c) : -std::log(c);
    case DistanceKind::TV:
      return a == 0 ? c : 1.0 - c;
    case DistanceKind::H2:
      return a == 0 ? 1.0 - std::sqrt(1.0 - c) : 1.0 - std::sqrt(c);
    case DistanceKind::Binary:
      break;
  }
  return 0.0;
}

double discotec_score(const ConnectivityMatrix& a, const ConsensusMatrix& c,
                      DistanceKind kind) {
  if (kind == DistanceKind::Binary) {
    throw std::invalid_argument("use binary_discotec_score for the binarised variant");
  }
  if (a.n() != c.n()) {
    throw std::invalid_argument("connectivity and consensus sizes differ");
  }
  const int n = c.n();
  const auto tab = DistanceTables::build(kind, c.t());
  double sum = 0.0;
  for (int i = 0; i < n; ++i) {
    const auto row = c.count_row(i);
    double row_sum = 0.0;
    for (int j = 0; j < n; ++j) {
      const auto cnt = static_cast<std::size_t>(row[static_cast<std::size_t>(j)]);
      row_sum += a.get(i, j) ? tab.one[cnt] : tab.zero[cnt];
    }
    sum += row_sum;
  }
  if (std::isnan(sum)) {
    throw std::domain_error(
        "infeasible connectivity/consensus combination encountered");
  }
  return sum / (static_cast<double>(n) * static_cast<double>(n));
}

double binary_discotec_score(const ConnectivityMatrix& a,
                             const BinarisedConsensus& q) {
  if (a.n() != q.bits.n()) {
    throw std::invalid_argument("connectivity and consensus sizes differ");
  }
  const int n = a.n();
  std::uint64_t mismatches = 0;
  for (int i = 0; i < n; ++i) {
    const auto ra = a.row(i);
    const auto rq = q.bits.row(i);
    for (std::size_t w = 0; w < ra.size(); ++w) {
      mismatches += std::popcount(ra[w] ^ rq[w]);
    }
  }
  return static_cast<double>(mismatches) /
         (static_cast<double>(n) * static_cast<double>(n));
}

namespace {

double informativeness_impl(const ConstraintSet& cs, auto&& connected) {
  if (cs.empty()) {
    throw std::invalid_argument(
        "informativeness needs at least one constraint");
  }
  std::uint64_t violations = 0;
  for (const auto& [a, b] : cs.must_link()) {
    violations += connected(a, b) ? 0u : 1u;
  }
  for (const auto& [a, b] : cs.cannot_link()) {
    violations += connected(a, b) ? 1u : 0u;
  }
  return static_cast<double>(violations) / static_cast<double>(cs.size());
}

}  // namespace

double informativeness(const ConnectivityMatrix& a, const ConstraintSet& cs) {
  cs.validate_for(a.n());
  return informativeness_impl(cs, [&](int i, int j) { return a.get(i, j); });
}

double informativeness(const Partition& p, const ConstraintSet& cs) {
  cs.validate_for(p.n());
  return informativeness_impl(
      cs, [&](int i, int j) { return p.label(i) == p.label(j); });
}

std::vector<int> rank_ascending(const std::vector<double>& totals) {
  std::vector<int> order(totals.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    const double ta = totals[static_cast<std::size_t>(a)];
    const double tb = totals[static_cast<std::size_t>(b)];
    if (ta != tb) return ta < tb;
    return a < b;
  });
  return order;
}

ScoreReport rank_ensemble(const Ensemble& e, DistanceKind kind,
                          const ConstraintSet* cs) {
  ScoreReport report;
  report.method = to_string(kind);
  report.raw_orientation = Orientation::Minimise;

  const int t = e.size();
  if (t < 3) {
    report.warnings.push_back(
        "ensemble has fewer than 3 models; the consensus is weakly informative");
  }
  const bool constrained = cs != nullptr && !cs->empty();
  if (constrained) cs->validate_for(e.n());

  const ConsensusMatrix consensus = build_consensus(e);
  report.raw.resize(static_cast<std::size_t>(t));
  report.regularisation.assign(static_cast<std::size_t>(t), 0.0);
  report.total.resize(static_cast<std::size_t>(t));

  if (kind == DistanceKind::Binary) {
    const BinarisedConsensus q = binarise(consensus);
#pragma omp parallel for schedule(dynamic)
    for (int m = 0; m < t; ++m) {
      report.raw[static_cast<std::size_t>(m)] =
          binary_discotec_score(connectivity(e[m]), q);
    }
  } else {
    const auto tab = DistanceTables::build(kind, t);
#pragma omp parallel for schedule(dynamic)
    for (int m = 0; m < t; ++m) {
      report.raw[static_cast<std::size_t>(m)] =
          score_labels_against_consensus(e[m].canonical_labels(), consensus, tab);
    }
  }

  for (int m = 0; m < t; ++m) {
    if (constrained) {
      report.regularisation[static_cast<std::size_t>(m)] =
          informativeness(e[m], *cs);
    }
    report.total[static_cast<std::size_t>(m)] =
        report.raw[static_cast<std::size_t>(m)] +
        report.regularisation[static_cast<std::size_t>(m)];
  }
  report.ranking = rank_ascending(report.total);
  return report;
}

}  // namespace discotec
