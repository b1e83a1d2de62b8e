#include "discotec/consensus.hpp"

#include <numeric>
#include <stdexcept>

namespace discotec {

ConsensusMatrix::ConsensusMatrix(int n, int t, std::vector<std::uint32_t> counts)
    : n_(n), t_(t), counts_(std::move(counts)) {
  if (n <= 0 || t <= 0) {
    throw std::invalid_argument("consensus needs n > 0 and t > 0");
  }
  if (counts_.size() !=
      static_cast<std::size_t>(n) * static_cast<std::size_t>(n)) {
    throw std::invalid_argument("consensus count buffer has the wrong size");
  }
  total_ = std::accumulate(counts_.begin(), counts_.end(), std::uint64_t{0},
                           [](std::uint64_t a, std::uint32_t c) { return a + c; });
}

ConsensusMatrix build_consensus(const Ensemble& e) {
  const int n = e.n();
  const int t = e.size();
  std::vector<std::uint32_t> counts(
      static_cast<std::size_t>(n) * static_cast<std::size_t>(n), 0);

  // Per-partition member lists; only co-clustered pairs contribute.
  std::vector<std::vector<std::vector<int>>> members(
      static_cast<std::size_t>(t));
  for (int m = 0; m < t; ++m) {
    members[static_cast<std::size_t>(m)] = cluster_members(e[m]);
  }

  // Rows are thread-exclusive and the accumulation is an integer sum, so
  // the result is identical for any schedule and thread count.
#pragma omp parallel for schedule(dynamic, 16)
  for (int i = 0; i < n; ++i) {
    std::uint32_t* row =
        counts.data() + static_cast<std::size_t>(i) * static_cast<std::size_t>(n);
    for (int m = 0; m < t; ++m) {
      const auto g = static_cast<std::size_t>(
          e[m].canonical_labels()[static_cast<std::size_t>(i)]);
      for (const int j : members[static_cast<std::size_t>(m)][g]) {
        ++row[j];
      }
    }
  }
  return ConsensusMatrix(n, t, std::move(counts));
}

double mean_threshold(const ConsensusMatrix& c) {
  const auto n = static_cast<double>(c.n());
  return static_cast<double>(c.total_count()) /
         (static_cast<double>(c.t()) * n * n);
}

BinarisedConsensus binarise(const ConsensusMatrix& c) {
  const int n = c.n();
  // count/t >= total/(t*n^2)  <=>  count*n^2 >= total, all in exact integers.
  const std::uint64_t total = c.total_count();
  const auto n2 = static_cast<std::uint64_t>(n) * static_cast<std::uint64_t>(n);

  BinarisedConsensus out{BitMatrix(n), mean_threshold(c)};
#pragma omp parallel for schedule(static)
  for (int i = 0; i < n; ++i) {
    const auto row = c.count_row(i);
    auto bits = out.bits.row(i);
    for (int j = 0; j < n; ++j) {
      if (static_cast<std::uint64_t>(row[static_cast<std::size_t>(j)]) * n2 >=
          total) {
        bits[static_cast<std::size_t>(j >> 6)] |=
            std::uint64_t{1} << (static_cast<unsigned>(j) & 63u);
      }
    }
  }
  return out;
}

}  // namespace discotec
