#pragma once

#include <cstdint>
#include <span>

#include "discotec/partition.hpp"

namespace discotec {

// Entrywise average of the ensemble's connectivity matrices, stored as
// exact co-association counts over t averaged matrices: value(i,j) equals
// count(i,j)/t. Diagonal counts are always t.
class ConsensusMatrix {
 public:
  ConsensusMatrix(int n, int t, std::vector<std::uint32_t> counts);

  int n() const { return n_; }
  int t() const { return t_; }

  std::uint32_t count(int i, int j) const {
    return counts_[static_cast<std::size_t>(i) * static_cast<std::size_t>(n_) +
                   static_cast<std::size_t>(j)];
  }
  double value(int i, int j) const {
    return static_cast<double>(count(i, j)) / static_cast<double>(t_);
  }
  std::span<const std::uint32_t> counts() const { return counts_; }
  std::span<const std::uint32_t> count_row(int i) const {
    return {counts_.data() +
                static_cast<std::size_t>(i) * static_cast<std::size_t>(n_),
            static_cast<std::size_t>(n_)};
  }

  // Sum of all n*n counts; mean entry value is total_count()/(t*n*n).
  std::uint64_t total_count() const { return total_; }

 private:
  int n_ = 0;
  int t_ = 0;
  std::uint64_t total_ = 0;
  std::vector<std::uint32_t> counts_;
};

// Consensus thresholded at its own mean; bits[i][j] = 1 iff C[i][j] >= mu.
struct BinarisedConsensus {
  BitMatrix bits;
  double threshold = 0.0;
};

ConsensusMatrix build_consensus(const Ensemble& e);

// Arithmetic mean over all n*n entries, diagonal included.
double mean_threshold(const ConsensusMatrix& c);

// Thresholding compares exact integers (count*n^2 vs total count), so the
// >= tie rule holds regardless of rounding in the reported mean.
BinarisedConsensus binarise(const ConsensusMatrix& c);

}  // namespace discotec
