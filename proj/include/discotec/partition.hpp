#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

namespace discotec {

using Label = std::int32_t;

// Hard assignment of n observations to clusters. Label ids are arbitrary
// non-negative integers; k counts the distinct ids present.
class Partition {
 public:
  explicit Partition(std::vector<Label> labels);

  int n() const { return static_cast<int>(labels_.size()); }
  int k() const { return static_cast<int>(distinct_.size()); }
  std::span<const Label> labels() const { return labels_; }
  Label label(int i) const { return labels_[static_cast<std::size_t>(i)]; }

  // Distinct ids in order of first appearance.
  const std::vector<Label>& distinct() const { return distinct_; }
  // Labels remapped to 0..k-1 in order of first appearance.
  std::span<const Label> canonical_labels() const { return canonical_; }

  bool operator==(const Partition& other) const {
    return labels_ == other.labels_;
  }

 private:
  std::vector<Label> labels_;
  std::vector<Label> distinct_;
  std::vector<Label> canonical_;
};

// Relabels to 0..k-1 in order of first appearance. Idempotent.
Partition canonicalise(const Partition& p);

// True iff the partition is one cluster or all singletons. Either extreme
// makes consensus patterns and internal indices uninformative.
bool is_degenerate(const Partition& p);

// Member indices per canonical cluster id.
std::vector<std::vector<int>> cluster_members(const Partition& p);

// Symmetric binary n-by-n matrix with packed 64-bit rows. Unused tail bits
// of each row are kept zero so whole-word operations stay valid.
class BitMatrix {
 public:
  explicit BitMatrix(int n);

  int n() const { return n_; }
  int words_per_row() const { return wpr_; }

  bool get(int i, int j) const {
    const auto w = static_cast<std::size_t>(i) * static_cast<std::size_t>(wpr_);
    return (words_[w + static_cast<std::size_t>(j >> 6)] >>
            (static_cast<unsigned>(j) & 63u)) &
           1u;
  }
  // Sets both (i,j) and (j,i).
  void set(int i, int j);

  std::span<const std::uint64_t> row(int i) const {
    return {words_.data() +
                static_cast<std::size_t>(i) * static_cast<std::size_t>(wpr_),
            static_cast<std::size_t>(wpr_)};
  }
  std::span<std::uint64_t> row(int i) {
    return {words_.data() +
                static_cast<std::size_t>(i) * static_cast<std::size_t>(wpr_),
            static_cast<std::size_t>(wpr_)};
  }

  // Number of set entries over all n*n ordered positions.
  std::uint64_t count_ones() const;

  bool operator==(const BitMatrix& other) const = default;

 private:
  int n_ = 0;
  int wpr_ = 0;
  std::vector<std::uint64_t> words_;
};

using ConnectivityMatrix = BitMatrix;

// M[i][j] = 1 iff p puts i and j in the same cluster. Symmetric, unit
// diagonal, invariant under relabeling.
ConnectivityMatrix connectivity(const Partition& p);

// Ordered pool of partitions over the same n observations.
class Ensemble {
 public:
  explicit Ensemble(std::vector<Partition> partitions);

  int n() const { return n_; }
  int size() const { return static_cast<int>(partitions_.size()); }
  const Partition& operator[](int t) const {
    return partitions_[static_cast<std::size_t>(t)];
  }
  const std::vector<Partition>& partitions() const { return partitions_; }

 private:
  std::vector<Partition> partitions_;
  int n_ = 0;
};

// Drops degenerate members; second element lists the kept source indices.
std::pair<Ensemble, std::vector<int>> filter_degenerate(const Ensemble& e);

}  // namespace discotec
