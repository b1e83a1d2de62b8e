#include "discotec/partition.hpp"

#include <algorithm>
#include <bit>
#include <stdexcept>
#include <unordered_map>

namespace discotec {

Partition::Partition(std::vector<Label> labels) : labels_(std::move(labels)) {
  if (labels_.empty()) {
    throw std::invalid_argument("partition needs at least one observation");
  }
  canonical_.resize(labels_.size());

  Label max_label = 0;
  bool negative = false;
  for (const Label l : labels_) {
    if (l < 0) negative = true;
    max_label = std::max(max_label, l);
  }
  if (negative) {
    throw std::invalid_argument("cluster labels must be non-negative");
  }

  // Dense id map when the label universe is small, hash map otherwise.
  if (static_cast<std::size_t>(max_label) < 4 * labels_.size() + 64) {
    std::vector<Label> pos(static_cast<std::size_t>(max_label) + 1, -1);
    for (std::size_t i = 0; i < labels_.size(); ++i) {
      Label& p = pos[static_cast<std::size_t>(labels_[i])];
      if (p < 0) {
        p = static_cast<Label>(distinct_.size());
        distinct_.push_back(labels_[i]);
      }
      canonical_[i] = p;
    }
  } else {
    std::unordered_map<Label, Label> pos;
    pos.reserve(labels_.size());
    for (std::size_t i = 0; i < labels_.size(); ++i) {
      auto [it, inserted] =
          pos.try_emplace(labels_[i], static_cast<Label>(distinct_.size()));
      if (inserted) distinct_.push_back(labels_[i]);
      canonical_[i] = it->second;
    }
  }
}

Partition canonicalise(const Partition& p) {
  auto canon = p.canonical_labels();
  return Partition(std::vector<Label>(canon.begin(), canon.end()));
}

bool is_degenerate(const Partition& p) {
  return p.k() == 1 || p.k() == p.n();
}

std::vector<std::vector<int>> cluster_members(const Partition& p) {
  std::vector<std::vector<int>> members(static_cast<std::size_t>(p.k()));
  const auto canon = p.canonical_labels();
  std::vector<int> sizes(static_cast<std::size_t>(p.k()), 0);
  for (int i = 0; i < p.n(); ++i) {
    ++sizes[static_cast<std::size_t>(canon[static_cast<std::size_t>(i)])];
  }
  for (int g = 0; g < p.k(); ++g) {
    members[static_cast<std::size_t>(g)].reserve(
        static_cast<std::size_t>(sizes[static_cast<std::size_t>(g)]));
  }
  for (int i = 0; i < p.n(); ++i) {
    members[static_cast<std::size_t>(canon[static_cast<std::size_t>(i)])]
        .push_back(i);
  }
  return members;
}

BitMatrix::BitMatrix(int n) : n_(n), wpr_((n + 63) / 64) {
  if (n <= 0) throw std::invalid_argument("matrix size must be positive");
  words_.assign(static_cast<std::size_t>(n) * static_cast<std::size_t>(wpr_),
                0);
}

void BitMatrix::set(int i, int j) {
  const auto bit_i = std::uint64_t{1} << (static_cast<unsigned>(j) & 63u);
  const auto bit_j = std::uint64_t{1} << (static_cast<unsigned>(i) & 63u);
  words_[static_cast<std::size_t>(i) * static_cast<std::size_t>(wpr_) +
         static_cast<std::size_t>(j >> 6)] |= bit_i;
  words_[static_cast<std::size_t>(j) * static_cast<std::size_t>(wpr_) +
         static_cast<std::size_t>(i >> 6)] |= bit_j;
}

std::uint64_t BitMatrix::count_ones() const {
  std::uint64_t total = 0;
  for (const std::uint64_t w : words_) total += std::popcount(w);
  return total;
}

ConnectivityMatrix connectivity(const Partition& p) {
  const int n = p.n();
  BitMatrix m(n);
  const auto members = cluster_members(p);
  const auto canon = p.canonical_labels();

  // One packed row pattern per cluster, copied to every member row.
  const int wpr = m.words_per_row();
  std::vector<std::uint64_t> patterns(
      static_cast<std::size_t>(p.k()) * static_cast<std::size_t>(wpr), 0);
  for (int g = 0; g < p.k(); ++g) {
    std::uint64_t* row =
        patterns.data() + static_cast<std::size_t>(g) * static_cast<std::size_t>(wpr);
    for (const int j : members[static_cast<std::size_t>(g)]) {
      row[j >> 6] |= std::uint64_t{1} << (static_cast<unsigned>(j) & 63u);
    }
  }
  for (int i = 0; i < n; ++i) {
    const auto g = static_cast<std::size_t>(canon[static_cast<std::size_t>(i)]);
    auto dst = m.row(i);
    const std::uint64_t* src =
        patterns.data() + g * static_cast<std::size_t>(wpr);
    std::copy(src, src + wpr, dst.begin());
  }
  return m;
}

Ensemble::Ensemble(std::vector<Partition> partitions)
    : partitions_(std::move(partitions)) {
  if (partitions_.empty()) {
    throw std::invalid_argument("ensemble needs at least one partition");
  }
  n_ = partitions_.front().n();
  for (const auto& p : partitions_) {
    if (p.n() != n_) {
      throw std::invalid_argument(
          "all partitions in an ensemble must cover the same observations");
    }
  }
}

std::pair<Ensemble, std::vector<int>> filter_degenerate(const Ensemble& e) {
  std::vector<Partition> kept;
  std::vector<int> indices;
  for (int t = 0; t < e.size(); ++t) {
    if (!is_degenerate(e[t])) {
      kept.push_back(e[t]);
      indices.push_back(t);
    }
  }
  if (kept.empty()) {
    throw std::invalid_argument("every partition in the ensemble is degenerate");
  }
  return {Ensemble(std::move(kept)), std::move(indices)};
}

}  // namespace discotec
