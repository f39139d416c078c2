#pragma once

#include <cstdint>
#include <vector>

namespace scbm {

/// Per-node community assignment for one side of a directed network.
/// Labels are 1-based: every value lies in {1, …, k}.
class LabelVector {
 public:
  LabelVector(std::vector<std::int32_t> labels, int k);

  int size() const { return static_cast<int>(labels_.size()); }
  int k() const { return k_; }

  /// Label of node i (0-based node index, 1-based label value).
  std::int32_t at(int i) const { return labels_[static_cast<std::size_t>(i)]; }

  const std::vector<std::int32_t>& labels() const { return labels_; }

  /// Number of nodes per community, indexed 0 … k-1.
  std::vector<int> community_sizes() const;

  /// Smallest community size.
  int min_community_size() const;

  bool operator==(const LabelVector& other) const = default;

 private:
  std::vector<std::int32_t> labels_;
  int k_;
};

}  // namespace scbm
