#include "scbm/labels.hpp"

#include <algorithm>
#include <string>

#include "scbm/errors.hpp"

namespace scbm {

LabelVector::LabelVector(std::vector<std::int32_t> labels, int k)
    : labels_(std::move(labels)), k_(k) {
  if (k_ < 1) throw ValidationError("LabelVector: k must be at least 1");
  if (labels_.empty()) {
    throw ValidationError("LabelVector: need at least one node");
  }
  for (std::size_t i = 0; i < labels_.size(); ++i) {
    if (labels_[i] < 1 || labels_[i] > k_) {
      throw ValidationError("LabelVector: label " + std::to_string(labels_[i]) +
                            " at node " + std::to_string(i + 1) +
                            " is outside {1,...," + std::to_string(k_) + "}");
    }
  }
}

std::vector<int> LabelVector::community_sizes() const {
  std::vector<int> sizes(static_cast<std::size_t>(k_), 0);
  for (auto label : labels_) ++sizes[static_cast<std::size_t>(label - 1)];
  return sizes;
}

int LabelVector::min_community_size() const {
  const auto sizes = community_sizes();
  return *std::min_element(sizes.begin(), sizes.end());
}

}  // namespace scbm
