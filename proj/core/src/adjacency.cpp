#include "scbm/adjacency.hpp"

#include <string>

#include "scbm/errors.hpp"

namespace scbm {

Adjacency::Adjacency(Grid entries) : entries_(std::move(entries)) {
  const Eigen::Index n = entries_.rows();
  if (n < 1 || entries_.cols() != n) {
    throw ValidationError("Adjacency: matrix must be square and non-empty");
  }
  if (n > kMaxNodes) {
    throw ValidationError("Adjacency: n = " + std::to_string(n) +
                          " exceeds the configured cap of " +
                          std::to_string(kMaxNodes));
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    if (entries_(i, i) != 0) {
      throw ValidationError("Adjacency: nonzero diagonal at node " +
                            std::to_string(i + 1));
    }
    for (Eigen::Index j = 0; j < n; ++j) {
      if (entries_(i, j) > 1) {
        throw ValidationError("Adjacency: entry (" + std::to_string(i + 1) +
                              "," + std::to_string(j + 1) +
                              ") is not binary");
      }
    }
  }
}

std::int64_t Adjacency::edge_count() const {
  std::int64_t count = 0;
  for (Eigen::Index j = 0; j < entries_.cols(); ++j) {
    for (Eigen::Index i = 0; i < entries_.rows(); ++i) {
      count += entries_(i, j);
    }
  }
  return count;
}

}  // namespace scbm
