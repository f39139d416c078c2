#pragma once

#include <Eigen/Dense>
#include <cstdint>

#include "scbm/labels.hpp"

namespace scbm {

struct KMeansOptions {
  int restarts = 10;
  int max_iter = 100;
};

struct KMeansResult {
  LabelVector labels;       ///< 1-based cluster labels, every cluster non-empty
  Eigen::MatrixXd centers;  ///< k × d
  double inertia;           ///< sum of squared distances to assigned centers
  int iterations;           ///< assignment passes of the winning restart
};

/// Lloyd's algorithm with k-means++ initialization, best of `restarts` runs
/// by inertia. Deterministic given (points, k, seed): restart r draws from
/// the stream derive_seed(seed, {r}). Assignment ties go to the
/// lowest-index center; empty clusters are repaired by seizing the point
/// farthest from its current center.
KMeansResult kmeans(const Eigen::MatrixXd& points, int k, std::uint64_t seed,
                    const KMeansOptions& options = {});

}  // namespace scbm
