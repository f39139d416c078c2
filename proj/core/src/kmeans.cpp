#include "scbm/kmeans.hpp"

#include <limits>
#include <vector>

#include "scbm/errors.hpp"
#include "scbm/rng.hpp"

namespace scbm {

namespace {

struct LloydRun {
  std::vector<std::int32_t> labels;  // 0-based
  Eigen::MatrixXd centers;
  double inertia = std::numeric_limits<double>::infinity();
  int iterations = 0;
};

double squared_distance(const Eigen::MatrixXd& points, Eigen::Index i,
                        const Eigen::MatrixXd& centers, Eigen::Index c) {
  return (points.row(i) - centers.row(c)).squaredNorm();
}

Eigen::MatrixXd kmeanspp_centers(const Eigen::MatrixXd& points, int k,
                                 Rng& rng) {
  const Eigen::Index n = points.rows();
  Eigen::MatrixXd centers(k, points.cols());
  const auto first = static_cast<Eigen::Index>(
      rng.uniform_int(static_cast<std::uint64_t>(n)));
  centers.row(0) = points.row(first);

  Eigen::VectorXd d2(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    d2(i) = squared_distance(points, i, centers, 0);
  }
  for (int c = 1; c < k; ++c) {
    const double total = d2.sum();
    Eigen::Index pick;
    if (total > 0.0) {
      const double target = rng.uniform() * total;
      double cumulative = 0.0;
      pick = n - 1;
      for (Eigen::Index i = 0; i < n; ++i) {
        cumulative += d2(i);
        if (cumulative > target) {
          pick = i;
          break;
        }
      }
    } else {
      // All remaining distances are zero (duplicate points); pick uniformly.
      pick = static_cast<Eigen::Index>(
          rng.uniform_int(static_cast<std::uint64_t>(n)));
    }
    centers.row(c) = points.row(pick);
    for (Eigen::Index i = 0; i < n; ++i) {
      d2(i) = std::min(d2(i), squared_distance(points, i, centers, c));
    }
  }
  return centers;
}

LloydRun lloyd(const Eigen::MatrixXd& points, int k, std::uint64_t seed,
               int max_iter) {
  const Eigen::Index n = points.rows();
  Rng rng(seed);
  LloydRun run;
  run.centers = kmeanspp_centers(points, k, rng);
  run.labels.assign(static_cast<std::size_t>(n), -1);
  std::vector<int> counts(static_cast<std::size_t>(k), 0);

  for (int iter = 1; iter <= max_iter; ++iter) {
    run.iterations = iter;
    int changed = 0;
    for (Eigen::Index i = 0; i < n; ++i) {
      std::int32_t best = 0;
      double best_d = squared_distance(points, i, run.centers, 0);
      for (int c = 1; c < k; ++c) {
        const double d = squared_distance(points, i, run.centers, c);
        if (d < best_d) {  // strict: ties stay with the lowest index
          best_d = d;
          best = c;
        }
      }
      if (run.labels[static_cast<std::size_t>(i)] != best) {
        run.labels[static_cast<std::size_t>(i)] = best;
        ++changed;
      }
    }
    counts.assign(static_cast<std::size_t>(k), 0);
    for (auto label : run.labels) ++counts[static_cast<std::size_t>(label)];

    // Repair empty clusters: move the point farthest from its own center
    // (only out of clusters that keep at least one member).
    for (int c = 0; c < k; ++c) {
      if (counts[static_cast<std::size_t>(c)] > 0) continue;
      Eigen::Index worst = -1;
      double worst_d = -1.0;
      for (Eigen::Index i = 0; i < n; ++i) {
        const auto owner =
            static_cast<std::size_t>(run.labels[static_cast<std::size_t>(i)]);
        if (counts[owner] <= 1) continue;
        const double d = squared_distance(points, i, run.centers,
                                          static_cast<Eigen::Index>(owner));
        if (d > worst_d) {
          worst_d = d;
          worst = i;
        }
      }
      if (worst < 0) {
        throw ValidationError("kmeans: cannot repair empty cluster");
      }
      --counts[static_cast<std::size_t>(
          run.labels[static_cast<std::size_t>(worst)])];
      run.labels[static_cast<std::size_t>(worst)] = static_cast<std::int32_t>(c);
      ++counts[static_cast<std::size_t>(c)];
      ++changed;
    }

    if (changed == 0) break;
    run.centers.setZero();
    for (Eigen::Index i = 0; i < n; ++i) {
      run.centers.row(run.labels[static_cast<std::size_t>(i)]) +=
          points.row(i);
    }
    for (int c = 0; c < k; ++c) {
      run.centers.row(c) /= counts[static_cast<std::size_t>(c)];
    }
  }

  run.inertia = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    run.inertia += squared_distance(
        points, i, run.centers,
        static_cast<Eigen::Index>(run.labels[static_cast<std::size_t>(i)]));
  }
  return run;
}

}  // namespace

KMeansResult kmeans(const Eigen::MatrixXd& points, int k, std::uint64_t seed,
                    const KMeansOptions& options) {
  const Eigen::Index n = points.rows();
  if (k < 1 || n < k) throw ValidationError("kmeans: need n >= k >= 1");
  if (options.restarts < 1 || options.max_iter < 1) {
    throw ValidationError("kmeans: restarts and max_iter must be >= 1");
  }

  LloydRun best;
  for (int r = 0; r < options.restarts; ++r) {
    LloydRun run =
        lloyd(points, k, derive_seed(seed, {static_cast<std::uint64_t>(r)}),
              options.max_iter);
    if (run.inertia < best.inertia) best = std::move(run);
  }

  std::vector<std::int32_t> one_based(best.labels.size());
  for (std::size_t i = 0; i < best.labels.size(); ++i) {
    one_based[i] = best.labels[i] + 1;
  }
  return KMeansResult{LabelVector(std::move(one_based), k),
                      std::move(best.centers), best.inertia, best.iterations};
}

}  // namespace scbm
