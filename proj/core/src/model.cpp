#include "scbm/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "scbm/errors.hpp"
#include "scbm/rng.hpp"

namespace scbm {

ScbmSpec::ScbmSpec(BlockMatrix block, LabelVector sender_labels,
                   LabelVector receiver_labels)
    : block_(std::move(block)),
      sender_labels_(std::move(sender_labels)),
      receiver_labels_(std::move(receiver_labels)) {
  if (sender_labels_.k() != static_cast<int>(block_.rows())) {
    throw ValidationError(
        "ScbmSpec: sender label count " + std::to_string(sender_labels_.k()) +
        " does not match block rows " + std::to_string(block_.rows()));
  }
  if (receiver_labels_.k() != static_cast<int>(block_.cols())) {
    throw ValidationError("ScbmSpec: receiver label count " +
                          std::to_string(receiver_labels_.k()) +
                          " does not match block cols " +
                          std::to_string(block_.cols()));
  }
  if (sender_labels_.size() != receiver_labels_.size()) {
    throw ValidationError(
        "ScbmSpec: sender and receiver label vectors differ in length");
  }
}

BlockMatrix planted_block_matrix(int ks, int kr, double alpha, double beta,
                                 double rho) {
  if (ks < 1 || kr < 1) {
    throw ValidationError("planted_block_matrix: ks and kr must be >= 1");
  }
  if (!(rho > 0.0) || rho > 1.0) {
    throw ValidationError("planted_block_matrix: rho must lie in (0,1]");
  }
  if (alpha < 0.0 || beta < 0.0) {
    throw ValidationError("planted_block_matrix: alpha and beta must be >= 0");
  }
  if (rho * (alpha + beta) > 1.0) {
    throw ValidationError(
        "planted_block_matrix: rho*(alpha+beta) exceeds 1, entries would "
        "leave [0,1]");
  }
  const int kmin = std::min(ks, kr);
  Eigen::MatrixXd b(ks, kr);
  for (int k = 0; k < ks; ++k) {
    for (int l = 0; l < kr; ++l) {
      b(k, l) = (k == l && k < kmin) ? rho * (alpha + beta) : rho * beta;
    }
  }
  return BlockMatrix(b);  // constructor re-checks the [0,1] range
}

LabelVector assign_balanced_labels(int n, int k, std::uint64_t seed) {
  if (k < 1 || n < k) {
    throw ValidationError("assign_balanced_labels: need n >= k >= 1");
  }
  constexpr int kRetryBudget = 1000;
  Rng rng(seed);
  std::vector<std::int32_t> labels(static_cast<std::size_t>(n));
  for (int attempt = 0; attempt < kRetryBudget; ++attempt) {
    std::vector<bool> seen(static_cast<std::size_t>(k), false);
    for (auto& label : labels) {
      const auto c = static_cast<std::int32_t>(
          rng.uniform_int(static_cast<std::uint64_t>(k)));
      label = c + 1;
      seen[static_cast<std::size_t>(c)] = true;
    }
    if (std::all_of(seen.begin(), seen.end(), [](bool s) { return s; })) {
      return LabelVector(std::move(labels), k);
    }
  }
  throw ValidationError(
      "assign_balanced_labels: could not produce non-empty communities for "
      "n=" + std::to_string(n) + ", k=" + std::to_string(k) + " within " +
      std::to_string(kRetryBudget) + " attempts");
}

Eigen::MatrixXd expected_adjacency(const ScbmSpec& spec) {
  const int n = spec.n();
  Eigen::MatrixXd omega(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      omega(i, j) = spec.edge_probability(i, j);
    }
  }
  return omega;
}

Adjacency sample_adjacency(const ScbmSpec& spec, std::uint64_t seed) {
  const int n = spec.n();
  Rng rng(seed);
  Adjacency::Grid a = Adjacency::Grid::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    const int row_block = spec.sender_labels().at(i) - 1;
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      const double p =
          spec.block()(row_block, spec.receiver_labels().at(j) - 1);
      a(i, j) = rng.bernoulli(p) ? 1 : 0;
    }
  }
  return Adjacency(std::move(a));
}

std::optional<double> community_separation(const BlockMatrix& b) {
  const Eigen::Index ks = b.rows();
  const Eigen::Index kr = b.cols();
  if (ks == 1 && kr == 1) return std::nullopt;

  double result = std::numeric_limits<double>::infinity();
  for (Eigen::Index k = 0; k < ks; ++k) {
    for (Eigen::Index k2 = k + 1; k2 < ks; ++k2) {
      double max_gap = 0.0;
      for (Eigen::Index l = 0; l < kr; ++l) {
        max_gap = std::max(max_gap, std::abs(b(k, l) - b(k2, l)));
      }
      result = std::min(result, max_gap);
    }
  }
  for (Eigen::Index l = 0; l < kr; ++l) {
    for (Eigen::Index l2 = l + 1; l2 < kr; ++l2) {
      double max_gap = 0.0;
      for (Eigen::Index k = 0; k < ks; ++k) {
        max_gap = std::max(max_gap, std::abs(b(k, l) - b(k, l2)));
      }
      result = std::min(result, max_gap);
    }
  }
  return result;
}

AssumptionReport check_assumptions(const ScbmSpec& spec) {
  AssumptionReport report;
  const BlockMatrix& b = spec.block();

  double margin = std::numeric_limits<double>::infinity();
  for (Eigen::Index k = 0; k < b.rows(); ++k) {
    for (Eigen::Index l = 0; l < b.cols(); ++l) {
      margin = std::min(margin, std::min(b(k, l), 1.0 - b(k, l)));
    }
  }
  report.edge_probability_margin = margin;
  report.margin_positive = margin > 0.0;

  const int n = spec.n();
  report.min_sender_size = spec.sender_labels().min_community_size();
  report.min_receiver_size = spec.receiver_labels().min_community_size();
  report.sender_balance = report.min_sender_size /
                          (static_cast<double>(n) / spec.sender_labels().k());
  report.receiver_balance =
      report.min_receiver_size /
      (static_cast<double>(n) / spec.receiver_labels().k());

  report.separation = community_separation(b);
  if (report.separation.has_value()) {
    const double sep = *report.separation;
    const double kmax = static_cast<double>(std::max(b.rows(), b.cols()));
    const double inv_sep_sq = sep > 0.0
                                  ? 1.0 / (sep * sep)
                                  : std::numeric_limits<double>::infinity();
    report.complexity =
        kmax * kmax * std::max(std::log(static_cast<double>(n)), inv_sep_sq) /
        static_cast<double>(n);
  }
  return report;
}

}  // namespace scbm
