#pragma once

#include <cstdint>
#include <optional>

#include "scbm/adjacency.hpp"
#include "scbm/block_matrix.hpp"
#include "scbm/labels.hpp"

namespace scbm {

/// Full parameterization of a stochastic co-block model: block probability
/// matrix plus sender and receiver community labels over the same n nodes.
class ScbmSpec {
 public:
  ScbmSpec(BlockMatrix block, LabelVector sender_labels,
           LabelVector receiver_labels);

  int n() const { return sender_labels_.size(); }
  const BlockMatrix& block() const { return block_; }
  const LabelVector& sender_labels() const { return sender_labels_; }
  const LabelVector& receiver_labels() const { return receiver_labels_; }

  /// Edge probability from node i to node j (zero on the diagonal).
  double edge_probability(int i, int j) const {
    if (i == j) return 0.0;
    return block_(sender_labels_.at(i) - 1, receiver_labels_.at(j) - 1);
  }

 private:
  BlockMatrix block_;
  LabelVector sender_labels_;
  LabelVector receiver_labels_;
};

/// Diagnostics against the model's regularity conditions. Purely
/// informational; nothing in the library refuses to run on a failing report.
struct AssumptionReport {
  /// min over blocks of min(B(k,l), 1 - B(k,l)).
  double edge_probability_margin = 0.0;
  bool margin_positive = false;

  int min_sender_size = 0;
  int min_receiver_size = 0;
  /// min community size divided by n/K, per side.
  double sender_balance = 0.0;
  double receiver_balance = 0.0;

  /// Community separation of B; empty when Ks == Kr == 1 (not applicable).
  std::optional<double> separation;
  /// K_max^2 * max(log n, separation^-2) / n; empty when separation is.
  std::optional<double> complexity;
};

/// Planted block matrix: diagonal entries rho*(alpha+beta) for k <= min(ks,kr),
/// all other entries rho*beta.
BlockMatrix planted_block_matrix(int ks, int kr, double alpha, double beta,
                                 double rho);

/// I.i.d. uniform community assignment over {1,…,k}, resampled (up to a
/// bounded retry budget) until every community is non-empty. Stream: the
/// seed is consumed directly; each retry continues the same stream.
LabelVector assign_balanced_labels(int n, int k, std::uint64_t seed);

/// Expected adjacency: Omega(i,j) = B(gs(i), gr(j)) for i != j, zero diagonal.
Eigen::MatrixXd expected_adjacency(const ScbmSpec& spec);

/// Samples independent Bernoulli entries with the expected-adjacency
/// probabilities; zero diagonal. Deterministic given (spec, seed). Stream:
/// entries are drawn row by row in column order, diagonal skipped.
Adjacency sample_adjacency(const ScbmSpec& spec, std::uint64_t seed);

/// Community separation: the min over row pairs of the max column gap, and
/// over column pairs of the max row gap, whichever is smaller. When one side
/// has a single community its (empty) term is skipped; when both do, the
/// metric is not applicable and the result is empty.
std::optional<double> community_separation(const BlockMatrix& b);

AssumptionReport check_assumptions(const ScbmSpec& spec);

}  // namespace scbm
