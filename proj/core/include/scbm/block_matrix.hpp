#pragma once

#include <Eigen/Dense>

namespace scbm {

/// Ks×Kr grid of edge probabilities between sender and receiver communities.
/// Every entry lies in [0,1]; both dimensions are at least 1.
class BlockMatrix {
 public:
  explicit BlockMatrix(Eigen::MatrixXd values);

  Eigen::Index rows() const { return values_.rows(); }
  Eigen::Index cols() const { return values_.cols(); }

  /// Entry for sender community k and receiver community l (0-based).
  double operator()(Eigen::Index k, Eigen::Index l) const {
    return values_(k, l);
  }

  const Eigen::MatrixXd& values() const { return values_; }

 private:
  Eigen::MatrixXd values_;
};

}  // namespace scbm
