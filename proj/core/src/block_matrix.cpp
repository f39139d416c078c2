#include "scbm/block_matrix.hpp"

#include <cmath>
#include <string>

#include "scbm/errors.hpp"

namespace scbm {

BlockMatrix::BlockMatrix(Eigen::MatrixXd values) : values_(std::move(values)) {
  if (values_.rows() < 1 || values_.cols() < 1) {
    throw ValidationError("BlockMatrix: dimensions must be at least 1x1");
  }
  for (Eigen::Index k = 0; k < values_.rows(); ++k) {
    for (Eigen::Index l = 0; l < values_.cols(); ++l) {
      const double p = values_(k, l);
      if (!std::isfinite(p) || p < 0.0 || p > 1.0) {
        throw ValidationError("BlockMatrix: entry (" + std::to_string(k + 1) +
                              "," + std::to_string(l + 1) + ") = " +
                              std::to_string(p) + " is outside [0,1]");
      }
    }
  }
}

}  // namespace scbm
