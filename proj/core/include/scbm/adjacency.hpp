#pragma once

#include <Eigen/Dense>
#include <cstdint>

namespace scbm {

/// Binary directed adjacency matrix with a zero diagonal. Stored dense as a
/// byte grid; node count is capped (residual matrices are dense anyway, so
/// sparse storage would buy nothing at the library's target scale).
class Adjacency {
 public:
  using Grid =
      Eigen::Matrix<std::uint8_t, Eigen::Dynamic, Eigen::Dynamic>;

  static constexpr int kMaxNodes = 10000;

  explicit Adjacency(Grid entries);

  int n() const { return static_cast<int>(entries_.rows()); }
  std::uint8_t operator()(int i, int j) const { return entries_(i, j); }
  const Grid& entries() const { return entries_; }

  std::int64_t edge_count() const;

  /// Dense double copy (for residual construction and reference paths).
  Eigen::MatrixXd as_double() const { return entries_.cast<double>(); }

  bool operator==(const Adjacency& other) const {
    return entries_ == other.entries_;
  }

 private:
  Grid entries_;
};

}  // namespace scbm
