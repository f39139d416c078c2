#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "scbm/adjacency.hpp"

namespace scbm {

/// Matrix-free interface for the iterative singular value methods. Blocks of
/// vectors are passed as column-major matrices.
class LinearOperator {
 public:
  virtual ~LinearOperator() = default;
  virtual Eigen::Index rows() const = 0;
  virtual Eigen::Index cols() const = 0;
  /// y = M x with x of shape cols() × b.
  virtual void apply(const Eigen::Ref<const Eigen::MatrixXd>& x,
                     Eigen::Ref<Eigen::MatrixXd> y) const = 0;
  /// y = Mᵀ x with x of shape rows() × b.
  virtual void apply_adjoint(const Eigen::Ref<const Eigen::MatrixXd>& x,
                             Eigen::Ref<Eigen::MatrixXd> y) const = 0;
};

class DenseOperator final : public LinearOperator {
 public:
  explicit DenseOperator(const Eigen::MatrixXd& m) : m_(&m) {}
  Eigen::Index rows() const override { return m_->rows(); }
  Eigen::Index cols() const override { return m_->cols(); }
  void apply(const Eigen::Ref<const Eigen::MatrixXd>& x,
             Eigen::Ref<Eigen::MatrixXd> y) const override {
    y.noalias() = (*m_) * x;
  }
  void apply_adjoint(const Eigen::Ref<const Eigen::MatrixXd>& x,
                     Eigen::Ref<Eigen::MatrixXd> y) const override {
    y.noalias() = m_->transpose() * x;
  }

 private:
  const Eigen::MatrixXd* m_;
};

/// Compressed row storage of a binary matrix (no value array needed).
struct BinaryCsr {
  Eigen::Index rows = 0;
  Eigen::Index cols = 0;
  std::vector<std::int32_t> row_ptr;
  std::vector<std::int32_t> col_idx;

  static BinaryCsr from_adjacency(const Adjacency& a);
  BinaryCsr transposed() const;
};

/// Matrix-free view of a binary adjacency matrix.
class SparseBinaryOperator final : public LinearOperator {
 public:
  explicit SparseBinaryOperator(const Adjacency& a)
      : csr_(BinaryCsr::from_adjacency(a)), csc_(csr_.transposed()) {}
  Eigen::Index rows() const override { return csr_.rows; }
  Eigen::Index cols() const override { return csr_.cols; }
  void apply(const Eigen::Ref<const Eigen::MatrixXd>& x,
             Eigen::Ref<Eigen::MatrixXd> y) const override;
  void apply_adjoint(const Eigen::Ref<const Eigen::MatrixXd>& x,
                     Eigen::Ref<Eigen::MatrixXd> y) const override;
  const BinaryCsr& csr() const { return csr_; }
  const BinaryCsr& csc() const { return csc_; }

 private:
  BinaryCsr csr_;
  BinaryCsr csc_;  // CSR of the transpose
};

struct SvdFactors {
  Eigen::MatrixXd u;      ///< rows × k, orthonormal columns
  Eigen::VectorXd sigma;  ///< k singular values, nonincreasing
  Eigen::MatrixXd v;      ///< cols × k, orthonormal columns
  int iterations = 0;
};

struct SvdOptions {
  double tol = 1e-10;  ///< relative change of the Ritz values per iteration
  int max_iter = 500;
  int oversample = 4;
  std::uint64_t seed = 0x5eedULL;  ///< start-subspace stream
};

/// Top-k singular triplets by subspace (block power) iteration with per-step
/// orthonormalization and Rayleigh–Ritz extraction. Throws NumericalError
/// (carrying the last relative change) when max_iter is exhausted.
SvdFactors truncated_svd(const LinearOperator& op, int k,
                         const SvdOptions& options = {});
SvdFactors truncated_svd(const Eigen::MatrixXd& m, int k,
                         const SvdOptions& options = {});

struct PowerOptions {
  double tol = 1e-9;  ///< residual certificate, relative on sigma^2
  int max_iter = 200000;
  std::uint64_t seed = 0x90e1ULL;
};

/// Largest singular value by power iteration on mᵀm with a seeded random
/// start. Stops once the eigenpair residual certifies the Rayleigh quotient
/// to the requested relative tolerance; throws NumericalError with the last
/// certified gap otherwise.
double largest_singular_value(const LinearOperator& op,
                              const PowerOptions& options = {});
double largest_singular_value(const Eigen::MatrixXd& m,
                              const PowerOptions& options = {});

struct LanczosOptions {
  double tol = 1e-11;  ///< relative stabilization of the sigma_1 estimate
  int max_iter = 500;  ///< Krylov dimension cap
  std::uint64_t seed = 0x1a2cULL;
};

/// Largest singular value by Golub–Kahan bidiagonalization with full
/// reorthogonalization. Much faster than power iteration when the top of the
/// spectrum is clustered (the residual matrix under a well-specified model);
/// agreement with the power-iteration path is enforced by tests.
double largest_singular_value_lanczos(const LinearOperator& op,
                                      const LanczosOptions& options = {});

/// One-sided Jacobi SVD of a small dense matrix (a = u * diag(sigma) * vᵀ,
/// sigma nonincreasing, u and v with orthonormal columns). Used for the
/// Rayleigh–Ritz cores; quadratic-size inputs only.
void jacobi_svd(const Eigen::MatrixXd& a, Eigen::MatrixXd& u,
                Eigen::VectorXd& sigma, Eigen::MatrixXd& v);

}  // namespace scbm
