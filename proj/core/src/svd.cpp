#include "scbm/svd.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "scbm/errors.hpp"
#include "scbm/rng.hpp"

namespace scbm {

namespace {

Eigen::MatrixXd random_matrix(Eigen::Index rows, Eigen::Index cols,
                              std::uint64_t seed) {
  Rng rng(seed);
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j) {
    for (Eigen::Index i = 0; i < rows; ++i) {
      m(i, j) = rng.uniform(-1.0, 1.0);
    }
  }
  return m;
}

/// Thin orthonormal factor of y (Householder QR; well-defined for
/// rank-deficient input, where the trailing columns are an arbitrary
/// orthonormal completion).
Eigen::MatrixXd thin_q(const Eigen::MatrixXd& y) {
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(y);
  return qr.householderQ() * Eigen::MatrixXd::Identity(y.rows(), y.cols());
}

/// Deterministically replaces zero columns of u with unit vectors orthogonal
/// to all other columns, so the factor stays orthonormal even at zero
/// singular values.
void complete_orthonormal(Eigen::MatrixXd& u, const std::vector<bool>& zero) {
  const Eigen::Index n = u.rows();
  auto project_out = [&](Eigen::VectorXd& e, Eigen::Index skip) {
    for (Eigen::Index c = 0; c < u.cols(); ++c) {
      if (c == skip) continue;
      e -= u.col(c).dot(e) * u.col(c);
    }
  };
  for (Eigen::Index j = 0; j < u.cols(); ++j) {
    if (!zero[static_cast<std::size_t>(j)]) continue;
    // The canonical basis vector with the largest component outside the
    // current span; its projection norm is at least sqrt(1/n).
    Eigen::Index best = 0;
    double best_norm = -1.0;
    for (Eigen::Index candidate = 0; candidate < n; ++candidate) {
      Eigen::VectorXd e = Eigen::VectorXd::Unit(n, candidate);
      project_out(e, j);
      const double norm = e.norm();
      if (norm > best_norm) {
        best_norm = norm;
        best = candidate;
      }
    }
    Eigen::VectorXd e = Eigen::VectorXd::Unit(n, best);
    project_out(e, j);
    project_out(e, j);  // second pass for numerical orthogonality
    u.col(j) = e / e.norm();
  }
}

/// Largest singular value of the square lower-bidiagonal matrix with the
/// given diagonal and subdiagonal, via warm-started power iteration on BᵀB
/// (tridiagonal matvec). `warm` carries the iterate between calls.
double sigma1_bidiagonal(const std::vector<double>& diag,
                         const std::vector<double>& sub,
                         Eigen::VectorXd& warm) {
  const auto k = static_cast<Eigen::Index>(diag.size());
  if (k == 0) return 0.0;
  Eigen::VectorXd v(k);
  const Eigen::Index carried = std::min<Eigen::Index>(warm.size(), k);
  v.setZero();
  if (carried > 0) v.head(carried) = warm.head(carried);
  if (v.norm() == 0.0) v.setOnes();
  v.normalize();

  Eigen::VectorXd bv(k), w(k);
  double theta = 0.0;
  for (int it = 0; it < 20000; ++it) {
    // bv = B v (lower bidiagonal)
    for (Eigen::Index i = 0; i < k; ++i) {
      double s = diag[static_cast<std::size_t>(i)] * v(i);
      if (i > 0) s += sub[static_cast<std::size_t>(i - 1)] * v(i - 1);
      bv(i) = s;
    }
    // w = Bᵀ bv
    for (Eigen::Index i = 0; i < k; ++i) {
      double s = diag[static_cast<std::size_t>(i)] * bv(i);
      if (i + 1 < k) s += sub[static_cast<std::size_t>(i)] * bv(i + 1);
      w(i) = s;
    }
    theta = bv.squaredNorm();
    if (theta == 0.0) return 0.0;
    const double resid = (w - theta * v).norm();
    v = w / w.norm();
    if (resid <= 1e-13 * theta) break;
  }
  warm = v;
  return std::sqrt(theta);
}

}  // namespace

BinaryCsr BinaryCsr::from_adjacency(const Adjacency& a) {
  const int n = a.n();
  BinaryCsr csr;
  csr.rows = n;
  csr.cols = n;
  csr.row_ptr.assign(static_cast<std::size_t>(n) + 1, 0);
  std::int64_t nnz = 0;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) nnz += a(i, j);
    csr.row_ptr[static_cast<std::size_t>(i) + 1] =
        static_cast<std::int32_t>(nnz);
  }
  csr.col_idx.resize(static_cast<std::size_t>(nnz));
  std::size_t pos = 0;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (a(i, j)) csr.col_idx[pos++] = j;
    }
  }
  return csr;
}

BinaryCsr BinaryCsr::transposed() const {
  BinaryCsr t;
  t.rows = cols;
  t.cols = rows;
  t.row_ptr.assign(static_cast<std::size_t>(cols) + 1, 0);
  for (auto j : col_idx) ++t.row_ptr[static_cast<std::size_t>(j) + 1];
  for (std::size_t j = 1; j < t.row_ptr.size(); ++j) {
    t.row_ptr[j] += t.row_ptr[j - 1];
  }
  t.col_idx.resize(col_idx.size());
  std::vector<std::int32_t> cursor(t.row_ptr.begin(), t.row_ptr.end() - 1);
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (auto p = row_ptr[static_cast<std::size_t>(i)];
         p < row_ptr[static_cast<std::size_t>(i) + 1]; ++p) {
      const auto j = static_cast<std::size_t>(col_idx[static_cast<std::size_t>(p)]);
      t.col_idx[static_cast<std::size_t>(cursor[j]++)] =
          static_cast<std::int32_t>(i);
    }
  }
  return t;
}

namespace {

void csr_apply(const BinaryCsr& csr, const Eigen::Ref<const Eigen::MatrixXd>& x,
               Eigen::Ref<Eigen::MatrixXd> y) {
  y.setZero();
  for (Eigen::Index i = 0; i < csr.rows; ++i) {
    auto row = y.row(i);
    for (auto p = csr.row_ptr[static_cast<std::size_t>(i)];
         p < csr.row_ptr[static_cast<std::size_t>(i) + 1]; ++p) {
      row += x.row(csr.col_idx[static_cast<std::size_t>(p)]);
    }
  }
}

}  // namespace

void SparseBinaryOperator::apply(const Eigen::Ref<const Eigen::MatrixXd>& x,
                                 Eigen::Ref<Eigen::MatrixXd> y) const {
  csr_apply(csr_, x, y);
}

void SparseBinaryOperator::apply_adjoint(
    const Eigen::Ref<const Eigen::MatrixXd>& x,
    Eigen::Ref<Eigen::MatrixXd> y) const {
  csr_apply(csc_, x, y);
}

void jacobi_svd(const Eigen::MatrixXd& a, Eigen::MatrixXd& u,
                Eigen::VectorXd& sigma, Eigen::MatrixXd& v) {
  const Eigen::Index m = a.rows();
  const Eigen::Index p = a.cols();
  if (m < p) {
    // Work on the transpose and swap the factors back.
    Eigen::MatrixXd ut, vt;
    Eigen::VectorXd st;
    jacobi_svd(a.transpose(), vt, st, ut);
    u = ut;
    sigma = st;
    v = vt;
    return;
  }
  Eigen::MatrixXd g = a;
  v = Eigen::MatrixXd::Identity(p, p);
  constexpr int kMaxSweeps = 60;
  constexpr double kEps = 1e-15;
  for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
    bool rotated = false;
    for (Eigen::Index i = 0; i < p - 1; ++i) {
      for (Eigen::Index j = i + 1; j < p; ++j) {
        const double aii = g.col(i).squaredNorm();
        const double ajj = g.col(j).squaredNorm();
        const double aij = g.col(i).dot(g.col(j));
        if (std::abs(aij) <= kEps * std::sqrt(aii * ajj)) continue;
        rotated = true;
        const double zeta = (ajj - aii) / (2.0 * aij);
        const double t = (zeta >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
        const double cs = 1.0 / std::sqrt(1.0 + t * t);
        const double sn = cs * t;
        for (Eigen::Index r = 0; r < m; ++r) {
          const double gi = g(r, i);
          const double gj = g(r, j);
          g(r, i) = cs * gi - sn * gj;
          g(r, j) = sn * gi + cs * gj;
        }
        for (Eigen::Index r = 0; r < p; ++r) {
          const double vi = v(r, i);
          const double vj = v(r, j);
          v(r, i) = cs * vi - sn * vj;
          v(r, j) = sn * vi + cs * vj;
        }
      }
    }
    if (!rotated) break;
  }
  sigma.resize(p);
  u.resize(m, p);
  std::vector<bool> zero(static_cast<std::size_t>(p), false);
  for (Eigen::Index j = 0; j < p; ++j) {
    const double norm = g.col(j).norm();
    sigma(j) = norm;
    if (norm > 0.0) {
      u.col(j) = g.col(j) / norm;
    } else {
      u.col(j).setZero();
      zero[static_cast<std::size_t>(j)] = true;
    }
  }
  // Sort triplets by nonincreasing singular value (stable for determinism).
  std::vector<Eigen::Index> order(static_cast<std::size_t>(p));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index x,
                                                   Eigen::Index y) {
    return sigma(x) > sigma(y);
  });
  Eigen::MatrixXd us(m, p), vs(p, p);
  Eigen::VectorXd ss(p);
  std::vector<bool> zs(static_cast<std::size_t>(p));
  for (Eigen::Index j = 0; j < p; ++j) {
    const Eigen::Index src = order[static_cast<std::size_t>(j)];
    us.col(j) = u.col(src);
    vs.col(j) = v.col(src);
    ss(j) = sigma(src);
    zs[static_cast<std::size_t>(j)] = zero[static_cast<std::size_t>(src)];
  }
  complete_orthonormal(us, zs);
  u = std::move(us);
  v = std::move(vs);
  sigma = std::move(ss);
}

SvdFactors truncated_svd(const LinearOperator& op, int k,
                         const SvdOptions& options) {
  const Eigen::Index rows = op.rows();
  const Eigen::Index cols = op.cols();
  const Eigen::Index min_dim = std::min(rows, cols);
  if (k < 1 || k > min_dim) {
    throw ValidationError("truncated_svd: need 1 <= k <= min(rows, cols)");
  }
  const Eigen::Index block =
      std::min<Eigen::Index>(k + std::max(0, options.oversample), min_dim);

  Eigen::MatrixXd qv = thin_q(random_matrix(cols, block, options.seed));
  Eigen::MatrixXd y(rows, block), z(cols, block);
  Eigen::MatrixXd core_u, core_v;
  Eigen::VectorXd ritz;
  Eigen::VectorXd prev = Eigen::VectorXd::Zero(k);
  Eigen::MatrixXd qu;
  double change = std::numeric_limits<double>::infinity();

  for (int it = 1; it <= options.max_iter; ++it) {
    op.apply(qv, y);
    qu = thin_q(y);
    op.apply_adjoint(qu, z);
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(z);
    qv = qr.householderQ() * Eigen::MatrixXd::Identity(cols, block);
    // R factor of the second QR: Rᵀ = Quᵀ M Qv, the Rayleigh–Ritz core.
    Eigen::MatrixXd r = qr.matrixQR()
                            .topRows(block)
                            .triangularView<Eigen::Upper>();
    jacobi_svd(r.transpose(), core_u, ritz, core_v);

    const double scale =
        std::max(ritz(0), std::numeric_limits<double>::min());
    change = (ritz.head(k) - prev).cwiseAbs().maxCoeff() / scale;
    prev = ritz.head(k);
    if (it >= 2 && change <= options.tol) {
      SvdFactors f;
      f.u = qu * core_u.leftCols(k);
      f.v = qv * core_v.leftCols(k);
      f.sigma = ritz.head(k);
      f.iterations = it;
      return f;
    }
  }
  throw NumericalError(
      "truncated_svd: no convergence after " +
          std::to_string(options.max_iter) +
          " iterations (last relative change " + std::to_string(change) + ")",
      change);
}

SvdFactors truncated_svd(const Eigen::MatrixXd& m, int k,
                         const SvdOptions& options) {
  DenseOperator op(m);
  return truncated_svd(op, k, options);
}

double largest_singular_value(const LinearOperator& op,
                              const PowerOptions& options) {
  const Eigen::Index rows = op.rows();
  const Eigen::Index cols = op.cols();
  if (rows < 1 || cols < 1) {
    throw ValidationError("largest_singular_value: empty matrix");
  }
  Eigen::VectorXd v = random_matrix(cols, 1, options.seed);
  if (v.norm() == 0.0) v = Eigen::VectorXd::Unit(cols, 0);
  v.normalize();

  Eigen::MatrixXd y(rows, 1), w(cols, 1);
  double gap = std::numeric_limits<double>::infinity();
  for (int it = 1; it <= options.max_iter; ++it) {
    op.apply(v, y);
    const double theta = y.squaredNorm();  // Rayleigh quotient of MᵀM at v
    if (theta == 0.0) return 0.0;
    op.apply_adjoint(y, w);
    const double resid = (w.col(0) - theta * v).norm();
    gap = resid / theta;
    if (gap <= options.tol) return std::sqrt(theta);
    v = w.col(0) / w.col(0).norm();
  }
  throw NumericalError(
      "largest_singular_value: power iteration did not certify tolerance " +
          std::to_string(options.tol) + " within " +
          std::to_string(options.max_iter) + " iterations (last gap " +
          std::to_string(gap) + ")",
      gap);
}

double largest_singular_value(const Eigen::MatrixXd& m,
                              const PowerOptions& options) {
  DenseOperator op(m);
  return largest_singular_value(op, options);
}

double largest_singular_value_lanczos(const LinearOperator& op,
                                      const LanczosOptions& options) {
  const Eigen::Index rows = op.rows();
  const Eigen::Index cols = op.cols();
  if (rows < 1 || cols < 1) {
    throw ValidationError("largest_singular_value_lanczos: empty matrix");
  }
  const Eigen::Index max_steps =
      std::min<Eigen::Index>(options.max_iter, std::min(rows, cols));

  Eigen::MatrixXd ubasis(rows, max_steps + 1);
  Eigen::MatrixXd vbasis(cols, max_steps);
  Eigen::MatrixXd tmp_r(rows, 1), tmp_c(cols, 1);

  Rng rng(options.seed);
  Eigen::VectorXd u = random_matrix(rows, 1, rng.next_u64());
  // A zero start (or one annihilated by Mᵀ) is replaced by fresh draws; if
  // several draws die the matrix is numerically zero.
  double alpha = 0.0;
  Eigen::VectorXd v(cols);
  for (int attempt = 0; attempt < 4; ++attempt) {
    const double un = u.norm();
    if (un > 0.0) {
      u /= un;
      op.apply_adjoint(u, tmp_c);
      v = tmp_c.col(0);
      alpha = v.norm();
      if (alpha > 0.0) break;
    }
    u = random_matrix(rows, 1, rng.next_u64());
  }
  if (alpha == 0.0) return 0.0;
  v /= alpha;
  ubasis.col(0) = u;
  vbasis.col(0) = v;

  std::vector<double> diag{alpha};   // alpha_1, alpha_2, ...
  std::vector<double> sub;           // beta_1, beta_2, ...
  Eigen::VectorXd warm;
  double sigma = alpha;
  double last_change = std::numeric_limits<double>::infinity();
  int stable_checks = 0;
  bool exact = false;  // breakdown or full Krylov space
  constexpr int kRequiredStable = 3;
  constexpr int kMinSteps = 8;

  for (Eigen::Index j = 0; j < max_steps; ++j) {
    // Next left vector.
    op.apply(vbasis.col(j), tmp_r);
    Eigen::VectorXd p =
        tmp_r.col(0) - diag[static_cast<std::size_t>(j)] * ubasis.col(j);
    for (int pass = 0; pass < 2; ++pass) {  // full reorthogonalization
      auto basis = ubasis.leftCols(j + 1);
      p -= basis * (basis.transpose() * p);
    }
    const double beta = p.norm();
    const double scale = std::max(sigma, 1e-300);
    if (beta <= 1e-14 * scale) {  // invariant subspace captured
      exact = true;
      break;
    }
    if (j + 1 >= max_steps) break;
    ubasis.col(j + 1) = p / beta;

    // Next right vector.
    op.apply_adjoint(ubasis.col(j + 1), tmp_c);
    Eigen::VectorXd r = tmp_c.col(0) - beta * vbasis.col(j);
    for (int pass = 0; pass < 2; ++pass) {
      auto basis = vbasis.leftCols(j + 1);
      r -= basis * (basis.transpose() * r);
    }
    const double next_alpha = r.norm();
    sub.push_back(beta);
    if (next_alpha <= 1e-14 * scale) {
      diag.push_back(0.0);
      sigma = std::max(sigma, sigma1_bidiagonal(diag, sub, warm));
      exact = true;
      break;
    }
    vbasis.col(j + 1) = r / next_alpha;
    diag.push_back(next_alpha);

    const double estimate = sigma1_bidiagonal(diag, sub, warm);
    last_change =
        std::abs(estimate - sigma) / std::max(estimate, 1e-300);
    sigma = estimate;
    if (j + 1 >= kMinSteps) {
      stable_checks = last_change <= options.tol ? stable_checks + 1 : 0;
      if (stable_checks >= kRequiredStable) return sigma;
    }
  }
  if (exact || max_steps == std::min(rows, cols)) {
    // Exhausting the Krylov space (or hitting an invariant subspace with a
    // random start) is exact up to roundoff.
    return sigma;
  }
  throw NumericalError(
      "largest_singular_value_lanczos: estimate did not stabilize to " +
          std::to_string(options.tol) + " within " +
          std::to_string(options.max_iter) + " steps (last relative change " +
          std::to_string(last_change) + ")",
      last_change);
}

}  // namespace scbm
