#include "scbm/gof.hpp"

#include <cmath>
#include <string>
#include <vector>

#include "scbm/errors.hpp"
#include "scbm/rng.hpp"

namespace scbm {

namespace {

std::vector<std::int32_t> zero_based(const LabelVector& labels) {
  std::vector<std::int32_t> out(labels.labels());
  for (auto& l : out) --l;
  return out;
}

void check_lengths(int n, const LabelVector& gs, const LabelVector& gr,
                   const char* where) {
  if (gs.size() != n || gr.size() != n) {
    throw ValidationError(std::string(where) +
                          ": label vectors must cover all n nodes");
  }
}

}  // namespace

BlockMatrixEstimate estimate_block_matrix(const Adjacency& a,
                                          const LabelVector& gs,
                                          const LabelVector& gr) {
  const int n = a.n();
  check_lengths(n, gs, gr, "estimate_block_matrix");
  const int ks = gs.k();
  const int kr = gr.k();
  const auto sender_sizes = gs.community_sizes();
  const auto receiver_sizes = gr.community_sizes();
  for (int k = 0; k < ks; ++k) {
    if (sender_sizes[static_cast<std::size_t>(k)] == 0) {
      throw ValidationError("estimate_block_matrix: sender community " +
                            std::to_string(k + 1) + " is empty");
    }
  }
  for (int l = 0; l < kr; ++l) {
    if (receiver_sizes[static_cast<std::size_t>(l)] == 0) {
      throw ValidationError("estimate_block_matrix: receiver community " +
                            std::to_string(l + 1) + " is empty");
    }
  }

  Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic> sums =
      Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic>::Zero(ks,
                                                                        kr);
  for (int i = 0; i < n; ++i) {
    const int k = gs.at(i) - 1;
    for (int j = 0; j < n; ++j) {
      if (a(i, j)) sums(k, gr.at(j) - 1) += 1;
    }
  }

  // Denominator counts all ordered pairs, diagonal slots included, exactly
  // as the plug-in formula reads; the resulting O(1/n) bias is accepted.
  const double lo = 1.0 / (static_cast<double>(n) * (n - 1));
  const double hi = 1.0 - lo;
  int clamped = 0;
  Eigen::MatrixXd b(ks, kr);
  for (int k = 0; k < ks; ++k) {
    for (int l = 0; l < kr; ++l) {
      const double denom =
          static_cast<double>(sender_sizes[static_cast<std::size_t>(k)]) *
          static_cast<double>(receiver_sizes[static_cast<std::size_t>(l)]);
      double value = static_cast<double>(sums(k, l)) / denom;
      if (value < lo) {
        value = lo;
        ++clamped;
      } else if (value > hi) {
        value = hi;
        ++clamped;
      }
      b(k, l) = value;
    }
  }
  return BlockMatrixEstimate{BlockMatrix(std::move(b)), clamped};
}

Eigen::MatrixXd estimated_omega(const BlockMatrix& b_hat,
                                const LabelVector& gs, const LabelVector& gr) {
  const int n = gs.size();
  if (gr.size() != n) {
    throw ValidationError("estimated_omega: label vectors differ in length");
  }
  if (gs.k() != static_cast<int>(b_hat.rows()) ||
      gr.k() != static_cast<int>(b_hat.cols())) {
    throw ValidationError(
        "estimated_omega: label counts do not match block dimensions");
  }
  Eigen::MatrixXd omega(n, n);
  for (int i = 0; i < n; ++i) {
    const int k = gs.at(i) - 1;
    for (int j = 0; j < n; ++j) {
      omega(i, j) = (i == j) ? 0.0 : b_hat(k, gr.at(j) - 1);
    }
  }
  return omega;
}

Eigen::MatrixXd residual_matrix(const Adjacency& a,
                                const Eigen::MatrixXd& omega) {
  const int n = a.n();
  if (omega.rows() != n || omega.cols() != n) {
    throw ValidationError("residual_matrix: omega must be n x n");
  }
  Eigen::MatrixXd r(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i == j) {
        r(i, j) = 0.0;
        continue;
      }
      const double w = omega(i, j);
      if (!(w > 0.0) || !(w < 1.0)) {
        throw ValidationError(
            "residual_matrix: omega(" + std::to_string(i + 1) + "," +
            std::to_string(j + 1) + ") = " + std::to_string(w) +
            " is not strictly inside (0,1)");
      }
      r(i, j) = (static_cast<double>(a(i, j)) - w) /
                std::sqrt((n - 1) * w * (1.0 - w));
    }
  }
  return r;
}

ResidualOperator::ResidualOperator(const Adjacency& a,
                                   const BlockMatrix& b_hat,
                                   const LabelVector& gs,
                                   const LabelVector& gr)
    : n_(a.n()),
      csr_(BinaryCsr::from_adjacency(a)),
      csc_(csr_.transposed()),
      gs_(zero_based(gs)),
      gr_(zero_based(gr)) {
  check_lengths(a.n(), gs, gr, "ResidualOperator");
  const auto ks = b_hat.rows();
  const auto kr = b_hat.cols();
  scale_.resize(ks, kr);
  offset_.resize(ks, kr);
  for (Eigen::Index k = 0; k < ks; ++k) {
    for (Eigen::Index l = 0; l < kr; ++l) {
      const double p = b_hat(k, l);
      if (!(p > 0.0) || !(p < 1.0)) {
        throw ValidationError(
            "ResidualOperator: block probabilities must lie strictly inside "
            "(0,1); clamp the estimate first");
      }
      scale_(k, l) = 1.0 / std::sqrt((n_ - 1) * p * (1.0 - p));
      offset_(k, l) = p * scale_(k, l);
    }
  }
}

void ResidualOperator::apply(const Eigen::Ref<const Eigen::MatrixXd>& x,
                             Eigen::Ref<Eigen::MatrixXd> y) const {
  const Eigen::Index b = x.cols();
  const Eigen::Index kr = offset_.cols();
  // Receiver-group sums of x rows.
  Eigen::MatrixXd group(kr, b);
  group.setZero();
  for (Eigen::Index j = 0; j < n_; ++j) {
    group.row(gr_[static_cast<std::size_t>(j)]) += x.row(j);
  }
  for (Eigen::Index i = 0; i < n_; ++i) {
    const auto k = gs_[static_cast<std::size_t>(i)];
    auto row = y.row(i);
    row.setZero();
    for (auto p = csr_.row_ptr[static_cast<std::size_t>(i)];
         p < csr_.row_ptr[static_cast<std::size_t>(i) + 1]; ++p) {
      const auto j = csr_.col_idx[static_cast<std::size_t>(p)];
      row += scale_(k, gr_[static_cast<std::size_t>(j)]) * x.row(j);
    }
    for (Eigen::Index l = 0; l < kr; ++l) {
      row -= offset_(k, l) * group.row(l);
    }
    // The fitted part above covered j == i; the residual diagonal is zero.
    row += offset_(k, gr_[static_cast<std::size_t>(i)]) * x.row(i);
  }
}

void ResidualOperator::apply_adjoint(
    const Eigen::Ref<const Eigen::MatrixXd>& x,
    Eigen::Ref<Eigen::MatrixXd> y) const {
  const Eigen::Index b = x.cols();
  const Eigen::Index ks = offset_.rows();
  // Sender-group sums of x rows.
  Eigen::MatrixXd group(ks, b);
  group.setZero();
  for (Eigen::Index i = 0; i < n_; ++i) {
    group.row(gs_[static_cast<std::size_t>(i)]) += x.row(i);
  }
  for (Eigen::Index j = 0; j < n_; ++j) {
    const auto l = gr_[static_cast<std::size_t>(j)];
    auto row = y.row(j);
    row.setZero();
    for (auto p = csc_.row_ptr[static_cast<std::size_t>(j)];
         p < csc_.row_ptr[static_cast<std::size_t>(j) + 1]; ++p) {
      const auto i = csc_.col_idx[static_cast<std::size_t>(p)];
      row += scale_(gs_[static_cast<std::size_t>(i)], l) * x.row(i);
    }
    for (Eigen::Index k = 0; k < ks; ++k) {
      row -= offset_(k, l) * group.row(k);
    }
    row += offset_(gs_[static_cast<std::size_t>(j)], l) * x.row(j);
  }
}

namespace {

double sigma1_for_route(const LinearOperator& op, SigmaRoute route,
                        const GofOptions& options, std::uint64_t seed) {
  if (route == SigmaRoute::dense_power) {
    PowerOptions popts;
    popts.tol = options.sigma_tol;
    popts.max_iter = options.sigma_max_iter.value_or(200000);
    popts.seed = seed;
    return largest_singular_value(op, popts);
  }
  LanczosOptions lopts;
  lopts.tol = options.sigma_tol;
  lopts.max_iter = options.sigma_max_iter.value_or(500);
  lopts.seed = seed;
  return largest_singular_value_lanczos(op, lopts);
}

}  // namespace

GofResult test_statistic(const Adjacency& a, int ks0, int kr0,
                         std::uint64_t seed, const GofOptions& options) {
  const int n = a.n();
  if (ks0 < 1 || kr0 < 1 || ks0 > n || kr0 > n) {
    throw ValidationError("test_statistic: need 1 <= ks0, kr0 <= n");
  }
  const std::uint64_t cluster_seed =
      derive_seed(seed, {static_cast<std::uint64_t>(ks0),
                         static_cast<std::uint64_t>(kr0)});
  const std::uint64_t sigma_seed =
      derive_seed(seed, {static_cast<std::uint64_t>(ks0),
                         static_cast<std::uint64_t>(kr0), 1});

  auto [gs, gr] = spectral_cocluster(a, ks0, kr0, cluster_seed,
                                     options.cocluster);
  const BlockMatrixEstimate estimate = estimate_block_matrix(a, gs, gr);

  double sigma1;
  if (options.route == SigmaRoute::dense_power) {
    const Eigen::MatrixXd omega = estimated_omega(estimate.values, gs, gr);
    const Eigen::MatrixXd residual = residual_matrix(a, omega);
    sigma1 = sigma1_for_route(DenseOperator(residual), options.route, options,
                              sigma_seed);
  } else {
    const ResidualOperator op(a, estimate.values, gs, gr);
    sigma1 = sigma1_for_route(op, options.route, options, sigma_seed);
  }
  return GofResult{sigma1 - 2.0, sigma1,          estimate.values,
                   std::move(gs), std::move(gr), estimate.clamped_cells};
}

double ideal_statistic(const Adjacency& a, const Eigen::MatrixXd& omega_true,
                       const GofOptions& options) {
  const Eigen::MatrixXd residual = residual_matrix(a, omega_true);
  const DenseOperator op(residual);
  const std::uint64_t seed = derive_seed(0xdea1ULL, {});
  double sigma1;
  if (options.route == SigmaRoute::dense_power) {
    sigma1 = sigma1_for_route(op, SigmaRoute::dense_power, options, seed);
  } else {
    sigma1 = sigma1_for_route(op, SigmaRoute::structured_lanczos, options,
                              seed);
  }
  return sigma1 - 2.0;
}

}  // namespace scbm
