#include "scbm/cocluster.hpp"

#include <algorithm>
#include <string>

#include "scbm/errors.hpp"
#include "scbm/rng.hpp"

namespace scbm {

std::pair<LabelVector, LabelVector> spectral_cocluster(
    const Adjacency& a, int ks0, int kr0, std::uint64_t seed,
    const CoclusterOptions& options) {
  const int n = a.n();
  if (ks0 < 1 || kr0 < 1 || ks0 > n || kr0 > n) {
    throw ValidationError("spectral_cocluster: need 1 <= ks0, kr0 <= n (got " +
                          std::to_string(ks0) + ", " + std::to_string(kr0) +
                          " for n=" + std::to_string(n) + ")");
  }
  const int kmin = std::min(ks0, kr0);

  SparseBinaryOperator op(a);
  SvdOptions svd = options.svd;
  svd.seed = derive_seed(seed, {0});
  const SvdFactors factors = truncated_svd(op, kmin, svd);

  const KMeansResult senders =
      kmeans(factors.u, ks0, derive_seed(seed, {1}), options.kmeans);
  const KMeansResult receivers =
      kmeans(factors.v, kr0, derive_seed(seed, {2}), options.kmeans);
  return {senders.labels, receivers.labels};
}

}  // namespace scbm
