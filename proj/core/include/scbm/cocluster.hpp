#pragma once

#include <cstdint>
#include <utility>

#include "scbm/adjacency.hpp"
#include "scbm/kmeans.hpp"
#include "scbm/labels.hpp"
#include "scbm/svd.hpp"

namespace scbm {

struct CoclusterOptions {
  SvdOptions svd;        ///< seed field is ignored; derived from the call seed
  KMeansOptions kmeans;
};

/// Spectral co-clustering: truncated SVD of A at rank min(ks0, kr0), then
/// k-means on the rows of U with ks0 clusters (sender labels) and on the rows
/// of V with kr0 clusters (receiver labels). The rank is min(ks0, kr0) even
/// when the two differ. Streams: SVD start, sender k-means and receiver
/// k-means draw from derive_seed(seed, {0..2}).
std::pair<LabelVector, LabelVector> spectral_cocluster(
    const Adjacency& a, int ks0, int kr0, std::uint64_t seed,
    const CoclusterOptions& options = {});

}  // namespace scbm
