#pragma once

#include <compare>
#include <vector>

namespace scbm {

struct CandidatePair {
  int ks;
  int kr;
  auto operator<=>(const CandidatePair&) const = default;
};

/// All pairs (ks, kr) in {1..kmax}² sorted by total ks+kr, ties by smaller
/// ks. Indexing is 1-based to match the trace/report conventions.
class CandidateSequence {
 public:
  explicit CandidateSequence(int kmax);

  int kmax() const { return kmax_; }
  int size() const { return static_cast<int>(pairs_.size()); }  // kmax²
  const CandidatePair& at(int m) const {                        // m in [1, M]
    return pairs_[static_cast<std::size_t>(m - 1)];
  }
  const std::vector<CandidatePair>& pairs() const { return pairs_; }

 private:
  int kmax_;
  std::vector<CandidatePair> pairs_;
};

/// Search cap for a network of n nodes: floor(sqrt(n / ln n)), at least 1.
int default_kmax(int n);

/// Ratio statistics r_m = |t[m-1] / t[m]| for m = 2..M (returned with index
/// m-2). Division by an exact zero yields +infinity, which downstream
/// treats as a peak.
std::vector<double> ratio_sequence(const std::vector<double>& t_values);

}  // namespace scbm
