#include "scbm/candidates.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "scbm/errors.hpp"

namespace scbm {

CandidateSequence::CandidateSequence(int kmax) : kmax_(kmax) {
  if (kmax < 1) throw ValidationError("CandidateSequence: kmax must be >= 1");
  pairs_.reserve(static_cast<std::size_t>(kmax) * kmax);
  for (int ks = 1; ks <= kmax; ++ks) {
    for (int kr = 1; kr <= kmax; ++kr) {
      pairs_.push_back({ks, kr});
    }
  }
  std::sort(pairs_.begin(), pairs_.end(),
            [](const CandidatePair& a, const CandidatePair& b) {
              if (a.ks + a.kr != b.ks + b.kr) return a.ks + a.kr < b.ks + b.kr;
              return a.ks < b.ks;
            });
}

int default_kmax(int n) {
  if (n < 3) throw ValidationError("default_kmax: need n >= 3");
  const int k = static_cast<int>(
      std::floor(std::sqrt(static_cast<double>(n) / std::log(n))));
  return std::max(1, k);
}

std::vector<double> ratio_sequence(const std::vector<double>& t_values) {
  if (t_values.size() < 2) {
    throw ValidationError("ratio_sequence: need at least two values");
  }
  std::vector<double> ratios;
  ratios.reserve(t_values.size() - 1);
  for (std::size_t m = 1; m < t_values.size(); ++m) {
    if (t_values[m] == 0.0) {
      ratios.push_back(std::numeric_limits<double>::infinity());
    } else {
      ratios.push_back(std::abs(t_values[m - 1] / t_values[m]));
    }
  }
  return ratios;
}

}  // namespace scbm
