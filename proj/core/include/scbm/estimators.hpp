#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "scbm/adjacency.hpp"
#include "scbm/candidates.hpp"
#include "scbm/gof.hpp"

namespace scbm {

enum class StopReason {
  threshold_hit,        ///< DiGoF: statistic fell below the decaying threshold
  ratio_peak,           ///< RDiGoF: ratio exceeded tau
  exhausted,            ///< no candidate accepted; largest pair returned
  first_candidate_null  ///< RDiGoF: (1,1) already fits
};
std::string_view to_string(StopReason reason);

struct TraceEntry {
  int m = 0;
  int ks = 0;
  int kr = 0;
  double t_hat = 0.0;           ///< NaN when the candidate failed
  std::optional<double> ratio;  ///< present from m >= 2 in ratio-based runs
  std::string error;            ///< non-empty when the candidate failed
};

struct EstimationTrace {
  std::vector<TraceEntry> visited;
  std::optional<CandidatePair> accepted;  ///< empty when exhausted
  StopReason stop_reason = StopReason::exhausted;
};

struct EstimationResult {
  int ks_hat = 0;
  int kr_hat = 0;
  int m_star = 0;  ///< lexicographic index of the returned pair
  EstimationTrace trace;
};

/// Source of per-candidate test statistics over a candidate sequence.
/// The production implementation computes and caches them lazily; tests may
/// stub the interface with fixed sequences.
class StatisticProvider {
 public:
  struct Value {
    double t_hat = 0.0;
    bool ok = false;
    std::string error;
  };
  virtual ~StatisticProvider() = default;
  virtual int n() const = 0;
  virtual const CandidateSequence& sequence() const = 0;
  virtual const Value& at(int m) = 0;  ///< 1-based index into the sequence
  /// Computes every candidate up front (parallelizable); results must match
  /// the lazy path. Default: sequential warm-up.
  virtual void precompute(int jobs);
};

/// Lazily computed, cached statistics for one network. Each candidate's
/// statistic uses a seed derived from (seed, ks, kr), so values are
/// independent of evaluation order and DiGoF/RDiGoF share work on the same
/// cache. Candidate failures are recorded, not thrown.
class TestStatisticCache final : public StatisticProvider {
 public:
  TestStatisticCache(const Adjacency& a, int kmax, std::uint64_t seed,
                     GofOptions options = {});
  int n() const override { return a_->n(); }
  const CandidateSequence& sequence() const override { return sequence_; }
  const Value& at(int m) override;
  void precompute(int jobs) override;

 private:
  Value compute(int m) const;
  const Adjacency* a_;
  std::uint64_t seed_;
  GofOptions options_;
  CandidateSequence sequence_;
  std::vector<std::optional<Value>> values_;
};

/// Sequential search: returns the first candidate whose statistic falls
/// below n^(-epsilon); the last candidate when none does. Failed candidates
/// are treated as rejected and recorded in the trace.
EstimationResult digof(StatisticProvider& stats, double epsilon);

/// Ratio-based search: returns (1,1) when its statistic is below n^(-1/5),
/// otherwise the first candidate m >= 2 with |t(m-1)/t(m)| > tau; the last
/// candidate when none qualifies.
EstimationResult rdigof(StatisticProvider& stats, double tau);

/// Convenience overloads that own a cache internally.
EstimationResult digof(const Adjacency& a, double epsilon, int kmax,
                       std::uint64_t seed, const GofOptions& options = {});
EstimationResult rdigof(const Adjacency& a, double tau, int kmax,
                        std::uint64_t seed, const GofOptions& options = {});

/// Full (m, t_hat, ratio) table over the whole candidate sequence, with the
/// first index whose ratio exceeds tau marked (0 when none).
struct TraceTable {
  std::vector<TraceEntry> rows;
  int first_peak_m = 0;
  std::optional<CandidatePair> first_peak_pair;
};
TraceTable full_trace(StatisticProvider& stats, double tau, int jobs = 1);

}  // namespace scbm
