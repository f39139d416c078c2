#include "scbm/estimators.hpp"

#include <cmath>
#include <limits>

#include "scbm/errors.hpp"
#include "scbm/parallel.hpp"

namespace scbm {

namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

TraceEntry make_entry(int m, const CandidatePair& pair,
                      const StatisticProvider::Value& value) {
  TraceEntry entry;
  entry.m = m;
  entry.ks = pair.ks;
  entry.kr = pair.kr;
  entry.t_hat = value.ok ? value.t_hat : kNan;
  entry.error = value.error;
  return entry;
}

/// Ratio with the library's division-by-zero and failure policy: an exact
/// zero denominator is a peak (+inf); any failed operand poisons the ratio.
double ratio_of(const StatisticProvider::Value& prev,
                const StatisticProvider::Value& cur) {
  if (!prev.ok || !cur.ok) return kNan;
  if (cur.t_hat == 0.0) return std::numeric_limits<double>::infinity();
  return std::abs(prev.t_hat / cur.t_hat);
}

}  // namespace

std::string_view to_string(StopReason reason) {
  switch (reason) {
    case StopReason::threshold_hit: return "threshold_hit";
    case StopReason::ratio_peak: return "ratio_peak";
    case StopReason::exhausted: return "exhausted";
    case StopReason::first_candidate_null: return "first_candidate_null";
  }
  return "unknown";
}

void StatisticProvider::precompute(int jobs) {
  (void)jobs;
  const int m_count = sequence().size();
  for (int m = 1; m <= m_count; ++m) at(m);
}

TestStatisticCache::TestStatisticCache(const Adjacency& a, int kmax,
                                       std::uint64_t seed, GofOptions options)
    : a_(&a),
      seed_(seed),
      options_(std::move(options)),
      sequence_(kmax),
      values_(static_cast<std::size_t>(sequence_.size())) {}

TestStatisticCache::Value TestStatisticCache::compute(int m) const {
  const CandidatePair& pair = sequence_.at(m);
  Value value;
  try {
    const GofResult result =
        test_statistic(*a_, pair.ks, pair.kr, seed_, options_);
    value.t_hat = result.t_hat;
    value.ok = true;
  } catch (const Error& e) {
    value.ok = false;
    value.error = e.what();
  }
  return value;
}

const TestStatisticCache::Value& TestStatisticCache::at(int m) {
  auto& slot = values_[static_cast<std::size_t>(m - 1)];
  if (!slot.has_value()) slot = compute(m);
  return *slot;
}

void TestStatisticCache::precompute(int jobs) {
  parallel_for(sequence_.size(), jobs, [this](std::int64_t i) {
    auto& slot = values_[static_cast<std::size_t>(i)];
    if (!slot.has_value()) slot = compute(static_cast<int>(i) + 1);
  });
}

EstimationResult digof(StatisticProvider& stats, double epsilon) {
  if (!(epsilon > 0.0)) throw ValidationError("digof: epsilon must be > 0");
  const CandidateSequence& seq = stats.sequence();
  const double threshold = std::pow(static_cast<double>(stats.n()), -epsilon);

  EstimationResult result;
  for (int m = 1; m <= seq.size(); ++m) {
    const CandidatePair& pair = seq.at(m);
    const auto& value = stats.at(m);
    result.trace.visited.push_back(make_entry(m, pair, value));
    if (value.ok && value.t_hat < threshold) {
      result.ks_hat = pair.ks;
      result.kr_hat = pair.kr;
      result.m_star = m;
      result.trace.accepted = pair;
      result.trace.stop_reason = StopReason::threshold_hit;
      return result;
    }
  }
  const CandidatePair& last = seq.at(seq.size());
  result.ks_hat = last.ks;
  result.kr_hat = last.kr;
  result.m_star = seq.size();
  result.trace.stop_reason = StopReason::exhausted;
  return result;
}

EstimationResult rdigof(StatisticProvider& stats, double tau) {
  if (!(tau > 0.0)) throw ValidationError("rdigof: tau must be > 0");
  const CandidateSequence& seq = stats.sequence();

  EstimationResult result;
  const auto& first = stats.at(1);
  result.trace.visited.push_back(make_entry(1, seq.at(1), first));
  const double null_threshold = std::pow(static_cast<double>(stats.n()), -0.2);
  if (first.ok && first.t_hat < null_threshold) {
    result.ks_hat = 1;
    result.kr_hat = 1;
    result.m_star = 1;
    result.trace.accepted = CandidatePair{1, 1};
    result.trace.stop_reason = StopReason::first_candidate_null;
    return result;
  }

  for (int m = 2; m <= seq.size(); ++m) {
    const CandidatePair& pair = seq.at(m);
    const auto& value = stats.at(m);
    TraceEntry entry = make_entry(m, pair, value);
    const double r = ratio_of(stats.at(m - 1), value);
    entry.ratio = r;
    result.trace.visited.push_back(std::move(entry));
    if (r > tau) {
      result.ks_hat = pair.ks;
      result.kr_hat = pair.kr;
      result.m_star = m;
      result.trace.accepted = pair;
      result.trace.stop_reason = StopReason::ratio_peak;
      return result;
    }
  }
  const CandidatePair& last = seq.at(seq.size());
  result.ks_hat = last.ks;
  result.kr_hat = last.kr;
  result.m_star = seq.size();
  result.trace.stop_reason = StopReason::exhausted;
  return result;
}

EstimationResult digof(const Adjacency& a, double epsilon, int kmax,
                       std::uint64_t seed, const GofOptions& options) {
  TestStatisticCache cache(a, kmax, seed, options);
  return digof(cache, epsilon);
}

EstimationResult rdigof(const Adjacency& a, double tau, int kmax,
                        std::uint64_t seed, const GofOptions& options) {
  TestStatisticCache cache(a, kmax, seed, options);
  return rdigof(cache, tau);
}

TraceTable full_trace(StatisticProvider& stats, double tau, int jobs) {
  if (!(tau > 0.0)) throw ValidationError("full_trace: tau must be > 0");
  stats.precompute(jobs);
  const CandidateSequence& seq = stats.sequence();

  TraceTable table;
  table.rows.reserve(static_cast<std::size_t>(seq.size()));
  for (int m = 1; m <= seq.size(); ++m) {
    TraceEntry entry = make_entry(m, seq.at(m), stats.at(m));
    if (m >= 2) {
      const double r = ratio_of(stats.at(m - 1), stats.at(m));
      entry.ratio = r;
      if (table.first_peak_m == 0 && r > tau) {
        table.first_peak_m = m;
        table.first_peak_pair = seq.at(m);
      }
    }
    table.rows.push_back(std::move(entry));
  }
  return table;
}

}  // namespace scbm
