#include "scbm/experiments.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "scbm/errors.hpp"
#include "scbm/parallel.hpp"
#include "scbm/rng.hpp"

namespace scbm {

namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

class Stopwatch {
 public:
  Stopwatch() : start_(std::chrono::steady_clock::now()) {}
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                         start_)
        .count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

BlockMatrix cell_block_matrix(const ExperimentConfig& config,
                              const CandidatePair& pair, double rho) {
  if (config.explicit_b.has_value()) {
    const auto& eb = *config.explicit_b;
    Eigen::MatrixXd b(eb.rows, eb.cols);
    for (int k = 0; k < eb.rows; ++k) {
      for (int l = 0; l < eb.cols; ++l) {
        b(k, l) = rho * eb.values[static_cast<std::size_t>(k) *
                                      static_cast<std::size_t>(eb.cols) +
                                  static_cast<std::size_t>(l)];
      }
    }
    return BlockMatrix(std::move(b));
  }
  return planted_block_matrix(pair.ks, pair.kr, config.alpha, config.beta,
                              rho);
}

int resolve_kmax(const ExperimentConfig& config, int n) {
  return config.kmax.value_or(default_kmax(n));
}

/// Mean over finite values; anomalies excluded from the denominator.
double mean_of(const std::vector<double>& values, std::int64_t* anomalies) {
  double sum = 0.0;
  int count = 0;
  for (double v : values) {
    if (std::isnan(v)) {
      ++*anomalies;
    } else {
      sum += v;
      ++count;
    }
  }
  return count > 0 ? sum / count : kNan;
}

}  // namespace

std::string_view to_string(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::null_convergence: return "null-convergence";
    case ExperimentKind::size_power: return "size-power";
    case ExperimentKind::accuracy: return "accuracy";
    case ExperimentKind::threshold_sweep: return "threshold-sweep";
    case ExperimentKind::trace: return "trace";
  }
  return "unknown";
}

std::optional<ExperimentKind> experiment_kind_from(std::string_view name) {
  if (name == "null-convergence") return ExperimentKind::null_convergence;
  if (name == "size-power") return ExperimentKind::size_power;
  if (name == "accuracy") return ExperimentKind::accuracy;
  if (name == "threshold-sweep") return ExperimentKind::threshold_sweep;
  if (name == "trace") return ExperimentKind::trace;
  return std::nullopt;
}

void validate_config(const ExperimentConfig& config) {
  std::vector<std::string> issues;
  if (config.n_values.empty()) issues.push_back("n: at least one value");
  for (int n : config.n_values) {
    if (n < 3) issues.push_back("n: values must be >= 3");
    if (n > Adjacency::kMaxNodes) issues.push_back("n: exceeds node cap");
  }
  if (config.rho_values.empty()) issues.push_back("rho: at least one value");
  for (double rho : config.rho_values) {
    if (!(rho > 0.0) || rho > 1.0) issues.push_back("rho: must lie in (0,1]");
  }
  if (config.explicit_b.has_value()) {
    const auto& eb = *config.explicit_b;
    if (eb.rows < 1 || eb.cols < 1) issues.push_back("b: empty dimensions");
    if (eb.values.size() != static_cast<std::size_t>(eb.rows) *
                                static_cast<std::size_t>(eb.cols)) {
      issues.push_back("b: values length must be rows*cols");
    }
    for (double v : eb.values) {
      if (!(v >= 0.0) || v > 1.0) issues.push_back("b: entries must lie in [0,1]");
    }
    if (!config.pairs.empty() &&
        (config.pairs.size() != 1 || config.pairs[0].ks != eb.rows ||
         config.pairs[0].kr != eb.cols)) {
      issues.push_back("pairs: must be absent or match explicit b dimensions");
    }
  } else {
    if (config.pairs.empty()) issues.push_back("pairs: at least one pair");
    if (config.alpha < 0.0) issues.push_back("alpha: must be >= 0");
    if (config.beta < 0.0) issues.push_back("beta: must be >= 0");
    for (double rho : config.rho_values) {
      if (rho * (config.alpha + config.beta) > 1.0) {
        issues.push_back("rho: rho*(alpha+beta) must be <= 1");
      }
    }
  }
  for (const auto& pair : config.pairs) {
    if (pair.ks < 1 || pair.kr < 1) issues.push_back("pairs: entries must be >= 1");
  }
  if (config.replications < 1) issues.push_back("replications: must be >= 1");
  if (!(config.epsilon > 0.0)) issues.push_back("epsilon: must be > 0");
  if (!(config.tau > 0.0)) issues.push_back("tau: must be > 0");
  if (config.kmax.has_value() && *config.kmax < 1) {
    issues.push_back("kmax: must be >= 1");
  }
  if (config.kind == ExperimentKind::threshold_sweep) {
    if (config.epsilon_grid.empty() && config.tau_grid.empty()) {
      issues.push_back("epsilon_grid/tau_grid: sweep needs at least one grid");
    }
    for (double e : config.epsilon_grid) {
      if (!(e > 0.0)) issues.push_back("epsilon_grid: values must be > 0");
    }
    for (double t : config.tau_grid) {
      if (!(t > 0.0)) issues.push_back("tau_grid: values must be > 0");
    }
  }
  if (config.jobs < 0) issues.push_back("jobs: must be >= 0");
  if (!issues.empty()) {
    std::ostringstream message;
    message << "invalid experiment config:";
    for (const auto& issue : issues) message << "\n  - " << issue;
    throw DataError(message.str());
  }
}

SampledNetwork sample_cell_network(const ExperimentConfig& config, int n,
                                   const CandidatePair& pair, double rho,
                                   int cell_id, int rep) {
  const std::uint64_t rep_seed =
      derive_seed(config.base_seed, {static_cast<std::uint64_t>(cell_id),
                                     static_cast<std::uint64_t>(rep)});
  BlockMatrix b = cell_block_matrix(config, pair, rho);
  const int ks = static_cast<int>(b.rows());
  const int kr = static_cast<int>(b.cols());
  LabelVector gs = assign_balanced_labels(n, ks, derive_seed(rep_seed, {1}));
  LabelVector gr = assign_balanced_labels(n, kr, derive_seed(rep_seed, {2}));
  ScbmSpec spec(std::move(b), std::move(gs), std::move(gr));
  Adjacency a = sample_adjacency(spec, derive_seed(rep_seed, {3}));
  return SampledNetwork{std::move(spec), std::move(a),
                        derive_seed(rep_seed, {4})};
}

namespace {

struct NullCell {
  int n;
  CandidatePair pair;
  double rho;
};

std::vector<NullCell> grid_cells(const ExperimentConfig& config) {
  std::vector<NullCell> cells;
  const std::vector<CandidatePair> pairs =
      config.explicit_b.has_value()
          ? std::vector<CandidatePair>{{config.explicit_b->rows,
                                        config.explicit_b->cols}}
          : config.pairs;
  for (const auto& pair : pairs) {
    for (int n : config.n_values) {
      for (double rho : config.rho_values) {
        cells.push_back({n, pair, rho});
      }
    }
  }
  return cells;
}

}  // namespace

ExperimentReport run_null_convergence(const ExperimentConfig& config) {
  validate_config(config);
  Stopwatch timer;
  const auto cells = grid_cells(config);
  const int reps = config.replications;

  std::vector<double> stats(cells.size() * static_cast<std::size_t>(reps),
                            kNan);
  parallel_for(static_cast<std::int64_t>(stats.size()), config.jobs,
               [&](std::int64_t task) {
                 const int cell_id = static_cast<int>(task / reps);
                 const int rep = static_cast<int>(task % reps);
                 const auto& cell = cells[static_cast<std::size_t>(cell_id)];
                 const SampledNetwork net = sample_cell_network(
                     config, cell.n, cell.pair, cell.rho, cell_id, rep);
                 try {
                   const GofResult result =
                       test_statistic(net.adjacency, cell.pair.ks,
                                      cell.pair.kr, net.statistic_seed,
                                      config.gof);
                   stats[static_cast<std::size_t>(task)] = result.t_hat;
                 } catch (const Error&) {
                   // anomaly: slot stays NaN
                 }
               });

  ExperimentReport report;
  for (std::size_t c = 0; c < cells.size(); ++c) {
    const auto& cell = cells[c];
    std::vector<double> values(
        stats.begin() + static_cast<std::ptrdiff_t>(c) * reps,
        stats.begin() + static_cast<std::ptrdiff_t>(c + 1) * reps);
    const double mean = mean_of(values, &report.anomalies);
    report.rows.push_back({std::string(to_string(config.kind)),
                           static_cast<int>(c), cell.n, cell.pair.ks,
                           cell.pair.kr, cell.rho, "gof", std::nullopt,
                           "mean_t_hat", mean, reps});
  }
  report.elapsed_seconds = timer.seconds();
  return report;
}

ExperimentReport run_size_power(const ExperimentConfig& config) {
  validate_config(config);
  Stopwatch timer;

  struct PowerCell {
    int n;
    CandidatePair truth;
    double rho;
    CandidatePair hypothesis;
  };
  std::vector<PowerCell> cells;
  for (const auto& cell : grid_cells(config)) {
    for (int ks0 = 1; ks0 <= cell.pair.ks; ++ks0) {
      for (int kr0 = 1; kr0 <= cell.pair.kr; ++kr0) {
        cells.push_back({cell.n, cell.pair, cell.rho, {ks0, kr0}});
      }
    }
  }
  const int reps = config.replications;

  // 1 = reject, 0 = accept, NaN = anomaly.
  std::vector<double> outcomes(cells.size() * static_cast<std::size_t>(reps),
                               kNan);
  parallel_for(
      static_cast<std::int64_t>(outcomes.size()), config.jobs,
      [&](std::int64_t task) {
        const int cell_id = static_cast<int>(task / reps);
        const int rep = static_cast<int>(task % reps);
        const auto& cell = cells[static_cast<std::size_t>(cell_id)];
        const SampledNetwork net = sample_cell_network(
            config, cell.n, cell.truth, cell.rho, cell_id, rep);
        const double threshold =
            std::pow(static_cast<double>(cell.n), -config.epsilon);
        try {
          const GofResult result =
              test_statistic(net.adjacency, cell.hypothesis.ks,
                             cell.hypothesis.kr, net.statistic_seed,
                             config.gof);
          outcomes[static_cast<std::size_t>(task)] =
              result.t_hat >= threshold ? 1.0 : 0.0;
        } catch (const Error&) {
        }
      });

  ExperimentReport report;
  for (std::size_t c = 0; c < cells.size(); ++c) {
    const auto& cell = cells[c];
    std::vector<double> values(
        outcomes.begin() + static_cast<std::ptrdiff_t>(c) * reps,
        outcomes.begin() + static_cast<std::ptrdiff_t>(c + 1) * reps);
    const double rate = mean_of(values, &report.anomalies);
    report.rows.push_back({std::string(to_string(config.kind)),
                           static_cast<int>(c), cell.n, cell.hypothesis.ks,
                           cell.hypothesis.kr, cell.rho, "gof", config.epsilon,
                           "rejection_rate", rate, reps});
  }
  report.elapsed_seconds = timer.seconds();
  return report;
}

ExperimentReport run_accuracy(const ExperimentConfig& config) {
  validate_config(config);
  Stopwatch timer;
  const auto cells = grid_cells(config);
  const int reps = config.replications;

  // Per (cell, rep): {digof hit, rdigof hit}, NaN = anomaly.
  std::vector<double> digof_hits(cells.size() * static_cast<std::size_t>(reps),
                                 kNan);
  std::vector<double> rdigof_hits(digof_hits.size(), kNan);
  parallel_for(
      static_cast<std::int64_t>(digof_hits.size()), config.jobs,
      [&](std::int64_t task) {
        const int cell_id = static_cast<int>(task / reps);
        const int rep = static_cast<int>(task % reps);
        const auto& cell = cells[static_cast<std::size_t>(cell_id)];
        const SampledNetwork net = sample_cell_network(
            config, cell.n, cell.pair, cell.rho, cell_id, rep);
        try {
          TestStatisticCache cache(net.adjacency,
                                   resolve_kmax(config, cell.n),
                                   net.statistic_seed, config.gof);
          const EstimationResult d = digof(cache, config.epsilon);
          const EstimationResult r = rdigof(cache, config.tau);
          digof_hits[static_cast<std::size_t>(task)] =
              (d.ks_hat == cell.pair.ks && d.kr_hat == cell.pair.kr) ? 1.0
                                                                      : 0.0;
          rdigof_hits[static_cast<std::size_t>(task)] =
              (r.ks_hat == cell.pair.ks && r.kr_hat == cell.pair.kr) ? 1.0
                                                                      : 0.0;
        } catch (const Error&) {
        }
      });

  ExperimentReport report;
  for (std::size_t c = 0; c < cells.size(); ++c) {
    const auto& cell = cells[c];
    std::vector<double> dv(
        digof_hits.begin() + static_cast<std::ptrdiff_t>(c) * reps,
        digof_hits.begin() + static_cast<std::ptrdiff_t>(c + 1) * reps);
    std::vector<double> rv(
        rdigof_hits.begin() + static_cast<std::ptrdiff_t>(c) * reps,
        rdigof_hits.begin() + static_cast<std::ptrdiff_t>(c + 1) * reps);
    const double digof_acc = mean_of(dv, &report.anomalies);
    std::int64_t ignored = 0;  // same failed reps as digof; count once
    const double rdigof_acc = mean_of(rv, &ignored);
    report.rows.push_back({std::string(to_string(config.kind)),
                           static_cast<int>(c), cell.n, cell.pair.ks,
                           cell.pair.kr, cell.rho, "digof", config.epsilon,
                           "accuracy", digof_acc, reps});
    report.rows.push_back({std::string(to_string(config.kind)),
                           static_cast<int>(c), cell.n, cell.pair.ks,
                           cell.pair.kr, cell.rho, "rdigof", config.tau,
                           "accuracy", rdigof_acc, reps});
  }
  report.elapsed_seconds = timer.seconds();
  return report;
}

ExperimentReport run_threshold_sweep(const ExperimentConfig& config) {
  validate_config(config);
  Stopwatch timer;
  const auto cells = grid_cells(config);
  const int reps = config.replications;
  const auto& eps_grid = config.epsilon_grid;
  const auto& tau_grid = config.tau_grid;

  // Per (cell, rep): one cached trace shared by every threshold.
  const std::size_t eps_count = eps_grid.size();
  const std::size_t tau_count = tau_grid.size();
  const std::size_t per_rep = eps_count + tau_count;
  std::vector<double> hits(
      cells.size() * static_cast<std::size_t>(reps) * per_rep, kNan);
  parallel_for(
      static_cast<std::int64_t>(cells.size()) * reps, config.jobs,
      [&](std::int64_t task) {
        const int cell_id = static_cast<int>(task / reps);
        const int rep = static_cast<int>(task % reps);
        const auto& cell = cells[static_cast<std::size_t>(cell_id)];
        const SampledNetwork net = sample_cell_network(
            config, cell.n, cell.pair, cell.rho, cell_id, rep);
        double* slot = hits.data() + static_cast<std::size_t>(task) * per_rep;
        try {
          TestStatisticCache cache(net.adjacency,
                                   resolve_kmax(config, cell.n),
                                   net.statistic_seed, config.gof);
          for (std::size_t e = 0; e < eps_count; ++e) {
            const EstimationResult d = digof(cache, eps_grid[e]);
            slot[e] = (d.ks_hat == cell.pair.ks && d.kr_hat == cell.pair.kr)
                          ? 1.0
                          : 0.0;
          }
          for (std::size_t t = 0; t < tau_count; ++t) {
            const EstimationResult r = rdigof(cache, tau_grid[t]);
            slot[eps_count + t] =
                (r.ks_hat == cell.pair.ks && r.kr_hat == cell.pair.kr) ? 1.0
                                                                        : 0.0;
          }
        } catch (const Error&) {
        }
      });

  ExperimentReport report;
  for (std::size_t c = 0; c < cells.size(); ++c) {
    const auto& cell = cells[c];
    auto value_at = [&](std::size_t rep, std::size_t offset) {
      return hits[(c * static_cast<std::size_t>(reps) + rep) * per_rep +
                  offset];
    };
    for (std::size_t e = 0; e < eps_count; ++e) {
      std::vector<double> values;
      values.reserve(static_cast<std::size_t>(reps));
      for (int rep = 0; rep < reps; ++rep) {
        values.push_back(value_at(static_cast<std::size_t>(rep), e));
      }
      std::int64_t* sink = e == 0 ? &report.anomalies : nullptr;
      std::int64_t ignored = 0;
      const double acc = mean_of(values, sink ? sink : &ignored);
      report.rows.push_back({std::string(to_string(config.kind)),
                             static_cast<int>(c), cell.n, cell.pair.ks,
                             cell.pair.kr, cell.rho, "digof", eps_grid[e],
                             "accuracy", acc, reps});
    }
    for (std::size_t t = 0; t < tau_count; ++t) {
      std::vector<double> values;
      values.reserve(static_cast<std::size_t>(reps));
      for (int rep = 0; rep < reps; ++rep) {
        values.push_back(value_at(static_cast<std::size_t>(rep),
                                  eps_count + t));
      }
      std::int64_t ignored = 0;
      std::int64_t* sink =
          (eps_count == 0 && t == 0) ? &report.anomalies : &ignored;
      const double acc = mean_of(values, sink);
      report.rows.push_back({std::string(to_string(config.kind)),
                             static_cast<int>(c), cell.n, cell.pair.ks,
                             cell.pair.kr, cell.rho, "rdigof", tau_grid[t],
                             "accuracy", acc, reps});
    }
  }
  report.elapsed_seconds = timer.seconds();
  return report;
}

ExperimentReport run_experiment(const ExperimentConfig& config) {
  switch (config.kind) {
    case ExperimentKind::null_convergence: return run_null_convergence(config);
    case ExperimentKind::size_power: return run_size_power(config);
    case ExperimentKind::accuracy: return run_accuracy(config);
    case ExperimentKind::threshold_sweep: return run_threshold_sweep(config);
    case ExperimentKind::trace:
      throw ValidationError(
          "run_experiment: use run_trace for trace configs");
  }
  throw ValidationError("run_experiment: unknown experiment kind");
}

TraceTable run_trace(const ExperimentConfig& config) {
  validate_config(config);
  const auto cells = grid_cells(config);
  const auto& cell = cells.front();
  const SampledNetwork net =
      sample_cell_network(config, cell.n, cell.pair, cell.rho, 0, 0);
  TestStatisticCache cache(net.adjacency, resolve_kmax(config, cell.n),
                           net.statistic_seed, config.gof);
  return full_trace(cache, config.tau, config.jobs);
}

}  // namespace scbm
