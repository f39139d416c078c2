#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "scbm/candidates.hpp"
#include "scbm/estimators.hpp"
#include "scbm/gof.hpp"
#include "scbm/model.hpp"

namespace scbm {

enum class ExperimentKind {
  null_convergence,  ///< mean statistic at the true pair across n
  size_power,        ///< rejection rates over hypothesized pairs
  accuracy,          ///< estimator accuracy over (pair, n, rho) grid
  threshold_sweep,   ///< accuracy vs epsilon and tau grids
  trace,             ///< full candidate table for one sampled network
};
std::string_view to_string(ExperimentKind kind);
std::optional<ExperimentKind> experiment_kind_from(std::string_view name);

/// Base block matrix given explicitly instead of the planted construction;
/// the sparsity factor rho still multiplies it.
struct ExplicitBlockMatrix {
  int rows = 0;
  int cols = 0;
  std::vector<double> values;  // row-major
};

struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::null_convergence;
  std::vector<int> n_values;
  std::vector<CandidatePair> pairs;  ///< true (Ks, Kr) per grid cell
  std::vector<double> rho_values;
  double alpha = 0.7;
  double beta = 0.2;
  std::optional<ExplicitBlockMatrix> explicit_b;
  int replications = 50;
  double epsilon = 0.2;
  double tau = 10.0;
  std::vector<double> epsilon_grid;  ///< threshold sweep only
  std::vector<double> tau_grid;      ///< threshold sweep only
  std::optional<int> kmax;           ///< default: default_kmax(n)
  std::uint64_t base_seed = 0;
  int jobs = 0;  ///< 0 = all cores; never affects results
  GofOptions gof;
};

/// Validates a config; throws DataError listing every offending field.
void validate_config(const ExperimentConfig& config);

struct ReportRow {
  std::string experiment;
  int cell_id = 0;
  int n = 0;
  int ks = 0;
  int kr = 0;
  double rho = 0.0;
  std::string estimator;
  std::optional<double> param;
  std::string metric;
  double value = 0.0;
  int replications = 0;
};

struct ExperimentReport {
  std::vector<ReportRow> rows;
  std::int64_t anomalies = 0;      ///< failed replications (counted, not fatal)
  double elapsed_seconds = 0.0;    ///< wall time; never serialized
};

ExperimentReport run_null_convergence(const ExperimentConfig& config);
ExperimentReport run_size_power(const ExperimentConfig& config);
ExperimentReport run_accuracy(const ExperimentConfig& config);
ExperimentReport run_threshold_sweep(const ExperimentConfig& config);

/// Dispatch on config.kind (everything except `trace`).
ExperimentReport run_experiment(const ExperimentConfig& config);

/// Samples one network from the first grid cell and tabulates the statistic
/// and ratio over the full candidate sequence.
TraceTable run_trace(const ExperimentConfig& config);

/// Samples the network for one grid cell and replication, following the
/// documented seed policy: rep_seed = derive_seed(base_seed, {cell, rep}),
/// with labels, adjacency, and statistic streams split off rep_seed.
struct SampledNetwork {
  ScbmSpec spec;
  Adjacency adjacency;
  std::uint64_t statistic_seed;
};
SampledNetwork sample_cell_network(const ExperimentConfig& config, int n,
                                   const CandidatePair& pair, double rho,
                                   int cell_id, int rep);

}  // namespace scbm
