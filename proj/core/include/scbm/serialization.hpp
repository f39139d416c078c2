#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "scbm/adjacency.hpp"
#include "scbm/data_io.hpp"
#include "scbm/estimators.hpp"
#include "scbm/experiments.hpp"
#include "scbm/gof.hpp"
#include "scbm/model.hpp"

namespace scbm {

inline constexpr std::string_view kVersion = "0.1.0";

/// Shortest round-trip decimal representation (deterministic bytes).
std::string format_double(double value);

/// Model spec document: {n, ks, kr, b (row-major), gs, gr} with 1-based
/// labels.
std::string spec_to_json(const ScbmSpec& spec, int indent = 2);
ScbmSpec spec_from_json(const std::string& text);
ScbmSpec load_spec(const std::filesystem::path& path);

/// Canonical edge-list export: one "i<TAB>j" line per edge, 1-based ids,
/// sorted by (i, j).
std::string adjacency_to_edge_list(const Adjacency& a);
/// Strict reader for the canonical format; node count is the largest id.
Adjacency adjacency_from_edge_list_text(std::string_view text);

/// Dense 0/1 CSV (lossless, keeps isolated nodes).
std::string adjacency_to_csv(const Adjacency& a);
Adjacency adjacency_from_csv_text(std::string_view text);

std::string gof_result_to_json(const GofResult& result, int indent = 2);

std::string estimation_to_json(const EstimationResult& result, int indent = 2);

/// Trace CSV: columns m,ks,kr,t_hat,ratio (ratio empty for m = 1). A
/// non-empty metadata string is emitted as a single leading '#' comment.
std::string trace_to_csv(const std::vector<TraceEntry>& rows,
                         std::string_view metadata = {});
std::string trace_table_to_json(const TraceTable& table, int indent = 2);

/// Experiment report CSV with the fixed column schema. A non-empty metadata
/// string is emitted as a single leading '#' comment.
std::string report_to_csv(const ExperimentReport& report,
                          std::string_view metadata = {});

std::string config_to_json(const ExperimentConfig& config, int indent = 2);
ExperimentConfig config_from_json(const std::string& text);
ExperimentConfig load_config(const std::filesystem::path& path);

/// Hash of the canonical config document, excluding the parallelism degree
/// (reports must be byte-identical across parallelism settings).
std::string config_hash(const ExperimentConfig& config);

/// "version=... seed=... config_hash=..." comment payload for output files.
std::string metadata_line(std::uint64_t seed, std::string_view hash);

void write_text_file(const std::filesystem::path& path,
                     std::string_view content);
std::string read_text_file(const std::filesystem::path& path);

}  // namespace scbm
