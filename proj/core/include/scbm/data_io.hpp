#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "scbm/adjacency.hpp"
#include "scbm/estimators.hpp"

namespace scbm {

enum class EdgeListFormat {
  tsv,     ///< two whitespace-separated ids per line
  konect,  ///< '%' comment lines skipped, extra columns ignored
};
std::optional<EdgeListFormat> edge_list_format_from(std::string_view name);

/// Raw parsed edges with node ids interned to dense 0-based indices in
/// first-appearance order. Duplicates and self-loops are preserved at this
/// stage; ids may be arbitrary strings.
struct EdgeList {
  std::vector<std::pair<std::int32_t, std::int32_t>> edges;
  std::vector<std::string> node_names;  ///< intern table
};

EdgeList parse_edge_list(const std::filesystem::path& path,
                         EdgeListFormat format);
EdgeList parse_edge_list_text(std::string_view text, EdgeListFormat format,
                              std::string_view source_name = "<memory>");

struct PreprocessSummary {
  std::int64_t input_edges = 0;
  std::int64_t self_loops = 0;
  std::int64_t duplicate_edges = 0;
  int isolated_nodes = 0;
  int components = 0;  ///< weakly connected components before selection
  int kept_nodes = 0;
  std::int64_t kept_edges = 0;
};

/// Drops self-loops, collapses duplicate edges, removes isolated nodes, and
/// keeps the largest weakly connected component (ties broken toward the
/// component containing the earliest-interned node). Retained nodes are
/// relabeled 1..n in intern order, so identical input files yield identical
/// index assignments.
Adjacency preprocess(const EdgeList& edges,
                     PreprocessSummary* summary = nullptr);

struct NetworkAnalysis {
  EstimationResult estimation;
  TraceTable trace;
  int kmax = 0;
  double tau = 0.0;
};

/// Runs the ratio-based estimator on a preprocessed network and returns the
/// full candidate trace alongside the accepted pair. The search cap defaults
/// to min(8, n), the setting used for real networks of any size.
NetworkAnalysis analyze_network(const Adjacency& a, std::optional<int> kmax,
                                double tau, std::uint64_t seed,
                                const GofOptions& options = {}, int jobs = 1);

}  // namespace scbm
