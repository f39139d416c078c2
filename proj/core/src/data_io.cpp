#include "scbm/data_io.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>
#include <unordered_map>

#include "scbm/errors.hpp"

namespace scbm {

namespace {

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t pos = 0;
  while (pos < line.size()) {
    while (pos < line.size() && (line[pos] == ' ' || line[pos] == '\t')) ++pos;
    if (pos >= line.size()) break;
    std::size_t end = pos;
    while (end < line.size() && line[end] != ' ' && line[end] != '\t') ++end;
    fields.push_back(line.substr(pos, end - pos));
    pos = end;
  }
  return fields;
}

/// Union-find over dense node ids.
struct DisjointSets {
  explicit DisjointSets(int n) : parent(static_cast<std::size_t>(n)) {
    std::iota(parent.begin(), parent.end(), 0);
  }
  int find(int x) {
    while (parent[static_cast<std::size_t>(x)] != x) {
      parent[static_cast<std::size_t>(x)] =
          parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
      x = parent[static_cast<std::size_t>(x)];
    }
    return x;
  }
  void unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[static_cast<std::size_t>(std::max(a, b))] =
        std::min(a, b);
  }
  std::vector<int> parent;
};

}  // namespace

std::optional<EdgeListFormat> edge_list_format_from(std::string_view name) {
  if (name == "tsv") return EdgeListFormat::tsv;
  if (name == "konect") return EdgeListFormat::konect;
  return std::nullopt;
}

EdgeList parse_edge_list_text(std::string_view text, EdgeListFormat format,
                              std::string_view source_name) {
  EdgeList result;
  std::unordered_map<std::string, std::int32_t> intern;
  auto intern_id = [&](std::string_view id) {
    auto [it, inserted] = intern.try_emplace(
        std::string(id), static_cast<std::int32_t>(result.node_names.size()));
    if (inserted) result.node_names.emplace_back(id);
    return it->second;
  };

  std::size_t line_number = 0;
  std::size_t pos = 0;
  bool saw_content = false;
  while (pos <= text.size()) {
    const std::size_t eol = text.find('\n', pos);
    std::string_view line = text.substr(
        pos, eol == std::string_view::npos ? std::string_view::npos
                                           : eol - pos);
    pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;
    ++line_number;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);

    const auto fields = split_fields(line);
    if (fields.empty()) continue;  // blank line (e.g. trailing newline)
    saw_content = true;
    if (format == EdgeListFormat::konect && fields[0].front() == '%') {
      continue;
    }
    if (fields.size() < 2 ||
        (format == EdgeListFormat::tsv && fields.size() > 2)) {
      throw DataError(std::string(source_name) + ":" +
                      std::to_string(line_number) +
                      ": expected two node ids, got " +
                      std::to_string(fields.size()) + " fields");
    }
    result.edges.emplace_back(intern_id(fields[0]), intern_id(fields[1]));
  }
  if (!saw_content) {
    throw DataError(std::string(source_name) + ": empty edge list");
  }
  if (result.edges.empty()) {
    throw DataError(std::string(source_name) + ": no edges (comments only)");
  }
  return result;
}

EdgeList parse_edge_list(const std::filesystem::path& path,
                         EdgeListFormat format) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open edge list: " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_edge_list_text(buffer.str(), format, path.string());
}

Adjacency preprocess(const EdgeList& edges, PreprocessSummary* summary) {
  PreprocessSummary local;
  local.input_edges = static_cast<std::int64_t>(edges.edges.size());
  if (edges.edges.empty()) throw DataError("preprocess: empty edge list");

  const int total_nodes = static_cast<int>(edges.node_names.size());
  std::set<std::pair<std::int32_t, std::int32_t>> unique;
  for (const auto& [src, dst] : edges.edges) {
    if (src == dst) {
      ++local.self_loops;
      continue;
    }
    if (!unique.insert({src, dst}).second) ++local.duplicate_edges;
  }
  if (unique.empty()) {
    throw DataError("preprocess: graph is empty after dropping self-loops");
  }

  std::vector<bool> incident(static_cast<std::size_t>(total_nodes), false);
  DisjointSets components(total_nodes);
  for (const auto& [src, dst] : unique) {
    incident[static_cast<std::size_t>(src)] = true;
    incident[static_cast<std::size_t>(dst)] = true;
    components.unite(src, dst);
  }
  local.isolated_nodes =
      total_nodes -
      static_cast<int>(std::count(incident.begin(), incident.end(), true));

  // Component sizes over incident nodes; the largest wins, ties go to the
  // component whose root has the smallest intern index.
  std::unordered_map<int, int> component_size;
  for (int v = 0; v < total_nodes; ++v) {
    if (incident[static_cast<std::size_t>(v)]) {
      ++component_size[components.find(v)];
    }
  }
  local.components = static_cast<int>(component_size.size());
  int best_root = -1;
  int best_size = 0;
  for (int v = 0; v < total_nodes; ++v) {
    if (!incident[static_cast<std::size_t>(v)]) continue;
    const int root = components.find(v);
    const int size = component_size[root];
    if (size > best_size || (size == best_size && root < best_root) ||
        best_root < 0) {
      best_root = root;
      best_size = size;
    }
  }

  // Dense relabeling in intern (first-appearance) order.
  std::vector<std::int32_t> new_id(static_cast<std::size_t>(total_nodes), -1);
  int kept = 0;
  for (int v = 0; v < total_nodes; ++v) {
    if (incident[static_cast<std::size_t>(v)] &&
        components.find(v) == best_root) {
      new_id[static_cast<std::size_t>(v)] = kept++;
    }
  }
  local.kept_nodes = kept;

  Adjacency::Grid grid = Adjacency::Grid::Zero(kept, kept);
  for (const auto& [src, dst] : unique) {
    const std::int32_t s = new_id[static_cast<std::size_t>(src)];
    const std::int32_t d = new_id[static_cast<std::size_t>(dst)];
    if (s >= 0 && d >= 0) {
      grid(s, d) = 1;
      ++local.kept_edges;
    }
  }
  if (summary != nullptr) *summary = local;
  return Adjacency(std::move(grid));
}

NetworkAnalysis analyze_network(const Adjacency& a, std::optional<int> kmax,
                                double tau, std::uint64_t seed,
                                const GofOptions& options, int jobs) {
  const int resolved_kmax = kmax.value_or(std::min(8, a.n()));
  if (resolved_kmax < 1 || resolved_kmax > a.n()) {
    throw ValidationError("analyze_network: kmax must lie in [1, n]");
  }
  TestStatisticCache cache(a, resolved_kmax, seed, options);
  NetworkAnalysis analysis;
  analysis.kmax = resolved_kmax;
  analysis.tau = tau;
  analysis.trace = full_trace(cache, tau, jobs);
  analysis.estimation = rdigof(cache, tau);
  return analysis;
}

}  // namespace scbm
