#include "scbm/serialization.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "scbm/errors.hpp"

namespace scbm {

namespace {

using nlohmann::json;

json labels_json(const LabelVector& labels) {
  return json(labels.labels());
}

std::vector<double> row_major(const Eigen::MatrixXd& m) {
  std::vector<double> values;
  values.reserve(static_cast<std::size_t>(m.size()));
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) values.push_back(m(i, j));
  }
  return values;
}

json parse_json(const std::string& text, const char* what) {
  json doc = json::parse(text, nullptr, false);
  if (doc.is_discarded()) {
    throw DataError(std::string(what) + ": malformed JSON");
  }
  return doc;
}

std::uint64_t fnv1a(std::string_view bytes) {
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    hash ^= c;
    hash *= 0x100000001b3ULL;
  }
  return hash;
}

std::string hex16(std::uint64_t value) {
  static constexpr char digits[] = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[static_cast<std::size_t>(i)] = digits[value & 0xF];
    value >>= 4;
  }
  return out;
}

json config_to_json_impl(const ExperimentConfig& config, bool include_jobs) {
  json doc;
  doc["experiment"] = std::string(to_string(config.kind));
  doc["n"] = config.n_values;
  json pairs = json::array();
  for (const auto& pair : config.pairs) {
    pairs.push_back(json::array({pair.ks, pair.kr}));
  }
  doc["pairs"] = pairs;
  doc["rho"] = config.rho_values;
  doc["alpha"] = config.alpha;
  doc["beta"] = config.beta;
  if (config.explicit_b.has_value()) {
    doc["b"] = {{"rows", config.explicit_b->rows},
                {"cols", config.explicit_b->cols},
                {"values", config.explicit_b->values}};
  }
  doc["replications"] = config.replications;
  doc["epsilon"] = config.epsilon;
  doc["tau"] = config.tau;
  if (!config.epsilon_grid.empty()) doc["epsilon_grid"] = config.epsilon_grid;
  if (!config.tau_grid.empty()) doc["tau_grid"] = config.tau_grid;
  if (config.kmax.has_value()) doc["kmax"] = *config.kmax;
  doc["base_seed"] = config.base_seed;
  if (include_jobs) doc["jobs"] = config.jobs;
  return doc;
}

}  // namespace

std::string format_double(double value) {
  char buffer[40];
  const auto result =
      std::to_chars(buffer, buffer + sizeof(buffer), value);
  return std::string(buffer, result.ptr);
}

std::string spec_to_json(const ScbmSpec& spec, int indent) {
  json doc;
  doc["n"] = spec.n();
  doc["ks"] = spec.sender_labels().k();
  doc["kr"] = spec.receiver_labels().k();
  doc["b"] = row_major(spec.block().values());
  doc["gs"] = labels_json(spec.sender_labels());
  doc["gr"] = labels_json(spec.receiver_labels());
  return doc.dump(indent) + "\n";
}

ScbmSpec spec_from_json(const std::string& text) {
  const json doc = parse_json(text, "spec");
  try {
    const int n = doc.at("n").get<int>();
    const int ks = doc.at("ks").get<int>();
    const int kr = doc.at("kr").get<int>();
    const auto b_values = doc.at("b").get<std::vector<double>>();
    if (b_values.size() != static_cast<std::size_t>(ks) *
                               static_cast<std::size_t>(kr)) {
      throw DataError("spec: b must have ks*kr entries");
    }
    Eigen::MatrixXd b(ks, kr);
    for (int k = 0; k < ks; ++k) {
      for (int l = 0; l < kr; ++l) {
        b(k, l) = b_values[static_cast<std::size_t>(k) *
                               static_cast<std::size_t>(kr) +
                           static_cast<std::size_t>(l)];
      }
    }
    auto gs = doc.at("gs").get<std::vector<std::int32_t>>();
    auto gr = doc.at("gr").get<std::vector<std::int32_t>>();
    if (static_cast<int>(gs.size()) != n || static_cast<int>(gr.size()) != n) {
      throw DataError("spec: gs and gr must have n entries");
    }
    return ScbmSpec(BlockMatrix(std::move(b)),
                    LabelVector(std::move(gs), ks),
                    LabelVector(std::move(gr), kr));
  } catch (const json::exception& e) {
    throw DataError(std::string("spec: ") + e.what());
  }
}

ScbmSpec load_spec(const std::filesystem::path& path) {
  return spec_from_json(read_text_file(path));
}

std::string adjacency_to_edge_list(const Adjacency& a) {
  std::string out;
  for (int i = 0; i < a.n(); ++i) {
    for (int j = 0; j < a.n(); ++j) {
      if (a(i, j)) {
        out += std::to_string(i + 1);
        out += '\t';
        out += std::to_string(j + 1);
        out += '\n';
      }
    }
  }
  return out;
}

Adjacency adjacency_from_edge_list_text(std::string_view text) {
  std::vector<std::pair<int, int>> edges;
  int n = 0;
  std::size_t line_number = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    const std::size_t eol = text.find('\n', pos);
    std::string_view line = text.substr(
        pos, eol == std::string_view::npos ? std::string_view::npos
                                           : eol - pos);
    pos = eol == std::string_view::npos ? text.size() : eol + 1;
    ++line_number;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;
    int i = 0, j = 0;
    const char* begin = line.data();
    const char* end = line.data() + line.size();
    auto r1 = std::from_chars(begin, end, i);
    if (r1.ec != std::errc{} || r1.ptr == end || *r1.ptr != '\t') {
      throw DataError("edge list line " + std::to_string(line_number) +
                      ": expected 'i<TAB>j'");
    }
    auto r2 = std::from_chars(r1.ptr + 1, end, j);
    if (r2.ec != std::errc{} || r2.ptr != end || i < 1 || j < 1) {
      throw DataError("edge list line " + std::to_string(line_number) +
                      ": expected two positive ids");
    }
    edges.emplace_back(i - 1, j - 1);
    n = std::max({n, i, j});
  }
  if (edges.empty()) throw DataError("edge list: no edges");
  Adjacency::Grid grid = Adjacency::Grid::Zero(n, n);
  for (auto [i, j] : edges) {
    if (i == j) {
      throw DataError("edge list: self-loop at node " + std::to_string(i + 1));
    }
    grid(i, j) = 1;
  }
  return Adjacency(std::move(grid));
}

std::string adjacency_to_csv(const Adjacency& a) {
  std::string out;
  for (int i = 0; i < a.n(); ++i) {
    for (int j = 0; j < a.n(); ++j) {
      if (j > 0) out += ',';
      out += a(i, j) ? '1' : '0';
    }
    out += '\n';
  }
  return out;
}

Adjacency adjacency_from_csv_text(std::string_view text) {
  std::vector<std::vector<std::uint8_t>> rows;
  std::size_t pos = 0;
  while (pos < text.size()) {
    const std::size_t eol = text.find('\n', pos);
    std::string_view line = text.substr(
        pos, eol == std::string_view::npos ? std::string_view::npos
                                           : eol - pos);
    pos = eol == std::string_view::npos ? text.size() : eol + 1;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;
    std::vector<std::uint8_t> row;
    std::size_t field_start = 0;
    while (field_start <= line.size()) {
      std::size_t comma = line.find(',', field_start);
      if (comma == std::string_view::npos) comma = line.size();
      const std::string_view field =
          line.substr(field_start, comma - field_start);
      if (field == "0") {
        row.push_back(0);
      } else if (field == "1") {
        row.push_back(1);
      } else {
        throw DataError("adjacency csv: entries must be 0 or 1");
      }
      field_start = comma + 1;
      if (comma == line.size()) break;
    }
    rows.push_back(std::move(row));
  }
  const auto n = rows.size();
  if (n == 0) throw DataError("adjacency csv: empty");
  Adjacency::Grid grid(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    if (rows[i].size() != n) {
      throw DataError("adjacency csv: matrix must be square");
    }
    for (std::size_t j = 0; j < n; ++j) {
      grid(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          rows[i][j];
    }
  }
  return Adjacency(std::move(grid));
}

std::string gof_result_to_json(const GofResult& result, int indent) {
  json doc;
  doc["t_hat"] = result.t_hat;
  doc["sigma1"] = result.sigma1;
  doc["b_hat"] = {{"rows", result.b_hat.rows()},
                  {"cols", result.b_hat.cols()},
                  {"values", row_major(result.b_hat.values())}};
  doc["sender_histogram"] = result.sender_labels.community_sizes();
  doc["receiver_histogram"] = result.receiver_labels.community_sizes();
  doc["clamped_cells"] = result.clamped_cells;
  return doc.dump(indent) + "\n";
}

std::string estimation_to_json(const EstimationResult& result, int indent) {
  json doc;
  doc["ks_hat"] = result.ks_hat;
  doc["kr_hat"] = result.kr_hat;
  doc["m_star"] = result.m_star;
  doc["stop_reason"] = std::string(to_string(result.trace.stop_reason));
  return doc.dump(indent) + "\n";
}

std::string trace_to_csv(const std::vector<TraceEntry>& rows,
                         std::string_view metadata) {
  std::string out;
  if (!metadata.empty()) {
    out += "# ";
    out += metadata;
    out += '\n';
  }
  out += "m,ks,kr,t_hat,ratio\n";
  for (const auto& row : rows) {
    out += std::to_string(row.m);
    out += ',';
    out += std::to_string(row.ks);
    out += ',';
    out += std::to_string(row.kr);
    out += ',';
    out += format_double(row.t_hat);
    out += ',';
    if (row.ratio.has_value()) out += format_double(*row.ratio);
    out += '\n';
  }
  return out;
}

std::string trace_table_to_json(const TraceTable& table, int indent) {
  json rows = json::array();
  for (const auto& row : table.rows) {
    json entry;
    entry["m"] = row.m;
    entry["ks"] = row.ks;
    entry["kr"] = row.kr;
    entry["t_hat"] = row.t_hat;
    if (row.ratio.has_value()) entry["ratio"] = *row.ratio;
    if (!row.error.empty()) entry["error"] = row.error;
    rows.push_back(std::move(entry));
  }
  json doc;
  doc["rows"] = std::move(rows);
  doc["first_peak_m"] = table.first_peak_m;
  if (table.first_peak_pair.has_value()) {
    doc["first_peak_pair"] =
        json::array({table.first_peak_pair->ks, table.first_peak_pair->kr});
  }
  return doc.dump(indent) + "\n";
}

std::string report_to_csv(const ExperimentReport& report,
                          std::string_view metadata) {
  std::string out;
  if (!metadata.empty()) {
    out += "# ";
    out += metadata;
    out += '\n';
  }
  out += "experiment,cell_id,n,ks,kr,rho,estimator,param,metric,value,"
         "replications\n";
  for (const auto& row : report.rows) {
    out += row.experiment;
    out += ',';
    out += std::to_string(row.cell_id);
    out += ',';
    out += std::to_string(row.n);
    out += ',';
    out += std::to_string(row.ks);
    out += ',';
    out += std::to_string(row.kr);
    out += ',';
    out += format_double(row.rho);
    out += ',';
    out += row.estimator;
    out += ',';
    if (row.param.has_value()) out += format_double(*row.param);
    out += ',';
    out += row.metric;
    out += ',';
    out += format_double(row.value);
    out += ',';
    out += std::to_string(row.replications);
    out += '\n';
  }
  return out;
}

std::string config_to_json(const ExperimentConfig& config, int indent) {
  return config_to_json_impl(config, true).dump(indent) + "\n";
}

ExperimentConfig config_from_json(const std::string& text) {
  const json doc = parse_json(text, "config");
  std::vector<std::string> issues;
  if (!doc.is_object()) throw DataError("config: document must be an object");

  static const std::set<std::string> known = {
      "experiment", "n",   "pairs",        "rho",       "alpha",
      "beta",       "b",   "replications", "epsilon",   "tau",
      "epsilon_grid", "tau_grid", "kmax",  "base_seed", "jobs"};
  for (const auto& [key, value] : doc.items()) {
    (void)value;
    if (!known.contains(key)) issues.push_back(key + ": unknown field");
  }

  ExperimentConfig config;
  try {
    if (!doc.contains("experiment")) {
      issues.push_back("experiment: required");
    } else {
      const auto name = doc.at("experiment").get<std::string>();
      const auto kind = experiment_kind_from(name);
      if (!kind.has_value()) {
        issues.push_back("experiment: unknown name '" + name + "'");
      } else {
        config.kind = *kind;
      }
    }
    if (doc.contains("n")) config.n_values = doc.at("n").get<std::vector<int>>();
    if (doc.contains("pairs")) {
      for (const auto& entry : doc.at("pairs")) {
        const auto pair = entry.get<std::vector<int>>();
        if (pair.size() != 2) {
          issues.push_back("pairs: entries must be [ks, kr]");
          continue;
        }
        config.pairs.push_back({pair[0], pair[1]});
      }
    }
    if (doc.contains("rho")) {
      config.rho_values = doc.at("rho").get<std::vector<double>>();
    }
    if (doc.contains("alpha")) config.alpha = doc.at("alpha").get<double>();
    if (doc.contains("beta")) config.beta = doc.at("beta").get<double>();
    if (doc.contains("b")) {
      ExplicitBlockMatrix eb;
      eb.rows = doc.at("b").at("rows").get<int>();
      eb.cols = doc.at("b").at("cols").get<int>();
      eb.values = doc.at("b").at("values").get<std::vector<double>>();
      config.explicit_b = std::move(eb);
    }
    if (doc.contains("replications")) {
      config.replications = doc.at("replications").get<int>();
    }
    if (doc.contains("epsilon")) config.epsilon = doc.at("epsilon").get<double>();
    if (doc.contains("tau")) config.tau = doc.at("tau").get<double>();
    if (doc.contains("epsilon_grid")) {
      config.epsilon_grid = doc.at("epsilon_grid").get<std::vector<double>>();
    }
    if (doc.contains("tau_grid")) {
      config.tau_grid = doc.at("tau_grid").get<std::vector<double>>();
    }
    if (doc.contains("kmax") && !doc.at("kmax").is_null()) {
      config.kmax = doc.at("kmax").get<int>();
    }
    if (doc.contains("base_seed")) {
      config.base_seed = doc.at("base_seed").get<std::uint64_t>();
    }
    if (doc.contains("jobs")) config.jobs = doc.at("jobs").get<int>();
  } catch (const json::exception& e) {
    issues.push_back(std::string("type error: ") + e.what());
  }
  if (!issues.empty()) {
    std::ostringstream message;
    message << "invalid experiment config:";
    for (const auto& issue : issues) message << "\n  - " << issue;
    throw DataError(message.str());
  }
  validate_config(config);
  return config;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  return config_from_json(read_text_file(path));
}

std::string config_hash(const ExperimentConfig& config) {
  const std::string canonical = config_to_json_impl(config, false).dump();
  return hex16(fnv1a(canonical));
}

std::string metadata_line(std::uint64_t seed, std::string_view hash) {
  std::string out = "scbm version=";
  out += kVersion;
  out += " seed=";
  out += std::to_string(seed);
  if (!hash.empty()) {
    out += " config_hash=";
    out += hash;
  }
  return out;
}

void write_text_file(const std::filesystem::path& path,
                     std::string_view content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot open for writing: " + path.string());
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw DataError("write failed: " + path.string());
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open: " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

}  // namespace scbm
