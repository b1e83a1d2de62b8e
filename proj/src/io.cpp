#include "discotec/io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace discotec {
namespace {

namespace fs = std::filesystem;

std::ifstream open_input(const fs::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw ParseError(path.string(), 0, 0, "cannot open file for reading");
  }
  return in;
}

std::ofstream open_output(const fs::path& path) {
  std::ofstream out(path);
  if (!out) {
    throw std::runtime_error("cannot open " + path.string() + " for writing");
  }
  return out;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::stringstream ss(line);
  while (std::getline(ss, field, ',')) fields.push_back(field);
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

bool parse_int(const std::string& field, long long& out) {
  const std::string t = trim(field);
  if (t.empty()) return false;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), out);
  return ec == std::errc() && ptr == t.data() + t.size();
}

bool parse_real(const std::string& field, double& out) {
  const std::string t = trim(field);
  if (t.empty()) return false;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), out);
  return ec == std::errc() && ptr == t.data() + t.size();
}

// Reads a rectangular CSV table; returns rows of raw fields and reports
// whether the first line looked like a header (any non-numeric field).
struct CsvTable {
  std::vector<std::vector<std::string>> rows;
  std::vector<int> line_numbers;  // source line per data row
  bool had_header = false;
};

CsvTable read_table(const fs::path& path, bool numeric_header_probe) {
  std::ifstream in = open_input(path);
  CsvTable table;
  std::string line;
  int line_no = 0;
  std::size_t width = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    auto fields = split_csv_line(line);
    if (table.rows.empty() && numeric_header_probe) {
      bool numeric = true;
      for (const auto& f : fields) {
        double ignored = 0.0;
        if (!parse_real(f, ignored)) {
          numeric = false;
          break;
        }
      }
      if (!numeric) {
        table.had_header = true;
        width = fields.size();
        continue;
      }
    }
    if (width == 0) {
      width = fields.size();
    } else if (fields.size() != width) {
      throw ParseError(path.string(), line_no,
                       static_cast<int>(fields.size()),
                       "row has " + std::to_string(fields.size()) +
                           " fields, expected " + std::to_string(width));
    }
    table.rows.push_back(std::move(fields));
    table.line_numbers.push_back(line_no);
  }
  if (table.rows.empty()) {
    throw ParseError(path.string(), line_no, 0, "file contains no data rows");
  }
  return table;
}

}  // namespace

ParseError::ParseError(std::string file, int line, int column,
                       const std::string& what)
    : std::runtime_error(file + ":" + std::to_string(line) + ":" +
                         std::to_string(column) + ": " + what),
      file_(std::move(file)),
      line_(line),
      column_(column) {}

std::string format_double(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

Ensemble load_partitions_csv(const fs::path& path) {
  const CsvTable table = read_table(path, true);
  const std::size_t models = table.rows.front().size();
  const std::size_t observations = table.rows.size();

  std::vector<std::vector<Label>> columns(
      models, std::vector<Label>(observations));
  for (std::size_t r = 0; r < observations; ++r) {
    for (std::size_t c = 0; c < models; ++c) {
      long long value = 0;
      if (!parse_int(table.rows[r][c], value)) {
        throw ParseError(path.string(), table.line_numbers[r],
                         static_cast<int>(c) + 1,
                         "expected an integer label, got '" +
                             trim(table.rows[r][c]) + "'");
      }
      if (value < 0) {
        throw ParseError(path.string(), table.line_numbers[r],
                         static_cast<int>(c) + 1, "labels must be non-negative");
      }
      columns[c][r] = static_cast<Label>(value);
    }
  }

  std::vector<Partition> parts;
  parts.reserve(models);
  for (auto& col : columns) {
    parts.push_back(canonicalise(Partition(std::move(col))));
  }
  return Ensemble(std::move(parts));
}

void write_partitions_csv(const fs::path& path, const Ensemble& e, bool header) {
  std::ofstream out = open_output(path);
  if (header) {
    for (int t = 0; t < e.size(); ++t) {
      out << (t == 0 ? "" : ",") << "model_" << t;
    }
    out << "\n";
  }
  for (int i = 0; i < e.n(); ++i) {
    for (int t = 0; t < e.size(); ++t) {
      out << (t == 0 ? "" : ",") << e[t].label(i);
    }
    out << "\n";
  }
}

Partition load_targets_csv(const fs::path& path) {
  const Ensemble e = load_partitions_csv(path);
  if (e.size() != 1) {
    throw ParseError(path.string(), 1, e.size(),
                     "targets file must have exactly one column");
  }
  return e[0];
}

void write_targets_csv(const fs::path& path, const Partition& p) {
  std::ofstream out = open_output(path);
  out << "target\n";
  for (int i = 0; i < p.n(); ++i) out << p.label(i) << "\n";
}

DataMatrix load_data_csv(const fs::path& path) {
  const CsvTable table = read_table(path, true);
  const auto d = table.rows.front().size();
  const auto n = table.rows.size();

  std::vector<double> values;
  values.reserve(n * d);
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < d; ++c) {
      double v = 0.0;
      if (!parse_real(table.rows[r][c], v)) {
        throw ParseError(path.string(), table.line_numbers[r],
                         static_cast<int>(c) + 1,
                         "expected a real number, got '" +
                             trim(table.rows[r][c]) + "'");
      }
      values.push_back(v);
    }
  }
  return DataMatrix(static_cast<int>(n), static_cast<int>(d), std::move(values));
}

ConstraintSet load_constraints(const fs::path& path) {
  std::ifstream in = open_input(path);
  std::vector<std::pair<int, int>> ml;
  std::vector<std::pair<int, int>> cl;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    const std::string body = trim(line);
    if (body.empty()) continue;

    std::istringstream fields(body);
    std::string kind;
    long long a = -1;
    long long b = -1;
    fields >> kind >> a >> b;
    std::string extra;
    if (!fields || (fields >> extra)) {
      throw ParseError(path.string(), line_no, 1,
                       "expected 'ML i j' or 'CL i j'");
    }
    if (a < 0 || b < 0) {
      throw ParseError(path.string(), line_no, 2, "indices must be non-negative");
    }
    if (a == b) {
      throw ParseError(path.string(), line_no, 2,
                       "a constraint cannot pair an observation with itself");
    }
    if (kind == "ML") {
      ml.emplace_back(static_cast<int>(a), static_cast<int>(b));
    } else if (kind == "CL") {
      cl.emplace_back(static_cast<int>(a), static_cast<int>(b));
    } else {
      throw ParseError(path.string(), line_no, 1,
                       "unknown constraint kind '" + kind + "'");
    }
  }
  try {
    return ConstraintSet(std::move(ml), std::move(cl));
  } catch (const std::invalid_argument& ex) {
    throw ParseError(path.string(), line_no, 0, ex.what());
  }
}

void write_constraints(const fs::path& path, const ConstraintSet& cs) {
  std::ofstream out = open_output(path);
  for (const auto& [a, b] : cs.must_link()) out << "ML " << a << " " << b << "\n";
  for (const auto& [a, b] : cs.cannot_link()) out << "CL " << a << " " << b << "\n";
}

namespace {

void write_matrix_meta(const fs::path& matrix_path, int n, int t, double mu,
                       bool binarised) {
  nlohmann::json meta{{"n", n},
                      {"t", t},
                      {"mean_threshold", mu},
                      {"binarised", binarised},
                      {"tool", "discotec"},
                      {"version", kToolVersion}};
  fs::path meta_path = matrix_path;
  meta_path += ".meta.json";
  std::ofstream out = open_output(meta_path);
  out << meta.dump(2) << "\n";
}

}  // namespace

void write_consensus_csv(const fs::path& path, const ConsensusMatrix& c) {
  std::ofstream out = open_output(path);
  for (int i = 0; i < c.n(); ++i) {
    for (int j = 0; j < c.n(); ++j) {
      out << (j == 0 ? "" : ",") << format_double(c.value(i, j));
    }
    out << "\n";
  }
  write_matrix_meta(path, c.n(), c.t(), mean_threshold(c), false);
}

void write_binarised_csv(const fs::path& path, const BinarisedConsensus& q,
                         int t) {
  std::ofstream out = open_output(path);
  for (int i = 0; i < q.bits.n(); ++i) {
    for (int j = 0; j < q.bits.n(); ++j) {
      out << (j == 0 ? "" : ",") << (q.bits.get(i, j) ? 1 : 0);
    }
    out << "\n";
  }
  write_matrix_meta(path, q.bits.n(), t, q.threshold, true);
}

nlohmann::json to_json(const ScoreReport& report) {
  return nlohmann::json{
      {"method", report.method},
      {"raw_orientation", report.raw_orientation == Orientation::Minimise
                              ? "minimise"
                              : "maximise"},
      {"raw", report.raw},
      {"regularisation", report.regularisation},
      {"total", report.total},
      {"ranking", report.ranking},
      {"warnings", report.warnings}};
}

ScoreReport score_report_from_json(const nlohmann::json& j) {
  ScoreReport report;
  report.method = j.at("method").get<std::string>();
  report.raw_orientation = j.at("raw_orientation").get<std::string>() == "minimise"
                               ? Orientation::Minimise
                               : Orientation::Maximise;
  report.raw = j.at("raw").get<std::vector<double>>();
  report.regularisation = j.at("regularisation").get<std::vector<double>>();
  report.total = j.at("total").get<std::vector<double>>();
  report.ranking = j.at("ranking").get<std::vector<int>>();
  report.warnings = j.at("warnings").get<std::vector<std::string>>();
  return report;
}

namespace {

nlohmann::json aggregate_to_json(const MethodAggregate& a) {
  return nlohmann::json{{"method", a.method},
                        {"group", a.group},
                        {"evaluated", a.evaluated},
                        {"failed", a.failed},
                        {"kendall_mean", a.kendall_mean},
                        {"kendall_std", a.kendall_std},
                        {"pearson_mean", a.pearson_mean},
                        {"pearson_std", a.pearson_std},
                        {"selected_ari_mean", a.selected_ari_mean},
                        {"selected_ari_std", a.selected_ari_std},
                        {"regret_kendall", a.regret_kendall},
                        {"regret_selected_ari", a.regret_selected_ari}};
}

}  // namespace

nlohmann::json to_json(const ProtocolResult& result) {
  nlohmann::json cells = nlohmann::json::array();
  for (std::size_t m = 0; m < result.cells.size(); ++m) {
    for (std::size_t d = 0; d < result.cells[m].size(); ++d) {
      const auto& c = result.cells[m][d];
      nlohmann::json cell{{"method", result.method_names[m]},
                          {"dataset", result.dataset_names[d]},
                          {"group", result.dataset_groups[d]},
                          {"ok", c.ok}};
      if (c.ok) {
        cell["kendall"] = c.kendall;
        cell["pearson"] = c.pearson;
        cell["selected_ari"] = c.selected_ari;
      } else {
        cell["error"] = c.error;
      }
      cells.push_back(std::move(cell));
    }
  }
  nlohmann::json aggregates = nlohmann::json::array();
  for (const auto& a : result.aggregates) aggregates.push_back(aggregate_to_json(a));
  return nlohmann::json{{"methods", result.method_names},
                        {"datasets", result.dataset_names},
                        {"groups", result.dataset_groups},
                        {"cells", std::move(cells)},
                        {"aggregates", std::move(aggregates)}};
}

nlohmann::json to_json(const ConstraintSweepResult& result) {
  nlohmann::json cells = nlohmann::json::array();
  for (std::size_t m = 0; m < result.cells.size(); ++m) {
    for (const auto& cell : result.cells[m]) {
      cells.push_back(nlohmann::json{{"method", result.method_names[m]},
                                     {"observations", cell.observations},
                                     {"runs", cell.runs},
                                     {"failed", cell.failed},
                                     {"kendall_mean", cell.kendall_mean},
                                     {"kendall_std", cell.kendall_std}});
    }
  }
  return nlohmann::json{{"methods", result.method_names},
                        {"observation_counts", result.observation_counts},
                        {"cells", std::move(cells)}};
}

nlohmann::json make_report_document(const nlohmann::json& payload,
                                    std::uint64_t seed,
                                    const nlohmann::json& config) {
  nlohmann::json doc{{"metadata",
                      {{"tool", "discotec"},
                       {"version", kToolVersion},
                       {"seed", seed},
                       {"config", config}}}};
  for (const auto& [key, value] : payload.items()) doc[key] = value;
  return doc;
}

void write_report(const fs::path& path, const nlohmann::json& doc) {
  std::ofstream out = open_output(path);
  out << doc.dump(2) << "\n";
}

void write_protocol_tables_csv(const fs::path& path,
                               const ProtocolResult& result) {
  std::ofstream out = open_output(path);
  out << "method,group,evaluated,failed,kendall_mean,kendall_std,"
         "pearson_mean,pearson_std,selected_ari_mean,selected_ari_std,"
         "regret_kendall,regret_selected_ari\n";
  for (const auto& a : result.aggregates) {
    out << a.method << "," << a.group << "," << a.evaluated << "," << a.failed
        << "," << format_double(a.kendall_mean) << ","
        << format_double(a.kendall_std) << "," << format_double(a.pearson_mean)
        << "," << format_double(a.pearson_std) << ","
        << format_double(a.selected_ari_mean) << ","
        << format_double(a.selected_ari_std) << ","
        << format_double(a.regret_kendall) << ","
        << format_double(a.regret_selected_ari) << "\n";
  }
}

void write_constraint_sweep_csv(const fs::path& path,
                                const ConstraintSweepResult& result) {
  std::ofstream out = open_output(path);
  out << "method,observations,runs,failed,kendall_mean,kendall_std\n";
  for (std::size_t m = 0; m < result.cells.size(); ++m) {
    for (const auto& cell : result.cells[m]) {
      out << result.method_names[m] << "," << cell.observations << ","
          << cell.runs << "," << cell.failed << ","
          << format_double(cell.kendall_mean) << ","
          << format_double(cell.kendall_std) << "\n";
    }
  }
}

std::vector<DatasetInput> load_manifest(const fs::path& path,
                                        bool filter_degenerate_models) {
  std::ifstream in = open_input(path);
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& ex) {
    throw ParseError(path.string(), 0, 0,
                     std::string("invalid JSON: ") + ex.what());
  }
  if (!doc.contains("datasets") || !doc["datasets"].is_array() ||
      doc["datasets"].empty()) {
    throw ParseError(path.string(), 0, 0,
                     "manifest needs a non-empty 'datasets' array");
  }

  const fs::path base = path.has_parent_path() ? path.parent_path() : ".";
  auto resolve = [&](const std::string& p) {
    const fs::path candidate(p);
    return candidate.is_absolute() ? candidate : base / candidate;
  };

  std::vector<DatasetInput> datasets;
  int index = 0;
  for (const auto& entry : doc["datasets"]) {
    if (!entry.contains("partitions") || !entry.contains("targets")) {
      throw ParseError(path.string(), 0, index,
                       "each dataset needs 'partitions' and 'targets' paths");
    }
    Ensemble ensemble =
        load_partitions_csv(resolve(entry["partitions"].get<std::string>()));
    if (filter_degenerate_models) {
      ensemble = filter_degenerate(ensemble).first;
    }
    Partition targets =
        load_targets_csv(resolve(entry["targets"].get<std::string>()));

    DatasetInput ds{entry.value("name", "dataset_" + std::to_string(index)),
                    entry.value("group", ""),
                    std::move(ensemble),
                    std::move(targets),
                    std::nullopt,
                    std::nullopt};
    if (entry.contains("data")) {
      ds.data = load_data_csv(resolve(entry["data"].get<std::string>()));
    }
    if (entry.contains("constraints")) {
      ds.constraints =
          load_constraints(resolve(entry["constraints"].get<std::string>()));
    }
    datasets.push_back(std::move(ds));
    ++index;
  }
  return datasets;
}

}  // namespace discotec
