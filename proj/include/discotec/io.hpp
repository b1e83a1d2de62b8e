#pragma once

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "discotec/consensus.hpp"
#include "discotec/evaluation.hpp"
#include "discotec/indices.hpp"
#include "discotec/partition.hpp"
#include "discotec/scenarios.hpp"
#include "discotec/scoring.hpp"

namespace discotec {

inline constexpr const char* kToolVersion = "0.1.0";

// Input error with a file/line/column diagnostic. Columns refer to CSV
// fields (1-based), not characters.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::string file, int line, int column, const std::string& what);

  const std::string& file() const { return file_; }
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  std::string file_;
  int line_ = 0;
  int column_ = 0;
};

// Partitions file: one column per model, one row per observation, integer
// labels, optional `model_0,model_1,...` header. Columns are canonicalised
// on load.
Ensemble load_partitions_csv(const std::filesystem::path& path);
void write_partitions_csv(const std::filesystem::path& path, const Ensemble& e,
                          bool header = true);

// Single-column variant used for ground-truth targets.
Partition load_targets_csv(const std::filesystem::path& path);
void write_targets_csv(const std::filesystem::path& path, const Partition& p);

// Numeric n-by-d observation matrix, optional header row.
DataMatrix load_data_csv(const std::filesystem::path& path);

// Constraint file: `ML i j` / `CL i j` lines, `#` comments, 0-based
// indices. Duplicates collapse; an ML/CL conflict is an error.
ConstraintSet load_constraints(const std::filesystem::path& path);
void write_constraints(const std::filesystem::path& path,
                       const ConstraintSet& cs);

// Dense matrix exports for external visualisation, plus a JSON sidecar
// (`<path>.meta.json`) carrying n, t and the mean threshold.
void write_consensus_csv(const std::filesystem::path& path,
                         const ConsensusMatrix& c);
void write_binarised_csv(const std::filesystem::path& path,
                         const BinarisedConsensus& q, int t);

nlohmann::json to_json(const ScoreReport& report);
ScoreReport score_report_from_json(const nlohmann::json& j);
nlohmann::json to_json(const ProtocolResult& result);
nlohmann::json to_json(const ConstraintSweepResult& result);

// Report documents wrap a payload with tool/version/seed/config metadata.
nlohmann::json make_report_document(const nlohmann::json& payload_key_and_value,
                                    std::uint64_t seed,
                                    const nlohmann::json& config);
void write_report(const std::filesystem::path& path, const nlohmann::json& doc);

// Mean +/- std tables shaped like the benchmark result tables: one row per
// (method, group).
void write_protocol_tables_csv(const std::filesystem::path& path,
                               const ProtocolResult& result);
void write_constraint_sweep_csv(const std::filesystem::path& path,
                                const ConstraintSweepResult& result);

// Benchmark manifest: {"datasets":[{"name","group","partitions","targets",
// "data","constraints"}]}. Relative paths resolve against the manifest
// directory. Loads every dataset eagerly; `filter_degenerate_models` drops
// degenerate pool members on load.
std::vector<DatasetInput> load_manifest(const std::filesystem::path& path,
                                        bool filter_degenerate_models);

// Shortest round-trip formatting (17 significant digits at most).
std::string format_double(double v);

}  // namespace discotec
