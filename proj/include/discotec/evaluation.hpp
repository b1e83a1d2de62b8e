#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "discotec/indices.hpp"
#include "discotec/partition.hpp"
#include "discotec/scoring.hpp"

namespace discotec {

// Kendall's tau-b with tie correction, O(n log n). Throws when either
// vector is constant (the correlation is undefined).
double kendall_tau_b(std::span<const double> x, std::span<const double> y);

// Product-moment correlation. Throws on zero variance.
double pearson(std::span<const double> x, std::span<const double> y);

// Per-method mean gap to the best method, dataset by dataset.
// values[m][d] must be finite; a regret of 0 means always best.
std::vector<double> regret(const std::vector<std::vector<double>>& values,
                           Orientation orientation);

// Every scoring method the harness can rank an ensemble with.
enum class Method { Kl, Tv, H2, Binary, Aari, Anmi, Wgss, Chi, Silhouette, Dbi };

const char* method_name(Method m);
Method method_from_name(std::string_view name);
Orientation method_orientation(Method m);
bool method_needs_data(Method m);
bool method_supports_constraints(Method m);

// Consensus- and agreement-based methods produce a full ScoreReport
// (minimise-oriented totals); internal indices are not rankable this way
// and throw.
ScoreReport score_ensemble(Method m, const Ensemble& e,
                           const ConstraintSet* cs = nullptr);

struct MethodScores {
  std::string method;
  std::vector<double> scores;
  Orientation orientation = Orientation::Minimise;
};

// Per-model score vector for any method. Internal indices need `data`;
// constraints apply only to methods that support them.
MethodScores compute_method_scores(Method m, const Ensemble& e,
                                   const DataMatrix* data,
                                   const ConstraintSet* cs);

// Index of the best-scoring model, ties broken by smaller index.
int select_best(const MethodScores& scores);

struct DatasetInput {
  std::string name;
  std::string group;  // datasets aggregate per group in the report tables
  Ensemble ensemble;
  Partition targets;
  std::optional<DataMatrix> data;
  std::optional<ConstraintSet> constraints;
};

struct ProtocolCell {
  bool ok = false;
  std::string error;
  double kendall = 0.0;
  double pearson = 0.0;
  double selected_ari = 0.0;
};

struct MethodAggregate {
  std::string method;
  std::string group;  // "all" for the overall row
  int evaluated = 0;
  int failed = 0;
  double kendall_mean = 0.0;
  double kendall_std = 0.0;
  double pearson_mean = 0.0;
  double pearson_std = 0.0;
  double selected_ari_mean = 0.0;
  double selected_ari_std = 0.0;
  double regret_kendall = 0.0;
  double regret_selected_ari = 0.0;
};

struct ProtocolResult {
  std::vector<std::string> method_names;
  std::vector<std::string> dataset_names;
  std::vector<std::string> dataset_groups;
  std::vector<std::vector<ProtocolCell>> cells;  // [method][dataset]
  std::vector<MethodAggregate> aggregates;       // overall, then per group
};

// For every dataset: score each method, orient, correlate against the
// per-model ARI with the targets, and record the selected model's ARI.
// Failures are recorded per cell and excluded from the aggregates.
ProtocolResult run_protocol(const std::vector<DatasetInput>& datasets,
                            const std::vector<Method>& methods);

struct ConstraintSweepCell {
  int observations = 0;  // constrained observations m
  int runs = 0;
  int failed = 0;
  double kendall_mean = 0.0;
  double kendall_std = 0.0;
};

struct ConstraintSweepResult {
  std::vector<std::string> method_names;
  std::vector<int> observation_counts;
  std::vector<std::vector<ConstraintSweepCell>> cells;  // [method][m index]
};

// Constraint-addition experiment: for each m, repeatedly sample m
// observations without replacement, derive every must-link/cannot-link
// pair they imply from the targets, and measure the regularised ranking's
// correlation. Repeat r uses Rng::stream(seed, dataset_index * repeats + r).
ConstraintSweepResult constraint_sweep(const std::vector<DatasetInput>& datasets,
                                       const std::vector<Method>& methods,
                                       const std::vector<int>& observation_counts,
                                       int repeats, std::uint64_t seed);

// All must-link/cannot-link pairs implied by the targets over the given
// observations: same target label -> must-link, else cannot-link.
ConstraintSet constraints_from_sample(const Partition& targets,
                                      std::span<const int> observations);

}  // namespace discotec
