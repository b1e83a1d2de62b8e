// discotec: rank clustering model pools by their distance to the ensemble
// consensus, generate the synthetic scenarios, and run the benchmark
// protocol. All observation and model indices are 0-based.

#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include <CLI11.hpp>

#include "discotec/consensus.hpp"
#include "discotec/evaluation.hpp"
#include "discotec/io.hpp"
#include "discotec/scenarios.hpp"
#include "discotec/scoring.hpp"

namespace {

using namespace discotec;

constexpr int kExitFailure = 2;

void apply_thread_count(int flag_value) {
#ifdef _OPENMP
  int threads = 0;
  if (flag_value > 0) {
    threads = flag_value;  // the flag wins over the environment
  } else if (const char* env = std::getenv("DISCOTEC_THREADS")) {
    threads = std::atoi(env);
  }
  if (threads > 0) omp_set_num_threads(threads);
#else
  (void)flag_value;
#endif
}

std::vector<Method> parse_methods(const std::vector<std::string>& names) {
  std::vector<Method> methods;
  for (const auto& name : names) methods.push_back(method_from_name(name));
  return methods;
}

struct RankOptions {
  std::string partitions;
  std::string method = "binary";
  std::string constraints;
  std::string out;
  std::uint64_t seed = 0;
};

int run_rank(const RankOptions& opt) {
  const Ensemble ensemble = load_partitions_csv(opt.partitions);
  std::optional<ConstraintSet> cs;
  if (!opt.constraints.empty()) {
    cs = load_constraints(opt.constraints);
    cs->validate_for(ensemble.n());
  }

  const Method method = method_from_name(opt.method);
  if (method_needs_data(method)) {
    throw std::invalid_argument("method '" + opt.method +
                                "' needs a data matrix; use the bench command");
  }
  const ScoreReport report =
      score_ensemble(method, ensemble, cs && !cs->empty() ? &*cs : nullptr);

  for (const auto& warning : report.warnings) {
    std::cerr << "warning: " << warning << "\n";
  }
  std::cout << "rank,model,score\n";
  for (std::size_t r = 0; r < report.ranking.size(); ++r) {
    const int model = report.ranking[r];
    std::cout << r + 1 << "," << model << ","
              << format_double(report.total[static_cast<std::size_t>(model)])
              << "\n";
  }

  if (!opt.out.empty()) {
    nlohmann::json config{{"command", "rank"},
                          {"partitions", opt.partitions},
                          {"method", opt.method},
                          {"constraints", opt.constraints}};
    write_report(opt.out, make_report_document({{"score_report", to_json(report)}},
                                               opt.seed, config));
  }
  return 0;
}

struct SynthOptions {
  std::string scenario = "uniform";
  int n = 200;
  int k = 10;
  int t = 50;
  double rho_max = 0.9;
  double alpha = 0.5;
  std::uint64_t seed = 0;
  std::string out;
  std::string truth_out;
};

int run_synth(const SynthOptions& opt) {
  ScenarioOutput output =
      opt.scenario == "uniform"
          ? scenario_uniform({opt.n, opt.k, opt.t, opt.rho_max, opt.seed})
          : scenario_hub({opt.n, opt.k, opt.t, opt.alpha, opt.seed});

  write_partitions_csv(opt.out, output.ensemble, true);
  if (!opt.truth_out.empty()) {
    write_targets_csv(opt.truth_out, output.ground_truth);
  }

  nlohmann::json meta{{"tool", "discotec"},
                      {"version", kToolVersion},
                      {"scenario", opt.scenario},
                      {"n", opt.n},
                      {"k", opt.k},
                      {"t", opt.t},
                      {"seed", opt.seed},
                      {"conservation_rates", output.conservation_rates}};
  if (opt.scenario == "uniform") {
    meta["rho_max"] = opt.rho_max;
  } else {
    meta["alpha"] = opt.alpha;
    nlohmann::json hubs = nlohmann::json::array();
    for (const int h : output.hub_assignment) {
      hubs.push_back(h == 0 ? "A" : "B");
    }
    meta["hub_of_model"] = std::move(hubs);
  }
  std::ofstream meta_out(opt.out + ".meta.json");
  meta_out << meta.dump(2) << "\n";
  return 0;
}

struct BenchOptions {
  std::string manifest;
  std::vector<std::string> methods;
  int repeats = 50;
  std::string constrained;  // comma-separated observation counts
  std::string out;
  std::uint64_t seed = 0;
  bool keep_degenerate = false;
};

std::vector<int> parse_counts(const std::string& csv) {
  std::vector<int> counts;
  std::string token;
  std::stringstream ss(csv);
  while (std::getline(ss, token, ',')) {
    if (token.empty()) continue;
    counts.push_back(std::stoi(token));
  }
  if (counts.empty()) {
    throw std::invalid_argument("no observation counts given");
  }
  return counts;
}

int run_bench(const BenchOptions& opt) {
  if (opt.methods.empty()) {
    throw std::invalid_argument("bench needs at least one method");
  }
  const std::vector<Method> methods = parse_methods(opt.methods);
  const std::vector<DatasetInput> datasets =
      load_manifest(opt.manifest, !opt.keep_degenerate);

  const ProtocolResult result = run_protocol(datasets, methods);

  int usable = 0;
  for (const auto& agg : result.aggregates) {
    if (agg.group == "all" && agg.evaluated > 0) ++usable;
  }

  nlohmann::json payload{{"protocol", to_json(result)}};
  nlohmann::json config{{"command", "bench"},
                        {"manifest", opt.manifest},
                        {"methods", opt.methods},
                        {"repeats", opt.repeats},
                        {"filter_degenerate", !opt.keep_degenerate}};

  if (!opt.constrained.empty()) {
    const std::vector<int> counts = parse_counts(opt.constrained);
    const ConstraintSweepResult sweep =
        constraint_sweep(datasets, methods, counts, opt.repeats, opt.seed);
    payload["constraint_sweep"] = to_json(sweep);
    config["constrained_observations"] = counts;
    write_constraint_sweep_csv(opt.out + ".constraints.csv", sweep);
  }

  write_report(opt.out, make_report_document(payload, opt.seed, config));
  write_protocol_tables_csv(opt.out + ".tables.csv", result);

  if (usable == 0) {
    std::cerr << "error: every dataset failed for every method\n";
    return kExitFailure;
  }
  return 0;
}

struct ConsensusOptions {
  std::string partitions;
  std::string out_matrix;
  bool binarised = false;
};

int run_consensus(const ConsensusOptions& opt) {
  const Ensemble ensemble = load_partitions_csv(opt.partitions);
  const ConsensusMatrix c = build_consensus(ensemble);
  const double mu = mean_threshold(c);
  if (opt.binarised) {
    write_binarised_csv(opt.out_matrix, binarise(c), c.t());
  } else {
    write_consensus_csv(opt.out_matrix, c);
  }
  std::cout << "n=" << c.n() << " t=" << c.t() << " mu=" << format_double(mu)
            << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"DISCOTEC: discriminative ordering through ensemble consensus"};
  app.require_subcommand(1);

  int threads = 0;
  app.add_option("--threads", threads,
                 "OpenMP thread count (overrides DISCOTEC_THREADS)");

  RankOptions rank_opt;
  auto* rank = app.add_subcommand("rank", "Rank a pool of partitions");
  rank->add_option("partitions", rank_opt.partitions, "partitions CSV file")
      ->required();
  rank->add_option("--method", rank_opt.method,
                   "kl, tv, h2, binary, aari or anmi");
  rank->add_option("--constraints", rank_opt.constraints,
                   "must-link/cannot-link file");
  rank->add_option("--out", rank_opt.out, "report JSON path");

  SynthOptions synth_opt;
  auto* synth = app.add_subcommand("synth", "Generate a synthetic scenario");
  synth->add_option("--scenario", synth_opt.scenario, "uniform or hub")
      ->check(CLI::IsMember({"uniform", "hub"}));
  synth->add_option("--n", synth_opt.n, "observations");
  synth->add_option("--k", synth_opt.k, "clusters in the ground truth");
  synth->add_option("--t", synth_opt.t, "models");
  synth->add_option("--rho-max", synth_opt.rho_max,
                    "upper conservation bound (uniform scenario)");
  synth->add_option("--alpha", synth_opt.alpha,
                    "fraction of models near the far hub (hub scenario)");
  synth->add_option("--seed", synth_opt.seed, "RNG seed");
  synth->add_option("--out", synth_opt.out, "partitions CSV path")->required();
  synth->add_option("--truth-out", synth_opt.truth_out,
                    "ground-truth CSV path");

  BenchOptions bench_opt;
  auto* bench = app.add_subcommand("bench", "Run the evaluation protocol");
  bench->add_option("--datasets", bench_opt.manifest, "manifest JSON path")
      ->required();
  bench->add_option("--methods", bench_opt.methods, "methods to evaluate")
      ->delimiter(',');
  bench->add_option("--repeats", bench_opt.repeats,
                    "constraint sampling repeats");
  bench->add_option("--constrained-observations", bench_opt.constrained,
                    "comma-separated observation counts for the sweep");
  bench->add_option("--out", bench_opt.out, "report JSON path")->required();
  bench->add_option("--seed", bench_opt.seed, "RNG seed");
  bench->add_flag("--keep-degenerate", bench_opt.keep_degenerate,
                  "keep degenerate pool members");

  ConsensusOptions consensus_opt;
  auto* consensus =
      app.add_subcommand("consensus", "Export the consensus matrix");
  consensus->add_option("--partitions", consensus_opt.partitions,
                        "partitions CSV file")
      ->required();
  consensus->add_option("--out-matrix", consensus_opt.out_matrix,
                        "dense CSV output path")
      ->required();
  consensus->add_flag("--binarised", consensus_opt.binarised,
                      "export the mean-binarised consensus");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitFailure;
  }

  apply_thread_count(threads);
  try {
    if (rank->parsed()) return run_rank(rank_opt);
    if (synth->parsed()) return run_synth(synth_opt);
    if (bench->parsed()) return run_bench(bench_opt);
    if (consensus->parsed()) return run_consensus(consensus_opt);
  } catch (const ParseError& ex) {
    std::cerr << "error: " << ex.what() << "\n";
    return kExitFailure;
  } catch (const std::exception& ex) {
    std::cerr << "error: " << ex.what() << "\n";
    return kExitFailure;
  }
  return kExitFailure;
}
