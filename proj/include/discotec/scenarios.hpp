#pragma once

#include <cstdint>
#include <vector>

#include "discotec/partition.hpp"
#include "discotec/rng.hpp"

namespace discotec {

// Scenario 1: every model keeps each ground-truth label with its own
// conservation rate drawn uniformly from [0.1, rho_max].
struct UniformScenarioConfig {
  int n = 0;
  int k = 0;
  int t = 0;
  double rho_max = 0.9;
  std::uint64_t seed = 0;
};

// Scenario 2: models concentrate around two anchor partitions ("hubs"),
// one close to the ground truth (rho 0.9) and one far from it (rho 0.2).
// A fraction alpha of the models perturbs the far hub.
struct HubScenarioConfig {
  int n = 0;
  int k = 0;
  int t = 0;
  double alpha = 0.5;
  std::uint64_t seed = 0;
};

struct ScenarioOutput {
  Partition ground_truth;
  Ensemble ensemble;
  std::vector<double> conservation_rates;  // per model
  std::vector<int> hub_assignment;         // per model, 0 = hub A, 1 = hub B;
                                           // empty for the uniform scenario
  std::vector<Partition> hubs;             // {hub A, hub B}; empty for uniform
};

// Balanced ground truth: label of observation i is i mod k.
Partition balanced_ground_truth(int n, int k);

// Keeps each observation's source label with probability rho; otherwise
// reassigns it uniformly among the source's other distinct labels. Needs
// k >= 2. Output labels live in the source's label space, so conserved
// positions compare equal to the source.
Partition perturb(const Partition& source, double rho, Rng& rng);

// RNG streams: model t draws from Rng::stream(seed, t); the hub scenario
// additionally uses streams t and t+1 for the two hubs.
ScenarioOutput scenario_uniform(const UniformScenarioConfig& cfg);
ScenarioOutput scenario_hub(const HubScenarioConfig& cfg);

}  // namespace discotec
