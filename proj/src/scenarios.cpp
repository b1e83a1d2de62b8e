#include "discotec/scenarios.hpp"

#include <stdexcept>
#include <unordered_map>

namespace discotec {
namespace {

void validate_common(int n, int k, int t, int min_t) {
  if (k < 2) throw std::invalid_argument("scenario needs k >= 2");
  if (n < k) throw std::invalid_argument("scenario needs n >= k");
  if (t < min_t) {
    throw std::invalid_argument("scenario needs at least " +
                                std::to_string(min_t) + " models");
  }
}

}  // namespace

Partition balanced_ground_truth(int n, int k) {
  std::vector<Label> labels(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    labels[static_cast<std::size_t>(i)] = static_cast<Label>(i % k);
  }
  return Partition(std::move(labels));
}

Partition perturb(const Partition& source, double rho, Rng& rng) {
  if (source.k() < 2) {
    throw std::invalid_argument(
        "perturb needs k >= 2: no different cluster exists");
  }
  if (!(rho >= 0.0 && rho <= 1.0)) {
    throw std::invalid_argument("conservation rate must lie in [0,1]");
  }
  const auto& distinct = source.distinct();
  std::unordered_map<Label, int> position;
  position.reserve(distinct.size());
  for (std::size_t d = 0; d < distinct.size(); ++d) {
    position.emplace(distinct[d], static_cast<int>(d));
  }

  const int n = source.n();
  const auto k = static_cast<std::uint64_t>(source.k());
  std::vector<Label> labels(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const Label current = source.label(i);
    if (rng.uniform() < rho) {
      labels[static_cast<std::size_t>(i)] = current;
    } else {
      // Uniform among the other k-1 labels: skip the current one.
      const auto draw = static_cast<int>(rng.uniform_below(k - 1));
      const int pos = position.at(current);
      const int chosen = draw < pos ? draw : draw + 1;
      labels[static_cast<std::size_t>(i)] =
          distinct[static_cast<std::size_t>(chosen)];
    }
  }
  return Partition(std::move(labels));
}

ScenarioOutput scenario_uniform(const UniformScenarioConfig& cfg) {
  validate_common(cfg.n, cfg.k, cfg.t, 1);
  if (!(cfg.rho_max > 0.1 && cfg.rho_max <= 1.0)) {
    throw std::invalid_argument("rho_max must lie in (0.1, 1]");
  }

  Partition gt = balanced_ground_truth(cfg.n, cfg.k);
  std::vector<double> rates(static_cast<std::size_t>(cfg.t), 0.0);
  std::vector<std::vector<Label>> model_labels(static_cast<std::size_t>(cfg.t));

#pragma omp parallel for schedule(dynamic)
  for (int m = 0; m < cfg.t; ++m) {
    Rng rng = Rng::stream(cfg.seed, static_cast<std::uint64_t>(m));
    const double rho = 0.1 + (cfg.rho_max - 0.1) * rng.uniform();
    rates[static_cast<std::size_t>(m)] = rho;
    Partition p = perturb(gt, rho, rng);
    auto span = p.labels();
    model_labels[static_cast<std::size_t>(m)].assign(span.begin(), span.end());
  }

  std::vector<Partition> models;
  models.reserve(static_cast<std::size_t>(cfg.t));
  for (auto& labels : model_labels) models.emplace_back(std::move(labels));
  return ScenarioOutput{std::move(gt), Ensemble(std::move(models)),
                        std::move(rates), {}, {}};
}

ScenarioOutput scenario_hub(const HubScenarioConfig& cfg) {
  validate_common(cfg.n, cfg.k, cfg.t, 2);
  if (!(cfg.alpha >= 0.0 && cfg.alpha <= 1.0)) {
    throw std::invalid_argument("alpha must lie in [0,1]");
  }

  Partition gt = balanced_ground_truth(cfg.n, cfg.k);
  Rng rng_a = Rng::stream(cfg.seed, static_cast<std::uint64_t>(cfg.t));
  Rng rng_b = Rng::stream(cfg.seed, static_cast<std::uint64_t>(cfg.t) + 1);
  Partition hub_a = perturb(gt, 0.2, rng_a);  // far from the ground truth
  Partition hub_b = perturb(gt, 0.9, rng_b);  // close to it

  const int from_a = static_cast<int>(cfg.alpha * cfg.t);
  std::vector<double> rates(static_cast<std::size_t>(cfg.t), 0.0);
  std::vector<int> hub_of(static_cast<std::size_t>(cfg.t), 1);
  std::vector<std::vector<Label>> model_labels(static_cast<std::size_t>(cfg.t));

#pragma omp parallel for schedule(dynamic)
  for (int m = 0; m < cfg.t; ++m) {
    Rng rng = Rng::stream(cfg.seed, static_cast<std::uint64_t>(m));
    const double rho = 0.2 + 0.7 * rng.uniform();  // accuracy to the hub
    rates[static_cast<std::size_t>(m)] = rho;
    const bool near_a = m < from_a;
    hub_of[static_cast<std::size_t>(m)] = near_a ? 0 : 1;
    Partition p = perturb(near_a ? hub_a : hub_b, rho, rng);
    auto span = p.labels();
    model_labels[static_cast<std::size_t>(m)].assign(span.begin(), span.end());
  }

  std::vector<Partition> models;
  models.reserve(static_cast<std::size_t>(cfg.t));
  for (auto& labels : model_labels) models.emplace_back(std::move(labels));
  return ScenarioOutput{std::move(gt), Ensemble(std::move(models)),
                        std::move(rates), std::move(hub_of),
                        {std::move(hub_a), std::move(hub_b)}};
}

}  // namespace discotec
