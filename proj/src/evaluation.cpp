#include "discotec/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "discotec/agreement.hpp"
#include "discotec/rng.hpp"

namespace discotec {
namespace {

// Merge sort counting strict inversions (y_i > y_j for i < j).
std::int64_t count_inversions(std::vector<double>& v, std::vector<double>& buf,
                              std::size_t lo, std::size_t hi) {
  if (hi - lo < 2) return 0;
  const std::size_t mid = lo + (hi - lo) / 2;
  std::int64_t inv = count_inversions(v, buf, lo, mid) +
                     count_inversions(v, buf, mid, hi);
  std::size_t a = lo;
  std::size_t b = mid;
  std::size_t out = lo;
  while (a < mid && b < hi) {
    if (v[b] < v[a]) {
      inv += static_cast<std::int64_t>(mid - a);
      buf[out++] = v[b++];
    } else {
      buf[out++] = v[a++];
    }
  }
  while (a < mid) buf[out++] = v[a++];
  while (b < hi) buf[out++] = v[b++];
  std::copy(buf.begin() + static_cast<std::ptrdiff_t>(lo),
            buf.begin() + static_cast<std::ptrdiff_t>(hi),
            v.begin() + static_cast<std::ptrdiff_t>(lo));
  return inv;
}

std::int64_t tie_pairs_sorted(std::span<const double> v) {
  std::int64_t total = 0;
  std::size_t run = 1;
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (v[i] == v[i - 1]) {
      ++run;
    } else {
      total += static_cast<std::int64_t>(run) * static_cast<std::int64_t>(run - 1) / 2;
      run = 1;
    }
  }
  total += static_cast<std::int64_t>(run) * static_cast<std::int64_t>(run - 1) / 2;
  return total;
}

void require_pair(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) {
    throw std::invalid_argument("correlation inputs differ in length");
  }
  if (x.size() < 2) {
    throw std::invalid_argument("correlation needs at least two values");
  }
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!std::isfinite(x[i]) || !std::isfinite(y[i])) {
      throw std::invalid_argument("correlation inputs must be finite");
    }
  }
}

double mean_of(std::span<const double> v) {
  return std::accumulate(v.begin(), v.end(), 0.0) /
         static_cast<double>(v.size());
}

double std_of(std::span<const double> v, double mean) {
  if (v.size() < 2) return 0.0;
  double s = 0.0;
  for (const double x : v) s += (x - mean) * (x - mean);
  return std::sqrt(s / static_cast<double>(v.size() - 1));
}

}  // namespace

double kendall_tau_b(std::span<const double> x, std::span<const double> y) {
  require_pair(x, y);
  const auto n = static_cast<std::int64_t>(x.size());

  std::vector<std::size_t> order(x.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (x[a] != x[b]) return x[a] < x[b];
    return y[a] < y[b];
  });

  // Tie pair counts: n1 over x, n2 over y, n3 over joint (x,y).
  std::int64_t n1 = 0;
  std::int64_t n3 = 0;
  {
    std::size_t run_x = 1;
    std::size_t run_xy = 1;
    for (std::size_t i = 1; i < order.size(); ++i) {
      const bool same_x = x[order[i]] == x[order[i - 1]];
      const bool same_xy = same_x && y[order[i]] == y[order[i - 1]];
      if (same_x) {
        ++run_x;
      } else {
        n1 += static_cast<std::int64_t>(run_x) * static_cast<std::int64_t>(run_x - 1) / 2;
        run_x = 1;
      }
      if (same_xy) {
        ++run_xy;
      } else {
        n3 += static_cast<std::int64_t>(run_xy) * static_cast<std::int64_t>(run_xy - 1) / 2;
        run_xy = 1;
      }
    }
    n1 += static_cast<std::int64_t>(run_x) * static_cast<std::int64_t>(run_x - 1) / 2;
    n3 += static_cast<std::int64_t>(run_xy) * static_cast<std::int64_t>(run_xy - 1) / 2;
  }

  std::vector<double> ys(x.size());
  for (std::size_t i = 0; i < order.size(); ++i) ys[i] = y[order[i]];
  std::vector<double> buf(ys.size());
  const std::int64_t discordant = count_inversions(ys, buf, 0, ys.size());

  std::sort(ys.begin(), ys.end());
  const std::int64_t n2 = tie_pairs_sorted(ys);

  const std::int64_t n0 = n * (n - 1) / 2;
  if (n1 == n0 || n2 == n0) {
    throw std::domain_error("kendall tau-b is undefined for a constant vector");
  }
  const std::int64_t concordant_minus_discordant =
      n0 - n1 - n2 + n3 - 2 * discordant;
  return static_cast<double>(concordant_minus_discordant) /
         std::sqrt(static_cast<double>(n0 - n1) * static_cast<double>(n0 - n2));
}

double pearson(std::span<const double> x, std::span<const double> y) {
  require_pair(x, y);
  const double mx = mean_of(x);
  const double my = mean_of(y);
  double sxy = 0.0;
  double sxx = 0.0;
  double syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - mx;
    const double dy = y[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0) {
    throw std::domain_error("pearson correlation is undefined for a constant vector");
  }
  return sxy / std::sqrt(sxx * syy);
}

std::vector<double> regret(const std::vector<std::vector<double>>& values,
                           Orientation orientation) {
  if (values.empty() || values.front().empty()) {
    throw std::invalid_argument("regret needs at least one method and one dataset");
  }
  const std::size_t datasets = values.front().size();
  for (const auto& row : values) {
    if (row.size() != datasets) {
      throw std::invalid_argument("regret matrix is ragged");
    }
    for (const double v : row) {
      if (!std::isfinite(v)) {
        throw std::invalid_argument("regret values must be finite");
      }
    }
  }

  std::vector<double> out(values.size(), 0.0);
  for (std::size_t d = 0; d < datasets; ++d) {
    double best = values.front()[d];
    for (const auto& row : values) {
      best = orientation == Orientation::Maximise ? std::max(best, row[d])
                                                  : std::min(best, row[d]);
    }
    for (std::size_t m = 0; m < values.size(); ++m) {
      out[m] += orientation == Orientation::Maximise ? best - values[m][d]
                                                     : values[m][d] - best;
    }
  }
  for (double& r : out) r /= static_cast<double>(datasets);
  return out;
}

const char* method_name(Method m) {
  switch (m) {
    case Method::Kl: return "kl";
    case Method::Tv: return "tv";
    case Method::H2: return "h2";
    case Method::Binary: return "binary";
    case Method::Aari: return "aari";
    case Method::Anmi: return "anmi";
    case Method::Wgss: return "wgss";
    case Method::Chi: return "chi";
    case Method::Silhouette: return "silhouette";
    case Method::Dbi: return "dbi";
  }
  return "?";
}

Method method_from_name(std::string_view name) {
  for (const Method m :
       {Method::Kl, Method::Tv, Method::H2, Method::Binary, Method::Aari,
        Method::Anmi, Method::Wgss, Method::Chi, Method::Silhouette,
        Method::Dbi}) {
    if (name == method_name(m)) return m;
  }
  throw std::invalid_argument("unknown method: " + std::string(name));
}

Orientation method_orientation(Method m) {
  switch (m) {
    case Method::Aari:
    case Method::Anmi:
    case Method::Chi:
    case Method::Silhouette:
      return Orientation::Maximise;
    default:
      return Orientation::Minimise;
  }
}

bool method_needs_data(Method m) {
  switch (m) {
    case Method::Wgss:
    case Method::Chi:
    case Method::Silhouette:
    case Method::Dbi:
      return true;
    default:
      return false;
  }
}

bool method_supports_constraints(Method m) {
  // The informativeness regularisation only combines with scores that are
  // themselves averages over connectivity edges.
  return !method_needs_data(m);
}

namespace {

DistanceKind method_distance(Method m) {
  switch (m) {
    case Method::Kl: return DistanceKind::KL;
    case Method::Tv: return DistanceKind::TV;
    case Method::H2: return DistanceKind::H2;
    default: return DistanceKind::Binary;
  }
}

}  // namespace

ScoreReport score_ensemble(Method m, const Ensemble& e, const ConstraintSet* cs) {
  if (method_needs_data(m)) {
    throw std::invalid_argument(
        "internal indices rank against a data matrix, not an ensemble consensus");
  }
  if (m != Method::Aari && m != Method::Anmi) {
    return rank_ensemble(e, method_distance(m), cs);
  }

  ScoreReport report;
  report.method = method_name(m);
  report.raw_orientation = Orientation::Maximise;
  if (e.size() < 3) {
    report.warnings.push_back(
        "ensemble has fewer than 3 models; the consensus is weakly informative");
  }
  const bool constrained = cs != nullptr && !cs->empty();
  if (constrained) cs->validate_for(e.n());

  const auto agreement = average_agreement(
      e, m == Method::Aari ? AgreementMetric::Ari : AgreementMetric::Nmi);
  report.raw = agreement.average;
  report.regularisation.assign(report.raw.size(), 0.0);
  report.total.resize(report.raw.size());
  for (int t = 0; t < e.size(); ++t) {
    if (constrained) {
      report.regularisation[static_cast<std::size_t>(t)] =
          informativeness(e[t], *cs);
    }
    // Maximise-oriented raw score, so the minimise-oriented total negates it.
    report.total[static_cast<std::size_t>(t)] =
        -report.raw[static_cast<std::size_t>(t)] +
        report.regularisation[static_cast<std::size_t>(t)];
  }
  report.ranking = rank_ascending(report.total);
  return report;
}

MethodScores compute_method_scores(Method m, const Ensemble& e,
                                   const DataMatrix* data,
                                   const ConstraintSet* cs) {
  MethodScores out;
  out.method = method_name(m);

  if (!method_needs_data(m)) {
    const ScoreReport report = score_ensemble(m, e, cs);
    out.scores = report.total;
    out.orientation = Orientation::Minimise;
    return out;
  }

  if (data == nullptr) {
    throw std::invalid_argument(std::string(method_name(m)) +
                                " requires a data matrix");
  }
  if (cs != nullptr && !cs->empty()) {
    throw std::invalid_argument(std::string(method_name(m)) +
                                " does not support constraint regularisation");
  }
  out.orientation = method_orientation(m);
  out.scores.resize(static_cast<std::size_t>(e.size()));
  for (int t = 0; t < e.size(); ++t) {
    double v = 0.0;
    switch (m) {
      case Method::Wgss: v = wgss(*data, e[t]); break;
      case Method::Chi: v = chi(*data, e[t]); break;
      case Method::Silhouette: v = silhouette(*data, e[t]); break;
      case Method::Dbi: v = dbi(*data, e[t]); break;
      default: break;
    }
    out.scores[static_cast<std::size_t>(t)] = v;
  }
  return out;
}

int select_best(const MethodScores& scores) {
  if (scores.scores.empty()) {
    throw std::invalid_argument("cannot select from an empty score vector");
  }
  std::size_t best = 0;
  for (std::size_t i = 1; i < scores.scores.size(); ++i) {
    const bool better = scores.orientation == Orientation::Minimise
                            ? scores.scores[i] < scores.scores[best]
                            : scores.scores[i] > scores.scores[best];
    if (better) best = i;
  }
  return static_cast<int>(best);
}

namespace {

// Negates minimise-oriented scores so higher always means better.
std::vector<double> oriented_for_correlation(const MethodScores& ms) {
  std::vector<double> v = ms.scores;
  if (ms.orientation == Orientation::Minimise) {
    for (double& x : v) x = -x;
  }
  return v;
}

ProtocolCell evaluate_cell(Method m, const DatasetInput& ds,
                           std::span<const double> external) {
  ProtocolCell cell;
  try {
    const MethodScores ms = compute_method_scores(
        m, ds.ensemble, ds.data ? &*ds.data : nullptr,
        ds.constraints ? &*ds.constraints : nullptr);
    const std::vector<double> oriented = oriented_for_correlation(ms);
    cell.kendall = kendall_tau_b(oriented, external);
    cell.pearson = pearson(oriented, external);
    cell.selected_ari = external[static_cast<std::size_t>(select_best(ms))];
    cell.ok = true;
  } catch (const std::exception& ex) {
    cell.ok = false;
    cell.error = ex.what();
  }
  return cell;
}

MethodAggregate aggregate_for(const std::string& method,
                              const std::string& group,
                              std::span<const ProtocolCell> cells,
                              std::span<const double> regret_kendall_row,
                              std::span<const double> regret_ari_row) {
  MethodAggregate agg;
  agg.method = method;
  agg.group = group;

  std::vector<double> kendalls;
  std::vector<double> pearsons;
  std::vector<double> selected;
  for (const auto& c : cells) {
    if (!c.ok) {
      ++agg.failed;
      continue;
    }
    ++agg.evaluated;
    kendalls.push_back(c.kendall);
    pearsons.push_back(c.pearson);
    selected.push_back(c.selected_ari);
  }
  if (agg.evaluated > 0) {
    agg.kendall_mean = mean_of(kendalls);
    agg.kendall_std = std_of(kendalls, agg.kendall_mean);
    agg.pearson_mean = mean_of(pearsons);
    agg.pearson_std = std_of(pearsons, agg.pearson_mean);
    agg.selected_ari_mean = mean_of(selected);
    agg.selected_ari_std = std_of(selected, agg.selected_ari_mean);
  }
  if (!regret_kendall_row.empty()) {
    agg.regret_kendall = mean_of(regret_kendall_row);
    agg.regret_selected_ari = mean_of(regret_ari_row);
  }
  return agg;
}

// Per-dataset regret terms (best minus achieved over the methods that
// succeeded on that dataset), keyed by method; skips failed cells.
std::vector<std::vector<double>> regret_terms(
    const std::vector<std::vector<ProtocolCell>>& cells,
    double ProtocolCell::* field, std::span<const std::size_t> dataset_ids) {
  const std::size_t methods = cells.size();
  std::vector<std::vector<double>> terms(methods);
  for (const std::size_t d : dataset_ids) {
    double best = -std::numeric_limits<double>::infinity();
    bool any = false;
    for (std::size_t m = 0; m < methods; ++m) {
      if (cells[m][d].ok) {
        best = std::max(best, cells[m][d].*field);
        any = true;
      }
    }
    if (!any) continue;
    for (std::size_t m = 0; m < methods; ++m) {
      if (cells[m][d].ok) terms[m].push_back(best - cells[m][d].*field);
    }
  }
  return terms;
}

}  // namespace

ProtocolResult run_protocol(const std::vector<DatasetInput>& datasets,
                            const std::vector<Method>& methods) {
  if (datasets.empty()) {
    throw std::invalid_argument("protocol needs at least one dataset");
  }
  if (methods.empty()) {
    throw std::invalid_argument("protocol needs at least one method");
  }

  ProtocolResult result;
  for (const Method m : methods) result.method_names.push_back(method_name(m));
  for (const auto& ds : datasets) {
    result.dataset_names.push_back(ds.name);
    result.dataset_groups.push_back(ds.group.empty() ? "all" : ds.group);
  }
  result.cells.assign(methods.size(),
                      std::vector<ProtocolCell>(datasets.size()));

  const auto dataset_count = static_cast<std::int64_t>(datasets.size());
#pragma omp parallel for schedule(dynamic)
  for (std::int64_t d = 0; d < dataset_count; ++d) {
    const auto& ds = datasets[static_cast<std::size_t>(d)];
    std::string dataset_error;
    std::vector<double> external;
    if (ds.ensemble.n() != ds.targets.n()) {
      dataset_error = "targets length does not match the ensemble";
    } else if (ds.ensemble.size() < 3) {
      dataset_error = "ensemble has fewer than 3 models after filtering";
    } else {
      external.resize(static_cast<std::size_t>(ds.ensemble.size()));
      for (int t = 0; t < ds.ensemble.size(); ++t) {
        external[static_cast<std::size_t>(t)] = ari(ds.ensemble[t], ds.targets);
      }
    }
    for (std::size_t m = 0; m < methods.size(); ++m) {
      auto& cell = result.cells[m][static_cast<std::size_t>(d)];
      if (!dataset_error.empty()) {
        cell.ok = false;
        cell.error = dataset_error;
      } else {
        cell = evaluate_cell(methods[m], ds, external);
      }
    }
  }

  // Overall aggregates first, then one row per distinct group.
  std::vector<std::string> groups;
  for (const auto& g : result.dataset_groups) {
    if (std::find(groups.begin(), groups.end(), g) == groups.end()) {
      groups.push_back(g);
    }
  }

  std::vector<std::size_t> all_ids(datasets.size());
  std::iota(all_ids.begin(), all_ids.end(), std::size_t{0});
  const auto overall_kendall =
      regret_terms(result.cells, &ProtocolCell::kendall, all_ids);
  const auto overall_ari =
      regret_terms(result.cells, &ProtocolCell::selected_ari, all_ids);
  for (std::size_t m = 0; m < methods.size(); ++m) {
    result.aggregates.push_back(aggregate_for(result.method_names[m], "all",
                                              result.cells[m],
                                              overall_kendall[m], overall_ari[m]));
  }

  if (groups.size() > 1) {
    for (const auto& g : groups) {
      std::vector<std::size_t> ids;
      for (std::size_t d = 0; d < datasets.size(); ++d) {
        if (result.dataset_groups[d] == g) ids.push_back(d);
      }
      const auto group_kendall =
          regret_terms(result.cells, &ProtocolCell::kendall, ids);
      const auto group_ari =
          regret_terms(result.cells, &ProtocolCell::selected_ari, ids);
      for (std::size_t m = 0; m < methods.size(); ++m) {
        std::vector<ProtocolCell> subset;
        for (const std::size_t d : ids) subset.push_back(result.cells[m][d]);
        result.aggregates.push_back(aggregate_for(result.method_names[m], g,
                                                  subset, group_kendall[m],
                                                  group_ari[m]));
      }
    }
  }
  return result;
}

ConstraintSet constraints_from_sample(const Partition& targets,
                                      std::span<const int> observations) {
  std::vector<std::pair<int, int>> ml;
  std::vector<std::pair<int, int>> cl;
  for (std::size_t a = 0; a < observations.size(); ++a) {
    for (std::size_t b = a + 1; b < observations.size(); ++b) {
      const int i = observations[a];
      const int j = observations[b];
      if (targets.label(i) == targets.label(j)) {
        ml.emplace_back(i, j);
      } else {
        cl.emplace_back(i, j);
      }
    }
  }
  return ConstraintSet(std::move(ml), std::move(cl));
}

ConstraintSweepResult constraint_sweep(const std::vector<DatasetInput>& datasets,
                                       const std::vector<Method>& methods,
                                       const std::vector<int>& observation_counts,
                                       int repeats, std::uint64_t seed) {
  if (datasets.empty() || methods.empty() || observation_counts.empty()) {
    throw std::invalid_argument("constraint sweep needs datasets, methods and counts");
  }
  if (repeats < 1) throw std::invalid_argument("repeats must be positive");
  for (const Method m : methods) {
    if (!method_supports_constraints(m)) {
      throw std::invalid_argument(std::string(method_name(m)) +
                                  " does not support constraint regularisation");
    }
  }
  for (const auto& ds : datasets) {
    for (const int m : observation_counts) {
      if (m < 0 || m > ds.ensemble.n()) {
        throw std::invalid_argument(
            "constrained observation count out of range for dataset " + ds.name);
      }
    }
  }

  ConstraintSweepResult result;
  for (const Method m : methods) result.method_names.push_back(method_name(m));
  result.observation_counts = observation_counts;
  result.cells.assign(methods.size(),
                      std::vector<ConstraintSweepCell>(observation_counts.size()));

  // One task per (dataset, repeat); each owns one RNG stream. The m values
  // reuse the same observation sample prefix, so curves per m are nested.
  struct RunKey {
    std::size_t dataset;
    int repeat;
  };
  std::vector<RunKey> runs;
  for (std::size_t d = 0; d < datasets.size(); ++d) {
    for (int r = 0; r < repeats; ++r) runs.push_back({d, r});
  }

  // taus[m][mi] collects one value per successful run, ordered by run index.
  std::vector<std::vector<std::vector<double>>> taus(
      methods.size(),
      std::vector<std::vector<double>>(observation_counts.size()));
  std::vector<std::vector<std::vector<int>>> fails(
      methods.size(), std::vector<std::vector<int>>(
                          observation_counts.size(),
                          std::vector<int>(runs.size(), 0)));
  std::vector<std::vector<std::vector<double>>> run_values(
      methods.size(),
      std::vector<std::vector<double>>(
          observation_counts.size(),
          std::vector<double>(runs.size(),
                              std::numeric_limits<double>::quiet_NaN())));

  const int max_m = *std::max_element(observation_counts.begin(),
                                      observation_counts.end());
  const auto run_count = static_cast<std::int64_t>(runs.size());
#pragma omp parallel for schedule(dynamic)
  for (std::int64_t run_idx = 0; run_idx < run_count; ++run_idx) {
    const auto [d, r] = runs[static_cast<std::size_t>(run_idx)];
    const auto& ds = datasets[d];
    Rng rng = Rng::stream(seed, d * static_cast<std::uint64_t>(repeats) +
                                    static_cast<std::uint64_t>(r));
    const std::vector<int> sample =
        rng.sample_without_replacement(ds.ensemble.n(), max_m);

    std::vector<double> external(static_cast<std::size_t>(ds.ensemble.size()));
    for (int t = 0; t < ds.ensemble.size(); ++t) {
      external[static_cast<std::size_t>(t)] = ari(ds.ensemble[t], ds.targets);
    }

    for (std::size_t mi = 0; mi < observation_counts.size(); ++mi) {
      const int m_obs = observation_counts[mi];
      const std::span<const int> obs(sample.data(),
                                     static_cast<std::size_t>(m_obs));
      std::optional<ConstraintSet> cs;
      if (m_obs >= 2) cs = constraints_from_sample(ds.targets, obs);
      for (std::size_t mm = 0; mm < methods.size(); ++mm) {
        try {
          const MethodScores ms = compute_method_scores(
              methods[mm], ds.ensemble, nullptr,
              cs && !cs->empty() ? &*cs : nullptr);
          const std::vector<double> oriented = oriented_for_correlation(ms);
          run_values[mm][mi][static_cast<std::size_t>(run_idx)] =
              kendall_tau_b(oriented, external);
        } catch (const std::exception&) {
          fails[mm][mi][static_cast<std::size_t>(run_idx)] = 1;
        }
      }
    }
  }

  for (std::size_t mm = 0; mm < methods.size(); ++mm) {
    for (std::size_t mi = 0; mi < observation_counts.size(); ++mi) {
      auto& cell = result.cells[mm][mi];
      cell.observations = observation_counts[mi];
      for (std::size_t run_idx = 0; run_idx < runs.size(); ++run_idx) {
        if (fails[mm][mi][run_idx] != 0) {
          ++cell.failed;
        } else {
          taus[mm][mi].push_back(run_values[mm][mi][run_idx]);
        }
      }
      cell.runs = static_cast<int>(runs.size());
      if (!taus[mm][mi].empty()) {
        cell.kendall_mean = mean_of(taus[mm][mi]);
        cell.kendall_std = std_of(taus[mm][mi], cell.kendall_mean);
      }
    }
  }
  return result;
}

}  // namespace discotec
