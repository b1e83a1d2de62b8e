// Kernel benchmark: serial reference implementations vs the OpenMP-parallel
// library paths. Prints a table of median wall times and the agreement of
// the two routes on each kernel.
//
//   ./discotec_bench [n] [t] [reps]

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "discotec/agreement.hpp"
#include "discotec/consensus.hpp"
#include "discotec/indices.hpp"
#include "discotec/rng.hpp"
#include "discotec/scenarios.hpp"
#include "discotec/scoring.hpp"
#include "reference.hpp"

using namespace discotec;

namespace {

template <typename F>
double median_ms(int reps, F&& body) {
  std::vector<double> times;
  for (int rep = 0; rep < reps; ++rep) {
    const auto start = std::chrono::steady_clock::now();
    body();
    const auto stop = std::chrono::steady_clock::now();
    times.push_back(std::chrono::duration<double, std::milli>(stop - start).count());
  }
  std::sort(times.begin(), times.end());
  return times[times.size() / 2];
}

void print_row(const char* kernel, double serial, double parallel, double gap) {
  std::printf("%-22s %12.3f %12.3f %10.2fx %12.3g\n", kernel, serial, parallel,
              serial / parallel, gap);
}

}  // namespace

int main(int argc, char** argv) {
  const int n = argc > 1 ? std::atoi(argv[1]) : 600;
  const int t = argc > 2 ? std::atoi(argv[2]) : 40;
  const int reps = argc > 3 ? std::atoi(argv[3]) : 5;

#ifdef _OPENMP
  std::printf("n=%d t=%d reps=%d threads=%d\n", n, t, reps, omp_get_max_threads());
#else
  std::printf("n=%d t=%d reps=%d (no OpenMP)\n", n, t, reps);
#endif
  std::printf("%-22s %12s %12s %10s %12s\n", "kernel", "serial ms", "parallel ms",
              "speedup", "max |diff|");

  const auto scenario = scenario_uniform({n, 10, t, 0.8, 42});
  const Ensemble& e = scenario.ensemble;

  // consensus build
  std::vector<std::vector<double>> dense;
  ConsensusMatrix consensus = build_consensus(e);
  {
    const double serial = median_ms(reps, [&] { dense = ref::consensus_dense(e); });
    const double parallel = median_ms(reps, [&] { consensus = build_consensus(e); });
    double gap = 0.0;
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        gap = std::max(gap, std::abs(dense[static_cast<std::size_t>(i)]
                                          [static_cast<std::size_t>(j)] -
                                     consensus.value(i, j)));
      }
    }
    print_row("consensus", serial, parallel, gap);
  }

  // binarised scoring (full rank pass over all models)
  {
    std::vector<double> serial_scores(static_cast<std::size_t>(t));
    const double serial = median_ms(reps, [&] {
      for (int m = 0; m < t; ++m) {
        serial_scores[static_cast<std::size_t>(m)] = ref::binary_discotec_score(e[m], e);
      }
    });
    ScoreReport report;
    const double parallel =
        median_ms(reps, [&] { report = rank_ensemble(e, DistanceKind::Binary); });
    double gap = 0.0;
    for (int m = 0; m < t; ++m) {
      gap = std::max(gap, std::abs(serial_scores[static_cast<std::size_t>(m)] -
                                   report.raw[static_cast<std::size_t>(m)]));
    }
    print_row("binary rank", serial, parallel, gap);
  }

  // KL scoring
  {
    std::vector<double> serial_scores(static_cast<std::size_t>(t));
    const double serial = median_ms(reps, [&] {
      for (int m = 0; m < t; ++m) {
        serial_scores[static_cast<std::size_t>(m)] =
            ref::discotec_score(e[m], e, DistanceKind::KL);
      }
    });
    ScoreReport report;
    const double parallel =
        median_ms(reps, [&] { report = rank_ensemble(e, DistanceKind::KL); });
    double gap = 0.0;
    for (int m = 0; m < t; ++m) {
      gap = std::max(gap, std::abs(serial_scores[static_cast<std::size_t>(m)] -
                                   report.raw[static_cast<std::size_t>(m)]));
    }
    print_row("kl rank", serial, parallel, gap);
  }

  // pairwise agreement matrix (AARI)
  {
    std::vector<double> serial_avg(static_cast<std::size_t>(t));
    const double serial = median_ms(reps, [&] {
      for (int m = 0; m < t; ++m) {
        serial_avg[static_cast<std::size_t>(m)] = ref::aari(e, m);
      }
    });
    EnsembleAgreement batch;
    const double parallel =
        median_ms(reps, [&] { batch = average_agreement(e, AgreementMetric::Ari); });
    double gap = 0.0;
    for (int m = 0; m < t; ++m) {
      gap = std::max(gap, std::abs(serial_avg[static_cast<std::size_t>(m)] -
                                   batch.average[static_cast<std::size_t>(m)]));
    }
    print_row("aari matrix", serial, parallel, gap);
  }

  // silhouette on gaussian data
  {
    Rng rng(7);
    const int sn = std::min(n, 800);
    std::vector<double> values;
    for (int i = 0; i < sn * 3; ++i) values.push_back(rng.gaussian());
    const DataMatrix data(sn, 3, std::move(values));
    std::vector<Label> labels(static_cast<std::size_t>(sn));
    for (int i = 0; i < sn; ++i) {
      labels[static_cast<std::size_t>(i)] = static_cast<Label>(i % 6);
    }
    const Partition p(std::move(labels));

    double serial_value = 0.0;
    double parallel_value = 0.0;
    const double serial = median_ms(reps, [&] { serial_value = ref::silhouette(data, p); });
    const double parallel = median_ms(reps, [&] { parallel_value = silhouette(data, p); });
    print_row("silhouette", serial, parallel, std::abs(serial_value - parallel_value));
  }

  return 0;
}
