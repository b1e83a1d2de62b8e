#include <doctest.h>

#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "discotec/agreement.hpp"
#include "discotec/kmeans.hpp"
#include "helpers.hpp"

using namespace discotec;
using testutil::Rng;

TEST_CASE("kmeans extremes") {
  Rng rng(601);
  const auto blobs = testutil::make_blobs(rng, {{0.0, 0.0}, {5.0, 5.0}}, 8, 1.0);

  KMeansConfig one;
  one.k = 1;
  CHECK(kmeans(blobs.data, one).k() == 1);

  KMeansConfig all;
  all.k = blobs.data.n();
  all.seed = 3;
  const Partition singletons = kmeans(blobs.data, all);
  CHECK(singletons.k() == blobs.data.n());
  CHECK(wgss(blobs.data, singletons) == 0.0);

  KMeansConfig bad;
  bad.k = blobs.data.n() + 1;
  CHECK_THROWS_AS(kmeans(blobs.data, bad), std::invalid_argument);
}

TEST_CASE("kmeans recovers two well-separated blobs") {
  Rng rng(631);
  const auto blobs =
      testutil::make_blobs(rng, {{0.0, 0.0}, {100.0, 0.0}}, 25, 0.5);
  KMeansConfig cfg;
  cfg.k = 2;
  cfg.seed = 17;
  const Partition p = kmeans(blobs.data, cfg);
  CHECK(ari(p, blobs.labels) == 1.0);

  cfg.init = KMeansInit::RandomPoints;
  CHECK(ari(kmeans(blobs.data, cfg), blobs.labels) == 1.0);
}

TEST_CASE("lloyd objective never increases") {
  Rng rng(641);
  const auto blobs = testutil::make_blobs(
      rng, {{0.0, 0.0}, {4.0, 0.0}, {0.0, 4.0}}, 20, 1.2);
  KMeansConfig cfg;
  cfg.k = 3;
  cfg.seed = 5;
  const auto result = kmeans_detailed(blobs.data, cfg);
  REQUIRE(result.iterations >= 1);
  for (std::size_t i = 1; i < result.objective_history.size(); ++i) {
    CHECK(result.objective_history[i] <= result.objective_history[i - 1] + 1e-9);
  }
}

TEST_CASE("kmeans is deterministic per seed across thread counts") {
  Rng rng(653);
  const auto blobs = testutil::make_blobs(
      rng, {{0.0, 0.0}, {3.0, 1.0}, {1.0, 4.0}}, 30, 1.0);
  KMeansConfig cfg;
  cfg.k = 4;
  cfg.seed = 11;

  const Partition base = kmeans(blobs.data, cfg);
#ifdef _OPENMP
  const int prev = omp_get_max_threads();
  omp_set_num_threads(3);
#endif
  const Partition threaded = kmeans(blobs.data, cfg);
#ifdef _OPENMP
  omp_set_num_threads(prev);
#endif
  CHECK(base == threaded);
}

TEST_CASE("generate_pool sizes, determinism and quality") {
  Rng rng(661);
  const auto blobs = testutil::make_blobs(
      rng, {{0.0, 0.0}, {12.0, 0.0}, {0.0, 12.0}}, 15, 0.8);

  const Ensemble pool = generate_pool(blobs.data, {2, 4}, 2, 29);
  CHECK(pool.size() <= 6);
  CHECK(pool.size() >= 1);

  const Ensemble again = generate_pool(blobs.data, {2, 4}, 2, 29);
  REQUIRE(again.size() == pool.size());
  for (int t = 0; t < pool.size(); ++t) CHECK(pool[t] == again[t]);

  bool found_good = false;
  const Ensemble wide = generate_pool(blobs.data, {2, 6}, 3, 31);
  for (int t = 0; t < wide.size(); ++t) {
    if (ari(wide[t], blobs.labels) >= 0.9) found_good = true;
  }
  CHECK(found_good);

  CHECK_THROWS_AS(generate_pool(blobs.data, {4, 2}, 2, 0), std::invalid_argument);
  CHECK_THROWS_AS(generate_pool(blobs.data, {2, 4}, 0, 0), std::invalid_argument);
}
