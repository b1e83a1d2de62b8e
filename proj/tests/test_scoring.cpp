#include <doctest.h>

#include <cmath>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "discotec/io.hpp"
#include "discotec/scoring.hpp"
#include "helpers.hpp"
#include "reference.hpp"

using namespace discotec;
using testutil::Rng;

TEST_CASE("pair distances match the closed forms") {
  CHECK(pair_distance(DistanceKind::KL, 1, 0.5) ==
        doctest::Approx(std::log(2.0)).epsilon(1e-15));
  CHECK(pair_distance(DistanceKind::TV, 0, 0.25) == 0.25);
  CHECK(pair_distance(DistanceKind::H2, 1, 0.81) ==
        doctest::Approx(0.1).epsilon(1e-12));
  CHECK(pair_distance(DistanceKind::TV, 1, 1.0) == 0.0);
  CHECK(pair_distance(DistanceKind::KL, 0, 0.0) == 0.0);
}

TEST_CASE("pair distance rejects impossible and invalid inputs") {
  CHECK_THROWS_AS(pair_distance(DistanceKind::KL, 0, 1.0), std::domain_error);
  CHECK_THROWS_AS(pair_distance(DistanceKind::TV, 1, 0.0), std::domain_error);
  CHECK_THROWS_AS(pair_distance(DistanceKind::KL, 2, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(pair_distance(DistanceKind::KL, 0, 1.5), std::invalid_argument);
  CHECK_THROWS_AS(pair_distance(DistanceKind::Binary, 0, 0.5),
                  std::invalid_argument);
}

TEST_CASE("worked 4-point KL scores") {
  const auto e = testutil::four_point_fixture();
  const auto c = build_consensus(e);
  const double s1 = discotec_score(connectivity(e[0]), c, DistanceKind::KL);
  const double s3 = discotec_score(connectivity(e[2]), c, DistanceKind::KL);
  CHECK(s1 == doctest::Approx(0.5 * std::log(1.5)).epsilon(1e-12));
  CHECK(s3 == doctest::Approx(0.5 * std::log(3.0)).epsilon(1e-12));
}

TEST_CASE("identical ensembles score zero for every member and variant") {
  const Partition p({0, 1, 1, 2, 0, 2});
  const Ensemble e({p, p, p, p});
  const auto c = build_consensus(e);
  const auto q = binarise(c);
  for (const auto kind : {DistanceKind::KL, DistanceKind::TV, DistanceKind::H2}) {
    CHECK(discotec_score(connectivity(p), c, kind) == 0.0);
  }
  CHECK(binary_discotec_score(connectivity(p), q) == 0.0);
}

TEST_CASE("worked 4-point binary scores") {
  const auto e = testutil::four_point_fixture();
  const auto q = binarise(build_consensus(e));
  CHECK(binary_discotec_score(connectivity(e[0]), q) == 0.0);
  CHECK(binary_discotec_score(connectivity(e[2]), q) == 0.5);
}

TEST_CASE("scores reject mismatched dimensions") {
  const auto e = testutil::four_point_fixture();
  const auto c = build_consensus(e);
  const auto a = connectivity(Partition({0, 0, 1}));
  CHECK_THROWS_AS(discotec_score(a, c, DistanceKind::TV), std::invalid_argument);
  CHECK_THROWS_AS(binary_discotec_score(a, binarise(c)), std::invalid_argument);
}

TEST_CASE("informativeness counts violated constraints") {
  const Partition p1({0, 0, 1, 1});
  const Partition p3({0, 1, 0, 1});
  const ConstraintSet both({{0, 1}}, {{0, 2}});
  CHECK(informativeness(p3, both) == 1.0);
  CHECK(informativeness(p1, both) == 0.0);
  const ConstraintSet half({{0, 1}, {0, 2}}, {});
  CHECK(informativeness(p1, half) == 0.5);
  CHECK_THROWS_AS(informativeness(p1, ConstraintSet()), std::invalid_argument);
}

TEST_CASE("constraint sets normalise, deduplicate and reject conflicts") {
  const ConstraintSet cs({{3, 1}, {1, 3}, {0, 2}}, {{4, 0}});
  CHECK(cs.must_link().size() == 2);
  CHECK(cs.must_link().front() == std::pair<int, int>{0, 2});
  CHECK_THROWS_AS(ConstraintSet({{0, 1}}, {{1, 0}}), std::invalid_argument);
  CHECK_THROWS_AS(ConstraintSet({{2, 2}}, {}), std::invalid_argument);
  CHECK_THROWS_AS(ConstraintSet({{-1, 2}}, {}), std::invalid_argument);
  CHECK_THROWS_AS(cs.validate_for(4), std::invalid_argument);
  CHECK_NOTHROW(cs.validate_for(5));
}

TEST_CASE("rank_ensemble reproduces the worked fixture") {
  const auto e = testutil::four_point_fixture();

  SUBCASE("binary without constraints") {
    const auto report = rank_ensemble(e, DistanceKind::Binary);
    CHECK(report.raw == std::vector<double>{0.0, 0.0, 0.5});
    CHECK(report.ranking == std::vector<int>{0, 1, 2});
    CHECK(report.warnings.empty());
  }
  SUBCASE("KL keeps the same order") {
    const auto report = rank_ensemble(e, DistanceKind::KL);
    CHECK(report.ranking == std::vector<int>{0, 1, 2});
    CHECK(report.raw[0] == doctest::Approx(0.5 * std::log(1.5)).epsilon(1e-12));
    CHECK(report.raw[2] == doctest::Approx(0.5 * std::log(3.0)).epsilon(1e-12));
  }
  SUBCASE("constraints can invert the order") {
    const ConstraintSet cs({{0, 2}}, {{0, 1}});
    const auto report = rank_ensemble(e, DistanceKind::Binary, &cs);
    CHECK(report.total == std::vector<double>{1.0, 1.0, 0.5});
    CHECK(report.ranking == std::vector<int>{2, 0, 1});
  }
  SUBCASE("small ensembles only warn") {
    const auto report =
        rank_ensemble(Ensemble({e[0], e[2]}), DistanceKind::Binary);
    CHECK(report.raw.size() == 2);
    CHECK_FALSE(report.warnings.empty());
  }
}

TEST_CASE("every variant matches the naive reference on random ensembles") {
  Rng rng(313);
  for (int round = 0; round < 60; ++round) {
    const int n = 4 + static_cast<int>(rng.uniform_below(37));
    const int t = 3 + static_cast<int>(rng.uniform_below(10));
    const auto e = testutil::random_ensemble(rng, n, t, 5);
    const auto c = build_consensus(e);
    const auto q = binarise(c);
    for (int m = 0; m < t; ++m) {
      const auto a = connectivity(e[m]);
      for (const auto kind :
           {DistanceKind::KL, DistanceKind::TV, DistanceKind::H2}) {
        const double got = discotec_score(a, c, kind);
        const double want = ref::discotec_score(e[m], e, kind);
        CHECK(testutil::rel_err(got, want) < 1e-12);
      }
      CHECK(binary_discotec_score(a, q) == ref::binary_discotec_score(e[m], e));
    }
  }
}

TEST_CASE("score ranges hold on random ensembles") {
  Rng rng(331);
  for (int round = 0; round < 20; ++round) {
    const auto e = testutil::random_ensemble(rng, 20, 6, 4);
    const auto c = build_consensus(e);
    const auto q = binarise(c);
    for (int m = 0; m < e.size(); ++m) {
      const auto a = connectivity(e[m]);
      const double tv = discotec_score(a, c, DistanceKind::TV);
      const double h2 = discotec_score(a, c, DistanceKind::H2);
      const double kl = discotec_score(a, c, DistanceKind::KL);
      const double bin = binary_discotec_score(a, q);
      CHECK(tv >= 0.0);
      CHECK(tv <= 1.0);
      CHECK(h2 >= 0.0);
      CHECK(h2 <= 1.0);
      CHECK(bin >= 0.0);
      CHECK(bin <= 1.0);
      CHECK(kl >= 0.0);
    }
  }
}

TEST_CASE("scores are label-invariant and permutation-equivariant") {
  Rng rng(347);
  const int n = 18;
  const auto e = testutil::random_ensemble(rng, n, 5, 4);
  const auto base = rank_ensemble(e, DistanceKind::Binary);
  const auto base_kl = rank_ensemble(e, DistanceKind::KL);

  SUBCASE("relabeling any member changes nothing") {
    std::vector<Partition> parts;
    for (int t = 0; t < e.size(); ++t) {
      parts.push_back(testutil::relabel_randomly(e[t], rng));
    }
    const Ensemble relabeled(std::move(parts));
    CHECK(rank_ensemble(relabeled, DistanceKind::Binary).raw == base.raw);
    CHECK(rank_ensemble(relabeled, DistanceKind::KL).raw == base_kl.raw);
  }

  SUBCASE("permuting observations uniformly changes nothing") {
    std::vector<int> perm(n);
    for (int i = 0; i < n; ++i) perm[static_cast<std::size_t>(i)] = i;
    for (std::size_t i = perm.size(); i > 1; --i) {
      std::swap(perm[i - 1], perm[rng.uniform_below(i)]);
    }
    std::vector<Partition> parts;
    for (int t = 0; t < e.size(); ++t) {
      std::vector<Label> labels(static_cast<std::size_t>(n));
      for (int i = 0; i < n; ++i) {
        labels[static_cast<std::size_t>(perm[static_cast<std::size_t>(i)])] =
            e[t].label(i);
      }
      parts.emplace_back(std::move(labels));
    }
    const Ensemble permuted(std::move(parts));
    const auto permuted_report = rank_ensemble(permuted, DistanceKind::Binary);
    for (int t = 0; t < e.size(); ++t) {
      CHECK(permuted_report.raw[static_cast<std::size_t>(t)] ==
            base.raw[static_cast<std::size_t>(t)]);
    }
  }
}

TEST_CASE("adding a violated constraint never lowers a total") {
  Rng rng(401);
  for (int round = 0; round < 40; ++round) {
    const int n = 6 + static_cast<int>(rng.uniform_below(10));
    const auto e = testutil::random_ensemble(rng, n, 4, 3);
    const int i = static_cast<int>(rng.uniform_below(static_cast<std::uint64_t>(n)));
    int j = static_cast<int>(rng.uniform_below(static_cast<std::uint64_t>(n)));
    if (j == i) j = (j + 1) % n;

    const ConstraintSet base({{0, 1}}, {});
    const auto before = rank_ensemble(e, DistanceKind::Binary, &base);
    for (int t = 0; t < e.size(); ++t) {
      const bool linked = e[t].label(i) == e[t].label(j);
      // Add (i,j) as ML: violated iff not linked.
      if (std::pair<int, int>(std::min(i, j), std::max(i, j)) ==
          std::pair<int, int>(0, 1)) {
        continue;
      }
      const ConstraintSet extended({{0, 1}, {i, j}}, {});
      const auto after = rank_ensemble(e, DistanceKind::Binary, &extended);
      const double delta = after.total[static_cast<std::size_t>(t)] -
                           before.total[static_cast<std::size_t>(t)];
      if (linked) {
        CHECK(delta <= 1e-15);  // satisfied constraint never increases
      } else {
        CHECK(delta >= -1e-15);  // violated constraint never decreases
      }
    }
  }
}

TEST_CASE("reports are byte-identical across runs and thread counts") {
  Rng rng(433);
  const auto e = testutil::random_ensemble(rng, 25, 8, 4);
  const ConstraintSet cs({{0, 1}, {2, 3}}, {{0, 5}});

  const auto dump = [&](int threads) {
#ifdef _OPENMP
    const int prev = omp_get_max_threads();
    omp_set_num_threads(threads);
#else
    (void)threads;
#endif
    const auto report = rank_ensemble(e, DistanceKind::Binary, &cs);
    const auto kl = rank_ensemble(e, DistanceKind::KL, &cs);
#ifdef _OPENMP
    omp_set_num_threads(prev);
#endif
    return to_json(report).dump() + to_json(kl).dump();
  };

  const std::string once = dump(1);
  CHECK(dump(1) == once);
  CHECK(dump(4) == once);
}
