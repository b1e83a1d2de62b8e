#include <doctest.h>

#include <cmath>
#include <limits>
#include <stdexcept>

#include "discotec/indices.hpp"
#include "helpers.hpp"
#include "reference.hpp"

using namespace discotec;
using testutil::Rng;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

DataMatrix one_d(std::vector<double> values) {
  const int n = static_cast<int>(values.size());
  return DataMatrix(n, 1, std::move(values));
}

// 2-D rotation + translation.
DataMatrix rigid_motion(const DataMatrix& x, double angle, double dx, double dy) {
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(x.n()) * 2);
  for (int i = 0; i < x.n(); ++i) {
    const auto row = x.row(i);
    out.push_back(std::cos(angle) * row[0] - std::sin(angle) * row[1] + dx);
    out.push_back(std::sin(angle) * row[0] + std::cos(angle) * row[1] + dy);
  }
  return DataMatrix(x.n(), 2, std::move(out));
}

}  // namespace

TEST_CASE("wgss on the worked 1-D cases") {
  CHECK(wgss(one_d({0.0, 2.0}), Partition({0, 0})) == 2.0);
  CHECK(wgss(one_d({0.0, 2.0}), Partition({0, 1})) == 0.0);
  CHECK(wgss(one_d({1.0, 5.0, 9.0}), Partition({0, 1, 2})) == 0.0);
  CHECK_THROWS_AS(wgss(one_d({0.0, 2.0}), Partition({0, 0, 1})),
                  std::invalid_argument);
}

TEST_CASE("wgss decreases under a brute-force optimal split") {
  Rng rng(119);
  std::vector<double> values;
  for (int i = 0; i < 8; ++i) values.push_back(rng.uniform() * 10.0);
  const auto x = one_d(std::move(values));
  const int n = x.n();

  // Best wgss over all assignments with exactly k clusters.
  const auto best_with_k = [&](int k) {
    double best = kInf;
    std::vector<Label> labels(static_cast<std::size_t>(n), 0);
    const auto total = static_cast<std::uint64_t>(std::pow(k, n));
    for (std::uint64_t code = 0; code < total; ++code) {
      std::uint64_t c = code;
      for (int i = 0; i < n; ++i) {
        labels[static_cast<std::size_t>(i)] = static_cast<Label>(c % k);
        c /= k;
      }
      const Partition p{labels};
      if (p.k() != k) continue;
      best = std::min(best, wgss(x, p));
    }
    return best;
  };

  const double k1 = wgss(x, Partition(std::vector<Label>(static_cast<std::size_t>(n), 0)));
  const double k2 = best_with_k(2);
  const double k3 = best_with_k(3);
  CHECK(k2 < k1);
  CHECK(k3 < k2);
}

TEST_CASE("chi separates a good clustering from a shuffled one") {
  Rng rng(127);
  auto blobs = testutil::make_blobs(rng, {{0.0, 0.0}, {20.0, 0.0}}, 15, 0.5);

  const double good = chi(blobs.data, blobs.labels);
  CHECK(good > 100.0);

  Partition shuffled = testutil::relabel_randomly(blobs.labels, rng);
  std::vector<Label> mixed(shuffled.labels().begin(), shuffled.labels().end());
  for (std::size_t i = mixed.size(); i > 1; --i) {
    std::swap(mixed[i - 1], mixed[rng.uniform_below(i)]);
  }
  const double bad = chi(blobs.data, Partition(std::move(mixed)));
  CHECK(good > bad);
}

TEST_CASE("chi handles zero dispersion and the k bounds") {
  const auto x = one_d({1.0, 1.0, 4.0, 4.0, 9.0});
  CHECK(chi(x, Partition({0, 0, 1, 1, 2})) == kInf);
  CHECK_THROWS_AS(chi(x, Partition({0, 0, 0, 0, 0})), std::domain_error);
  CHECK_THROWS_AS(chi(x, Partition({0, 1, 2, 3, 4})), std::domain_error);

  // k = n-1 stays finite on generic data and matches the naive formula.
  const auto y = one_d({0.0, 1.0, 5.0, 9.0});
  const Partition p({0, 0, 1, 2});
  CHECK(chi(y, p) == doctest::Approx(ref::chi(y, p)).epsilon(1e-12));
}

TEST_CASE("silhouette on separated blobs and its conventions") {
  Rng rng(131);
  const auto blobs = testutil::make_blobs(rng, {{0.0, 0.0}, {30.0, 0.0}}, 12, 0.4);
  CHECK(silhouette(blobs.data, blobs.labels) > 0.9);

  // All points identical: a = b = 0 contributes 0 by convention.
  CHECK(silhouette(one_d({3.0, 3.0, 3.0, 3.0}), Partition({0, 0, 1, 1})) == 0.0);

  // A singleton cluster sample contributes 0.
  const auto x = one_d({0.0, 0.1, 10.0});
  const double s = silhouette(x, Partition({0, 0, 1}));
  const double expected_two = ref::silhouette(x, Partition({0, 0, 1}));
  CHECK(s == doctest::Approx(expected_two).epsilon(1e-12));

  CHECK_THROWS_AS(silhouette(x, Partition({0, 0, 0})), std::domain_error);
  CHECK_THROWS_AS(silhouette(x, Partition({0, 1, 2})), std::domain_error);
}

TEST_CASE("dbi worked cases and sentinels") {
  CHECK(dbi(one_d({0.0, 5.0}), Partition({0, 1})) == 0.0);

  Rng rng(137);
  const auto blobs = testutil::make_blobs(rng, {{0.0, 0.0}, {15.0, 0.0}}, 10, 0.5);
  const double good = dbi(blobs.data, blobs.labels);
  std::vector<Label> mixed(blobs.labels.labels().begin(),
                           blobs.labels.labels().end());
  for (std::size_t i = mixed.size(); i > 1; --i) {
    std::swap(mixed[i - 1], mixed[rng.uniform_below(i)]);
  }
  const double bad = dbi(blobs.data, Partition(std::move(mixed)));
  CHECK(good < bad);

  // Coincident centroids: clusters {0,3} and {1,2} share centre 1.5.
  const auto x = one_d({0.0, 1.0, 2.0, 3.0});
  CHECK(dbi(x, Partition({0, 1, 1, 0})) == kInf);

  CHECK_THROWS_AS(dbi(x, Partition({0, 0, 0, 0})), std::domain_error);
}

TEST_CASE("indices are invariant under rigid motions") {
  Rng rng(139);
  for (int round = 0; round < 10; ++round) {
    const auto blobs = testutil::make_blobs(
        rng, {{0.0, 0.0}, {4.0, 1.0}, {-2.0, 5.0}}, 8, 1.0);
    const auto moved = rigid_motion(blobs.data, 0.7 + rng.uniform(), 3.5, -1.25);
    const auto& p = blobs.labels;
    CHECK(testutil::rel_err(wgss(blobs.data, p), wgss(moved, p)) < 1e-9);
    CHECK(testutil::rel_err(chi(blobs.data, p), chi(moved, p)) < 1e-9);
    CHECK(testutil::rel_err(silhouette(blobs.data, p), silhouette(moved, p)) < 1e-9);
    CHECK(testutil::rel_err(dbi(blobs.data, p), dbi(moved, p)) < 1e-9);
  }
}

TEST_CASE("indices match the naive references on random instances") {
  Rng rng(149);
  for (int round = 0; round < 25; ++round) {
    const int n = 6 + static_cast<int>(rng.uniform_below(55));
    const int d = 1 + static_cast<int>(rng.uniform_below(5));
    std::vector<double> values;
    for (int i = 0; i < n * d; ++i) values.push_back(rng.gaussian());
    const DataMatrix x(n, d, std::move(values));

    Partition p = testutil::random_nondegenerate_partition(rng, n, 5);
    if (p.k() > n - 1) continue;
    CHECK(testutil::rel_err(wgss(x, p), ref::wgss(x, p)) < 1e-9);
    CHECK(testutil::rel_err(chi(x, p), ref::chi(x, p)) < 1e-9);
    CHECK(testutil::rel_err(silhouette(x, p), ref::silhouette(x, p)) < 1e-9);
    CHECK(testutil::rel_err(dbi(x, p), ref::dbi(x, p)) < 1e-9);
  }
}
