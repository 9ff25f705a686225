#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "ecmem/analysis.hpp"
#include "ecmem/rng.hpp"

using namespace ecmem;

TEST_CASE("batch k-means") {
  Rng rng(77);
  std::vector<std::array<double, 2>> pts;
  for (int i = 0; i < 60; ++i)
    pts.push_back({rng.uniform(0, 1), rng.uniform(0, 1)});

  SUBCASE("k equal to the point count is a perfect fit") {
    const auto result = batch_kmeans(pts, pts.size(), 50, 1);
    CHECK(result.inertia() == doctest::Approx(0.0));
    auto sorted_centroids = result.centroids;
    auto sorted_pts = pts;
    std::sort(sorted_centroids.begin(), sorted_centroids.end());
    std::sort(sorted_pts.begin(), sorted_pts.end());
    CHECK(sorted_centroids == sorted_pts);
  }

  SUBCASE("k = 1 recovers the arithmetic mean") {
    const auto result = batch_kmeans(pts, 1, 50, 1);
    double mx = 0, my = 0;
    for (const auto& p : pts) {
      mx += p[0];
      my += p[1];
    }
    CHECK(result.centroids[0][0] == doctest::Approx(mx / pts.size()));
    CHECK(result.centroids[0][1] == doctest::Approx(my / pts.size()));
  }

  SUBCASE("inertia never increases across iterations") {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      const auto result = batch_kmeans(pts, 8, 100, seed);
      for (std::size_t i = 1; i < result.inertia_history.size(); ++i)
        CHECK(result.inertia_history[i] <= result.inertia_history[i - 1] + 1e-12);
      CHECK(result.iterations <= 100);
    }
  }

  SUBCASE("k larger than the point count is rejected") {
    CHECK_THROWS_AS(batch_kmeans(pts, pts.size() + 1, 10, 1),
                    std::invalid_argument);
  }
}

TEST_CASE("stream study") {
  StreamSpec spec;
  spec.seed = 5;
  const std::size_t memory_size = 40;
  const auto snapshots = stream_study(spec, memory_size);

  SUBCASE("four methods at four fractions, capacity respected") {
    CHECK(snapshots.size() == 16);
    for (const auto& snap : snapshots) {
      CHECK(snap.centroids.size() <= memory_size);
      CHECK(snap.centroids.size() == snap.counts.size());
    }
  }

  SUBCASE("lru final snapshot is the stream tail in slot order") {
    const auto stream = synthetic_stream(spec);
    const CentroidSnapshot* lru = nullptr;
    for (const auto& snap : snapshots)
      if (snap.method == "lru" && snap.fraction == 1.0) lru = &snap;
    REQUIRE(lru != nullptr);
    REQUIRE(lru->centroids.size() == memory_size);
    // Every centroid must be one of the last `memory_size` stream points
    // (all stream points are distinct with probability one).
    std::vector<std::array<double, 2>> tail(stream.end() - memory_size,
                                            stream.end());
    std::sort(tail.begin(), tail.end());
    for (const auto& c : lru->centroids)
      CHECK(std::binary_search(tail.begin(), tail.end(), c));
  }

  SUBCASE("deterministic given the seed") {
    const auto again = stream_study(spec, memory_size);
    REQUIRE(again.size() == snapshots.size());
    for (std::size_t i = 0; i < again.size(); ++i) {
      CHECK(again[i].method == snapshots[i].method);
      CHECK(again[i].centroids == snapshots[i].centroids);
      CHECK(again[i].counts == snapshots[i].counts);
    }
  }
}

TEST_CASE("kernel density grid") {
  SUBCASE("single point peaks at its cell") {
    const std::vector<std::array<double, 2>> pts{{0.31, 0.72}};
    const auto grid = kde_grid(pts, {}, 32, {0.0, 0.0}, {1.0, 1.0}, 0.05);
    const auto it = std::max_element(grid.values.begin(), grid.values.end());
    const auto idx = std::distance(grid.values.begin(), it);
    const int yi = int(idx) / 32;
    const int xi = int(idx) % 32;
    CHECK(xi == int(0.31 * 32));
    CHECK(yi == int(0.72 * 32));
  }

  SUBCASE("grid mass is one by construction") {
    Rng rng(4);
    std::vector<std::array<double, 2>> pts;
    for (int i = 0; i < 50; ++i)
      pts.push_back({rng.uniform(0.3, 0.7), rng.uniform(0.3, 0.7)});
    const auto grid = kde_grid(pts, {}, 48, {0.0, 0.0}, {1.0, 1.0});
    CHECK(grid.total_mass() == doctest::Approx(1.0).epsilon(1e-9));
    for (double v : grid.values) CHECK(v >= 0.0);
  }

  SUBCASE("doubling the weights changes nothing") {
    Rng rng(6);
    std::vector<std::array<double, 2>> pts;
    std::vector<double> w, w2;
    for (int i = 0; i < 20; ++i) {
      pts.push_back({rng.uniform(0, 1), rng.uniform(0, 1)});
      w.push_back(1.0 + rng.uniform_int(5));
      w2.push_back(2.0 * w.back());
    }
    const auto a = kde_grid(pts, w, 24, {0, 0}, {1, 1}, 0.1);
    const auto b = kde_grid(pts, w2, 24, {0, 0}, {1, 1}, 0.1);
    for (std::size_t i = 0; i < a.values.size(); ++i)
      CHECK(a.values[i] == doctest::Approx(b.values[i]).epsilon(1e-12));
  }

  SUBCASE("permutation invariant") {
    Rng rng(8);
    std::vector<std::array<double, 2>> pts;
    for (int i = 0; i < 30; ++i)
      pts.push_back({rng.uniform(0, 1), rng.uniform(0, 1)});
    auto shuffled = pts;
    std::reverse(shuffled.begin(), shuffled.end());
    const auto a = kde_grid(pts, {}, 16, {0, 0}, {1, 1}, 0.08);
    const auto b = kde_grid(shuffled, {}, 16, {0, 0}, {1, 1}, 0.08);
    for (std::size_t i = 0; i < a.values.size(); ++i)
      CHECK(a.values[i] == doctest::Approx(b.values[i]).epsilon(1e-9));
  }

  SUBCASE("empty input rejected") {
    CHECK_THROWS_AS(kde_grid({}, {}, 16, {0, 0}, {1, 1}, 0.1),
                    std::invalid_argument);
  }
}

TEST_CASE("skew phase box sits inside the unit square's upper corner region") {
  StreamSpec spec;  // defaults: location .75, scale .12, shape 4
  const auto box = skew_phase_box(spec);
  for (int d = 0; d < 2; ++d) {
    CHECK(box[d][0] > spec.skew.location[d] - 0.2);
    CHECK(box[d][0] < box[d][1]);
    CHECK(box[d][1] < spec.skew.location[d] + 0.5);
  }

  CentroidSnapshot snap;
  snap.method = "test";
  snap.fraction = 1.0;
  snap.centroids = {{box[0][0] + 1e-3, box[1][0] + 1e-3}, {0.0, 0.0}};
  snap.counts = {1.0, 1.0};
  CHECK(fraction_in_box(snap, box) == doctest::Approx(0.5));
}
