#include <doctest.h>

#include <algorithm>
#include <vector>

#include "ecmem/kdtree.hpp"
#include "ecmem/rng.hpp"

using namespace ecmem;

namespace {

// Reference: full scan with the same (d2, index) ordering.
std::vector<Neighbor> brute_knn(const std::vector<double>& pts, std::size_t dim,
                                std::span<const double> query, std::size_t k,
                                const std::vector<char>& skip) {
  std::vector<Neighbor> all;
  const std::size_t n = pts.size() / dim;
  for (std::uint32_t i = 0; i < n; ++i) {
    if (!skip.empty() && skip[i]) continue;
    all.push_back({i, squared_distance(query, {pts.data() + i * dim, dim})});
  }
  std::sort(all.begin(), all.end(), [](const Neighbor& a, const Neighbor& b) {
    return a.d2 < b.d2 || (a.d2 == b.d2 && a.index < b.index);
  });
  if (all.size() > k) all.resize(k);
  return all;
}

}  // namespace

TEST_CASE("kd-tree matches brute force on random point sets") {
  Rng rng(42);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t dim = 1 + rng.uniform_int(5);
    const std::size_t n = 1 + rng.uniform_int(300);
    std::vector<double> pts(n * dim);
    // Quantized coordinates force plenty of distance ties.
    for (double& v : pts) v = std::floor(rng.uniform(-3.0, 3.0) * 4.0) / 4.0;

    KdTree tree;
    tree.build(pts.data(), n, dim);

    for (int q = 0; q < 20; ++q) {
      std::vector<double> query(dim);
      for (double& v : query) v = std::floor(rng.uniform(-3.0, 3.0) * 4.0) / 4.0;
      const std::size_t k = 1 + rng.uniform_int(n + 2);

      KnnCollector collector(std::min(k, n));
      tree.knn(query, collector, {});
      const auto got = collector.take_sorted();
      const auto want = brute_knn(pts, dim, query, k, {});

      REQUIRE(got.size() == want.size());
      for (std::size_t i = 0; i < got.size(); ++i) {
        CHECK(got[i].index == want[i].index);
        CHECK(got[i].d2 == want[i].d2);
      }
    }
  }
}

TEST_CASE("kd-tree honors the skip mask") {
  Rng rng(7);
  const std::size_t dim = 3, n = 200;
  std::vector<double> pts(n * dim);
  for (double& v : pts) v = rng.uniform(-1.0, 1.0);
  KdTree tree;
  tree.build(pts.data(), n, dim);

  std::vector<char> skip(n, 0);
  for (std::size_t i = 0; i < n; i += 3) skip[i] = 1;

  std::vector<double> query{0.1, -0.2, 0.3};
  KnnCollector collector(10);
  tree.knn(query, collector, skip);
  const auto got = collector.take_sorted();
  const auto want = brute_knn(pts, dim, query, 10, skip);
  REQUIRE(got.size() == want.size());
  for (std::size_t i = 0; i < got.size(); ++i)
    CHECK(got[i].index == want[i].index);
}

TEST_CASE("collect_equal finds exactly the zero-distance points") {
  std::vector<double> pts = {
      0.0, 0.0,  //
      1.0, 2.0,  //
      1.0, 2.0,  // duplicate
      -1.0, 2.0,
  };
  KdTree tree;
  tree.build(pts.data(), 4, 2);

  std::vector<std::uint32_t> hits;
  std::vector<double> query{1.0, 2.0};
  tree.collect_equal(query, hits, {});
  std::sort(hits.begin(), hits.end());
  REQUIRE(hits.size() == 2);
  CHECK(hits[0] == 1);
  CHECK(hits[1] == 2);

  hits.clear();
  std::vector<double> miss{0.5, 0.5};
  tree.collect_equal(miss, hits, {});
  CHECK(hits.empty());
}

TEST_CASE("collector keeps the lowest indices among ties") {
  KnnCollector collector(2);
  collector.offer(5, 1.0);
  collector.offer(3, 1.0);
  collector.offer(9, 1.0);
  collector.offer(1, 2.0);
  const auto got = collector.take_sorted();
  REQUIRE(got.size() == 2);
  CHECK(got[0].index == 3);
  CHECK(got[1].index == 5);
}
