#include "ecmem/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "ecmem/memory.hpp"
#include "ecmem/rng.hpp"

namespace ecmem {

namespace {

double d2(const std::array<double, 2>& a, const std::array<double, 2>& b) {
  const double dx = a[0] - b[0];
  const double dy = a[1] - b[1];
  return dx * dx + dy * dy;
}

}  // namespace

KMeansResult batch_kmeans(std::span<const std::array<double, 2>> points,
                          std::size_t k, int max_iters, std::uint64_t seed) {
  if (k < 1) throw std::invalid_argument("batch_kmeans: k must be >= 1");
  if (k > points.size())
    throw std::invalid_argument("batch_kmeans: k exceeds point count");
  if (max_iters < 1)
    throw std::invalid_argument("batch_kmeans: max_iters must be >= 1");

  // Seeded init: sample k distinct point indices.
  Rng rng(seed);
  std::vector<std::size_t> pool(points.size());
  for (std::size_t i = 0; i < pool.size(); ++i) pool[i] = i;
  KMeansResult result;
  result.centroids.reserve(k);
  for (std::size_t c = 0; c < k; ++c) {
    const std::size_t pick = c + rng.uniform_int(pool.size() - c);
    std::swap(pool[c], pool[pick]);
    result.centroids.push_back(points[pool[c]]);
  }

  std::vector<int> assignment(points.size(), -1);
  for (int iter = 0; iter < max_iters; ++iter) {
    // Assignment sweep (ties to the lower centroid index).
    bool changed = false;
    double inertia = 0.0;
    for (std::size_t i = 0; i < points.size(); ++i) {
      int best = 0;
      double best_d2 = d2(points[i], result.centroids[0]);
      for (std::size_t c = 1; c < k; ++c) {
        const double dist = d2(points[i], result.centroids[c]);
        if (dist < best_d2) {
          best_d2 = dist;
          best = static_cast<int>(c);
        }
      }
      inertia += best_d2;
      if (assignment[i] != best) {
        assignment[i] = best;
        changed = true;
      }
    }
    result.inertia_history.push_back(inertia);
    result.iterations = iter + 1;
    if (!changed) break;

    // Update sweep; empty clusters keep their centroid.
    std::vector<std::array<double, 2>> sums(k, {0.0, 0.0});
    std::vector<int> counts(k, 0);
    for (std::size_t i = 0; i < points.size(); ++i) {
      sums[assignment[i]][0] += points[i][0];
      sums[assignment[i]][1] += points[i][1];
      ++counts[assignment[i]];
    }
    for (std::size_t c = 0; c < k; ++c) {
      if (counts[c] > 0) {
        result.centroids[c] = {sums[c][0] / counts[c], sums[c][1] / counts[c]};
      }
    }
  }

  result.assignment_counts.assign(k, 0);
  for (int a : assignment) ++result.assignment_counts[a];
  return result;
}

namespace {

ActionMemory make_point_store(Strategy strategy, std::size_t memory_size) {
  ActionMemory::Options opts;
  opts.capacity = memory_size;
  opts.key_dim = 2;
  opts.strategy = strategy;
  opts.backend = Backend::NaiveScan;
  return ActionMemory(opts);
}

CentroidSnapshot snapshot_store(const ActionMemory& store,
                                const std::string& method, double fraction,
                                bool with_counts) {
  CentroidSnapshot snap;
  snap.method = method;
  snap.fraction = fraction;
  for (std::size_t i = 0; i < store.size(); ++i) {
    const auto key = store.key(i);
    snap.centroids.push_back({key[0], key[1]});
    snap.counts.push_back(with_counts ? store.count(i) : 1.0);
  }
  return snap;
}

}  // namespace

std::vector<CentroidSnapshot> stream_study(const StreamSpec& spec,
                                           std::size_t memory_size) {
  if (memory_size < 2)
    throw std::invalid_argument("stream_study: memory_size must be >= 2");

  const auto stream = synthetic_stream(spec);
  ActionMemory km = make_point_store(Strategy::Km, memory_size);
  ActionMemory dkm = make_point_store(Strategy::Dkm, memory_size);
  ActionMemory lru = make_point_store(Strategy::Lru, memory_size);

  const std::array<double, 4> fractions{0.25, 0.5, 0.75, 1.0};
  std::vector<CentroidSnapshot> snapshots;
  std::size_t consumed = 0;
  for (double fraction : fractions) {
    const auto target = static_cast<std::size_t>(
        std::llround(fraction * static_cast<double>(stream.size())));
    for (; consumed < target; ++consumed) {
      const std::span<const double> key(stream[consumed].data(), 2);
      const auto now = static_cast<std::uint64_t>(consumed);
      km.insert(key, 0.0, now);
      dkm.insert(key, 0.0, now);
      lru.insert(key, 0.0, now);
    }

    KMeansResult batch =
        batch_kmeans(std::span(stream.data(), target),
                     std::min(memory_size, target), 100, spec.seed);
    CentroidSnapshot batch_snap;
    batch_snap.method = "kmeans";
    batch_snap.fraction = fraction;
    batch_snap.centroids = std::move(batch.centroids);
    for (int c : batch.assignment_counts)
      batch_snap.counts.push_back(static_cast<double>(c));
    snapshots.push_back(std::move(batch_snap));

    snapshots.push_back(snapshot_store(km, "km", fraction, true));
    snapshots.push_back(snapshot_store(dkm, "dkm", fraction, true));
    snapshots.push_back(snapshot_store(lru, "lru", fraction, false));
  }
  return snapshots;
}

double DensityGrid::cell_area() const {
  const double dx = (hi[0] - lo[0]) / resolution;
  const double dy = (hi[1] - lo[1]) / resolution;
  return dx * dy;
}

double DensityGrid::total_mass() const {
  double sum = 0.0;
  for (double v : values) sum += v;
  return sum * cell_area();
}

DensityGrid kde_grid(std::span<const std::array<double, 2>> points,
                     std::span<const double> weights, int resolution,
                     std::array<double, 2> lo, std::array<double, 2> hi,
                     double bandwidth) {
  if (points.empty()) throw std::invalid_argument("kde_grid: no points");
  if (!weights.empty() && weights.size() != points.size())
    throw std::invalid_argument("kde_grid: weights/points size mismatch");
  if (resolution < 2)
    throw std::invalid_argument("kde_grid: resolution must be >= 2");
  if (!(hi[0] > lo[0] && hi[1] > lo[1]))
    throw std::invalid_argument("kde_grid: empty bounds");

  const double uniform_weight = 1.0;
  auto weight_of = [&](std::size_t i) {
    return weights.empty() ? uniform_weight : weights[i];
  };

  double weight_sum = 0.0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (weight_of(i) < 0.0)
      throw std::invalid_argument("kde_grid: negative weight");
    weight_sum += weight_of(i);
  }
  if (!(weight_sum > 0.0))
    throw std::invalid_argument("kde_grid: weights sum to zero");

  if (bandwidth <= 0.0) {
    // Scott's rule with a weighted variance and Kish effective sample size.
    double sq = 0.0;
    std::array<double, 2> mean{0.0, 0.0};
    for (std::size_t i = 0; i < points.size(); ++i) {
      mean[0] += weight_of(i) * points[i][0];
      mean[1] += weight_of(i) * points[i][1];
      sq += weight_of(i) * weight_of(i);
    }
    mean[0] /= weight_sum;
    mean[1] /= weight_sum;
    double var = 0.0;
    for (std::size_t i = 0; i < points.size(); ++i)
      var += weight_of(i) * (d2(points[i], mean));
    var /= 2.0 * weight_sum;  // mean per-axis variance
    const double n_eff = weight_sum * weight_sum / sq;
    bandwidth = std::sqrt(std::max(var, 1e-12)) *
                std::pow(n_eff, -1.0 / 6.0);  // d = 2: n^(-1/(d+4))
  }

  DensityGrid grid;
  grid.resolution = resolution;
  grid.lo = lo;
  grid.hi = hi;
  grid.bandwidth = bandwidth;
  grid.values.assign(static_cast<std::size_t>(resolution) * resolution, 0.0);

  const double dx = (hi[0] - lo[0]) / resolution;
  const double dy = (hi[1] - lo[1]) / resolution;
  const double inv_two_h2 = 1.0 / (2.0 * bandwidth * bandwidth);
  for (int yi = 0; yi < resolution; ++yi) {
    const double cy = lo[1] + (yi + 0.5) * dy;
    for (int xi = 0; xi < resolution; ++xi) {
      const double cx = lo[0] + (xi + 0.5) * dx;
      double acc = 0.0;
      for (std::size_t i = 0; i < points.size(); ++i) {
        acc += weight_of(i) *
               std::exp(-d2(points[i], {cx, cy}) * inv_two_h2);
      }
      grid.values[static_cast<std::size_t>(yi) * resolution + xi] = acc;
    }
  }

  // Normalize so the grid carries unit mass.
  double sum = 0.0;
  for (double v : grid.values) sum += v;
  const double scale = 1.0 / (sum * grid.cell_area());
  for (double& v : grid.values) v *= scale;
  return grid;
}

std::array<std::array<double, 2>, 2> skew_phase_box(const StreamSpec& spec) {
  std::array<std::array<double, 2>, 2> box;
  for (int dim = 0; dim < 2; ++dim) {
    box[dim][0] = skew_normal_quantile(spec.skew.location[dim],
                                       spec.skew.scale[dim],
                                       spec.skew.shape[dim], 0.05);
    box[dim][1] = skew_normal_quantile(spec.skew.location[dim],
                                       spec.skew.scale[dim],
                                       spec.skew.shape[dim], 0.95);
  }
  return box;
}

double fraction_in_box(const CentroidSnapshot& snapshot,
                       const std::array<std::array<double, 2>, 2>& box) {
  if (snapshot.centroids.empty()) return 0.0;
  std::size_t inside = 0;
  for (const auto& c : snapshot.centroids) {
    if (c[0] >= box[0][0] && c[0] <= box[0][1] && c[1] >= box[1][0] &&
        c[1] <= box[1][1])
      ++inside;
  }
  return static_cast<double>(inside) / static_cast<double>(snapshot.centroids.size());
}

}  // namespace ecmem
