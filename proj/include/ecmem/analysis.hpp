#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "ecmem/stream.hpp"

namespace ecmem {

struct KMeansResult {
  std::vector<std::array<double, 2>> centroids;
  std::vector<int> assignment_counts;     // points per centroid, final
  std::vector<double> inertia_history;    // one value per Lloyd iteration
  int iterations = 0;

  double inertia() const {
    return inertia_history.empty() ? 0.0 : inertia_history.back();
  }
};

// Lloyd's algorithm with seeded initialization from k distinct points.
// Stops at an assignment fixpoint or after max_iters sweeps.
KMeansResult batch_kmeans(std::span<const std::array<double, 2>> points,
                          std::size_t k, int max_iters, std::uint64_t seed);

struct CentroidSnapshot {
  std::string method;   // "kmeans", "km", "dkm" or "lru"
  double fraction = 0;  // share of the stream consumed: .25/.5/.75/1
  std::vector<std::array<double, 2>> centroids;
  std::vector<double> counts;  // cluster sizes where applicable, else 1
};

// Feeds the identical stream through kM, DkM and LRU point stores (no
// Q-values) and runs batch k-means on the prefix consumed so far; captures
// all four at 25/50/75/100% of the stream.
std::vector<CentroidSnapshot> stream_study(const StreamSpec& spec,
                                           std::size_t memory_size);

struct DensityGrid {
  int resolution = 0;
  std::array<double, 2> lo{};
  std::array<double, 2> hi{};
  double bandwidth = 0.0;
  std::vector<double> values;  // row-major: values[yi*resolution + xi]

  double cell_area() const;
  double total_mass() const;  // sum(values) * cell_area, 1 by construction
};

// Isotropic Gaussian kernel density on a regular lattice, normalized so the
// in-bounds mass is exactly 1. Weights default to uniform; bandwidth <= 0
// selects Scott's rule on the (weighted) point set.
DensityGrid kde_grid(std::span<const std::array<double, 2>> points,
                     std::span<const double> weights, int resolution,
                     std::array<double, 2> lo, std::array<double, 2> hi,
                     double bandwidth = 0.0);

// Axis-aligned box holding the central 90% of the stream's skew-normal
// phase, per coordinate: [q05, q95].
std::array<std::array<double, 2>, 2> skew_phase_box(const StreamSpec& spec);

// Share of snapshot centroids falling inside `box` ([lo, hi] per axis).
double fraction_in_box(const CentroidSnapshot& snapshot,
                       const std::array<std::array<double, 2>, 2>& box);

}  // namespace ecmem
