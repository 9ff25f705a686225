#pragma once

#include <array>
#include <cstdint>
#include <vector>

namespace ecmem {

// Two-phase synthetic 2D stream: the lattice points of a uniform grid in
// seeded-random order (exploration), followed by skew-normal samples
// (convergence onto one region).
struct StreamSpec {
  struct GridPhase {
    double lo = 0.0;
    double hi = 1.0;
    int points_per_axis = 20;
  };
  struct SkewPhase {
    std::array<double, 2> location{0.75, 0.75};  // xi
    std::array<double, 2> scale{0.12, 0.12};     // omega, > 0
    std::array<double, 2> shape{4.0, 4.0};       // alpha
    int count = 400;
  };

  GridPhase grid{};
  SkewPhase skew{};
  std::uint64_t seed = 1;

  int grid_count() const { return grid.points_per_axis * grid.points_per_axis; }
  int total_count() const { return grid_count() + skew.count; }
};

std::vector<std::array<double, 2>> synthetic_stream(const StreamSpec& spec);

// Quantile of the univariate skew-normal SN(location, scale, shape),
// computed by numerically integrating its density.
double skew_normal_quantile(double location, double scale, double shape,
                            double p);

}  // namespace ecmem
