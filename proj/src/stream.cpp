#include "ecmem/stream.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "ecmem/rng.hpp"

namespace ecmem {

namespace {

// One skew-normal draw via the two-normal construction:
// z = delta*|u0| + sqrt(1-delta^2)*u1 with delta = alpha/sqrt(1+alpha^2).
double sample_skew_normal(Rng& rng, double shape) {
  const double delta = shape / std::sqrt(1.0 + shape * shape);
  const double u0 = rng.normal();
  const double u1 = rng.normal();
  return delta * std::abs(u0) + std::sqrt(1.0 - delta * delta) * u1;
}

}  // namespace

std::vector<std::array<double, 2>> synthetic_stream(const StreamSpec& spec) {
  if (spec.grid.points_per_axis < 1)
    throw std::invalid_argument("StreamSpec: points_per_axis must be >= 1");
  if (spec.skew.count < 1)
    throw std::invalid_argument("StreamSpec: skew count must be >= 1");
  for (double w : spec.skew.scale)
    if (!(w > 0.0))
      throw std::invalid_argument("StreamSpec: scale must be > 0");

  Rng rng(spec.seed);
  std::vector<std::array<double, 2>> points;
  points.reserve(spec.total_count());

  const int n = spec.grid.points_per_axis;
  const double span = spec.grid.hi - spec.grid.lo;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const double x = n == 1 ? spec.grid.lo : spec.grid.lo + span * i / (n - 1);
      const double y = n == 1 ? spec.grid.lo : spec.grid.lo + span * j / (n - 1);
      points.push_back({x, y});
    }
  }
  // Fisher-Yates over the lattice points only.
  for (std::size_t i = points.size(); i > 1; --i) {
    const std::size_t j = rng.uniform_int(i);
    std::swap(points[i - 1], points[j]);
  }

  for (int s = 0; s < spec.skew.count; ++s) {
    std::array<double, 2> p;
    for (int d = 0; d < 2; ++d) {
      p[d] = spec.skew.location[d] +
             spec.skew.scale[d] * sample_skew_normal(rng, spec.skew.shape[d]);
    }
    points.push_back(p);
  }
  return points;
}

double skew_normal_quantile(double location, double scale, double shape,
                            double p) {
  if (!(scale > 0.0))
    throw std::invalid_argument("skew_normal_quantile: scale must be > 0");
  if (!(p > 0.0 && p < 1.0))
    throw std::invalid_argument("skew_normal_quantile: p must be in (0,1)");

  // Standardized density 2*phi(z)*Phi(shape*z), integrated on a fine grid.
  const auto pdf = [&](double z) {
    const double phi = std::exp(-0.5 * z * z) / std::sqrt(2.0 * std::numbers::pi);
    const double cdf = 0.5 * std::erfc(-shape * z / std::numbers::sqrt2);
    return 2.0 * phi * cdf;
  };

  constexpr double z_lo = -12.0;
  constexpr double z_hi = 12.0;
  constexpr int steps = 48000;
  const double h = (z_hi - z_lo) / steps;

  // Trapezoidal CDF sweep; stop at the first grid point past mass p and
  // interpolate linearly inside that cell.
  double mass = 0.0;
  double prev = pdf(z_lo);
  for (int i = 1; i <= steps; ++i) {
    const double z = z_lo + i * h;
    const double cur = pdf(z);
    const double cell = 0.5 * (prev + cur) * h;
    if (mass + cell >= p) {
      const double t = cell > 0.0 ? (p - mass) / cell : 0.0;
      return location + scale * (z - h + t * h);
    }
    mass += cell;
    prev = cur;
  }
  return location + scale * z_hi;
}

}  // namespace ecmem
