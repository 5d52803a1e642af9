#pragma once

#include <cstdint>
#include <vector>

#include "orbital/point_cloud.hpp"

namespace orbital {

/// Dyadic scales delta_j = delta0 * 2^-j with a fitting window [j_lo, j_hi].
struct ScaleLadder {
  std::vector<double> deltas;
  int j_lo = 0;
  int j_hi = 0;

  /// delta_j = 2^-j for j in [coarsest_exp, finest_exp]; window spans all.
  static ScaleLadder dyadic(int coarsest_exp, int finest_exp);

  ScaleLadder with_window(int lo, int hi) const;
  std::size_t window_size() const { return static_cast<std::size_t>(j_hi - j_lo + 1); }
  void validate() const;
};

/// Automatic window: keep delta <= diam / 8 and delta >= 2 * spacing; for
/// depth-truncated orbit clouds additionally drop the two finest of those.
/// Throws WindowError when fewer than 3 scales remain.
ScaleLadder default_window(const PointCloud& cloud, const ScaleLadder& ladder,
                           bool truncated_orbit);

/// Occupied cells of the grid with side delta / sqrt(2) (cell diameter delta)
/// anchored at `anchor`. No sampling check.
std::size_t grid_count(const std::vector<Complex>& points, double delta, Complex anchor,
                       int threads = 1);

/// N_delta of the cloud on the grid anchored at its bounding-box corner.
/// Throws SamplingError when spacing > delta / 2.
std::size_t box_count(const PointCloud& cloud, double delta, int threads = 1);

struct BoxCountReport {
  ScaleLadder ladder;  // window already applied; counts cover [j_lo, j_hi]
  std::vector<std::size_t> counts;
  double ols_slope = 0.0;
  double ols_stderr = 0.0;
  std::vector<double> local_slopes;
  double max_local_slope = 0.0;
  double estimate = 0.0;
  double uncertainty = 0.0;

  std::vector<double> window_deltas() const;
};

/// Least-squares slope of log N_delta against -log delta over the window.
/// Throws WindowError (< 3 scales) and SamplingError.
BoxCountReport dim_estimate(const PointCloud& cloud, const ScaleLadder& ladder, int threads = 1);

/// Plain least squares y = a + b x; returns {slope, stderr}.
std::pair<double, double> least_squares_slope(const std::vector<double>& x,
                                              const std::vector<double>& y);

}  // namespace orbital
