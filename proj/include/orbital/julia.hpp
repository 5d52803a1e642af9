#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "orbital/orbit.hpp"

namespace orbital {

enum class JuliaMethod { backward, escape_boundary };

/// Escape-time classification per cell: 0 escape, 1 bounded, 2 boundary.
struct Raster {
  int width = 0;
  int height = 0;
  Rect window;
  std::vector<std::uint8_t> cells;  // row-major, row 0 at y0

  std::uint8_t at(int ix, int iy) const {
    return cells[static_cast<std::size_t>(iy) * static_cast<std::size_t>(width) + static_cast<std::size_t>(ix)];
  }
  Complex center(int ix, int iy) const;
  double cell_width() const { return window.width() / width; }
  double cell_height() const { return window.height() / height; }
};

struct JuliaCloud {
  PointCloud cloud;
  JuliaMethod method = JuliaMethod::backward;
  Complex seed;
  int depth = 0;
  int burn_in = 0;
  double dedup_cell = 0.0;
  bool truncated = false;
  Raster raster;  // escape_boundary only
};

struct JuliaOptions {
  int burn_in = 3;
  std::size_t budget = 50'000'000;
  int threads = 1;
  double critical_guard = 0.0;
};

/// Backward orbit of a single seed, levels >= burn_in merged. Spacing is the
/// largest nearest-neighbour gap among the deepest-level points.
JuliaCloud julia_backward(const RationalMap& t, Complex seed, int depth, double dedup_cell,
                          const JuliaOptions& opts = {});

/// Escape-time raster of a polynomial map. A cell counts as bounded when its
/// centre does not escape within max_iter steps, or when the distance
/// estimate puts J within half a cell diagonal. Boundary cells are bounded
/// cells with an escaping 8-neighbour; their centres form the cloud.
JuliaCloud escape_boundary(const RationalMap& t, const Rect& window, int resolution, double escape_radius,
                           int max_iter, int threads = 1);

struct PostcriticalSet {
  std::vector<Complex> points;  // T^n(c), 1 <= n <= N, sorted, deduplicated
  bool escaped = false;         // some orbit left the escape radius or hit a pole
};

PostcriticalSet postcritical_cloud(const RationalMap& t, int n, double escape_radius);

struct ExceptionalPoints {
  std::vector<Complex> finite;
  bool infinity = false;
};

ExceptionalPoints exceptional_points(const RationalMap& t);

enum class Verdict3 { pass, fail, unknown };
std::string to_string(Verdict3 v);

struct AssumptionDiagnostic {
  Verdict3 verdict = Verdict3::unknown;
  double dist_e_pc = 0.0;
  Complex path_from;
  Complex path_to;
  double path_clearance = 0.0;
  double tube = 0.0;
};

/// Heuristic check for a connected neighbourhood of E that avoids the
/// post-critical set and reaches J: FAIL when E comes within `tube` of pc,
/// PASS when the straight segment from E to J keeps clear of pc by more than
/// `tube`, UNKNOWN otherwise.
AssumptionDiagnostic assumption_a_diagnostic(const PointCloud& e, const std::vector<Complex>& pc,
                                             const PointCloud& j, double tube);

}  // namespace orbital
