#pragma once

#include <vector>

#include "orbital/point_cloud.hpp"

namespace orbital::shapes {

PointCloud circle_cloud(Complex center, double radius, int n);

enum class Grading {
  uniform,
  /// Half the points uniform, half geometric toward `a` (down to a relative
  /// parameter of `geometric_floor`). Resolves sets whose backward images
  /// pass through a critical value at `a`.
  geometric,
};

struct SegmentOptions {
  Grading grading = Grading::uniform;
  double geometric_floor = 1e-300;
};

/// n points from a to b inclusive.
PointCloud segment_cloud(Complex a, Complex b, int n, const SegmentOptions& opts = {});

/// z -> scale * z + shift, |scale| < 1.
struct Similarity {
  Complex scale;
  Complex shift;
  Complex operator()(Complex z) const { return scale * z + shift; }
};

/// Images of `base` under every composition of length `depth`.
PointCloud ifs_cloud(const std::vector<Similarity>& maps, int depth, Complex base = {});

/// Three maps of ratio 1/2 on the triangle (0, 1, e^{i pi/3}).
std::vector<Similarity> sierpinski_maps(Complex offset = {}, double size = 1.0);
/// Four corners plus centre of the unit square, ratio 1/3.
std::vector<Similarity> vicsek_maps(Complex offset = {}, double size = 1.0);

/// {c + n^-p : 1 <= n <= N} together with the limit point c.
PointCloud sequence_cloud(Complex c, double p, long long n_max);

/// {c + n^-p + i m^-p : 1 <= n, m <= N}, the axis limit points c + n^-p,
/// c + i m^-p, and c.
PointCloud product_sequence_cloud(Complex c, double p, long long n_max);

/// Explicit list; spacing defaults to a tiny positive value (exact set).
PointCloud points_cloud(std::vector<Complex> points, double spacing = 1e-12);

}  // namespace orbital::shapes
