#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "orbital/algebra.hpp"

namespace orbital {

/// Axis-aligned rectangle [x0, x1] x [y0, y1].
struct Rect {
  double x0 = 0.0;
  double y0 = 0.0;
  double x1 = 0.0;
  double y1 = 0.0;

  double width() const { return x1 - x0; }
  double height() const { return y1 - y0; }
  double diagonal() const;
  bool contains(Complex z) const {
    return z.real() >= x0 && z.real() <= x1 && z.imag() >= y0 && z.imag() <= y1;
  }
  Rect expanded(double margin_fraction) const;
};

Rect bounding_box(const std::vector<Complex>& points);

/// points[i] == anchor + offsets[i] up to rounding; the offsets keep what
/// rounding near the anchor destroys.
struct AnchoredPoints {
  Complex anchor;
  std::vector<Complex> offsets;
};

/// Finite sample of a planar set.
///
/// `spacing` is the largest sampling hole: the sampled set differs from the
/// set it stands for only at scales below it. Box counts are certified for
/// delta >= 2 * spacing.
class PointCloud {
 public:
  PointCloud(std::vector<Complex> points, double spacing, std::string label = {});

  const std::vector<Complex>& points() const { return points_; }
  std::size_t size() const { return points_.size(); }
  double spacing() const { return spacing_; }
  const Rect& bbox() const { return bbox_; }
  const std::string& label() const { return label_; }
  double diameter() const { return bbox_.diagonal(); }

  PointCloud with_label(std::string label) const;
  PointCloud with_spacing(double spacing) const;
  PointCloud with_anchor(AnchoredPoints a) const;
  const std::optional<AnchoredPoints>& anchored() const { return anchored_; }

 private:
  std::vector<Complex> points_;
  double spacing_;
  Rect bbox_;
  std::string label_;
  std::optional<AnchoredPoints> anchored_;
};

/// Nearest-neighbour queries over a fixed point set (static k-d tree).
class NearestIndex {
 public:
  explicit NearestIndex(const std::vector<Complex>& points);

  struct Hit {
    std::size_t index;
    double distance;
  };
  /// Nearest indexed point, optionally skipping one index (for self queries).
  /// Ties go to the smaller index.
  Hit nearest(Complex z, std::optional<std::size_t> skip = std::nullopt) const;
  std::size_t size() const { return points_.size(); }

 private:
  void build(std::size_t lo, std::size_t hi);
  void search(std::size_t lo, std::size_t hi, Complex z, std::optional<std::size_t> skip, Hit& best) const;
  std::vector<Complex> points_;
  std::vector<std::size_t> order_;  // subtree [lo, hi) is rooted at its middle entry
  std::vector<std::uint8_t> axis_;
};

/// max over a in `from` of the distance to the nearest point of `to`.
double directed_hausdorff(const std::vector<Complex>& from, const NearestIndex& to);

/// Largest nearest-neighbour distance inside one point set (0 for < 2 points).
double max_nearest_neighbor_gap(const std::vector<Complex>& points);

}  // namespace orbital
