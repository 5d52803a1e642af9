#include "orbital/point_cloud.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "orbital/errors.hpp"

namespace orbital {

double Rect::diagonal() const { return std::hypot(width(), height()); }

Rect Rect::expanded(double margin_fraction) const {
  const double mx = margin_fraction * std::max(width(), 1e-12);
  const double my = margin_fraction * std::max(height(), 1e-12);
  return {x0 - mx, y0 - my, x1 + mx, y1 + my};
}

Rect bounding_box(const std::vector<Complex>& points) {
  Rect r{std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity(),
         -std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
  for (const auto& z : points) {
    r.x0 = std::min(r.x0, z.real());
    r.y0 = std::min(r.y0, z.imag());
    r.x1 = std::max(r.x1, z.real());
    r.y1 = std::max(r.y1, z.imag());
  }
  return r;
}

PointCloud::PointCloud(std::vector<Complex> points, double spacing, std::string label)
    : points_(std::move(points)), spacing_(spacing), label_(std::move(label)) {
  if (points_.empty()) throw PreconditionError("PointCloud: no points");
  if (!(spacing_ > 0.0)) throw PreconditionError("PointCloud: spacing must be positive");
  for (const auto& z : points_)
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
      throw PreconditionError("PointCloud: non-finite point");
  bbox_ = bounding_box(points_);
}

PointCloud PointCloud::with_label(std::string label) const {
  PointCloud c = *this;
  c.label_ = std::move(label);
  return c;
}

PointCloud PointCloud::with_spacing(double spacing) const {
  if (!(spacing > 0.0)) throw PreconditionError("PointCloud: spacing must be positive");
  PointCloud c = *this;
  c.spacing_ = spacing;
  return c;
}

PointCloud PointCloud::with_anchor(AnchoredPoints a) const {
  if (a.offsets.size() != points_.size()) throw PreconditionError("PointCloud: offsets do not match points");
  PointCloud c = *this;
  c.anchored_ = std::move(a);
  return c;
}

NearestIndex::NearestIndex(const std::vector<Complex>& points) : points_(points) {
  if (points_.empty()) throw PreconditionError("NearestIndex: no points");
  order_.resize(points_.size());
  for (std::size_t i = 0; i < order_.size(); ++i) order_[i] = i;
  axis_.assign(points_.size(), 0);
  build(0, order_.size());
}

void NearestIndex::build(std::size_t lo, std::size_t hi) {
  if (hi - lo <= 1) return;
  double x0 = std::numeric_limits<double>::infinity(), x1 = -x0, y0 = x0, y1 = -x0;
  for (std::size_t k = lo; k < hi; ++k) {
    const Complex z = points_[order_[k]];
    x0 = std::min(x0, z.real());
    x1 = std::max(x1, z.real());
    y0 = std::min(y0, z.imag());
    y1 = std::max(y1, z.imag());
  }
  const std::uint8_t axis = (x1 - x0) >= (y1 - y0) ? 0 : 1;
  const std::size_t mid = lo + (hi - lo) / 2;
  auto coord = [&](std::size_t i) { return axis == 0 ? points_[i].real() : points_[i].imag(); };
  std::nth_element(order_.begin() + static_cast<std::ptrdiff_t>(lo), order_.begin() + static_cast<std::ptrdiff_t>(mid),
                   order_.begin() + static_cast<std::ptrdiff_t>(hi), [&](std::size_t a, std::size_t b) {
                     return coord(a) != coord(b) ? coord(a) < coord(b) : a < b;
                   });
  axis_[mid] = axis;
  build(lo, mid);
  build(mid + 1, hi);
}

void NearestIndex::search(std::size_t lo, std::size_t hi, Complex z, std::optional<std::size_t> skip,
                          Hit& best) const {
  if (lo >= hi) return;
  const std::size_t mid = lo + (hi - lo) / 2;
  const std::size_t i = order_[mid];
  if (!(skip && *skip == i)) {
    const double d = std::abs(points_[i] - z);
    if (d < best.distance || (d == best.distance && i < best.index)) best = {i, d};
  }
  if (hi - lo == 1) return;
  const double diff = axis_[mid] == 0 ? z.real() - points_[i].real() : z.imag() - points_[i].imag();
  if (diff < 0.0) {
    search(lo, mid, z, skip, best);
    if (-diff <= best.distance) search(mid + 1, hi, z, skip, best);
  } else {
    search(mid + 1, hi, z, skip, best);
    if (diff <= best.distance) search(lo, mid, z, skip, best);
  }
}

NearestIndex::Hit NearestIndex::nearest(Complex z, std::optional<std::size_t> skip) const {
  Hit best{points_.size(), std::numeric_limits<double>::infinity()};
  search(0, order_.size(), z, skip, best);
  return best;
}

double directed_hausdorff(const std::vector<Complex>& from, const NearestIndex& to) {
  double worst = 0.0;
  for (const auto& z : from) worst = std::max(worst, to.nearest(z).distance);
  return worst;
}

double max_nearest_neighbor_gap(const std::vector<Complex>& points) {
  if (points.size() < 2) return 0.0;
  const NearestIndex index(points);
  double worst = 0.0;
  for (std::size_t i = 0; i < points.size(); ++i)
    worst = std::max(worst, index.nearest(points[i], i).distance);
  return worst;
}

}  // namespace orbital
