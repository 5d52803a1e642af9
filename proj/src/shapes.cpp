#include "orbital/shapes.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "orbital/errors.hpp"

namespace orbital::shapes {

PointCloud circle_cloud(Complex center, double radius, int n) {
  if (n < 3) throw PreconditionError("circle_cloud: n < 3");
  if (!(radius > 0.0)) throw PreconditionError("circle_cloud: radius must be positive");
  std::vector<Complex> pts(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) {
    const double a = 2.0 * std::numbers::pi * k / n;
    pts[static_cast<std::size_t>(k)] = center + radius * Complex{std::cos(a), std::sin(a)};
  }
  // exact values at the quarter points
  if (n % 4 == 0) {
    pts[0] = center + radius;
    pts[static_cast<std::size_t>(n / 4)] = center + Complex{0.0, radius};
    pts[static_cast<std::size_t>(n / 2)] = center - radius;
    pts[static_cast<std::size_t>(3 * n / 4)] = center - Complex{0.0, radius};
  }
  std::ostringstream label;
  label << "circle(" << center << ", " << radius << ")";
  return PointCloud(std::move(pts), 2.0 * std::numbers::pi * radius / n, label.str());
}

PointCloud segment_cloud(Complex a, Complex b, int n, const SegmentOptions& opts) {
  if (n < 2) throw PreconditionError("segment_cloud: n < 2");
  if (a == b) throw PreconditionError("segment_cloud: a == b");
  std::vector<double> t;
  if (opts.grading == Grading::uniform || n < 4) {
    for (int k = 0; k < n; ++k) t.push_back(static_cast<double>(k) / (n - 1));
  } else {
    if (!(opts.geometric_floor > 0.0 && opts.geometric_floor < 1.0))
      throw PreconditionError("segment_cloud: geometric floor must lie in (0, 1)");
    const int nu = n - n / 2;
    const int ng = n / 2;
    for (int k = 0; k < nu; ++k) t.push_back(static_cast<double>(k) / (nu - 1));
    const double lf = std::log(opts.geometric_floor);
    for (int k = 0; k < ng; ++k) t.push_back(std::exp(lf * (1.0 - static_cast<double>(k) / ng)));
    std::sort(t.begin(), t.end());
    t.erase(std::unique(t.begin(), t.end()), t.end());
  }
  double gap = 0.0;
  for (std::size_t k = 1; k < t.size(); ++k) gap = std::max(gap, t[k] - t[k - 1]);
  std::vector<Complex> pts;
  pts.reserve(t.size());
  for (const double s : t) pts.push_back(s == 1.0 ? b : a + s * (b - a));
  std::ostringstream label;
  label << "segment(" << a << ", " << b << ")";
  return PointCloud(std::move(pts), gap * std::abs(b - a), label.str());
}

PointCloud ifs_cloud(const std::vector<Similarity>& maps, int depth, Complex base) {
  if (maps.empty()) throw PreconditionError("ifs_cloud: no maps");
  if (depth < 1) throw PreconditionError("ifs_cloud: depth < 1");
  double ratio = 0.0;
  for (const auto& m : maps) {
    if (!(std::abs(m.scale) < 1.0)) throw PreconditionError("ifs_cloud: map is not a contraction");
    ratio = std::max(ratio, std::abs(m.scale));
  }
  std::vector<Complex> pts{base};
  for (int d = 0; d < depth; ++d) {
    std::vector<Complex> next;
    next.reserve(pts.size() * maps.size());
    for (const auto& m : maps)
      for (const auto& z : pts) next.push_back(m(z));
    pts = std::move(next);
  }
  const double diam = std::max(bounding_box(pts).diagonal(), 1e-300);
  return PointCloud(std::move(pts), diam * std::pow(ratio, depth), "ifs");
}

std::vector<Similarity> sierpinski_maps(Complex offset, double size) {
  const double h = std::sqrt(3.0) / 2.0;
  const Complex corners[] = {{0.0, 0.0}, {0.5, 0.0}, {0.25, 0.5 * h}};
  std::vector<Similarity> maps;
  for (const auto& c : corners) maps.push_back({0.5, offset + size * c});
  return maps;
}

std::vector<Similarity> vicsek_maps(Complex offset, double size) {
  const double s = 1.0 / 3.0;
  const Complex corners[] = {{0.0, 0.0}, {2 * s, 0.0}, {0.0, 2 * s}, {2 * s, 2 * s}, {s, s}};
  std::vector<Similarity> maps;
  for (const auto& c : corners) maps.push_back({s, offset + size * c});
  return maps;
}

namespace {

PointCloud anchored_cloud(Complex c, std::vector<Complex> offsets, double spacing, const char* kind, double p) {
  std::vector<Complex> pts;
  pts.reserve(offsets.size());
  for (const Complex& o : offsets) pts.push_back(c + o);
  std::ostringstream label;
  label << kind << "(" << c << ", p=" << p << ")";
  return PointCloud(std::move(pts), spacing, label.str()).with_anchor({c, std::move(offsets)});
}

}  // namespace

PointCloud sequence_cloud(Complex c, double p, long long n_max) {
  if (!(p > 0.0)) throw PreconditionError("sequence_cloud: p must be positive");
  if (n_max < 1) throw PreconditionError("sequence_cloud: N < 1");
  std::vector<Complex> off;
  off.reserve(static_cast<std::size_t>(n_max) + 1);
  for (long long n = 1; n <= n_max; ++n) off.emplace_back(std::pow(static_cast<double>(n), -p), 0.0);
  off.emplace_back();
  return anchored_cloud(c, std::move(off), std::pow(static_cast<double>(n_max), -p), "sequence", p);
}

PointCloud product_sequence_cloud(Complex c, double p, long long n_max) {
  if (!(p > 0.0)) throw PreconditionError("product_sequence_cloud: p must be positive");
  if (n_max < 1) throw PreconditionError("product_sequence_cloud: N < 1");
  std::vector<double> s;
  for (long long n = 1; n <= n_max; ++n) s.push_back(std::pow(static_cast<double>(n), -p));
  std::vector<Complex> off;
  off.reserve(s.size() * s.size() + 2 * s.size() + 1);
  for (const double a : s)
    for (const double b : s) off.emplace_back(a, b);
  for (const double a : s) off.emplace_back(a, 0.0);
  for (const double b : s) off.emplace_back(0.0, b);
  off.emplace_back();
  return anchored_cloud(c, std::move(off), std::pow(static_cast<double>(n_max), -p), "product_sequence", p);
}

PointCloud points_cloud(std::vector<Complex> points, double spacing) {
  return PointCloud(std::move(points), spacing, "points");
}

}  // namespace orbital::shapes
