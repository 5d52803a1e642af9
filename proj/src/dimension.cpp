#include "orbital/dimension.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <tuple>
#include <sstream>

#include "orbital/errors.hpp"
#include "orbital/parallel.hpp"

namespace orbital {

ScaleLadder ScaleLadder::dyadic(int coarsest_exp, int finest_exp) {
  if (finest_exp <= coarsest_exp) throw WindowError("ScaleLadder: finest must exceed coarsest");
  ScaleLadder l;
  for (int j = coarsest_exp; j <= finest_exp; ++j) l.deltas.push_back(std::ldexp(1.0, -j));
  l.j_lo = 0;
  l.j_hi = static_cast<int>(l.deltas.size()) - 1;
  return l;
}

ScaleLadder ScaleLadder::with_window(int lo, int hi) const {
  ScaleLadder l = *this;
  l.j_lo = lo;
  l.j_hi = hi;
  l.validate();
  return l;
}

void ScaleLadder::validate() const {
  if (deltas.empty()) throw WindowError("ScaleLadder: no scales");
  for (std::size_t i = 0; i < deltas.size(); ++i) {
    if (!(deltas[i] > 0.0)) throw WindowError("ScaleLadder: non-positive delta");
    if (i > 0 && !(deltas[i] < deltas[i - 1])) throw WindowError("ScaleLadder: deltas not decreasing");
  }
  if (j_lo < 0 || j_hi >= static_cast<int>(deltas.size()) || j_hi - j_lo < 2) {
    std::ostringstream os;
    os << "ScaleLadder: window [" << j_lo << ", " << j_hi << "] has fewer than 3 scales";
    throw WindowError(os.str());
  }
}

ScaleLadder default_window(const PointCloud& cloud, const ScaleLadder& ladder,
                           bool truncated_orbit) {
  const double coarse = cloud.diameter() / 8.0;
  const double fine = 2.0 * cloud.spacing();
  int lo = -1;
  int hi = -1;
  for (int j = 0; j < static_cast<int>(ladder.deltas.size()); ++j) {
    const double d = ladder.deltas[static_cast<std::size_t>(j)];
    if (d <= coarse && d >= fine) {
      if (lo < 0) lo = j;
      hi = j;
    }
  }
  if (truncated_orbit && hi >= 0) hi -= 2;
  if (lo < 0 || hi - lo < 2) {
    std::ostringstream os;
    os << "default_window: fewer than 3 admissible scales for '" << cloud.label()
       << "' (diameter " << cloud.diameter() << ", spacing " << cloud.spacing() << ")";
    throw WindowError(os.str());
  }
  return ladder.with_window(lo, hi);
}

std::size_t grid_count(const std::vector<Complex>& points, double delta, Complex anchor,
                       int threads) {
  const double side = delta / std::sqrt(2.0);
  auto cell_key = [&](Complex z) {
    const auto ix = static_cast<std::int64_t>(std::floor((z.real() - anchor.real()) / side));
    const auto iy = static_cast<std::int64_t>(std::floor((z.imag() - anchor.imag()) / side));
    return (static_cast<std::uint64_t>(ix) << 32) ^ (static_cast<std::uint64_t>(iy) & 0xffffffffULL);
  };
  // per-chunk sorted unique keys, merged afterwards
  auto chunks = parallel_map_chunks(points.size(), threads, [&](std::size_t b, std::size_t e) {
    std::vector<std::uint64_t> keys;
    keys.reserve(e - b);
    for (std::size_t i = b; i < e; ++i) keys.push_back(cell_key(points[i]));
    std::sort(keys.begin(), keys.end());
    keys.erase(std::unique(keys.begin(), keys.end()), keys.end());
    return keys;
  });
  if (chunks.size() == 1) return chunks.front().size();
  std::vector<std::uint64_t> all;
  for (auto& c : chunks) all.insert(all.end(), c.begin(), c.end());
  std::sort(all.begin(), all.end());
  return static_cast<std::size_t>(std::unique(all.begin(), all.end()) - all.begin());
}

std::size_t box_count(const PointCloud& cloud, double delta, int threads) {
  if (!(delta > 0.0)) throw PreconditionError("box_count: delta must be positive");
  if (cloud.spacing() > delta / 2.0) {
    std::ostringstream os;
    os << "box_count: spacing " << cloud.spacing() << " of '" << cloud.label()
       << "' exceeds delta/2 = " << delta / 2.0;
    throw SamplingError(os.str());
  }
  const Rect& b = cloud.bbox();
  return grid_count(cloud.points(), delta, Complex{b.x0, b.y0}, threads);
}

std::vector<double> BoxCountReport::window_deltas() const {
  return {ladder.deltas.begin() + ladder.j_lo, ladder.deltas.begin() + ladder.j_hi + 1};
}

std::pair<double, double> least_squares_slope(const std::vector<double>& x,
                                              const std::vector<double>& y) {
  const auto n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  const double slope = sxy / sxx;
  double rss = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - (my + slope * (x[i] - mx));
    rss += r * r;
  }
  const double se = x.size() > 2 ? std::sqrt(rss / (n - 2.0) / sxx) : 0.0;
  return {slope, se};
}

BoxCountReport dim_estimate(const PointCloud& cloud, const ScaleLadder& ladder, int threads) {
  ladder.validate();
  BoxCountReport r;
  r.ladder = ladder;
  std::vector<double> x, y;
  for (int j = ladder.j_lo; j <= ladder.j_hi; ++j) {
    const double d = ladder.deltas[static_cast<std::size_t>(j)];
    const std::size_t n = box_count(cloud, d, threads);
    r.counts.push_back(n);
    x.push_back(-std::log(d));
    y.push_back(std::log(static_cast<double>(n)));
  }
  std::tie(r.ols_slope, r.ols_stderr) = least_squares_slope(x, y);
  r.max_local_slope = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i < x.size(); ++i) {
    const double s = (y[i] - y[i - 1]) / (x[i] - x[i - 1]);
    r.local_slopes.push_back(s);
    r.max_local_slope = std::max(r.max_local_slope, s);
  }
  r.estimate = r.ols_slope;
  r.uncertainty = std::max(std::abs(r.max_local_slope - r.ols_slope), r.ols_stderr);
  return r;
}

}  // namespace orbital
