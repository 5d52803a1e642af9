#include "orbital/julia.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <optional>
#include <tuple>

#include "orbital/errors.hpp"
#include "orbital/parallel.hpp"
#include "orbital/shapes.hpp"

namespace orbital {

Complex Raster::center(int ix, int iy) const {
  return {window.x0 + (ix + 0.5) * cell_width(), window.y0 + (iy + 0.5) * cell_height()};
}

JuliaCloud julia_backward(const RationalMap& t, Complex seed, int depth, double dedup_cell,
                          const JuliaOptions& opts) {
  if (depth < 1) throw PreconditionError("julia_backward: depth must be at least 1");
  for (const Complex& x : exceptional_points(t).finite) {
    if (std::abs(x - seed) <= 1e-9 * (1.0 + std::abs(x))) {
      std::ostringstream os;
      os << "julia_backward: seed " << seed << " is exceptional";
      throw PreconditionError(os.str());
    }
  }
  TreeOptions to;
  to.depth = depth;
  to.dedup_cell = dedup_cell;
  to.budget = opts.budget;
  to.threads = opts.threads;
  to.critical_guard = opts.critical_guard;
  const OrbitCloud tree = backward_tree(t, shapes::points_cloud({seed}), to);

  const int deepest = tree.levels() - 1;
  const auto last = tree.level(deepest);
  std::vector<Complex> pts;
  pts.reserve(last.size());
  for (const auto& n : last) pts.push_back(n.point);
  const double spacing = std::max(max_nearest_neighbor_gap(pts), 1e-12);

  const int from = std::min(opts.burn_in, deepest);
  PointCloud cloud = orbital_cloud(tree, from).with_spacing(spacing);
  std::ostringstream label;
  label << "julia backward(" << seed << ", K=" << deepest << ")";
  return {cloud.with_label(label.str()), JuliaMethod::backward, seed, deepest, from, dedup_cell,
          tree.truncated, {}};
}

JuliaCloud escape_boundary(const RationalMap& t, const Rect& window, int resolution, double escape_radius,
                           int max_iter, int threads) {
  if (!t.is_polynomial()) throw PreconditionError("escape_boundary: map must be a polynomial");
  if (resolution < 64) throw PreconditionError("escape_boundary: resolution must be at least 64");
  if (!(window.width() > 0.0 && window.height() > 0.0)) throw WindowError("escape_boundary: empty window");

  Raster r;
  r.width = resolution;
  r.height = resolution;
  r.window = window;
  const double half_diag = 0.5 * std::hypot(r.cell_width(), r.cell_height());
  const ComplexPoly p = [&] {
    const Complex q0 = t.q()[0];
    std::vector<Complex> c(t.p().coeffs().begin(), t.p().coeffs().end());
    for (auto& x : c) x /= q0;
    return ComplexPoly(std::move(c));
  }();
  const ComplexPoly dp = poly_derivative(p);

  auto rows = parallel_map_chunks(static_cast<std::size_t>(resolution), threads, [&](std::size_t b, std::size_t e) {
    std::vector<std::uint8_t> out;
    out.reserve((e - b) * static_cast<std::size_t>(resolution));
    for (std::size_t iy = b; iy < e; ++iy) {
      for (int ix = 0; ix < resolution; ++ix) {
        Complex z = r.center(ix, static_cast<int>(iy));
        Complex dz{1.0, 0.0};
        bool escaped = false;
        for (int n = 0; n < max_iter; ++n) {
          dz *= poly_eval(dp, z);
          z = poly_eval(p, z);
          if (!(std::abs(z) <= escape_radius)) {
            escaped = true;
            break;
          }
        }
        bool bounded = !escaped;
        if (escaped && std::isfinite(std::abs(z))) {
          const double dist = std::abs(z) * std::log(std::abs(z)) / std::abs(dz);
          bounded = dist < half_diag;
        }
        out.push_back(bounded ? 1 : 0);
      }
    }
    return out;
  });
  for (auto& chunk : rows) r.cells.insert(r.cells.end(), chunk.begin(), chunk.end());

  std::vector<Complex> pts;
  std::vector<std::uint8_t> marked = r.cells;
  for (int iy = 0; iy < r.height; ++iy) {
    for (int ix = 0; ix < r.width; ++ix) {
      if (r.at(ix, iy) != 1) continue;
      bool edge = false;
      for (int dy = -1; dy <= 1 && !edge; ++dy)
        for (int dx = -1; dx <= 1 && !edge; ++dx) {
          const int nx = ix + dx;
          const int ny = iy + dy;
          if (nx < 0 || ny < 0 || nx >= r.width || ny >= r.height) continue;
          edge = r.at(nx, ny) == 0;
        }
      if (edge) {
        marked[static_cast<std::size_t>(iy) * static_cast<std::size_t>(r.width) + static_cast<std::size_t>(ix)] = 2;
        pts.push_back(r.center(ix, iy));
      }
    }
  }
  r.cells = std::move(marked);
  if (pts.empty()) throw WindowError("escape_boundary: no boundary cell in the window");
  std::ostringstream label;
  label << "julia escape boundary (" << resolution << "^2)";
  const double spacing = 2.0 * half_diag;
  JuliaCloud jc{PointCloud(std::move(pts), spacing, label.str()), JuliaMethod::escape_boundary, {}, max_iter,
                0, 0.0, false, std::move(r)};
  return jc;
}

PostcriticalSet postcritical_cloud(const RationalMap& t, int n, double escape_radius) {
  if (n < 1) throw PreconditionError("postcritical_cloud: N must be at least 1");
  PostcriticalSet out;
  for (Complex z : critical_points(t)) {
    for (int k = 0; k < n; ++k) {
      try {
        z = map_eval(t, z);
      } catch (const PoleError&) {
        out.escaped = true;
        break;
      }
      if (!(std::abs(z) <= escape_radius)) {
        out.escaped = true;
        break;
      }
      out.points.push_back(z);
    }
  }
  std::sort(out.points.begin(), out.points.end(), lex_less);
  std::vector<Complex> unique;
  for (const Complex& z : out.points) {
    const bool dup = std::any_of(unique.begin(), unique.end(), [&](Complex u) {
      return std::abs(u - z) <= 1e-12 * (1.0 + std::abs(z));
    });
    if (!dup) unique.push_back(z);
  }
  out.points = std::move(unique);
  return out;
}

namespace {

// The unique point of T^{-1}(w) when the fibre is totally ramified.
std::optional<Complex> sole_preimage(const RationalMap& t, Complex w) {
  try {
    const RootSet fiber = preimages(t, w);
    if (fiber.roots.size() == 1) return fiber.roots.front().value;
  } catch (const OrbitalError&) {
  }
  return std::nullopt;
}

bool near(Complex a, Complex b) { return std::abs(a - b) <= 1e-7 * (1.0 + std::abs(a)); }

}  // namespace

ExceptionalPoints exceptional_points(const RationalMap& t) {
  ExceptionalPoints out;
  out.infinity = t.is_polynomial();
  auto add = [&](Complex z) {
    for (const Complex& x : out.finite)
      if (near(x, z)) return;
    out.finite.push_back(z);
  };
  for (const Complex& v : critical_values(t)) {
    const auto u = sole_preimage(t, v);
    if (!u) continue;
    if (near(*u, v)) {
      add(v);
      continue;
    }
    const auto back = sole_preimage(t, *u);
    if (back && near(*back, v)) {
      add(v);
      add(*u);
    }
  }
  if (out.finite.size() > 2) out.finite.resize(2);
  return out;
}

std::string to_string(Verdict3 v) {
  switch (v) {
    case Verdict3::pass: return "PASS";
    case Verdict3::fail: return "FAIL";
    case Verdict3::unknown: return "UNKNOWN";
  }
  return "UNKNOWN";
}

namespace {

double distance_to_set(Complex z, const std::vector<Complex>& set) {
  double d = std::numeric_limits<double>::infinity();
  for (const Complex& p : set) d = std::min(d, std::abs(z - p));
  return d;
}

}  // namespace

AssumptionDiagnostic assumption_a_diagnostic(const PointCloud& e, const std::vector<Complex>& pc,
                                             const PointCloud& j, double tube) {
  if (!(tube > 0.0)) throw PreconditionError("assumption_a_diagnostic: tube must be positive");
  AssumptionDiagnostic d;
  d.tube = tube;
  d.dist_e_pc = std::numeric_limits<double>::infinity();
  if (!pc.empty()) {
    const NearestIndex e_index(e.points());
    for (const Complex& p : pc) d.dist_e_pc = std::min(d.dist_e_pc, e_index.nearest(p).distance);
  }

  const NearestIndex j_index(j.points());
  double best = std::numeric_limits<double>::infinity();
  for (const Complex& z : e.points()) {
    const auto hit = j_index.nearest(z);
    if (hit.distance < best) {
      best = hit.distance;
      d.path_from = z;
      d.path_to = j.points()[hit.index];
    }
  }
  if (d.dist_e_pc <= tube) {
    d.verdict = Verdict3::fail;
    d.path_clearance = 0.0;
    return d;
  }
  const double len = std::abs(d.path_to - d.path_from);
  const auto steps = static_cast<long long>(std::min(1e6, std::ceil(len / (tube / 4.0))));
  d.path_clearance = std::numeric_limits<double>::infinity();
  for (long long s = 0; s <= steps; ++s) {
    const double u = steps == 0 ? 0.0 : static_cast<double>(s) / static_cast<double>(steps);
    d.path_clearance = std::min(d.path_clearance, distance_to_set(d.path_from + u * (d.path_to - d.path_from), pc));
  }
  d.verdict = d.path_clearance > tube ? Verdict3::pass : Verdict3::unknown;
  return d;
}

}  // namespace orbital
