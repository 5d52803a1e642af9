#include "orbital/orbit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>
#include <tuple>

#include "orbital/dimension.hpp"
#include "orbital/errors.hpp"
#include "orbital/parallel.hpp"
#include "orbital/shapes.hpp"

namespace orbital {

namespace {

struct CellKey {
  std::int32_t refine = 0;  // 0: base grid
  std::int32_t anchor = 0;  // critical value index for refined cells
  std::int64_t ix = 0;
  std::int64_t iy = 0;
  auto operator<=>(const CellKey&) const = default;
};

class DedupGrid {
 public:
  DedupGrid(double cell, double guard, std::vector<Complex> critical_values)
      : cell_(cell), guard_(guard), cvs_(std::move(critical_values)) {}

  CellKey key(Complex z) const {
    if (guard_ > 0.0 && !cvs_.empty()) {
      std::size_t best = 0;
      double dist = std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i < cvs_.size(); ++i) {
        const double d = std::abs(z - cvs_[i]);
        if (d < dist) {
          dist = d;
          best = i;
        }
      }
      if (dist < guard_) {
        const int refine =
            dist > 0.0 ? std::min(1000, static_cast<int>(std::ceil(std::log2(guard_ / dist)))) : 1000;
        if (refine > 0) {
          const double c = std::ldexp(cell_, -refine);
          const Complex rel = z - cvs_[best];
          return {refine, static_cast<std::int32_t>(best),
                  static_cast<std::int64_t>(std::floor(rel.real() / c)),
                  static_cast<std::int64_t>(std::floor(rel.imag() / c))};
        }
      }
    }
    return {0, 0, static_cast<std::int64_t>(std::floor(z.real() / cell_)),
            static_cast<std::int64_t>(std::floor(z.imag() / cell_))};
  }

 private:
  double cell_;
  double guard_;
  std::vector<Complex> cvs_;
};

bool node_preferred(const OrbitNode& a, const OrbitNode& b) {
  if (a.log_fwd_derivative != b.log_fwd_derivative) return a.log_fwd_derivative < b.log_fwd_derivative;
  if (a.point != b.point) return lex_less(a.point, b.point);
  return a.seed_index < b.seed_index;
}

// Keeps, per cell, the node with the smallest log-derivative. Output is
// sorted by cell, so it does not depend on the input order.
std::vector<OrbitNode> dedup_level(std::vector<OrbitNode> level, const DedupGrid& grid) {
  std::vector<std::pair<CellKey, std::size_t>> keyed;
  keyed.reserve(level.size());
  for (std::size_t i = 0; i < level.size(); ++i) keyed.emplace_back(grid.key(level[i].point), i);
  std::sort(keyed.begin(), keyed.end(), [&](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first < b.first;
    return node_preferred(level[a.second], level[b.second]);
  });
  std::vector<OrbitNode> out;
  out.reserve(keyed.size());
  for (std::size_t i = 0; i < keyed.size(); ++i)
    if (i == 0 || keyed[i].first != keyed[i - 1].first) out.push_back(level[keyed[i].second]);
  return out;
}

}  // namespace

std::span<const OrbitNode> OrbitCloud::level(int k) const {
  if (k < 0 || k >= levels()) return {};
  const auto b = static_cast<std::ptrdiff_t>(level_offsets[static_cast<std::size_t>(k)]);
  const auto e = static_cast<std::ptrdiff_t>(level_offsets[static_cast<std::size_t>(k) + 1]);
  return {nodes.begin() + b, nodes.begin() + e};
}

OrbitCloud backward_tree(const RationalMap& t, const PointCloud& seeds, const TreeOptions& opts) {
  if (opts.depth < 0) throw PreconditionError("backward_tree: depth < 0");
  if (opts.budget == 0) throw PreconditionError("backward_tree: budget must be positive");

  OrbitCloud tree;
  tree.seeds = seeds.points();
  tree.seed_label = seeds.label();
  tree.seed_spacing = seeds.spacing();
  tree.depth_max = opts.depth;
  tree.dedup_cell = opts.dedup_cell;

  std::vector<Complex> cvs;
  if (opts.critical_guard > 0.0) cvs = critical_values(t);
  const DedupGrid grid(opts.dedup_cell, opts.critical_guard, cvs);
  const bool dedup = opts.dedup_cell > 0.0;

  std::vector<OrbitNode> level;
  level.reserve(seeds.size());
  for (std::size_t i = 0; i < seeds.size(); ++i)
    level.push_back({seeds.points()[i], 0.0, 0, static_cast<std::uint32_t>(i)});
  tree.visits = level.size();
  // anchored seeds: the first frontier is the full, undeduplicated seed list
  const AnchoredPoints* anchored = seeds.anchored() ? &*seeds.anchored() : nullptr;
  std::vector<OrbitNode> stored = dedup ? dedup_level(level, grid) : level;
  tree.level_offsets = {0, stored.size()};
  tree.nodes = stored;
  if (!anchored) level = std::move(stored);

  const auto d = static_cast<std::size_t>(t.degree());
  for (int k = 1; k <= opts.depth; ++k) {
    if (tree.visits + d * level.size() > opts.budget) {
      tree.truncated = true;
      break;
    }
    auto chunks = parallel_map_chunks(level.size(), opts.threads, [&](std::size_t b, std::size_t e) {
      std::vector<OrbitNode> out;
      out.reserve((e - b) * d);
      for (std::size_t i = b; i < e; ++i) {
        const OrbitNode& parent = level[i];
        const RootSet fiber =
            anchored && k == 1
                ? preimages_near(t, anchored->anchor, anchored->offsets[parent.seed_index], opts.preimage)
                : preimages(t, parent.point, opts.preimage);
        for (const Root& r : fiber.roots)
          out.push_back({r.value, parent.log_fwd_derivative + safe_log_abs(t.derivative(r.value)),
                         static_cast<std::int32_t>(k), parent.seed_index});
      }
      return out;
    });
    std::vector<OrbitNode> next;
    if (chunks.size() == 1) {
      next = std::move(chunks.front());
    } else {
      std::size_t total = 0;
      for (const auto& c : chunks) total += c.size();
      next.reserve(total);
      for (auto& c : chunks) next.insert(next.end(), c.begin(), c.end());
    }
    tree.visits += next.size();
    if (dedup) next = dedup_level(std::move(next), grid);
    tree.nodes.insert(tree.nodes.end(), next.begin(), next.end());
    tree.level_offsets.push_back(tree.nodes.size());
    level = std::move(next);
  }
  return tree;
}

PointCloud orbital_cloud(const OrbitCloud& tree) { return orbital_cloud(tree, 0); }

PointCloud orbital_cloud(const OrbitCloud& tree, int from_depth) {
  const auto begin = static_cast<std::ptrdiff_t>(
      tree.level_offsets[static_cast<std::size_t>(std::clamp(from_depth, 0, tree.levels()))]);
  std::vector<OrbitNode> nodes(tree.nodes.begin() + begin, tree.nodes.end());
  if (nodes.empty()) throw EmptyLevelError("orbital_cloud: no nodes at the requested depths");
  std::vector<Complex> pts;
  if (tree.dedup_cell > 0.0) {
    const DedupGrid grid(tree.dedup_cell, 0.0, {});
    for (const auto& n : dedup_level(std::move(nodes), grid)) pts.push_back(n.point);
  } else {
    pts.reserve(nodes.size());
    for (const auto& n : nodes) pts.push_back(n.point);
    std::sort(pts.begin(), pts.end(), lex_less);
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  }
  return PointCloud(std::move(pts), tree.seed_spacing, "orbit of " + tree.seed_label);
}

namespace {

void require_single_seed(const OrbitCloud& tree, const char* what) {
  if (tree.seeds.size() != 1) {
    std::ostringstream os;
    os << what << ": tree must be built from a single seed point";
    throw PreconditionError(os.str());
  }
}

}  // namespace

double log_level_sum(const OrbitCloud& tree, double s, int k) {
  require_single_seed(tree, "level_sum");
  const auto lvl = tree.level(k);
  if (lvl.empty()) {
    std::ostringstream os;
    os << "level_sum: no nodes at depth " << k;
    throw EmptyLevelError(os.str());
  }
  double peak = -std::numeric_limits<double>::infinity();
  for (const auto& n : lvl) peak = std::max(peak, -s * n.log_fwd_derivative);
  double acc = 0.0;
  for (const auto& n : lvl) acc += std::exp(-s * n.log_fwd_derivative - peak);
  return peak + std::log(acc);
}

double level_sum(const OrbitCloud& tree, double s, int k) { return std::exp(log_level_sum(tree, s, k)); }

bool looks_fatou(const RationalMap& t, Complex z, int steps) {
  constexpr int kMaxPeriod = 8;
  // shadow orbit
  Complex w = z + 1e-9 * (1.0 + std::abs(z));
  std::vector<Complex> orbit{z};
  try {
    for (int n = 0; n < steps; ++n) {
      z = map_eval(t, z);
      w = map_eval(t, w);
      if (!(std::abs(z) <= t.tolerances().escape_radius)) return true;
      if (std::abs(z - w) > 1e-2 * (1.0 + std::abs(z))) return false;
      orbit.push_back(z);
      if (n >= 50) {
        for (int p = 1; p <= kMaxPeriod; ++p) {
          const Complex prev = orbit[orbit.size() - 1 - static_cast<std::size_t>(p)];
          if (std::abs(z - prev) <= 1e-10 * (1.0 + std::abs(z))) return true;
        }
      }
    }
  } catch (const PoleError&) {
    return true;
  }
  return false;
}

double level_growth_rate(const OrbitCloud& tree, double s) {
  const int top = tree.levels() - 1;
  const int first = (top + 1) / 2;
  std::vector<double> x, y;
  for (int k = first; k <= top; ++k) {
    x.push_back(static_cast<double>(k));
    y.push_back(log_level_sum(tree, s, k));
  }
  if (x.size() < 2) throw PreconditionError("level_growth_rate: fewer than two levels in [K/2, K]");
  return least_squares_slope(x, y).first;
}

ExponentEstimate hz_exponent(const RationalMap& t, Complex z, int depth, double s_lo, double s_hi,
                             int iters, std::size_t budget) {
  if (depth < 6) throw PreconditionError("hz_exponent: depth must be at least 6");
  if (!(s_lo < s_hi)) throw PreconditionError("hz_exponent: empty bracket");
  if (!looks_fatou(t, z)) {
    std::ostringstream os;
    os << "hz_exponent: " << z << " neither escapes nor converges; it may lie on the Julia set";
    throw PreconditionError(os.str());
  }
  TreeOptions opts;
  opts.depth = depth;
  opts.budget = budget;
  const OrbitCloud tree = backward_tree(t, shapes::points_cloud({z}), opts);
  if (tree.levels() - 1 < depth) throw PreconditionError("hz_exponent: budget too small for the requested depth");
  double lo = s_lo;
  double hi = s_hi;
  const double r_lo = level_growth_rate(tree, lo);
  const double r_hi = level_growth_rate(tree, hi);
  if (!(r_lo > 0.0 && r_hi < 0.0)) {
    std::ostringstream os;
    os << "hz_exponent: growth rate does not change sign on [" << s_lo << ", " << s_hi
       << "] (rho = " << r_lo << ", " << r_hi << ")";
    throw BracketError(os.str());
  }
  for (int i = 0; i < iters; ++i) {
    const double mid = 0.5 * (lo + hi);
    (level_growth_rate(tree, mid) > 0.0 ? lo : hi) = mid;
  }
  return {0.5 * (lo + hi), 0.5 * (hi - lo)};
}

std::size_t derivative_band_count(const OrbitCloud& tree, int n) {
  const double lo = n * std::log(2.0);
  const double hi = (n + 1) * std::log(2.0);
  return static_cast<std::size_t>(std::count_if(tree.nodes.begin(), tree.nodes.end(), [&](const OrbitNode& node) {
    return node.log_fwd_derivative >= lo && node.log_fwd_derivative < hi;
  }));
}

}  // namespace orbital
