#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "orbital/point_cloud.hpp"
#include "orbital/roots.hpp"

namespace orbital {

/// One point of T^{-k}(seed) with log|(T^k)'(point)| accumulated along its
/// branch.
struct OrbitNode {
  Complex point;
  double log_fwd_derivative = 0.0;
  std::int32_t depth = 0;
  std::uint32_t seed_index = 0;
};

/// True for nodes whose branch passed through an exact critical point.
inline bool is_degenerate(const OrbitNode& n) { return n.log_fwd_derivative <= kLogZeroFloor / 2; }

struct TreeOptions {
  int depth = 0;
  /// Per-level dedup grid size; 0 disables dedup.
  double dedup_cell = 0.0;
  /// Maximum node visits (nodes generated before dedup).
  std::size_t budget = 50'000'000;
  /// Nodes at distance d < critical_guard from a critical value are deduped
  /// on a grid refined by 2^-ceil(log2(critical_guard / d)); 0 disables.
  double critical_guard = 0.0;
  int threads = 1;
  PreimageOptions preimage;
};

/// Truncated backward orbit, stored level by level.
struct OrbitCloud {
  std::vector<OrbitNode> nodes;
  /// nodes of depth k are [level_offsets[k], level_offsets[k+1]).
  std::vector<std::size_t> level_offsets;
  std::vector<Complex> seeds;
  std::string seed_label;
  double seed_spacing = 0.0;
  int depth_max = 0;
  double dedup_cell = 0.0;
  /// Enumeration stopped early because the budget would be exceeded.
  bool truncated = false;
  std::size_t visits = 0;

  /// Number of completed levels (depth 0 included).
  int levels() const { return static_cast<int>(level_offsets.size()) - 1; }
  std::span<const OrbitNode> level(int k) const;
};

/// Breadth-first fiber expansion from every seed point up to opts.depth.
OrbitCloud backward_tree(const RationalMap& t, const PointCloud& seeds, const TreeOptions& opts);

/// Union over all depths with a final grid dedup at the tree's dedup cell
/// (exact duplicates only when the cell is 0). Inherits the seed spacing.
PointCloud orbital_cloud(const OrbitCloud& tree);

/// Points of the levels k in [from_depth, levels), deduplicated as above.
PointCloud orbital_cloud(const OrbitCloud& tree, int from_depth);

/// sum over depth-k nodes of |(T^k)'(x)|^-s. Single-seed trees only.
double level_sum(const OrbitCloud& tree, double s, int k);
/// log of level_sum, computed without overflow.
double log_level_sum(const OrbitCloud& tree, double s, int k);

struct ExponentEstimate {
  double value = 0.0;
  double uncertainty = 0.0;
};

/// Heuristic Fatou test: the forward orbit escapes, hits a pole, or settles
/// onto an attracting cycle of period <= 8 within `steps` iterations, while
/// an orbit started 1e-9 away stays within 1e-2 relative distance.
bool looks_fatou(const RationalMap& t, Complex z, int steps = 2000);

/// Geometric growth rate of L_k(s) over k in [K/2, K] (least-squares slope
/// of log L_k(s) against k).
double level_growth_rate(const OrbitCloud& tree, double s);

/// Convergence exponent of sum_k sum_{x in T^-k(z)} |(T^k)'(x)|^-s, found by
/// bisecting the zero of the growth rate on [s_lo, s_hi]. Uncertainty is the
/// half-width of the final bracket.
ExponentEstimate hz_exponent(const RationalMap& t, Complex z, int depth, double s_lo,
                             double s_hi, int iters, std::size_t budget = 50'000'000);

/// #{nodes : n log 2 <= log|(T^k)'| < (n + 1) log 2}.
std::size_t derivative_band_count(const OrbitCloud& tree, int n);

}  // namespace orbital
