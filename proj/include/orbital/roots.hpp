#pragma once

#include <vector>

#include "orbital/algebra.hpp"

namespace orbital {

struct Root {
  Complex value;
  int multiplicity = 1;
};

/// All roots of one polynomial, sorted lexicographically by (re, im).
struct RootSet {
  std::vector<Root> roots;
  /// |p(root)| after polishing, parallel to roots.
  std::vector<double> residuals;

  int total_multiplicity() const;
  std::size_t size() const { return roots.size(); }
};

struct RootOptions {
  /// Relative step size at which the simultaneous iteration stops.
  double tol = 1e-14;
  int max_iter = 500;
  /// Roots closer than cluster_rel * (Cauchy radius) are merged.
  double cluster_rel = 1e-7;
  /// Largest accepted backward error |p(r)| / sum |a_i| |r|^i.
  double acceptance_residual = 1e-9;
};

/// Unique positive root R of |a_n| x^n = sum_{i<n} |a_i| x^i; every root of p
/// satisfies |z| <= R.
double cauchy_root_radius(const ComplexPoly& p);

/// All complex roots by Aberth-Ehrlich simultaneous iteration, started on the
/// Cauchy-radius circle at a fixed angular offset, followed by Newton
/// polishing and cluster merging. Exact zero low-order coefficients are split
/// off as an exact root at 0.
/// Throws DegenerateError (deg < 1 or negligible leading coefficient) and
/// RootSolveError (no convergence, or residual above acceptance).
RootSet solve_polynomial(const ComplexPoly& p, const RootOptions& opts);
RootSet solve_polynomial(const ComplexPoly& p, double tol, int max_iter);

struct PreimageOptions {
  RootOptions roots;
  /// Forward check |T(r) - w| <= forward_tol * (1 + |w|).
  double forward_tol = 1e-8;
};

/// The fiber T^{-1}(w): roots of P - wQ with multiplicity.
/// Throws FiberDegreeError when deg(P - wQ) < deg T, DegenerateError when
/// P - wQ vanishes identically, RootSolveError when the forward check fails.
RootSet preimages(const RationalMap& t, Complex w, const PreimageOptions& opts = {});
RootSet preimages(const RationalMap& t, Complex w, double tol);

/// Fiber over w = anchor + offset, solved as (P - anchor Q) - offset Q.
/// Offsets far below double resolution near the anchor are kept.
RootSet preimages_near(const RationalMap& t, Complex anchor, Complex offset, const PreimageOptions& opts = {});

}  // namespace orbital
