#include "orbital/roots.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "orbital/errors.hpp"

namespace orbital {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
// Fixed angular offset of the starting circle; breaks the symmetry of
// real-coefficient inputs.
constexpr double kStartAngle = 0.4;

struct Eval {
  Complex value;
  Complex deriv;
  double magnitude;  // sum |a_i| |z|^i
};

Eval horner(std::span<const Complex> c, Complex z) {
  const double az = std::abs(z);
  Complex v = c.back();
  Complex d{};
  double m = std::abs(c.back());
  for (std::size_t i = c.size() - 1; i-- > 0;) {
    d = d * z + v;
    v = v * z + c[i];
    m = m * az + std::abs(c[i]);
  }
  return {v, d, m};
}

double backward_error(std::span<const Complex> c, Complex z) {
  const Eval e = horner(c, z);
  if (e.magnitude == 0.0) return 0.0;
  return std::abs(e.value) / e.magnitude;
}

}  // namespace

int RootSet::total_multiplicity() const {
  int n = 0;
  for (const auto& r : roots) n += r.multiplicity;
  return n;
}

double cauchy_root_radius(const ComplexPoly& p) {
  const int n = p.degree();
  if (n < 1) return 0.0;
  const double lead = std::abs(p.leading());
  std::vector<double> a(static_cast<std::size_t>(n));
  bool all_zero = true;
  for (int i = 0; i < n; ++i) {
    a[static_cast<std::size_t>(i)] = std::abs(p[i]) / lead;
    all_zero = all_zero && a[static_cast<std::size_t>(i)] == 0.0;
  }
  if (all_zero) return 0.0;
  // f(x) = x^n - sum a_i x^i has exactly one positive root; it is below the
  // Fujiwara-type bound 2 max (a_i)^{1/(n-i)}.
  double hi = 0.0;
  for (int i = 0; i < n; ++i)
    hi = std::max(hi, 2.0 * std::pow(a[static_cast<std::size_t>(i)], 1.0 / (n - i)));
  // Work with g(x) = f(x) / x^n = 1 - sum a_i x^{i-n}, increasing in x.
  auto g = [&](double x) {
    double s = 0.0;
    for (int i = 0; i < n; ++i) s += a[static_cast<std::size_t>(i)] * std::pow(x, i - n);
    return 1.0 - s;
  };
  double lo = hi;
  while (g(lo) > 0.0 && lo > 0.0) lo *= 0.5;
  for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    (g(mid) > 0.0 ? hi : lo) = mid;
  }
  return hi;
}

RootSet solve_polynomial(const ComplexPoly& p, double tol, int max_iter) {
  RootOptions opts;
  opts.tol = tol;
  opts.max_iter = max_iter;
  return solve_polynomial(p, opts);
}

RootSet solve_polynomial(const ComplexPoly& p, const RootOptions& opts) {
  if (p.degree() < 1) throw DegenerateError("solve_polynomial: degree < 1");
  if (std::abs(p.leading()) <= 1e-14 * p.max_abs_coeff())
    throw DegenerateError("solve_polynomial: negligible leading coefficient");

  const auto full = p.coeffs();
  std::size_t zeros = 0;
  while (full[zeros] == Complex{}) ++zeros;
  // Monic reduced polynomial with the exact zero roots divided out.
  std::vector<Complex> c(full.begin() + static_cast<std::ptrdiff_t>(zeros), full.end());
  const Complex lead = c.back();
  for (auto& x : c) x /= lead;
  const int n = static_cast<int>(c.size()) - 1;

  const double radius = cauchy_root_radius(ComplexPoly(c));
  std::vector<Complex> z(static_cast<std::size_t>(n));

  if (n == 1) {
    z[0] = -c[0];
  } else if (n > 1) {
    for (int k = 0; k < n; ++k)
      z[static_cast<std::size_t>(k)] =
          std::polar(radius, 2.0 * std::numbers::pi * k / n + kStartAngle);
    std::vector<bool> done(static_cast<std::size_t>(n), false);
    const double stop_backward = 4.0 * kEps * n;
    int remaining = n;
    for (int it = 0; it < opts.max_iter && remaining > 0; ++it) {
      for (std::size_t k = 0; k < z.size(); ++k) {
        if (done[k]) continue;
        const Eval e = horner(c, z[k]);
        if (std::abs(e.value) <= stop_backward * e.magnitude) {
          done[k] = true;
          --remaining;
          continue;
        }
        Complex repulsion{};
        for (std::size_t j = 0; j < z.size(); ++j)
          if (j != k) repulsion += 1.0 / (z[k] - z[j]);
        const Complex ratio = e.value / e.deriv;
        Complex step = ratio / (1.0 - ratio * repulsion);
        if (!std::isfinite(step.real()) || !std::isfinite(step.imag()))
          step = std::polar(1e-3 * (radius + std::abs(z[k])), 1.0 + static_cast<double>(k));
        z[k] -= step;
        if (std::abs(step) <= opts.tol * std::abs(z[k])) {
          done[k] = true;
          --remaining;
        }
      }
    }
    if (remaining > 0) {
      std::ostringstream os;
      os << "solve_polynomial: no convergence within " << opts.max_iter
         << " iterations (degree " << p.degree() << ")";
      throw RootSolveError(os.str());
    }
    // Newton polishing, kept only when the residual drops.
    for (auto& r : z) {
      for (int it = 0; it < 3; ++it) {
        const Eval e = horner(c, r);
        if (e.deriv == Complex{}) break;
        const Complex cand = r - e.value / e.deriv;
        if (std::abs(horner(c, cand).value) < std::abs(e.value))
          r = cand;
        else
          break;
      }
    }
  }

  for (std::size_t k = 0; k < zeros; ++k) z.push_back(Complex{});
  std::sort(z.begin(), z.end(), lex_less);

  // Single-linkage clustering.
  const double merge = opts.cluster_rel * radius;
  std::vector<int> label(z.size(), -1);
  int clusters = 0;
  for (std::size_t i = 0; i < z.size(); ++i) {
    if (label[i] >= 0) continue;
    label[i] = clusters;
    std::vector<std::size_t> stack{i};
    while (!stack.empty()) {
      const std::size_t a = stack.back();
      stack.pop_back();
      for (std::size_t b = 0; b < z.size(); ++b)
        if (label[b] < 0 && std::abs(z[a] - z[b]) <= merge) {
          label[b] = clusters;
          stack.push_back(b);
        }
    }
    ++clusters;
  }

  RootSet out;
  for (int cl = 0; cl < clusters; ++cl) {
    Complex sum{};
    int mult = 0;
    bool has_exact_zero = false;
    for (std::size_t i = 0; i < z.size(); ++i)
      if (label[i] == cl) {
        sum += z[i];
        ++mult;
        has_exact_zero = has_exact_zero || (zeros > 0 && z[i] == Complex{});
      }
    const Complex value = has_exact_zero ? Complex{} : sum / static_cast<double>(mult);
    out.roots.push_back({value, mult});
  }
  std::sort(out.roots.begin(), out.roots.end(),
            [](const Root& a, const Root& b) { return lex_less(a.value, b.value); });
  for (const auto& r : out.roots) {
    out.residuals.push_back(std::abs(poly_eval(p, r.value)));
    const double be = backward_error(full, r.value);
    if (!(be <= opts.acceptance_residual)) {
      std::ostringstream os;
      os << "solve_polynomial: backward error " << be << " above acceptance at root " << r.value;
      throw RootSolveError(os.str());
    }
  }
  return out;
}

RootSet preimages(const RationalMap& t, Complex w, double tol) {
  PreimageOptions opts;
  opts.forward_tol = tol;
  return preimages(t, w, opts);
}

namespace {

void check_fiber(const RationalMap& t, const ComplexPoly& fiber, Complex w) {
  if (fiber.is_zero()) throw DegenerateError("preimages: P - wQ vanishes identically");
  if (fiber.degree() < t.degree() ||
      std::abs(fiber.leading()) <= 1e-14 * fiber.max_abs_coeff()) {
    std::ostringstream os;
    os << "preimages: fiber over " << w << " meets infinity";
    throw FiberDegreeError(os.str());
  }
}

}  // namespace

RootSet preimages(const RationalMap& t, Complex w, const PreimageOptions& opts) {
  return preimages_near(t, Complex{}, w, opts);
}

RootSet preimages_near(const RationalMap& t, Complex anchor, Complex offset, const PreimageOptions& opts) {
  const ComplexPoly shifted = anchor == Complex{} ? t.p() : t.p() - anchor * t.q();
  const ComplexPoly fiber = shifted - offset * t.q();
  check_fiber(t, fiber, anchor + offset);
  RootSet rs = solve_polynomial(fiber, opts.roots);
  const double bound = opts.forward_tol * (1.0 + std::abs(anchor + offset));
  for (const auto& r : rs.roots) {
    if (t.is_pole(r.value)) throw PoleError("preimages: root on a pole");
    const Complex back = poly_eval(shifted, r.value) / poly_eval(t.q(), r.value);
    if (!(std::abs(back - offset) <= bound)) {
      std::ostringstream os;
      os << "preimages: forward check failed, |T(r) - w| = " << std::abs(back - offset);
      throw RootSolveError(os.str());
    }
  }
  return rs;
}

}  // namespace orbital
