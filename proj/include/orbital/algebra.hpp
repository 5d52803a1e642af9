#pragma once

#include <complex>
#include <span>
#include <vector>

namespace orbital {

using Complex = std::complex<double>;

/// log|x| reported for |x| below kLogTiny. Branches through exact critical
/// points carry this value instead of -inf.
inline constexpr double kLogZeroFloor = -700.0;
inline constexpr double kLogTiny = 1e-300;

double safe_log_abs(Complex value);

/// Lexicographic (re, im) order.
inline bool lex_less(Complex a, Complex b) {
  return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
}

/// Dense polynomial with complex coefficients, lowest degree first.
/// Trailing exact zeros are trimmed; the zero polynomial is stored as {0}.
class ComplexPoly {
 public:
  ComplexPoly();
  explicit ComplexPoly(std::vector<Complex> coeffs);

  static ComplexPoly constant(Complex c);
  /// c * z^n
  static ComplexPoly monomial(Complex c, int n);

  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
  bool is_zero() const { return coeffs_.size() == 1 && coeffs_[0] == Complex{}; }
  std::span<const Complex> coeffs() const { return coeffs_; }
  Complex operator[](int i) const { return coeffs_[static_cast<std::size_t>(i)]; }
  Complex leading() const { return coeffs_.back(); }
  double max_abs_coeff() const;

  Complex operator()(Complex z) const;

  friend ComplexPoly operator+(const ComplexPoly& a, const ComplexPoly& b);
  friend ComplexPoly operator-(const ComplexPoly& a, const ComplexPoly& b);
  friend ComplexPoly operator*(const ComplexPoly& a, const ComplexPoly& b);
  friend ComplexPoly operator*(Complex s, const ComplexPoly& a);
  friend bool operator==(const ComplexPoly& a, const ComplexPoly& b) = default;

 private:
  void trim();
  std::vector<Complex> coeffs_;
};

/// Horner evaluation. Overflow propagates as inf/nan.
Complex poly_eval(const ComplexPoly& p, Complex z);

/// Coefficient-wise derivative; a constant maps to the zero polynomial {0}.
ComplexPoly poly_derivative(const ComplexPoly& p);

struct MapTolerances {
  /// Pole when |Q(z)| <= pole_rel * (1 + |z|)^deg Q.
  double pole_rel = 1e-12;
  double escape_radius = 1e6;
  /// Normalised resultant below this triggers the coprimality warning.
  double coprime_floor = 1e-8;
};

/// T = P / Q with degree max(deg P, deg Q) >= 2. Immutable after construction.
class RationalMap {
 public:
  RationalMap(ComplexPoly p, ComplexPoly q, MapTolerances tol = {});
  /// Polynomial map (Q = 1).
  explicit RationalMap(ComplexPoly p, MapTolerances tol = {});

  const ComplexPoly& p() const { return p_; }
  const ComplexPoly& q() const { return q_; }
  int degree() const { return degree_; }
  bool is_polynomial() const { return q_.degree() == 0; }
  const MapTolerances& tolerances() const { return tol_; }

  /// P'Q - PQ'. Its finite roots are the critical points.
  const ComplexPoly& derivative_numerator() const { return dnum_; }

  /// Normalised |Res(P, Q)|; 1 for polynomial maps.
  double normalized_resultant() const { return resultant_; }
  bool coprimality_warning() const { return resultant_ < tol_.coprime_floor; }

  bool is_pole(Complex z) const;
  Complex derivative(Complex z) const;

 private:
  ComplexPoly p_;
  ComplexPoly q_;
  ComplexPoly dnum_;
  int degree_ = 0;
  double resultant_ = 1.0;
  MapTolerances tol_;
};

/// P(z)/Q(z); throws PoleError inside the pole tolerance.
Complex map_eval(const RationalMap& t, Complex z);

/// Finite critical points with multiplicity (the point at infinity is never
/// returned). Each entry is repeated according to its multiplicity.
std::vector<Complex> critical_points(const RationalMap& t, double root_tol = 1e-14);

/// Finite images of the critical points, deduplicated within
/// root_tol * (1 + |v|). Critical points at poles are skipped.
std::vector<Complex> critical_values(const RationalMap& t, double root_tol = 1e-10);

struct IterateResult {
  Complex point;
  double log_abs_derivative = 0.0;
};

/// T^n(z) together with sum_{k<n} log|T'(T^k z)| (floored per factor).
/// Throws PoleError or EscapeError.
IterateResult iterate_with_derivative(const RationalMap& t, Complex z, int n);

}  // namespace orbital
