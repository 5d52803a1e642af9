#include "orbital/algebra.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "orbital/errors.hpp"
#include "orbital/roots.hpp"

namespace orbital {

double safe_log_abs(Complex value) {
  const double a = std::abs(value);
  if (!(a >= kLogTiny)) return kLogZeroFloor;
  return std::log(a);
}

ComplexPoly::ComplexPoly() : coeffs_{Complex{}} {}

ComplexPoly::ComplexPoly(std::vector<Complex> coeffs) : coeffs_(std::move(coeffs)) {
  trim();
}

ComplexPoly ComplexPoly::constant(Complex c) { return ComplexPoly({c}); }

ComplexPoly ComplexPoly::monomial(Complex c, int n) {
  std::vector<Complex> v(static_cast<std::size_t>(n) + 1);
  v.back() = c;
  return ComplexPoly(std::move(v));
}

void ComplexPoly::trim() {
  while (coeffs_.size() > 1 && coeffs_.back() == Complex{}) coeffs_.pop_back();
  if (coeffs_.empty()) coeffs_.push_back(Complex{});
}

double ComplexPoly::max_abs_coeff() const {
  double m = 0.0;
  for (const auto& c : coeffs_) m = std::max(m, std::abs(c));
  return m;
}

Complex ComplexPoly::operator()(Complex z) const { return poly_eval(*this, z); }

ComplexPoly operator+(const ComplexPoly& a, const ComplexPoly& b) {
  std::vector<Complex> out(std::max(a.coeffs_.size(), b.coeffs_.size()));
  for (std::size_t i = 0; i < a.coeffs_.size(); ++i) out[i] += a.coeffs_[i];
  for (std::size_t i = 0; i < b.coeffs_.size(); ++i) out[i] += b.coeffs_[i];
  return ComplexPoly(std::move(out));
}

ComplexPoly operator-(const ComplexPoly& a, const ComplexPoly& b) {
  return a + Complex{-1.0, 0.0} * b;
}

ComplexPoly operator*(const ComplexPoly& a, const ComplexPoly& b) {
  std::vector<Complex> out(a.coeffs_.size() + b.coeffs_.size() - 1);
  for (std::size_t i = 0; i < a.coeffs_.size(); ++i)
    for (std::size_t j = 0; j < b.coeffs_.size(); ++j) out[i + j] += a.coeffs_[i] * b.coeffs_[j];
  return ComplexPoly(std::move(out));
}

ComplexPoly operator*(Complex s, const ComplexPoly& a) {
  std::vector<Complex> out(a.coeffs_);
  for (auto& c : out) c *= s;
  return ComplexPoly(std::move(out));
}

Complex poly_eval(const ComplexPoly& p, Complex z) {
  const auto c = p.coeffs();
  Complex acc = c.back();
  for (std::size_t i = c.size() - 1; i-- > 0;) acc = acc * z + c[i];
  return acc;
}

ComplexPoly poly_derivative(const ComplexPoly& p) {
  if (p.degree() == 0) return ComplexPoly();
  std::vector<Complex> out(static_cast<std::size_t>(p.degree()));
  for (int i = 1; i <= p.degree(); ++i) out[static_cast<std::size_t>(i - 1)] = static_cast<double>(i) * p[i];
  return ComplexPoly(std::move(out));
}

namespace {

// Determinant of the Sylvester matrix by Gaussian elimination with partial
// pivoting, with P and Q scaled to unit max coefficient first.
double normalized_resultant_abs(const ComplexPoly& p, const ComplexPoly& q) {
  const int m = p.degree();
  const int n = q.degree();
  if (m == 0 || n == 0) return 1.0;
  const int size = m + n;
  const double sp = p.max_abs_coeff();
  const double sq = q.max_abs_coeff();
  std::vector<Complex> a(static_cast<std::size_t>(size * size));
  auto at = [&](int r, int c) -> Complex& { return a[static_cast<std::size_t>(r * size + c)]; };
  // Rows hold coefficients highest degree first.
  for (int r = 0; r < n; ++r)
    for (int i = 0; i <= m; ++i) at(r, r + i) = p[m - i] / sp;
  for (int r = 0; r < m; ++r)
    for (int i = 0; i <= n; ++i) at(n + r, r + i) = q[n - i] / sq;
  double logdet = 0.0;
  for (int col = 0; col < size; ++col) {
    int piv = col;
    for (int r = col + 1; r < size; ++r)
      if (std::abs(at(r, col)) > std::abs(at(piv, col))) piv = r;
    if (std::abs(at(piv, col)) == 0.0) return 0.0;
    if (piv != col)
      for (int c = 0; c < size; ++c) std::swap(at(piv, c), at(col, c));
    logdet += std::log(std::abs(at(col, col)));
    for (int r = col + 1; r < size; ++r) {
      const Complex f = at(r, col) / at(col, col);
      if (f == Complex{}) continue;
      for (int c = col; c < size; ++c) at(r, c) -= f * at(col, c);
    }
  }
  return std::exp(logdet);
}

}  // namespace

RationalMap::RationalMap(ComplexPoly p, ComplexPoly q, MapTolerances tol)
    : p_(std::move(p)), q_(std::move(q)), tol_(tol) {
  if (q_.is_zero()) throw DegenerateError("rational map: Q is identically zero");
  degree_ = std::max(p_.degree(), q_.degree());
  if (degree_ < 2) {
    std::ostringstream os;
    os << "rational map: degree " << degree_ << " < 2";
    throw PreconditionError(os.str());
  }
  dnum_ = poly_derivative(p_) * q_ - p_ * poly_derivative(q_);
  resultant_ = normalized_resultant_abs(p_, q_);
}

RationalMap::RationalMap(ComplexPoly p, MapTolerances tol)
    : RationalMap(std::move(p), ComplexPoly::constant(1.0), tol) {}

bool RationalMap::is_pole(Complex z) const {
  const double bound = tol_.pole_rel * std::pow(1.0 + std::abs(z), q_.degree());
  return std::abs(q_(z)) <= bound;
}

Complex RationalMap::derivative(Complex z) const {
  const Complex qz = q_(z);
  return dnum_(z) / (qz * qz);
}

Complex map_eval(const RationalMap& t, Complex z) {
  if (t.is_pole(z)) {
    std::ostringstream os;
    os << "pole: |Q(z)| below tolerance at z = " << z;
    throw PoleError(os.str());
  }
  return t.p()(z) / t.q()(z);
}

std::vector<Complex> critical_points(const RationalMap& t, double root_tol) {
  const ComplexPoly& w = t.derivative_numerator();
  if (w.degree() == 0) return {};
  const RootSet rs = solve_polynomial(w, root_tol, 500);
  std::vector<Complex> out;
  for (const auto& r : rs.roots)
    for (int k = 0; k < r.multiplicity; ++k) out.push_back(r.value);
  return out;
}

std::vector<Complex> critical_values(const RationalMap& t, double root_tol) {
  std::vector<Complex> out;
  for (const Complex c : critical_points(t)) {
    if (t.is_pole(c)) continue;  // critical value at infinity
    const Complex v = map_eval(t, c);
    const bool seen = std::any_of(out.begin(), out.end(), [&](Complex u) {
      return std::abs(u - v) <= root_tol * (1.0 + std::abs(v));
    });
    if (!seen) out.push_back(v);
  }
  std::sort(out.begin(), out.end(), lex_less);
  return out;
}

IterateResult iterate_with_derivative(const RationalMap& t, Complex z, int n) {
  if (n < 0) throw PreconditionError("iterate_with_derivative: n < 0");
  IterateResult r{z, 0.0};
  for (int k = 0; k < n; ++k) {
    r.log_abs_derivative += safe_log_abs(t.derivative(r.point));
    r.point = map_eval(t, r.point);
    if (!(std::abs(r.point) <= t.tolerances().escape_radius)) {
      std::ostringstream os;
      os << "orbit escaped radius " << t.tolerances().escape_radius << " at step " << k + 1;
      throw EscapeError(os.str());
    }
  }
  return r;
}

}  // namespace orbital
