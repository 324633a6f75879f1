#pragma once

#include <complex>
#include <initializer_list>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace rsband {

using Complex = std::complex<double>;

/// Variable tag for the two coordinates of the characteristic curve f(omega, z).
enum class Var { omega, z };

inline Var other(Var v) { return v == Var::omega ? Var::z : Var::omega; }
const char* to_string(Var v);

/// Dense univariate polynomial with complex coefficients, constant term first.
///
/// The constructor strips exactly-zero leading coefficients, so `degree()` is
/// the highest index with a nonzero coefficient. Numerically produced
/// polynomials should be passed through `trimmed()` to also drop coefficients
/// that are zero up to rounding. The zero polynomial has degree -1.
class UniPoly {
 public:
  UniPoly() = default;
  explicit UniPoly(Eigen::VectorXcd coeffs);
  UniPoly(std::initializer_list<Complex> coeffs);

  static UniPoly constant(Complex c);
  static UniPoly monomial(int power, Complex c = 1.0);
  /// Monic polynomial with the given roots.
  static UniPoly from_roots(std::span<const Complex> roots);

  int degree() const { return static_cast<int>(c_.size()) - 1; }
  bool is_zero() const { return c_.size() == 0; }
  const Eigen::VectorXcd& coeffs() const { return c_; }
  /// Coefficient of x^i; zero outside the stored range.
  Complex operator[](int i) const { return (i >= 0 && i < c_.size()) ? c_[i] : Complex{}; }
  Complex leading() const { return is_zero() ? Complex{} : c_[c_.size() - 1]; }
  double max_abs_coeff() const;

  UniPoly derivative() const;
  /// Drops leading coefficients with |c| <= rel_tol * max|c|.
  UniPoly trimmed(double rel_tol = 1e-12) const;
  /// p(scale * x)
  UniPoly scaled_argument(Complex scale) const;

  UniPoly& operator+=(const UniPoly& rhs);
  UniPoly& operator-=(const UniPoly& rhs);
  UniPoly& operator*=(Complex s);

  friend UniPoly operator+(UniPoly a, const UniPoly& b) { return a += b; }
  friend UniPoly operator-(UniPoly a, const UniPoly& b) { return a -= b; }
  friend UniPoly operator*(UniPoly a, Complex s) { return a *= s; }
  friend UniPoly operator*(Complex s, UniPoly a) { return a *= s; }
  friend UniPoly operator*(const UniPoly& a, const UniPoly& b);
  friend UniPoly operator-(const UniPoly& a) { return a * Complex(-1.0); }

 private:
  Eigen::VectorXcd c_;
};

/// Horner evaluation.
Complex eval(const UniPoly& p, Complex x);
/// Sum of |c_k| |x|^k, the natural scale for backward-error residuals.
double eval_scale(const UniPoly& p, Complex x);

struct PolyDivision {
  UniPoly quotient;
  UniPoly remainder;
};

PolyDivision divide(const UniPoly& num, const UniPoly& den);

/// Quotient of an exact division; throws NonExactDivision when the remainder
/// exceeds `rel_tol` relative to the dividend.
UniPoly divide_exact(const UniPoly& num, const UniPoly& den, double rel_tol = 1e-7);

/// Strict (|x|, arg x) ordering with ties in modulus resolved by argument.
/// Moduli closer than 1e-9 relative are treated as ties.
void sort_canonical(std::vector<Complex>& xs);

/// All `degree` roots (with multiplicity) by Ehrlich-Aberth simultaneous
/// iteration, started from Newton-polygon circles. Each returned root has
/// backward error |p(x)| / eval_scale(p, x) < tol. Sorted canonically.
std::vector<Complex> all_roots(const UniPoly& p, double tol = 1e-10);

struct RootCluster {
  Complex center;
  int multiplicity = 1;
};

/// Groups roots closer than rel_tol * max(1, max|root|).
std::vector<RootCluster> cluster_roots(std::span<const Complex> roots, double rel_tol = 1e-7);

/// Bivariate polynomial f(omega, z) = sum c(i, j) omega^i z^j.
///
/// Rows index powers of omega and columns powers of z. `z_shift` records the
/// power of z that was multiplied in to clear negative (Laurent) powers.
class BiPoly {
 public:
  BiPoly() = default;
  explicit BiPoly(Eigen::MatrixXcd coeffs, int z_shift = 0);

  static BiPoly from_omega_poly(const UniPoly& p);  // p(omega)
  static BiPoly from_z_poly(const UniPoly& p);      // p(z)

  int degree(Var v) const;
  int omega_degree() const { return static_cast<int>(c_.rows()) - 1; }
  int z_degree() const { return static_cast<int>(c_.cols()) - 1; }
  bool is_zero() const { return c_.size() == 0; }
  int z_shift() const { return z_shift_; }
  void set_z_shift(int s) { z_shift_ = s; }

  const Eigen::MatrixXcd& coeffs() const { return c_; }
  Complex coeff(int omega_power, int z_power) const;

  /// Coefficient of v^k as a polynomial in the other variable.
  UniPoly coefficient(Var v, int k) const;
  /// Leading coefficient in v as a polynomial in the other variable; for
  /// v = omega this is D_r(z).
  UniPoly leading(Var v) const { return coefficient(v, degree(v)); }
  /// Restriction to a fixed value of `fixed`: a polynomial in the other variable.
  UniPoly restrict(Var fixed, Complex value) const;

  Complex operator()(Complex omega, Complex z) const;

  BiPoly derivative(Var v) const;
  /// Drops rows/columns whose entries are all <= rel_tol * max|c|, and zeroes
  /// individual entries below that threshold.
  BiPoly trimmed(double rel_tol) const;
  double max_abs_coeff() const;

  /// Throws ModelInvalid unless r >= 1 and u >= 1.
  void require_curve() const;

  BiPoly& operator+=(const BiPoly& rhs);
  BiPoly& operator-=(const BiPoly& rhs);
  BiPoly& operator*=(Complex s);
  friend BiPoly operator+(BiPoly a, const BiPoly& b) { return a += b; }
  friend BiPoly operator-(BiPoly a, const BiPoly& b) { return a -= b; }
  friend BiPoly operator*(BiPoly a, Complex s) { return a *= s; }
  friend BiPoly operator*(const BiPoly& a, const BiPoly& b);

 private:
  void shrink();
  Eigen::MatrixXcd c_;
  int z_shift_ = 0;
};

/// Sylvester resultant of two univariate polynomials (partial-pivot LU).
Complex resultant(const UniPoly& p, const UniPoly& q);

/// Res_v(p, q) as a polynomial in the remaining variable. The Sylvester
/// determinant is evaluated at roots of unity and interpolated back, which
/// respects the bound deg <= m*deg(q-coeffs) + n*deg(p-coeffs).
UniPoly resultant(const BiPoly& p, const BiPoly& q, Var eliminate);

/// Constant relating the two discriminant conventions for degree n:
/// disc = factor * Res(p, p') / lead, factor = (-1)^{n(n-1)/2}.
double discriminant_resultant_factor(int degree);

/// lead^{2n-2} prod_{i<j} (x_i - x_j)^2 for a univariate polynomial.
Complex discriminant(const UniPoly& p);

/// Discriminant of p with respect to `wrt`, as a polynomial in the other
/// variable, normalized to lead^{2n-2} prod_{i<j} (x_i - x_j)^2.
UniPoly discriminant(const BiPoly& p, Var wrt);

}  // namespace rsband
