#include "rsband/polyalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <numbers>

#include "rsband/error.hpp"

namespace rsband {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

Eigen::VectorXcd strip_zeros(Eigen::VectorXcd c) {
  Eigen::Index n = c.size();
  while (n > 0 && c[n - 1] == Complex{}) --n;
  return c.head(n).eval();
}

}  // namespace

const char* to_string(Var v) { return v == Var::omega ? "omega" : "z"; }

// ---------------------------------------------------------------- UniPoly

UniPoly::UniPoly(Eigen::VectorXcd coeffs) : c_(strip_zeros(std::move(coeffs))) {}

UniPoly::UniPoly(std::initializer_list<Complex> coeffs) {
  Eigen::VectorXcd c(static_cast<Eigen::Index>(coeffs.size()));
  Eigen::Index i = 0;
  for (const auto& x : coeffs) c[i++] = x;
  c_ = strip_zeros(std::move(c));
}

UniPoly UniPoly::constant(Complex c) { return UniPoly{c}; }

UniPoly UniPoly::monomial(int power, Complex c) {
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(power + 1);
  v[power] = c;
  return UniPoly(std::move(v));
}

UniPoly UniPoly::from_roots(std::span<const Complex> roots) {
  UniPoly p = constant(1.0);
  for (const auto& r : roots) p = p * UniPoly{-r, 1.0};
  return p;
}

double UniPoly::max_abs_coeff() const { return is_zero() ? 0.0 : c_.cwiseAbs().maxCoeff(); }

UniPoly UniPoly::derivative() const {
  if (degree() < 1) return {};
  Eigen::VectorXcd d(degree());
  for (int k = 1; k <= degree(); ++k) d[k - 1] = static_cast<double>(k) * c_[k];
  return UniPoly(std::move(d));
}

UniPoly UniPoly::trimmed(double rel_tol) const {
  const double thr = rel_tol * max_abs_coeff();
  Eigen::Index n = c_.size();
  while (n > 0 && std::abs(c_[n - 1]) <= thr) --n;
  return UniPoly(c_.head(n).eval());
}

UniPoly UniPoly::scaled_argument(Complex scale) const {
  Eigen::VectorXcd c = c_;
  Complex s = 1.0;
  for (Eigen::Index k = 0; k < c.size(); ++k, s *= scale) c[k] *= s;
  return UniPoly(std::move(c));
}

UniPoly& UniPoly::operator+=(const UniPoly& rhs) {
  const Eigen::Index n = std::max(c_.size(), rhs.c_.size());
  Eigen::VectorXcd c = Eigen::VectorXcd::Zero(n);
  c.head(c_.size()) = c_;
  c.head(rhs.c_.size()) += rhs.c_;
  c_ = strip_zeros(std::move(c));
  return *this;
}

UniPoly& UniPoly::operator-=(const UniPoly& rhs) { return *this += rhs * Complex(-1.0); }

UniPoly& UniPoly::operator*=(Complex s) {
  c_ = strip_zeros(c_ * s);
  return *this;
}

UniPoly operator*(const UniPoly& a, const UniPoly& b) {
  if (a.is_zero() || b.is_zero()) return {};
  Eigen::VectorXcd c = Eigen::VectorXcd::Zero(a.c_.size() + b.c_.size() - 1);
  for (Eigen::Index i = 0; i < a.c_.size(); ++i)
    for (Eigen::Index j = 0; j < b.c_.size(); ++j) c[i + j] += a.c_[i] * b.c_[j];
  return UniPoly(std::move(c));
}

Complex eval(const UniPoly& p, Complex x) {
  Complex acc{};
  for (int k = p.degree(); k >= 0; --k) acc = acc * x + p[k];
  return acc;
}

double eval_scale(const UniPoly& p, Complex x) {
  const double ax = std::abs(x);
  double acc = 0.0;
  for (int k = p.degree(); k >= 0; --k) acc = acc * ax + std::abs(p[k]);
  return acc;
}

PolyDivision divide(const UniPoly& num, const UniPoly& den) {
  if (den.is_zero()) throw numerical_error("ZeroPolynomial", "division by the zero polynomial");
  const int n = num.degree();
  const int d = den.degree();
  if (n < d) return {UniPoly{}, num};
  Eigen::VectorXcd rem = num.coeffs();
  Eigen::VectorXcd quot = Eigen::VectorXcd::Zero(n - d + 1);
  const Complex lead = den.leading();
  for (int k = n - d; k >= 0; --k) {
    const Complex f = rem[k + d] / lead;
    quot[k] = f;
    for (int j = 0; j <= d; ++j) rem[k + j] -= f * den[j];
    rem[k + d] = 0.0;
  }
  return {UniPoly(std::move(quot)), UniPoly(rem.head(std::max(d, 0)).eval())};
}

UniPoly divide_exact(const UniPoly& num, const UniPoly& den, double rel_tol) {
  auto [q, r] = divide(num, den);
  if (r.max_abs_coeff() > rel_tol * std::max(num.max_abs_coeff(), 1e-300))
    throw numerical_error("NonExactDivision", "polynomial division left a nonzero remainder");
  return q;
}

void sort_canonical(std::vector<Complex>& xs) {
  std::sort(xs.begin(), xs.end(), [](Complex a, Complex b) { return std::abs(a) < std::abs(b); });
  auto arg_less = [](Complex a, Complex b) { return std::arg(a) < std::arg(b); };
  std::size_t start = 0;
  while (start < xs.size()) {
    std::size_t end = start + 1;
    while (end < xs.size() &&
           std::abs(xs[end]) - std::abs(xs[end - 1]) <= 1e-9 * std::max(std::abs(xs[end]), 1e-300))
      ++end;
    std::sort(xs.begin() + static_cast<std::ptrdiff_t>(start), xs.begin() + static_cast<std::ptrdiff_t>(end),
              arg_less);
    start = end;
  }
}

// ------------------------------------------------------------- all_roots

namespace {

// Initial guesses on the circles given by the upper convex hull of
// (k, log|c_k|); one circle per hull edge, as many points as its width.
std::vector<Complex> newton_polygon_guesses(const UniPoly& p) {
  const int n = p.degree();
  std::vector<int> idx;
  std::vector<double> lg;
  for (int k = 0; k <= n; ++k) {
    if (p[k] != Complex{}) {
      idx.push_back(k);
      lg.push_back(std::log(std::abs(p[k])));
    }
  }
  std::vector<int> hull;
  for (std::size_t t = 0; t < idx.size(); ++t) {
    while (hull.size() >= 2) {
      const int a = hull[hull.size() - 2];
      const int b = hull.back();
      const double cross = (idx[b] - idx[a]) * (lg[t] - lg[a]) - (lg[b] - lg[a]) * (idx[t] - idx[a]);
      if (cross >= 0) hull.pop_back();
      else break;
    }
    hull.push_back(static_cast<int>(t));
  }
  std::vector<Complex> guesses;
  guesses.reserve(n);
  const double offset = 0.7;
  for (std::size_t h = 0; h + 1 < hull.size(); ++h) {
    const int ka = idx[hull[h]];
    const int kb = idx[hull[h + 1]];
    const int width = kb - ka;
    const double radius = std::exp((lg[hull[h]] - lg[hull[h + 1]]) / width);
    for (int j = 0; j < width; ++j) {
      const double ang = 2.0 * std::numbers::pi * (j + 0.5 * h) / width + offset + 2.0 * std::numbers::pi * ka / n;
      guesses.push_back(std::polar(radius, ang));
    }
  }
  return guesses;
}

}  // namespace

std::vector<Complex> all_roots(const UniPoly& p, double tol) {
  if (p.is_zero()) throw numerical_error("ZeroPolynomial", "all_roots of the zero polynomial");
  if (p.degree() < 1) throw numerical_error("ZeroPolynomial", "all_roots needs degree >= 1");

  // Exact roots at the origin are split off first.
  int zeros = 0;
  while (p[zeros] == Complex{}) ++zeros;
  std::vector<Complex> roots(zeros, Complex{});
  UniPoly q(p.coeffs().tail(p.degree() + 1 - zeros).eval());
  const int n = q.degree();
  if (n == 0) {
    sort_canonical(roots);
    return roots;
  }
  if (n == 1) {
    roots.push_back(-q[0] / q[1]);
    sort_canonical(roots);
    return roots;
  }

  std::vector<Complex> z = newton_polygon_guesses(q);
  const UniPoly dq = q.derivative();
  std::vector<bool> done(n, false);
  const double stop = 4.0 * n * kEps;
  for (int iter = 0; iter < 2000; ++iter) {
    bool all_done = true;
    for (int i = 0; i < n; ++i) {
      if (done[i]) continue;
      const Complex pv = eval(q, z[i]);
      if (std::abs(pv) <= stop * eval_scale(q, z[i])) {
        done[i] = true;
        continue;
      }
      all_done = false;
      const Complex dv = eval(dq, z[i]);
      Complex w;
      if (dv == Complex{}) {
        w = Complex(1e-8, 1e-8) * (1.0 + std::abs(z[i]));
      } else {
        const Complex ratio = pv / dv;
        Complex s{};
        for (int j = 0; j < n; ++j)
          if (j != i) s += 1.0 / (z[i] - z[j]);
        w = ratio / (1.0 - ratio * s);
      }
      z[i] -= w;
      if (std::abs(w) <= kEps * std::abs(z[i])) done[i] = true;
    }
    if (all_done) break;
  }
  for (const auto& r : z) {
    if (!std::isfinite(r.real()) || !std::isfinite(r.imag()) ||
        std::abs(eval(q, r)) > tol * eval_scale(q, r))
      throw numerical_error("NonConvergence", "Aberth iteration did not reach the residual tolerance");
  }
  roots.insert(roots.end(), z.begin(), z.end());
  sort_canonical(roots);
  return roots;
}

std::vector<RootCluster> cluster_roots(std::span<const Complex> roots, double rel_tol) {
  double scale = 1.0;
  for (const auto& r : roots) scale = std::max(scale, std::abs(r));
  const double thr = rel_tol * scale;
  const std::size_t n = roots.size();
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t i) {
    while (parent[i] != i) i = parent[i] = parent[parent[i]];
    return i;
  };
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (std::abs(roots[i] - roots[j]) < thr) parent[find(i)] = find(j);
  std::vector<RootCluster> out;
  std::vector<std::size_t> rep_of(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t r = find(i);
    if (rep_of[r] == n) {
      rep_of[r] = out.size();
      out.push_back({roots[i], 0});
      out.back().center = 0.0;
    }
    auto& c = out[rep_of[r]];
    c.center += roots[i];
    c.multiplicity += 1;
  }
  for (auto& c : out) c.center /= static_cast<double>(c.multiplicity);
  return out;
}

// ----------------------------------------------------------------- BiPoly

BiPoly::BiPoly(Eigen::MatrixXcd coeffs, int z_shift) : c_(std::move(coeffs)), z_shift_(z_shift) { shrink(); }

BiPoly BiPoly::from_omega_poly(const UniPoly& p) {
  Eigen::MatrixXcd c = Eigen::MatrixXcd::Zero(p.degree() + 1, 1);
  if (!p.is_zero()) c.col(0) = p.coeffs();
  return BiPoly(std::move(c));
}

BiPoly BiPoly::from_z_poly(const UniPoly& p) {
  Eigen::MatrixXcd c = Eigen::MatrixXcd::Zero(1, p.degree() + 1);
  if (!p.is_zero()) c.row(0) = p.coeffs().transpose();
  return BiPoly(std::move(c));
}

void BiPoly::shrink() {
  Eigen::Index rows = c_.rows();
  while (rows > 0 && (c_.row(rows - 1).array() == Complex{}).all()) --rows;
  Eigen::Index cols = c_.cols();
  while (cols > 0 && rows > 0 && (c_.col(cols - 1).head(rows).array() == Complex{}).all()) --cols;
  if (rows == 0 || cols == 0) {
    c_.resize(0, 0);
    return;
  }
  c_ = c_.topLeftCorner(rows, cols).eval();
}

int BiPoly::degree(Var v) const { return v == Var::omega ? omega_degree() : z_degree(); }

Complex BiPoly::coeff(int i, int j) const {
  if (i < 0 || j < 0 || i >= c_.rows() || j >= c_.cols()) return {};
  return c_(i, j);
}

UniPoly BiPoly::coefficient(Var v, int k) const {
  if (k < 0 || k > degree(v) || is_zero()) return {};
  if (v == Var::omega) return UniPoly(c_.row(k).transpose().eval());
  return UniPoly(c_.col(k).eval());
}

UniPoly BiPoly::restrict(Var fixed, Complex value) const {
  if (is_zero()) return {};
  if (fixed == Var::omega) {
    Eigen::VectorXcd out = Eigen::VectorXcd::Zero(c_.cols());
    Complex pw = 1.0;
    for (Eigen::Index i = 0; i < c_.rows(); ++i, pw *= value) out += pw * c_.row(i).transpose();
    return UniPoly(std::move(out));
  }
  Eigen::VectorXcd out = Eigen::VectorXcd::Zero(c_.rows());
  Complex pw = 1.0;
  for (Eigen::Index j = 0; j < c_.cols(); ++j, pw *= value) out += pw * c_.col(j);
  return UniPoly(std::move(out));
}

Complex BiPoly::operator()(Complex omega, Complex z) const { return eval(restrict(Var::omega, omega), z); }

BiPoly BiPoly::derivative(Var v) const {
  if (is_zero() || degree(v) < 1) return {};
  if (v == Var::omega) {
    Eigen::MatrixXcd d(c_.rows() - 1, c_.cols());
    for (Eigen::Index i = 1; i < c_.rows(); ++i) d.row(i - 1) = static_cast<double>(i) * c_.row(i);
    return BiPoly(std::move(d), z_shift_);
  }
  Eigen::MatrixXcd d(c_.rows(), c_.cols() - 1);
  for (Eigen::Index j = 1; j < c_.cols(); ++j) d.col(j - 1) = static_cast<double>(j) * c_.col(j);
  return BiPoly(std::move(d), z_shift_);
}

double BiPoly::max_abs_coeff() const { return is_zero() ? 0.0 : c_.cwiseAbs().maxCoeff(); }

BiPoly BiPoly::trimmed(double rel_tol) const {
  const double thr = rel_tol * max_abs_coeff();
  Eigen::MatrixXcd c = c_;
  for (Eigen::Index i = 0; i < c.rows(); ++i)
    for (Eigen::Index j = 0; j < c.cols(); ++j)
      if (std::abs(c(i, j)) <= thr) c(i, j) = 0.0;
  return BiPoly(std::move(c), z_shift_);
}

void BiPoly::require_curve() const {
  if (is_zero() || omega_degree() < 1 || z_degree() < 1)
    throw model_error("ModelInvalid", "characteristic polynomial must have positive degree in both omega and z");
}

BiPoly& BiPoly::operator+=(const BiPoly& rhs) {
  const Eigen::Index r = std::max(c_.rows(), rhs.c_.rows());
  const Eigen::Index c = std::max(c_.cols(), rhs.c_.cols());
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(r, c);
  m.topLeftCorner(c_.rows(), c_.cols()) = c_;
  m.topLeftCorner(rhs.c_.rows(), rhs.c_.cols()) += rhs.c_;
  c_ = std::move(m);
  shrink();
  return *this;
}

BiPoly& BiPoly::operator-=(const BiPoly& rhs) { return *this += rhs * Complex(-1.0); }

BiPoly& BiPoly::operator*=(Complex s) {
  c_ *= s;
  shrink();
  return *this;
}

BiPoly operator*(const BiPoly& a, const BiPoly& b) {
  if (a.is_zero() || b.is_zero()) return {};
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(a.c_.rows() + b.c_.rows() - 1, a.c_.cols() + b.c_.cols() - 1);
  for (Eigen::Index i = 0; i < a.c_.rows(); ++i)
    for (Eigen::Index j = 0; j < a.c_.cols(); ++j) {
      if (a.c_(i, j) == Complex{}) continue;
      m.block(i, j, b.c_.rows(), b.c_.cols()) += a.c_(i, j) * b.c_;
    }
  return BiPoly(std::move(m), a.z_shift_ + b.z_shift_);
}

// ------------------------------------------------------------ resultants

namespace {

// Coefficients padded to a formal degree (leading entries may vanish).
Complex sylvester_determinant(const Eigen::VectorXcd& p, const Eigen::VectorXcd& q) {
  const Eigen::Index m = p.size() - 1;
  const Eigen::Index n = q.size() - 1;
  const Eigen::Index size = m + n;
  if (size == 0) return 1.0;
  Eigen::MatrixXcd s = Eigen::MatrixXcd::Zero(size, size);
  for (Eigen::Index row = 0; row < n; ++row)
    for (Eigen::Index k = 0; k <= m; ++k) s(row, row + k) = p[m - k];
  for (Eigen::Index row = 0; row < m; ++row)
    for (Eigen::Index k = 0; k <= n; ++k) s(n + row, row + k) = q[n - k];
  return s.partialPivLu().determinant();
}

Eigen::VectorXcd formal_restrict(const BiPoly& f, Var eliminate, int formal_degree, Complex value) {
  Eigen::VectorXcd out = Eigen::VectorXcd::Zero(formal_degree + 1);
  for (int k = 0; k <= std::min(formal_degree, f.degree(eliminate)); ++k)
    out[k] = eval(f.coefficient(eliminate, k), value);
  return out;
}

}  // namespace

Complex resultant(const UniPoly& p, const UniPoly& q) {
  if (p.is_zero() || q.is_zero()) return 0.0;
  return sylvester_determinant(p.coeffs(), q.coeffs());
}

UniPoly resultant(const BiPoly& p, const BiPoly& q, Var eliminate) {
  const int m = p.degree(eliminate);
  const int n = q.degree(eliminate);
  if (p.is_zero() || q.is_zero() || m < 1 || n < 1)
    throw numerical_error("DegenerateLeadingCoefficient",
                          "resultant needs positive degree in the eliminated variable for both inputs");
  const Var keep = other(eliminate);
  const int dp = std::max(p.degree(keep), 0);
  const int dq = std::max(q.degree(keep), 0);
  const int bound = n * dp + m * dq;
  const int samples = bound + 1;
  Eigen::VectorXcd values(samples);
  for (int k = 0; k < samples; ++k) {
    const Complex y = std::polar(1.0, 2.0 * std::numbers::pi * k / samples);
    values[k] = sylvester_determinant(formal_restrict(p, eliminate, m, y), formal_restrict(q, eliminate, n, y));
  }
  Eigen::VectorXcd coeffs(samples);
  for (int j = 0; j < samples; ++j) {
    Complex acc{};
    for (int k = 0; k < samples; ++k)
      acc += values[k] * std::polar(1.0, -2.0 * std::numbers::pi * static_cast<double>(j) * k / samples);
    coeffs[j] = acc / static_cast<double>(samples);
  }
  // Round-off in vanishing coefficients is removed relative to the largest one.
  const double thr = 1e-13 * coeffs.cwiseAbs().maxCoeff();
  for (auto& c : coeffs)
    if (std::abs(c) <= thr) c = 0.0;
  return UniPoly(std::move(coeffs)).trimmed(1e-12);
}

double discriminant_resultant_factor(int degree) {
  return ((degree * (degree - 1) / 2) % 2 == 0) ? 1.0 : -1.0;
}

Complex discriminant(const UniPoly& p) {
  const int n = p.degree();
  if (n < 1) throw numerical_error("DegenerateLeadingCoefficient", "discriminant needs degree >= 1");
  return discriminant_resultant_factor(n) * resultant(p, p.derivative()) / p.leading();
}

UniPoly discriminant(const BiPoly& p, Var wrt) {
  const int n = p.degree(wrt);
  if (n < 2) throw numerical_error("DegenerateLeadingCoefficient", "discriminant needs degree >= 2");
  const UniPoly res = resultant(p, p.derivative(wrt), wrt);
  const UniPoly lead = p.leading(wrt).trimmed(1e-14);
  return (divide_exact(res, lead) * discriminant_resultant_factor(n)).trimmed(1e-12);
}

}  // namespace rsband
