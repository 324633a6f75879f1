#include "rsband/design.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <tuple>

#include <Eigen/Dense>

#include "rsband/error.hpp"

namespace rsband {

namespace {

using Vec6 = Eigen::Matrix<Complex, 6, 1>;
using Mat6 = Eigen::Matrix<Complex, 6, 6>;
using Poly7 = std::array<Complex, 7>;  // polynomial in omega, degree <= 6

Poly7 mul(const Poly7& a, const Poly7& b) {
  Poly7 out{};
  for (int i = 0; i < 7; ++i) {
    if (a[i] == Complex{}) continue;
    for (int j = 0; i + j < 7; ++j) out[i + j] += a[i] * b[j];
  }
  return out;
}

Poly7 lin(Complex c0, Complex c1 = 0.0, Complex c2 = 0.0) { return {c0, c1, c2, 0.0, 0.0, 0.0, 0.0}; }

Poly7 axpy(Complex s, const Poly7& a, Poly7 acc) {
  for (int i = 0; i < 7; ++i) acc[i] += s * a[i];
  return acc;
}

Poly7 cubic_discriminant(const TwoBandCoefficients& c) {
  const Poly7 c3 = lin(c.B[3]);
  const Poly7 c2 = lin(c.B[2], c.A[2]);
  const Poly7 c1 = lin(c.B[1], c.A[1], 1.0);
  const Poly7 c0 = lin(c.B[0], c.A[0]);
  const Poly7 c1c1 = mul(c1, c1);
  const Poly7 c2c2 = mul(c2, c2);
  Poly7 d = mul(c1c1, c2c2);
  d = axpy(-4.0, mul(c0, mul(c2c2, c2)), d);
  d = axpy(-4.0, mul(mul(c1c1, c1), c3), d);
  d = axpy(18.0, mul(mul(c0, c1), mul(c2, c3)), d);
  d = axpy(-27.0, mul(mul(c0, c0), mul(c3, c3)), d);
  return d;
}

Vec6 pack(const TwoBandCoefficients& c) {
  Vec6 x;
  x << c.A[0], c.A[1], c.B[0], c.B[1], c.B[2], c.B[3];
  return x;
}

TwoBandCoefficients unpack(const Vec6& x, Complex a2) {
  TwoBandCoefficients c;
  c.A = {x[0], x[1], a2};
  c.B = {x[2], x[3], x[4], x[5]};
  return c;
}

Vec6 residual(const Vec6& x, Complex a2, const UniPoly& monic) {
  const Poly7 d = cubic_discriminant(unpack(x, a2));
  Vec6 r;
  for (int s = 0; s < 6; ++s) r[s] = d[s] / d[6] - monic[s];
  return r;
}

double finite_norm(const Vec6& r) {
  const double n = r.norm();
  return std::isfinite(n) ? n : std::numeric_limits<double>::infinity();
}

double coeff_scale(const TwoBandCoefficients& c) {
  double s = 0.0;
  for (const auto& a : c.A) s = std::max(s, std::abs(a));
  for (const auto& b : c.B) s = std::max(s, std::abs(b));
  return s;
}

void check_targets(const std::vector<Complex>& targets) {
  if (targets.size() != 6) throw model_error("InvalidTarget", "exactly six branch point targets are required");
  double scale = 1.0;
  for (const auto& t : targets) scale = std::max(scale, std::abs(t));
  for (std::size_t i = 0; i < 6; ++i)
    for (std::size_t j = i + 1; j < 6; ++j)
      if (std::abs(targets[i] - targets[j]) < 1e-9 * scale)
        throw model_error("InvalidTarget", "branch point targets must be pairwise distinct");
}

}  // namespace

// ------------------------------------------------------- coefficients

BiPoly TwoBandCoefficients::to_bipoly() const {
  Eigen::MatrixXcd c = Eigen::MatrixXcd::Zero(3, 4);
  c(2, 1) = 1.0;
  for (int s = 0; s < 3; ++s) c(1, s) = A[s];
  for (int s = 0; s < 4; ++s) c(0, s) = B[s];
  return BiPoly(std::move(c));
}

TwoBandCoefficients TwoBandCoefficients::from_bipoly(const BiPoly& f) {
  if (f.degree(Var::omega) != 2 || f.degree(Var::z) > 3)
    throw model_error("ModelInvalid", "not of the two-band form z w^2 + w A(z) + B(z)");
  const UniPoly top = f.coefficient(Var::omega, 2);
  for (int j = 0; j <= top.degree(); ++j)
    if (j != 1 && top[j] != Complex{}) throw model_error("ModelInvalid", "omega^2 coefficient must be proportional to z");
  const Complex n = top[1];
  if (n == Complex{}) throw model_error("ModelInvalid", "omega^2 coefficient must be proportional to z");
  TwoBandCoefficients c;
  for (int s = 0; s < 3; ++s) c.A[s] = f.coeff(1, s) / n;
  for (int s = 0; s < 4; ++s) c.B[s] = f.coeff(0, s) / n;
  return c;
}

double TwoBandCoefficients::distance(const TwoBandCoefficients& o) const {
  double d = 0.0;
  for (int s = 0; s < 3; ++s) d = std::max(d, std::abs(A[s] - o.A[s]));
  for (int s = 0; s < 4; ++s) d = std::max(d, std::abs(B[s] - o.B[s]));
  return d;
}

BranchPolynomial branch_polynomial(const TwoBandCoefficients& c) {
  const double scale = std::max(coeff_scale(c), 1e-300);
  const bool no_b3 = std::abs(c.B[3]) <= 1e-14 * scale;
  if (no_b3 && std::abs(c.A[2]) <= 1e-14 * scale)
    throw model_error("DegenerateCubic", "A_2 and B_3 both vanish; the z-degree drops below 2");
  BranchPolynomial out;
  if (no_b3) {
    // C_1^2 - 4 C_0 C_2 for the quadratic in z.
    const Poly7 c2 = lin(c.B[2], c.A[2]);
    const Poly7 c1 = lin(c.B[1], c.A[1], 1.0);
    const Poly7 c0 = lin(c.B[0], c.A[0]);
    const Poly7 d = axpy(-4.0, mul(c0, c2), mul(c1, c1));
    out.D = UniPoly(Eigen::Map<const Eigen::VectorXcd>(d.data(), 7));
    out.degenerate_cubic = true;
  } else {
    const Poly7 d = cubic_discriminant(c);
    out.D = UniPoly(Eigen::Map<const Eigen::VectorXcd>(d.data(), 7));
  }
  return out;
}

TwoBandCoefficients gauge_transform(const TwoBandCoefficients& c, Complex lambda) {
  if (lambda == Complex{}) throw numerical_error("ZeroLambda", "gauge parameter must be nonzero");
  TwoBandCoefficients out = c;
  for (int s = 0; s < 3; ++s) out.A[s] *= std::pow(lambda, s - 1);
  for (int s = 0; s < 4; ++s) out.B[s] *= std::pow(lambda, s - 1);
  return out;
}

TwoBandCoefficients gauge_fix(const TwoBandCoefficients& c, Complex anchor) {
  const double tiny = 1e-13 * std::max(coeff_scale(c), 1e-300);
  auto nz = [&](Complex x) { return std::abs(x) > tiny; };
  if (nz(c.A[2])) return gauge_transform(c, anchor / c.A[2]);
  if (nz(c.B[3])) {
    TwoBandCoefficients out = gauge_transform(c, std::sqrt(anchor / c.B[3]));
    for (Complex x : {out.B[2], out.A[0], out.B[0]}) {
      if (!nz(x)) continue;
      if (x.real() < 0.0 || (x.real() == 0.0 && x.imag() < 0.0)) out = gauge_transform(out, -1.0);
      break;
    }
    return out;
  }
  if (nz(c.B[2])) return gauge_transform(c, anchor / c.B[2]);
  if (nz(c.A[0])) return gauge_transform(c, c.A[0] / anchor);
  if (nz(c.B[0])) return gauge_transform(c, c.B[0] / anchor);
  throw model_error("DegenerateCubic", "no coefficient available to fix the gauge");
}

TwoBandCoefficients affine_transform(const TwoBandCoefficients& c, Complex a, Complex b) {
  TwoBandCoefficients out;
  for (int s = 0; s < 3; ++s) out.A[s] = (c.A[s] + (s == 1 ? 2.0 * b : 0.0)) / a;
  for (int s = 0; s < 4; ++s) {
    const Complex as = s < 3 ? c.A[s] : Complex{};
    out.B[s] = (c.B[s] + b * as + (s == 1 ? b * b : 0.0)) / (a * a);
  }
  return out;
}

TwoBandCoefficients conjugate(const TwoBandCoefficients& c) {
  TwoBandCoefficients out;
  for (int s = 0; s < 3; ++s) out.A[s] = std::conj(c.A[s]);
  for (int s = 0; s < 4; ++s) out.B[s] = std::conj(c.B[s]);
  return out;
}

double target_error(const TwoBandCoefficients& c, const std::vector<Complex>& targets) {
  const UniPoly d = branch_polynomial(c).D.trimmed(1e-14);
  if (d.degree() != static_cast<int>(targets.size())) return std::numeric_limits<double>::infinity();
  auto roots = all_roots(d);
  double err = 0.0;
  for (const auto& t : targets) {
    auto it = std::min_element(roots.begin(), roots.end(),
                               [&](Complex a, Complex b) { return std::abs(a - t) < std::abs(b - t); });
    err = std::max(err, std::abs(*it - t));
    roots.erase(it);
  }
  return err;
}

// ------------------------------------------------------------ solver

PolishResult polish(const TwoBandCoefficients& start, const std::vector<Complex>& targets, const DesignOptions& opts) {
  const UniPoly monic = UniPoly::from_roots(targets);
  const Complex a2 = start.A[2];
  Vec6 x = pack(start);
  Vec6 r = residual(x, a2, monic);
  double cost = finite_norm(r);
  double damping = 1e-3;
  PolishResult out;
  for (; out.iterations < opts.max_iterations && cost > 1e-15; ++out.iterations) {
    Mat6 J;
    for (int k = 0; k < 6; ++k) {
      const double h = 1e-7 * (1.0 + std::abs(x[k]));
      Vec6 xp = x;
      Vec6 xm = x;
      xp[k] += h;
      xm[k] -= h;
      J.col(k) = (residual(xp, a2, monic) - residual(xm, a2, monic)) / (2.0 * h);
    }
    const Mat6 g = J.adjoint() * J;
    const Vec6 rhs = -J.adjoint() * r;
    bool improved = false;
    while (damping <= 1e10) {
      const Vec6 xn = x + (g + damping * Mat6::Identity()).partialPivLu().solve(rhs);
      const Vec6 rn = residual(xn, a2, monic);
      const double cn = finite_norm(rn);
      if (cn < cost) {
        x = xn;
        r = rn;
        cost = cn;
        damping = std::max(damping / 10.0, 1e-12);
        improved = true;
        break;
      }
      damping *= 10.0;
    }
    if (!improved) break;
  }
  out.coeffs = unpack(x, a2);
  out.residual = cost;
  out.converged = cost < opts.residual_tol;
  return out;
}

namespace {

struct SymmetryMap {
  bool antiholomorphic;
  Complex a, b;
};

// Affine maps omega -> c + alpha (omega - c) and c + alpha conj(omega - c),
// about the centroid c, that permute the target set.
std::vector<SymmetryMap> target_symmetries(const std::vector<Complex>& t) {
  Complex c{};
  for (const auto& x : t) c += x;
  c /= static_cast<double>(t.size());
  double scale = 1.0;
  for (const auto& x : t) scale = std::max(scale, std::abs(x));
  const auto far = *std::max_element(t.begin(), t.end(),
                                     [&](Complex a, Complex b) { return std::abs(a - c) < std::abs(b - c); });
  if (std::abs(far - c) < 1e-12 * scale) return {};

  auto permutes = [&](auto&& phi) {
    std::vector<bool> hit(t.size(), false);
    for (const auto& x : t) {
      const Complex y = phi(x);
      bool found = false;
      for (std::size_t k = 0; k < t.size(); ++k)
        if (!hit[k] && std::abs(t[k] - y) < 1e-8 * scale) {
          hit[k] = true;
          found = true;
          break;
        }
      if (!found) return false;
    }
    return true;
  };

  std::vector<SymmetryMap> maps;
  for (const auto& tj : t) {
    const Complex alpha = (tj - c) / (far - c);
    if (std::abs(alpha - 1.0) > 1e-12 && permutes([&](Complex x) { return c + alpha * (x - c); }))
      maps.push_back({false, 1.0 / alpha, c - c / alpha});
    const Complex beta = (tj - c) / std::conj(far - c);
    if (permutes([&](Complex x) { return c + beta * std::conj(x - c); }))
      maps.push_back({true, 1.0 / beta, std::conj(c) - c / beta});
  }
  return maps;
}

auto canonical_key(const TwoBandCoefficients& c) {
  auto r = [](Complex x) {
    return std::pair(std::round(x.real() * 1e9) / 1e9, std::round(x.imag() * 1e9) / 1e9);
  };
  return std::tuple(r(c.A[0]), r(c.A[1]), r(c.B[0]), r(c.B[1]), r(c.B[2]), r(c.B[3]));
}

}  // namespace

DesignResult solve_coefficients(const DesignTarget& target, int restarts, std::uint64_t seed, const DesignOptions& opts) {
  check_targets(target.targets);
  if (restarts < 1) throw model_error("ModelInvalid", "restarts must be >= 1");
  if (target.anchor == Complex{}) throw model_error("ModelInvalid", "gauge anchor must be nonzero");

  double rho = 0.0;
  for (const auto& t : target.targets) rho = std::max(rho, std::abs(t));
  rho = std::max(rho, 1e-3);
  const double alpha = std::abs(target.anchor);
  // Natural size of each unknown when omega ~ rho and A_2 = anchor.
  const std::array<double, 6> size{rho * rho / alpha, rho, rho * rho * rho / alpha, rho * rho, rho * alpha,
                                    alpha * alpha};
  static constexpr std::array<double, 4> spread{0.3, 0.6, 1.0, 1.5};

  DesignResult out;
  auto accept = [&](const PolishResult& p) {
    if (!p.converged) return false;
    const double err = target_error(p.coeffs, target.targets);
    if (err > opts.target_tol * std::max(1.0, rho)) return false;
    const double tol = 1e-6 * (1.0 + coeff_scale(p.coeffs));
    for (const auto& s : out.solutions)
      if (s.coeffs.distance(p.coeffs) < tol) return false;
    out.solutions.push_back({p.coeffs, p.residual, err});
    return true;
  };

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  for (int k = 0; k < restarts; ++k) {
    TwoBandCoefficients start;
    Vec6 x;
    for (int i = 0; i < 6; ++i) x[i] = spread[k % 4] * size[i] * Complex(normal(rng), normal(rng));
    start = unpack(x, target.anchor);
    const PolishResult p = polish(start, target.targets, opts);
    out.restarts.push_back({k, p.converged, p.iterations, p.residual});
    accept(p);
  }

  if (opts.complete_symmetry_orbits) {
    const auto maps = target_symmetries(target.targets);
    for (std::size_t i = 0; i < out.solutions.size() && out.solutions.size() < 2000; ++i) {
      for (const auto& m : maps) {
        const TwoBandCoefficients base = m.antiholomorphic ? conjugate(out.solutions[i].coeffs) : out.solutions[i].coeffs;
        const TwoBandCoefficients mapped = gauge_fix(affine_transform(base, m.a, m.b), target.anchor);
        if (accept(polish(mapped, target.targets, opts))) ++out.from_symmetry;
      }
    }
  }

  if (out.solutions.empty()) throw numerical_error("NoSolutionFound", "no restart converged to the targets");
  std::sort(out.solutions.begin(), out.solutions.end(), [](const DesignSolution& a, const DesignSolution& b) {
    return canonical_key(a.coeffs) < canonical_key(b.coeffs);
  });
  return out;
}

// ------------------------------------------------------- deformation

namespace {

Complex point_at(const std::vector<Complex>& path, double t) {
  if (path.size() == 1) return path.front();
  std::vector<double> len{0.0};
  for (std::size_t k = 0; k + 1 < path.size(); ++k) len.push_back(len.back() + std::abs(path[k + 1] - path[k]));
  if (len.back() == 0.0) return path.front();
  const double s = t * len.back();
  const auto it = std::upper_bound(len.begin(), len.end(), s);
  if (it == len.end()) return path.back();
  const std::size_t k = static_cast<std::size_t>(it - len.begin()) - 1;
  const double seg = len[k + 1] - len[k];
  return seg > 0.0 ? path[k] + (s - len[k]) / seg * (path[k + 1] - path[k]) : path[k];
}

}  // namespace

std::vector<TwoBandCoefficients> deform_along_paths(const TwoBandCoefficients& start,
                                                    const std::vector<std::vector<Complex>>& paths, int steps,
                                                    double jump_factor) {
  if (paths.size() != 6) throw model_error("ModelInvalid", "one path per branch point (six) is required");
  if (steps < 1) throw model_error("ModelInvalid", "steps must be >= 1");
  std::vector<Complex> first;
  std::vector<Complex> last;
  for (const auto& p : paths) {
    if (p.empty()) throw model_error("ModelInvalid", "empty branch point path");
    first.push_back(p.front());
    last.push_back(p.back());
  }
  check_targets(first);
  if (target_error(start, first) > 1e-6)
    throw model_error("PathMismatch", "start coefficients do not have their branch points at the path starts");

  DesignOptions opts;
  std::vector<TwoBandCoefficients> out{start};
  for (int k = 1; k <= steps; ++k) {
    std::vector<Complex> t;
    for (const auto& p : paths) t.push_back(point_at(p, static_cast<double>(k) / steps));
    const PolishResult r = polish(out.back(), t, opts);
    if (!r.converged) throw numerical_error("ContinuationLost", "solver lost the branch at step " + std::to_string(k));
    out.push_back(r.coeffs);
  }

  std::vector<double> jumps;
  for (std::size_t k = 1; k < out.size(); ++k) jumps.push_back(out[k].distance(out[k - 1]));
  std::vector<double> sorted = jumps;
  std::nth_element(sorted.begin(), sorted.begin() + static_cast<std::ptrdiff_t>(sorted.size() / 2), sorted.end());
  const double bound = jump_factor * sorted[sorted.size() / 2] + 1e-12;
  for (std::size_t k = 0; k < jumps.size(); ++k)
    if (jumps[k] > bound)
      throw numerical_error("ContinuationLost", "coefficient jump at step " + std::to_string(k + 1));
  if (target_error(out.back(), last) > 1e-7)
    throw numerical_error("ContinuationLost", "final branch points miss the path endpoints");
  return out;
}

std::vector<std::vector<Complex>> half_turn_exchange(const std::vector<Complex>& targets, int i, int j, bool ccw,
                                                     int samples) {
  if (i == j || i < 0 || j < 0 || i >= static_cast<int>(targets.size()) || j >= static_cast<int>(targets.size()))
    throw model_error("ModelInvalid", "exchange needs two distinct target indices");
  if (samples < 2) throw model_error("ModelInvalid", "exchange path needs at least two samples");
  const Complex m = 0.5 * (targets[i] + targets[j]);
  std::vector<std::vector<Complex>> paths;
  for (const auto& t : targets) paths.push_back({t});
  for (int idx : {i, j}) {
    paths[idx].clear();
    for (int k = 0; k < samples; ++k) {
      const double phi = (ccw ? 1.0 : -1.0) * std::numbers::pi * k / (samples - 1);
      paths[idx].push_back(m + (targets[idx] - m) * std::polar(1.0, phi));
    }
  }
  return paths;
}

// -------------------------------------------------------- realization

std::vector<TwoBandNN> realize_two_band(const TwoBandCoefficients& c) {
  const auto& A = c.A;
  const auto& B = c.B;
  const double scale = std::max(coeff_scale(c), 1e-300);
  const Complex am1 = -A[0];
  const Complex root = std::sqrt(A[2] * A[2] - 4.0 * B[3]);
  const std::array<std::pair<Complex, Complex>, 2> orderings{
      std::pair((-A[2] + root) / 2.0, (-A[2] - root) / 2.0),
      std::pair((-A[2] - root) / 2.0, (-A[2] + root) / 2.0),
  };
  std::vector<TwoBandNN> out;
  for (const auto& [a1, b1] : orderings) {
    const Complex den = a1 - b1 - am1;
    if (std::abs(den) <= 1e-12 * scale)
      throw numerical_error("DegenerateRealization", "a_1 - b_1 - a_{-1} vanishes; b_0 is undetermined");
    const Complex b0 = (B[2] - B[0] + A[1] * b1) / den;
    const Complex a0 = -A[1] - b0;
    const Complex P = am1 * b0 - B[0];
    const Complex S = a0 * b0 + am1 * b1 - B[1];
    const Complex sum = std::sqrt(S + 2.0 * P);
    const Complex diff = std::sqrt(S - 2.0 * P);
    for (double s1 : {1.0, -1.0})
      for (double s2 : {1.0, -1.0}) {
        const Complex uc = 0.5 * (s1 * sum + s2 * diff);
        const Complex vc = 0.5 * (s1 * sum - s2 * diff);
        const TwoBandNN m{a1, a0, am1, b1, b0, uc, vc};
        const bool dup = std::any_of(out.begin(), out.end(), [&](const TwoBandNN& o) {
          return std::abs(o.a1 - m.a1) + std::abs(o.b1 - m.b1) + std::abs(o.uc - m.uc) + std::abs(o.vc - m.vc) +
                     std::abs(o.a0 - m.a0) + std::abs(o.b0 - m.b0) <
                 1e-12 * scale;
        });
        if (!dup) out.push_back(m);
      }
  }
  return out;
}

}  // namespace rsband
