#pragma once

// Independent reference computations. Nothing here calls into the library's
// root finder, tracker or resultant code; polynomials are handled as plain
// coefficient vectors and roots come from Eigen's complex eigensolver.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <random>
#include <vector>

namespace oracle {

using cd = std::complex<double>;
using Coeffs = std::vector<cd>;  // c[k] multiplies x^k

inline Coeffs trim(Coeffs c, double tol = 0.0) {
  while (!c.empty() && std::abs(c.back()) <= tol) c.pop_back();
  return c;
}

inline cd horner(const Coeffs& c, cd x) {
  cd acc{};
  for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * x + *it;
  return acc;
}

// Eigenvalues of the companion matrix.
inline std::vector<cd> roots(Coeffs c) {
  c = trim(c);
  const int n = static_cast<int>(c.size()) - 1;
  if (n < 1) return {};
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(n, n);
  for (int i = 1; i < n; ++i) m(i, i - 1) = 1.0;
  for (int i = 0; i < n; ++i) m(i, n - 1) = -c[i] / c[n];
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(m, false);
  std::vector<cd> out(es.eigenvalues().data(), es.eigenvalues().data() + n);
  return out;
}

// lead^{2n-2} prod_{i<j} (x_i - x_j)^2
inline cd discriminant_from_roots(const Coeffs& c) {
  const auto c2 = trim(c);
  const auto r = roots(c2);
  const int n = static_cast<int>(r.size());
  cd d = std::pow(c2.back(), 2 * n - 2);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) d *= (r[i] - r[j]) * (r[i] - r[j]);
  return d;
}

// a x^3 + b x^2 + c x + d
inline cd cubic_discriminant(cd a, cd b, cd c, cd d) {
  return b * b * c * c - 4.0 * a * c * c * c - 4.0 * b * b * b * d - 27.0 * a * a * d * d + 18.0 * a * b * c * d;
}

// Dense grid of coefficients: g[i][j] multiplies w^i z^j.
using Grid = std::vector<std::vector<cd>>;

inline Coeffs fiber_in_z(const Grid& g, cd w) {
  const std::size_t cols = g.empty() ? 0 : g[0].size();
  Coeffs out(cols);
  cd wp = 1.0;
  for (const auto& row : g) {
    for (std::size_t j = 0; j < cols; ++j) out[j] += row[j] * wp;
    wp *= w;
  }
  return out;
}

inline Coeffs fiber_in_w(const Grid& g, cd z) {
  Coeffs out(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) {
    cd zp = 1.0;
    for (const auto& x : g[i]) {
      out[i] += x * zp;
      zp *= z;
    }
  }
  return out;
}

// Follows every root along a closed polyline with small fixed steps and
// nearest-neighbour matching. Returns the image of each starting index.
inline std::vector<int> brute_force_permutation(const std::function<Coeffs(cd)>& fiber, const std::vector<cd>& path,
                                                int substeps = 400) {
  std::vector<cd> start = roots(fiber(path.front()));
  std::vector<cd> cur = start;
  for (std::size_t k = 0; k + 1 < path.size(); ++k) {
    for (int s = 1; s <= substeps; ++s) {
      const cd x = path[k] + (path[k + 1] - path[k]) * (static_cast<double>(s) / substeps);
      auto next = roots(fiber(x));
      std::vector<cd> matched(cur.size());
      std::vector<bool> used(next.size(), false);
      for (std::size_t i = 0; i < cur.size(); ++i) {
        int best = -1;
        for (std::size_t j = 0; j < next.size(); ++j)
          if (!used[j] && (best < 0 || std::abs(next[j] - cur[i]) < std::abs(next[best] - cur[i]))) best = static_cast<int>(j);
        used[best] = true;
        matched[i] = next[best];
      }
      cur = matched;
    }
  }
  std::vector<int> image(start.size());
  for (std::size_t i = 0; i < cur.size(); ++i) {
    int best = 0;
    for (std::size_t j = 1; j < start.size(); ++j)
      if (std::abs(start[j] - cur[i]) < std::abs(start[best] - cur[i])) best = static_cast<int>(j);
    image[i] = best;
  }
  return image;
}

// Winding of g along a closed polyline, by dense sampling and unwrapping.
inline int winding(const std::function<cd(cd)>& g, const std::vector<cd>& path, int substeps = 200) {
  double total = 0.0;
  cd prev = g(path.front());
  for (std::size_t k = 0; k + 1 < path.size(); ++k) {
    for (int s = 1; s <= substeps; ++s) {
      const cd x = path[k] + (path[k + 1] - path[k]) * (static_cast<double>(s) / substeps);
      const cd v = g(x);
      total += std::arg(v / prev);
      prev = v;
    }
  }
  return static_cast<int>(std::lround(total / (2.0 * std::numbers::pi)));
}

inline std::vector<cd> circle(cd center, double radius, int n) {
  std::vector<cd> p;
  for (int k = 0; k <= n; ++k) p.push_back(center + std::polar(radius, 2.0 * std::numbers::pi * k / n));
  p.back() = p.front();
  return p;
}

// Max over a of min over b of |a - b|.
inline double directed_hausdorff(const std::vector<cd>& a, const std::vector<cd>& b) {
  double worst = 0.0;
  for (const auto& x : a) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& y : b) best = std::min(best, std::abs(x - y));
    worst = std::max(worst, best);
  }
  return worst;
}

inline bool same_points(std::vector<cd> a, std::vector<cd> b, double tol) {
  return a.size() == b.size() && directed_hausdorff(a, b) <= tol && directed_hausdorff(b, a) <= tol;
}

// z-plane branch points of the six-point model:
// z^4 - 6 z^2 - 3 = 0.
inline std::vector<cd> hexagon_z_branch_points() {
  const double a = std::sqrt(3.0 + 2.0 * std::sqrt(3.0));
  const double b = std::sqrt(2.0 * std::sqrt(3.0) - 3.0);
  return {a, -a, cd(0, b), cd(0, -b)};
}

inline std::vector<cd> sixth_roots() {
  std::vector<cd> r;
  for (int s = 1; s <= 6; ++s) r.push_back(std::polar(1.0, 2.0 * std::numbers::pi * s / 6));
  return r;
}

inline cd gaussian(std::mt19937_64& rng, double sigma = 1.0) {
  std::normal_distribution<double> n(0.0, sigma);
  const double re = n(rng);
  return {re, n(rng)};
}

}  // namespace oracle
