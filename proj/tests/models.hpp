#pragma once

#include <cmath>
#include <numbers>
#include <string>

#include "oracles.hpp"
#include "rsband/design.hpp"
#include "rsband/error.hpp"
#include "rsband/lattice.hpp"
#include "rsband/polyalg.hpp"

namespace models {

using rsband::BiPoly;
using rsband::Complex;
using rsband::TwoBandCoefficients;

inline TwoBandCoefficients hexagon_coeffs() {
  const double a2 = std::pow(2.0, -1.0 / 3);
  TwoBandCoefficients c;
  c.A = {-a2, 0.0, a2};
  c.B = {0.0, -std::pow(4.0, -1.0 / 3), 0.0, 1.0 / (3.0 * std::pow(4.0, 1.0 / 3))};
  return c;
}

// Second coefficient set with the same six branch points.
inline TwoBandCoefficients hexagon_alt_coeffs() {
  const double a2 = std::pow(2.0, -1.0 / 3);
  const double c18 = std::cos(std::numbers::pi / 18);
  TwoBandCoefficients c;
  c.A = {-std::cbrt(4.0) / std::sqrt(3.0) * c18, 0.0, a2};
  c.B = {0.0, -std::cbrt(2.0) * std::cos(std::numbers::pi / 9), 0.0, -std::cbrt(2.0) / (3.0 * std::sqrt(3.0)) * c18};
  return c;
}

inline BiPoly hexagon() { return hexagon_coeffs().to_bipoly(); }

// omega^3 - (2 z^2 - z^-2) omega + (z^2 + z^-2), times z^2.
inline BiPoly three_band() {
  Eigen::MatrixXcd d = Eigen::MatrixXcd::Zero(4, 5);
  d(3, 2) = 1.0;
  d(1, 4) = -2.0;
  d(1, 0) = 1.0;
  d(0, 4) = 1.0;
  d(0, 0) = 1.0;
  return BiPoly(d, 2);
}

inline oracle::Grid grid(const BiPoly& f) {
  oracle::Grid g(f.omega_degree() + 1, std::vector<oracle::cd>(f.z_degree() + 1));
  for (int i = 0; i <= f.omega_degree(); ++i)
    for (int j = 0; j <= f.z_degree(); ++j) g[i][j] = f.coeff(i, j);
  return g;
}

// Hexagon label s of a point on the unit hexagon at exp(2 pi i s / 6).
inline int hex_label(Complex w) {
  int s = static_cast<int>(std::lround(std::arg(w) / (std::numbers::pi / 3)));
  s = ((s % 6) + 6) % 6;
  return s == 0 ? 6 : s;
}

inline TwoBandCoefficients random_two_band(std::mt19937_64& rng) {
  TwoBandCoefficients c;
  for (auto& a : c.A) a = oracle::gaussian(rng);
  for (auto& b : c.B) b = oracle::gaussian(rng);
  return c;
}

template <class F>
std::string error_name(F&& fn) {
  try {
    fn();
  } catch (const rsband::Error& e) {
    return e.name();
  }
  return "";
}

}  // namespace models
