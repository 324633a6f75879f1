#include "rsband/lattice.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <string>

#include "rsband/error.hpp"

namespace rsband {

BlochHamiltonian::BlochHamiltonian(int r, int p, int q, std::span<const Hopping> hoppings) : r_(r), p_(p), q_(q) {
  if (r < 1 || p < 0 || q < 0 || p + q < 1)
    throw model_error("ModelInvalid", "need r >= 1, p, q >= 0 and p + q >= 1");
  blocks_.assign(p + q + 1, Eigen::MatrixXcd::Zero(r, r));
  for (const auto& h : hoppings) {
    if (h.m < 1 || h.m > r || h.n < 1 || h.n > r || h.s < -p || h.s > q)
      throw model_error("ModelInvalid", "hopping (" + std::to_string(h.m) + "," + std::to_string(h.n) + "," +
                                            std::to_string(h.s) + ") out of range");
    blocks_[h.s + p](h.m - 1, h.n - 1) += h.t;
  }
  if (blocks_.front().isZero(0.0) || blocks_.back().isZero(0.0))
    throw model_error("ModelInvalid", "coupling ranges p, q are not tight");
}

BlochHamiltonian BlochHamiltonian::from_hoppings(int r, std::span<const Hopping> hoppings) {
  int p = 0;
  int q = 0;
  for (const auto& h : hoppings) {
    if (h.t == Complex{}) continue;
    p = std::max(p, -h.s);
    q = std::max(q, h.s);
  }
  std::vector<Hopping> nonzero;
  for (const auto& h : hoppings)
    if (h.t != Complex{}) nonzero.push_back(h);
  return BlochHamiltonian(r, p, q, nonzero);
}

Eigen::MatrixXcd BlochHamiltonian::at(Complex z) const {
  Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(r_, r_);
  for (int s = -p_; s <= q_; ++s) h += block(s) * std::pow(z, s);
  return h;
}

std::vector<Hopping> BlochHamiltonian::hoppings() const {
  std::vector<Hopping> out;
  for (int s = -p_; s <= q_; ++s)
    for (int m = 0; m < r_; ++m)
      for (int n = 0; n < r_; ++n)
        if (block(s)(m, n) != Complex{}) out.push_back({m + 1, n + 1, s, block(s)(m, n)});
  return out;
}

BlochHamiltonian TwoBandNN::to_hamiltonian() const {
  const std::vector<Hopping> h{
      {1, 1, 1, a1}, {1, 1, 0, a0}, {1, 1, -1, am1}, {1, 2, 0, uc}, {1, 2, -1, vc},
      {2, 1, 1, vc}, {2, 1, 0, uc}, {2, 2, 1, b1},   {2, 2, 0, b0},
  };
  return BlochHamiltonian::from_hoppings(2, h);
}

BlochHamiltonian one_band(int p, std::span<const Complex> t) {
  std::vector<Hopping> h;
  for (std::size_t k = 0; k < t.size(); ++k) h.push_back({1, 1, static_cast<int>(k) - p, t[k]});
  return BlochHamiltonian(1, p, static_cast<int>(t.size()) - 1 - p, h);
}

BlochHamiltonian ssh(Complex t1, Complex t2) {
  const std::vector<Hopping> h{{1, 2, 0, t1}, {1, 2, -1, t2}, {2, 1, 0, t1}, {2, 1, 1, t2}};
  return BlochHamiltonian(2, 1, 1, h);
}

namespace {

BiPoly determinant(const std::vector<std::vector<BiPoly>>& m) {
  const std::size_t n = m.size();
  if (n == 1) return m[0][0];
  if (n == 2) return m[0][0] * m[1][1] - m[0][1] * m[1][0];
  BiPoly det;
  for (std::size_t col = 0; col < n; ++col) {
    if (m[0][col].is_zero()) continue;
    std::vector<std::vector<BiPoly>> minor(n - 1);
    for (std::size_t i = 1; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (j != col) minor[i - 1].push_back(m[i][j]);
    BiPoly term = m[0][col] * determinant(minor);
    if (col % 2 == 0) det += term;
    else det -= term;
  }
  return det;
}

}  // namespace

BiPoly char_poly(const BlochHamiltonian& h) {
  const int r = h.bands();
  const int p = h.right_range();
  const int q = h.left_range();
  // Entries of z^p (H - omega I): polynomial in z of degree <= p + q.
  std::vector<std::vector<BiPoly>> m(r, std::vector<BiPoly>(r));
  for (int a = 0; a < r; ++a) {
    for (int b = 0; b < r; ++b) {
      Eigen::MatrixXcd c = Eigen::MatrixXcd::Zero(2, p + q + 1);
      for (int s = -p; s <= q; ++s) c(0, s + p) = h.block(s)(a, b);
      if (a == b) c(1, p) = -1.0;
      m[a][b] = BiPoly(c);
    }
  }
  BiPoly det = determinant(m).trimmed(1e-13);
  int low = 0;
  while (low < det.z_degree() && det.coefficient(Var::z, low).is_zero()) ++low;
  const Eigen::MatrixXcd& c = det.coeffs();
  BiPoly f(c.rightCols(c.cols() - low).eval(), r * p - low);
  return f;
}

BiPoly gauge_transform(const BiPoly& f, Complex lambda) {
  if (lambda == Complex{}) throw numerical_error("ZeroLambda", "gauge parameter must be nonzero");
  Eigen::MatrixXcd c = f.coeffs();
  Complex pw = 1.0;
  for (Eigen::Index j = 0; j < c.cols(); ++j, pw *= lambda) c.col(j) *= pw;
  const UniPoly top = f.leading(Var::omega);
  int low = 0;
  while (low <= top.degree() && top[low] == Complex{}) ++low;
  c /= std::pow(lambda, low);
  return BiPoly(std::move(c), f.z_shift());
}

Eigen::MatrixXcd open_chain_matrix(const BlochHamiltonian& h, int cells) {
  const int r = h.bands();
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(r * cells, r * cells);
  for (int j = 0; j < cells; ++j)
    for (int s = -h.right_range(); s <= h.left_range(); ++s) {
      const int k = j + s;
      if (k < 0 || k >= cells) continue;
      m.block(r * j, r * k, r, r) = h.block(s);
    }
  return m;
}

ChainSpectrum finite_chain_spectrum(const BlochHamiltonian& h, int cells) {
  if (cells < 2 || cells > 200) throw model_error("ModelInvalid", "chain length must lie in [2, 200]");
  const Eigen::MatrixXcd m = open_chain_matrix(h, cells);
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(m, true);
  if (solver.info() != Eigen::Success) throw numerical_error("EigensolveFailure", "complex Schur iteration failed");
  ChainSpectrum out;
  out.eigenvalues = solver.eigenvalues();
  const double norm = std::max(m.norm(), 1e-300);
  const auto& vecs = solver.eigenvectors();
  for (Eigen::Index k = 0; k < m.rows(); ++k) {
    const Eigen::VectorXcd v = vecs.col(k).normalized();
    const double res = (m * v - out.eigenvalues[k] * v).norm() / norm;
    out.max_relative_residual = std::max(out.max_relative_residual, res);
  }
  if (out.max_relative_residual > 1e-8)
    throw numerical_error("EigensolveFailure", "eigenpair residual above 1e-8 ||M||");
  return out;
}

}  // namespace rsband
