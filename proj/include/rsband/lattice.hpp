#pragma once

#include <span>
#include <vector>

#include <Eigen/Dense>

#include "rsband/polyalg.hpp"

namespace rsband {

/// One matrix element t_{mn,s}: amplitude from band n to band m, jumping
/// |s| cells (to the left for s > 0). Bands are 1-based.
struct Hopping {
  int m = 1;
  int n = 1;
  int s = 0;
  Complex t;
};

/// H(z) = sum_{s=-p}^{q} T_s z^s with r x r blocks T_s.
class BlochHamiltonian {
 public:
  /// Throws ModelInvalid when indices are out of range or the ranges p, q
  /// are not tight (no nonzero hopping at s = -p or s = q).
  BlochHamiltonian(int r, int p, int q, std::span<const Hopping> hoppings);
  /// Ranges are inferred from the nonzero hoppings.
  static BlochHamiltonian from_hoppings(int r, std::span<const Hopping> hoppings);

  int bands() const { return r_; }
  int right_range() const { return p_; }
  int left_range() const { return q_; }
  /// T_s for -p <= s <= q.
  const Eigen::MatrixXcd& block(int s) const { return blocks_[s + p_]; }
  Eigen::MatrixXcd at(Complex z) const;
  std::vector<Hopping> hoppings() const;

 private:
  int r_, p_, q_;
  std::vector<Eigen::MatrixXcd> blocks_;
};

/// Two-chain nearest-neighbour model
///   [[a1 z + a0 + a_{-1}/z, uc + vc/z], [vc z + uc, b1 z + b0]].
struct TwoBandNN {
  Complex a1, a0, am1, b1, b0, uc, vc;

  BlochHamiltonian to_hamiltonian() const;
};

/// Single band, omega = sum_{s=-p}^{q} t_s z^s; `t` lists t_{-p} .. t_q.
BlochHamiltonian one_band(int p, std::span<const Complex> t);
/// Two-sublattice SSH chain with intra/inter-cell amplitudes t1, t2.
BlochHamiltonian ssh(Complex t1, Complex t2);

/// f(omega, z) = z^k det(H(z) - omega I), with k the smallest shift that
/// clears every negative power of z; k is stored as the BiPoly's z_shift.
/// Cofactor expansion over polynomial entries (r <= 6).
BiPoly char_poly(const BlochHamiltonian& h);

/// f(omega, lambda z), renormalized so that the lowest-z coefficient of the
/// omega^r row keeps its value. For the two-band ansatz this is
/// A_s -> lambda^{s-1} A_s, B_s -> lambda^{s-1} B_s.
BiPoly gauge_transform(const BiPoly& f, Complex lambda);

/// Open chain of N cells with every hopping that crosses either end dropped.
Eigen::MatrixXcd open_chain_matrix(const BlochHamiltonian& h, int cells);

struct ChainSpectrum {
  Eigen::VectorXcd eigenvalues;
  double max_relative_residual = 0.0;  // max ||(M - lambda) v|| / ||M||
};

/// Eigenvalues of the open chain (2 <= N <= 200). Throws EigensolveFailure
/// if the solver fails or a residual exceeds 1e-8 ||M||.
ChainSpectrum finite_chain_spectrum(const BlochHamiltonian& h, int cells);

}  // namespace rsband
