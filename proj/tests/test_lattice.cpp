#include <doctest.h>

#include <random>

#include "models.hpp"
#include "oracles.hpp"
#include "rsband/lattice.hpp"

using namespace rsband;
using namespace std::complex_literals;

namespace {

BlochHamiltonian random_hamiltonian(std::mt19937_64& rng, int r, int p, int q) {
  std::vector<Hopping> hops;
  for (int s = -p; s <= q; ++s)
    for (int m = 1; m <= r; ++m)
      for (int n = 1; n <= r; ++n) hops.push_back({m, n, s, oracle::gaussian(rng)});
  return BlochHamiltonian(r, p, q, hops);
}

}  // namespace

TEST_CASE("two-chain realization reproduces the six-point polynomial") {
  const double c = std::pow(2.0, -1.0 / 3);
  TwoBandNN nn{};
  nn.am1 = c;
  nn.a1 = -(c / std::sqrt(3.0)) * std::polar(1.0, std::numbers::pi / 6);
  nn.b1 = std::conj(nn.a1);
  nn.vc = std::sqrt(-nn.a1 * c);
  const BiPoly f = char_poly(nn.to_hamiltonian());
  const BiPoly g = models::hexagon();
  REQUIRE(f.omega_degree() == 2);
  REQUIRE(f.z_degree() == 3);
  CHECK((f.coeffs() - g.coeffs()).cwiseAbs().maxCoeff() < 1e-12);
  CHECK(f.z_shift() == 1);
}

TEST_CASE("one-band characteristic polynomial") {
  const std::vector<Complex> t{0.5, 1.0 - 1i, 2.0, 0.25i};  // t_{-1} .. t_2
  const BiPoly f = char_poly(one_band(1, t));
  REQUIRE(f.omega_degree() == 1);
  REQUIRE(f.z_degree() == 3);
  CHECK(std::abs(f.coeff(1, 1) + 1.0) < 1e-14);
  CHECK(std::abs(f.coeff(1, 0)) < 1e-14);
  for (int s = 0; s <= 3; ++s) CHECK(std::abs(f.coeff(0, s) - t[s]) < 1e-14);
}

TEST_CASE("SSH characteristic polynomial") {
  const Complex t1 = 2.0, t2 = 1.0;
  const BiPoly f = char_poly(ssh(t1, t2));
  CHECK(std::abs(f.coeff(2, 1) - 1.0) < 1e-14);
  CHECK(std::abs(f.coeff(0, 0) + t1 * t2) < 1e-14);
  CHECK(std::abs(f.coeff(0, 2) + t1 * t2) < 1e-14);
  CHECK(std::abs(f.coeff(0, 1) + t1 * t1 + t2 * t2) < 1e-14);
}

TEST_CASE("char_poly equals the numerical determinant") {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 100; ++trial) {
    const int r = 1 + trial % 4, p = trial % 2, q = 1 + trial % 3;
    const auto h = random_hamiltonian(rng, r, p, q);
    const BiPoly f = char_poly(h);
    CHECK(f.degree(Var::omega) == r);
    CHECK(f.degree(Var::z) <= (p + q) * r);
    if (trial % 5 == 0) {
      for (int k = 0; k < 20; ++k) {
        const Complex w = oracle::gaussian(rng), z = std::polar(0.5 + k * 0.05, 0.3 * k);
        const Eigen::MatrixXcd m = h.at(z) - w * Eigen::MatrixXcd::Identity(r, r);
        const Complex want = m.determinant() * std::pow(z, f.z_shift());
        CHECK(std::abs(f(w, z) - want) <= 1e-9 * (1.0 + std::abs(want)));
      }
    }
  }
}

TEST_CASE("hamiltonian validation") {
  const std::vector<Hopping> bad_index{{3, 1, 0, 1.0}};
  CHECK(models::error_name([&] { BlochHamiltonian(2, 0, 1, bad_index); }) == "ModelInvalid");
  const std::vector<Hopping> loose{{1, 1, 0, 1.0}, {1, 1, 1, 1.0}};
  CHECK(models::error_name([&] { BlochHamiltonian(1, 1, 1, loose); }) == "ModelInvalid");
  CHECK(models::error_name([&] { BlochHamiltonian(1, 0, 0, loose); }) == "ModelInvalid");
  const auto h = BlochHamiltonian::from_hoppings(1, loose);
  CHECK(h.right_range() == 0);
  CHECK(h.left_range() == 1);
}

TEST_CASE("gauge transform keeps omega-plane branch points") {
  const BiPoly f = models::hexagon();
  CHECK((gauge_transform(f, 1.0).coeffs() - f.coeffs()).cwiseAbs().maxCoeff() < 1e-15);
  const BiPoly g = gauge_transform(f, 2.0);
  CHECK(oracle::same_points(all_roots(discriminant(g, Var::z)), oracle::sixth_roots(), 1e-9));

  std::mt19937_64 rng(4);
  const BiPoly h = models::random_two_band(rng).to_bipoly();
  const BiPoly hl = gauge_transform(h, std::polar(1.0, 0.7));
  auto moduli = [](const UniPoly& d) {
    std::vector<double> m;
    for (const auto& x : oracle::roots(std::vector<Complex>(d.coeffs().data(), d.coeffs().data() + d.coeffs().size())))
      m.push_back(std::abs(x));
    std::sort(m.begin(), m.end());
    return m;
  };
  const auto a = moduli(discriminant(h, Var::omega)), b = moduli(discriminant(hl, Var::omega));
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i] == doctest::Approx(b[i]).epsilon(1e-8));
}

TEST_CASE("finite chains") {
  const auto herm = finite_chain_spectrum(ssh(1.0, 1.0), 40);
  CHECK(herm.eigenvalues.size() == 80);
  for (const auto& e : herm.eigenvalues) {
    CHECK(std::abs(e.imag()) < 1e-9);
    CHECK(std::abs(e.real()) <= 2.0 + 1e-9);
  }
  CHECK(herm.max_relative_residual < 1e-8);

  const auto m = open_chain_matrix(ssh(2.0, 1.0), 3);
  CHECK(m.rows() == 6);
  CHECK(std::abs(m(0, 1) - 2.0) < 1e-15);
  CHECK(std::abs(m(0, 5)) == 0.0);  // nothing wraps around
  CHECK(models::error_name([] { finite_chain_spectrum(ssh(1.0, 1.0), 1); }) == "ModelInvalid");
}
