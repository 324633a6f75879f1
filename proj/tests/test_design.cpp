#include <doctest.h>

#include <random>

#include "models.hpp"
#include "oracles.hpp"
#include "rsband/design.hpp"
#include "rsband/lattice.hpp"
#include "rsband/obc.hpp"
#include "rsband/riemann.hpp"

using namespace rsband;
using namespace std::complex_literals;

namespace {

const double kA2 = std::pow(2.0, -1.0 / 3);

TwoBandCoefficients panel(int which) {
  TwoBandCoefficients c;
  if (which == 2) {
    c.A = {-0.84452 - 0.08281i, -0.18811 - 0.03995i, 0.79370};
    c.B = {0.2387 + 0.19376i, -0.50980 - 0.17716i, -0.10504 - 0.06318i, 0.18470 + 0.02750i};
  } else if (which == 3) {
    c.A = {-0.76125 - 0.31237i, -0.37619 - 0.18098i, 0.79370};
    c.B = {0.12461 + 0.42164i, -0.34604 - 0.17385i, -0.14531 - 0.13348i, 0.16482 + 0.01815i};
  } else {
    c.A = {-0.45426 - 0.36110i, -0.45129 - 0.49865i, 0.79370};
    c.B = {-0.06357 + 0.39112i, -0.26508 - 0.06631i, -0.16002 - 0.23901i, 0.16097 + 0.00821i};
  }
  return c;
}

// Distance modulo the gauge orbit; the gauge anchor is A_2 = 2^{-1/3}.
double gauge_distance(const TwoBandCoefficients& a, const TwoBandCoefficients& b) {
  return gauge_fix(a, kA2).distance(gauge_fix(b, kA2));
}

}  // namespace

TEST_CASE("branch polynomial of the two reference sets") {
  for (const auto& c : {models::hexagon_coeffs(), models::hexagon_alt_coeffs()}) {
    const auto bp = branch_polynomial(c);
    CHECK_FALSE(bp.degenerate_cubic);
    const UniPoly d = bp.D.trimmed(1e-12);
    REQUIRE(d.degree() == 6);
    for (int k = 1; k < 6; ++k) CHECK(std::abs(d[k] / d.leading()) < 1e-12);
    CHECK(std::abs(d[0] / d.leading() + 1.0) < 1e-12);
  }
}

TEST_CASE("branch polynomial roots are the branch points") {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 50; ++trial) {
    const auto c = models::random_two_band(rng);
    const auto roots = all_roots(branch_polynomial(c).D);
    std::vector<Complex> bps;
    for (const auto& b : branch_points(c.to_bipoly(), Var::omega)) bps.push_back(b.location);
    CHECK(oracle::same_points(roots, bps, 1e-8));
  }
}

TEST_CASE("degenerate cubic") {
  auto c = models::hexagon_coeffs();
  c.B[3] = 0.0;
  CHECK(branch_polynomial(c).degenerate_cubic);
  c.A[2] = 0.0;
  CHECK(models::error_name([&] { branch_polynomial(c); }) == "DegenerateCubic");
}

TEST_CASE("gauge orbit canonicalization") {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 20; ++trial) {
    const auto c = models::random_two_band(rng);
    const Complex lambda = oracle::gaussian(rng);
    CHECK(gauge_fix(gauge_transform(c, lambda)).distance(gauge_fix(c)) < 1e-9);
  }
  CHECK(models::error_name([] { gauge_transform(models::hexagon_coeffs(), 0.0); }) == "ZeroLambda");
  auto c = models::hexagon_coeffs();
  c.A[2] = 0.0;
  const auto g = gauge_fix(c);
  CHECK(std::abs(g.B[3] - 1.0) < 1e-12);
}

TEST_CASE("bipoly round trip") {
  const auto c = models::hexagon_alt_coeffs();
  CHECK(TwoBandCoefficients::from_bipoly(c.to_bipoly()).distance(c) < 1e-15);
  CHECK(models::error_name([] { TwoBandCoefficients::from_bipoly(models::three_band()); }) == "ModelInvalid");
}

TEST_CASE("multistart recovers both reference sets") {
  DesignTarget t{oracle::sixth_roots(), kA2};
  const auto res = solve_coefficients(t, 200, 7);
  CHECK(res.solutions.size() >= 2);
  double d4 = 1e9, ds = 1e9;
  for (const auto& s : res.solutions) {
    CHECK(s.residual < 1e-10);
    CHECK(s.target_error < 1e-8);
    d4 = std::min(d4, s.coeffs.distance(models::hexagon_coeffs()));
    ds = std::min(ds, s.coeffs.distance(models::hexagon_alt_coeffs()));
  }
  CHECK(d4 < 1e-8);
  CHECK(ds < 1e-8);
  CHECK(res.restarts.size() == 200);
}

TEST_CASE("design is deterministic in the seed") {
  DesignTarget t{oracle::sixth_roots(), 1.0};
  const auto a = solve_coefficients(t, 20, 3);
  const auto b = solve_coefficients(t, 20, 3);
  REQUIRE(a.solutions.size() == b.solutions.size());
  for (std::size_t k = 0; k < a.solutions.size(); ++k) CHECK(a.solutions[k].coeffs.distance(b.solutions[k].coeffs) == 0.0);
}

TEST_CASE("random targets round trip") {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 3; ++trial) {
    DesignTarget t;
    for (int k = 0; k < 6; ++k) t.targets.push_back(oracle::gaussian(rng));
    DesignOptions o;
    o.complete_symmetry_orbits = false;
    const auto res = solve_coefficients(t, 40, 100 + trial, o);
    for (const auto& s : res.solutions) {
      const auto r = all_roots(branch_polynomial(s.coeffs).D);
      CHECK(oracle::same_points(r, t.targets, 1e-8));
    }
  }
}

TEST_CASE("invalid targets") {
  DesignTarget t{{1.0, 1.0, 2.0, 3.0, 4.0, 5.0}, 1.0};
  CHECK(models::error_name([&] { solve_coefficients(t, 5, 1); }) == "InvalidTarget");
  DesignTarget few{{1.0, 2.0}, 1.0};
  CHECK(models::error_name([&] { solve_coefficients(few, 5, 1); }) == "InvalidTarget");
}

TEST_CASE("deformation exchanging branch points 4 and 5") {
  const auto start = models::hexagon_coeffs();
  const auto targets = oracle::sixth_roots();  // index s-1 holds label s
  const auto paths = half_turn_exchange(targets, 3, 4, true);
  const auto seq = deform_along_paths(start, paths, 192);
  REQUIRE(seq.size() == 193);
  CHECK(seq.front().distance(start) < 1e-12);
  CHECK(gauge_distance(seq[64], panel(2)) < 1e-3);
  CHECK(gauge_distance(seq[128], panel(3)) < 1e-3);
  CHECK(gauge_distance(seq[192], panel(4)) < 1e-3);
  CHECK(target_error(seq.back(), targets) < 1e-7);
}

TEST_CASE("zero-motion deformation") {
  const auto start = models::hexagon_coeffs();
  std::vector<std::vector<Complex>> paths;
  for (const auto& t : oracle::sixth_roots()) paths.push_back({t, t});
  for (const auto& c : deform_along_paths(start, paths, 8)) CHECK(c.distance(start) < 1e-9);
  auto off = paths;
  off[0][0] += 0.1;
  CHECK(models::error_name([&] { deform_along_paths(start, off, 8); }) == "PathMismatch");
}

TEST_CASE("realizations") {
  const auto c = models::hexagon_coeffs();
  const auto list = realize_two_band(c);
  REQUIRE(list.size() == 8);
  const BiPoly f = c.to_bipoly();
  bool reference_branch = false;
  for (const auto& nn : list) {
    const BiPoly g = char_poly(nn.to_hamiltonian());
    CHECK((g.coeffs() - f.coeffs()).cwiseAbs().maxCoeff() < 1e-10);
    if (std::abs(nn.am1 - kA2) < 1e-12 && std::abs(nn.a0) < 1e-12 && std::abs(nn.b0) < 1e-12 &&
        std::abs(nn.b1 - std::conj(nn.a1)) < 1e-12)
      reference_branch = true;
  }
  CHECK(reference_branch);

  // a1 - b1 = +-sqrt(-4 B3) = -A0 for one ordering, leaving b0 undetermined
  auto bad = c;
  bad.A[2] = 0.0;
  bad.B[3] = -c.A[0] * c.A[0] / 4.0;
  CHECK(models::error_name([&] { realize_two_band(bad); }) == "DegenerateRealization");
}
