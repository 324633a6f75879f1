#include <doctest.h>

#include <random>

#include "models.hpp"
#include "oracles.hpp"
#include "rsband/braid.hpp"
#include "rsband/lattice.hpp"
#include "rsband/riemann.hpp"

using namespace rsband;
using namespace std::complex_literals;

namespace {

int genus(const BiPoly& f, Var plane, Complex base) {
  const MonodromyRep rep = monodromy(f, base, plane);
  REQUIRE(check_consistency(rep).consistent);
  REQUIRE(check_connectedness(rep));
  return riemann_hurwitz(rep).genus;
}

double nearest_special(const BiPoly& f, Complex c, double radius) {
  double d = std::numeric_limits<double>::infinity();
  for (const auto& p : special_points(f, Var::z)) d = std::min(d, std::abs(std::abs(p.location - c) - radius));
  return d;
}

}  // namespace

TEST_CASE("two-band ansatz: genus one from both projections") {
  std::mt19937_64 rng(101);
  for (int trial = 0; trial < 20; ++trial) {
    const BiPoly f = models::random_two_band(rng).to_bipoly();
    CAPTURE(trial);
    CHECK(genus(f, Var::omega, 0.1 + 0.05i) == 1);
    CHECK(genus(f, Var::z, 0.3 + 0.2i) == 1);
  }
}

TEST_CASE("one-band models: genus zero, 2(p+q)-2 branch points, infinity type {p, q}") {
  std::mt19937_64 rng(102);
  for (int trial = 0; trial < 20; ++trial) {
    const int p = 1 + trial % 3, q = 1 + (trial / 3) % 3;
    std::vector<Complex> t;
    for (int k = 0; k <= p + q; ++k) t.push_back(oracle::gaussian(rng));
    const BiPoly f = char_poly(one_band(p, t));
    CAPTURE(trial);
    const MonodromyRep rep = monodromy(f, 0.05 + 0.02i, Var::omega);
    REQUIRE(check_consistency(rep).consistent);
    const auto h = riemann_hurwitz(rep);
    CHECK(h.genus == 0);
    CHECK(h.simple_branch_count == 2 * (p + q) - 2);
    auto want = std::vector<int>{p, q};
    std::sort(want.rbegin(), want.rend());
    CHECK(rep.infinity_perm.cycle_type() == want);
  }
}

TEST_CASE("SSH: genus one for random amplitudes") {
  std::mt19937_64 rng(103);
  for (int trial = 0; trial < 10; ++trial) {
    const BiPoly f = char_poly(ssh(oracle::gaussian(rng), oracle::gaussian(rng)));
    CHECK(genus(f, Var::omega, 0.1 + 0.05i) == 1);
    CHECK(genus(f, Var::z, 0.3 + 0.2i) == 1);
  }
}

TEST_CASE("hurwitz moves keep consistency and connectedness") {
  std::mt19937_64 rng(104);
  for (int trial = 0; trial < 5; ++trial) {
    const MonodromyRep rep = monodromy(models::random_two_band(rng).to_bipoly(), 0.0, Var::omega);
    for (int slot = 0; slot + 1 < static_cast<int>(rep.entries.size()); ++slot) {
      const auto moved = hurwitz_move(rep, slot, trial % 2 ? Turn::cw : Turn::ccw);
      CHECK(check_consistency(moved).consistent);
      CHECK(check_connectedness(moved));
    }
  }
}

TEST_CASE("cycle types match the local collision multiplicity") {
  std::mt19937_64 rng(105);
  for (int trial = 0; trial < 5; ++trial) {
    const BiPoly f = models::random_two_band(rng).to_bipoly();
    const MonodromyRep rep = monodromy(f, 0.0, Var::omega);
    for (const auto& e : rep.entries) {
      if (e.point.kind != PointKind::branch) continue;
      const auto fib = oracle::roots(oracle::fiber_in_z(models::grid(f), e.point.location));
      int colliding = 0;
      for (std::size_t i = 0; i < fib.size(); ++i)
        for (std::size_t j = i + 1; j < fib.size(); ++j) colliding += std::abs(fib[i] - fib[j]) < 1e-5 ? 1 : 0;
      CHECK(colliding == 1);
      CHECK(e.perm.cycle_type() == std::vector<int>{2, 1});
    }
  }
}

TEST_CASE("crossing number equals discriminant winding") {
  std::mt19937_64 rng(106);
  std::uniform_real_distribution<double> radius(0.2, 3.0);
  int done = 0;
  for (int trial = 0; done < 50 && trial < 500; ++trial) {
    BiPoly f;
    if (trial % 3 == 2) {
      std::vector<Hopping> hops;
      for (int s = -1; s <= 1; ++s)
        for (int m = 1; m <= 3; ++m)
          for (int n = 1; n <= 3; ++n)
            if (std::uniform_int_distribution<int>(0, 2)(rng) == 0 || (s != 0 && m == n)) hops.push_back({m, n, s, oracle::gaussian(rng)});
      f = char_poly(BlochHamiltonian::from_hoppings(3, hops));
    } else {
      f = models::random_two_band(rng).to_bipoly();
    }
    const Complex c = oracle::gaussian(rng, 0.3);
    const double r = radius(rng);
    // sparse three-band draws can decouple bands; those models are non-generic
    if (models::error_name([&] { special_points(f, Var::z); }) == "NonSquareFreeDiscriminant") continue;
    if (nearest_special(f, c, r) < 0.02) continue;
    const auto loop = LoopSpec::circle(c, r, trial % 2 ? LoopSpec::Orientation::cw : LoopSpec::Orientation::ccw);
    const auto b = braid_on_loop(f, loop);
    const int w = discriminant_winding(f, loop);
    CAPTURE(trial);
    CHECK(crossing_number(b.word) == w);
    ++done;
  }
  CHECK(done == 50);
}
