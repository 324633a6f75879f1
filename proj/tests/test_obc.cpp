#include <doctest.h>

#include <random>

#include "models.hpp"
#include "oracles.hpp"
#include "rsband/lattice.hpp"
#include "rsband/obc.hpp"

using namespace rsband;
using namespace std::complex_literals;

namespace {

// |z|-sorted fiber by the companion-matrix oracle.
std::vector<double> sorted_moduli(const BiPoly& f, Complex w) {
  std::vector<double> m;
  for (const auto& z : oracle::roots(oracle::fiber_in_z(models::grid(f), w))) m.push_back(std::abs(z));
  std::sort(m.begin(), m.end());
  return m;
}

std::vector<int> endpoint_labels(const SpectralArc& a, const std::vector<BranchPoint>& bps) {
  std::vector<int> out;
  for (const auto& e : a.ends)
    if (e.kind == EndpointKind::branch_point) out.push_back(models::hex_label(bps[e.branch_index].location));
  std::sort(out.begin(), out.end());
  return out;
}

TwoBandCoefficients last_panel() {
  TwoBandCoefficients c;
  c.A = {-0.45426 - 0.36110i, -0.45129 - 0.49865i, 0.79370};
  c.B = {-0.06357 + 0.39112i, -0.26508 - 0.06631i, -0.16002 - 0.23901i, 0.16097 + 0.00821i};
  return c;
}

}  // namespace

TEST_CASE("problem validation") {
  CHECK(models::error_name([] { validate({models::hexagon(), 0}); }) == "ModelInvalid");
  CHECK(models::error_name([] { validate({models::hexagon(), 3}); }) == "ModelInvalid");
  validate({models::hexagon(), 2});
}

TEST_CASE("Hermitian SSH candidates fill the real band") {
  const GbzProblem prob{char_poly(ssh(1.0, 1.0)), 1};
  const auto pts = filter_rank(gbz_candidates(prob, 256), prob);
  REQUIRE(pts.size() > 50);
  double lo = 0, hi = 0;
  for (const auto& w : pts) {
    CHECK(std::abs(w.imag()) < 1e-6);
    CHECK(std::abs(w.real()) <= 2.0 + 1e-6);
    lo = std::min(lo, w.real());
    hi = std::max(hi, w.real());
  }
  CHECK(lo < -1.9);
  CHECK(hi > 1.9);
}

TEST_CASE("candidates satisfy the equal-modulus condition") {
  const BiPoly f = models::hexagon();
  const GbzProblem prob{f, 1};
  const auto pts = filter_rank(gbz_candidates(prob, 256), prob);
  REQUIRE(!pts.empty());
  for (std::size_t k = 0; k < pts.size(); k += 7) {
    const auto m = sorted_moduli(f, pts[k]);
    CHECK(m[0] == doctest::Approx(m[1]).epsilon(1e-5));
  }
}

TEST_CASE("on_gbz agrees with a brute-force fiber sort") {
  std::mt19937_64 rng(3);
  Eigen::MatrixXcd c(3, 3);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) c(i, j) = oracle::gaussian(rng);
  const BiPoly f(c);
  const GbzProblem prob{f, 1};
  for (int k = 0; k < 200; ++k) {
    const Complex w = oracle::gaussian(rng, 2.0);
    const auto m = sorted_moduli(f, w);
    const double ratio = m[0] / m[1];
    if (std::abs(ratio - (1.0 - 1e-6)) < 1e-9) continue;
    CHECK(on_gbz(prob, w) == (ratio >= 1.0 - 1e-6));
  }
}

TEST_CASE("OBC branch points of the six-point model") {
  const auto bps = obc_branch_points({models::hexagon(), 1});
  std::vector<int> labels;
  for (const auto& b : bps) labels.push_back(models::hex_label(b.location));
  std::sort(labels.begin(), labels.end());
  CHECK(labels == std::vector<int>{1, 2, 4, 5});
  CHECK_FALSE(obc_branch_points({char_poly(ssh(1.0, 1.0)), 1}).empty());
}

TEST_CASE("six-point model: two vertically paired arcs") {
  const GbzProblem prob{models::hexagon(), 1};
  const auto bps = obc_branch_points(prob);
  const auto arcs = obc_arcs(prob);
  REQUIRE(arcs.size() == 2);
  std::vector<std::vector<int>> pairs;
  for (const auto& a : arcs) {
    pairs.push_back(endpoint_labels(a, bps));
    // each arc spans top to bottom in one half plane, bulging outward from Re = +-0.5
    const double side = a.samples.front().real() > 0 ? 1.0 : -1.0;
    double lo = 1e9, hi = -1e9;
    for (std::size_t k = 0; k < a.samples.size(); ++k) {
      const Complex w = a.samples[k];
      CHECK(side * w.real() >= 0.5 - 1e-6);
      CHECK(side * w.real() < 0.7);
      lo = std::min(lo, w.imag());
      hi = std::max(hi, w.imag());
      if (k % 16 == 0) {
        const auto m = sorted_moduli(models::hexagon(), w);
        CHECK(m[0] == doctest::Approx(m[1]).epsilon(1e-5));
      }
    }
    CHECK(lo < -0.86);
    CHECK(hi > 0.86);
  }
  std::sort(pairs.begin(), pairs.end());
  CHECK(pairs == std::vector<std::vector<int>>{{1, 5}, {2, 4}});
}

TEST_CASE("SSH arcs are the two real segments") {
  const auto arcs = obc_arcs({char_poly(ssh(2.0, 1.0)), 1});
  REQUIRE(arcs.size() == 2);
  std::vector<std::pair<double, double>> spans;
  for (const auto& a : arcs) {
    double lo = 1e9, hi = -1e9;
    for (const auto& w : a.samples) {
      CHECK(std::abs(w.imag()) < 1e-6);
      lo = std::min(lo, w.real());
      hi = std::max(hi, w.real());
    }
    spans.push_back({lo, hi});
  }
  std::sort(spans.begin(), spans.end());
  CHECK(spans[0].first == doctest::Approx(-3.0).epsilon(1e-6));
  CHECK(spans[0].second == doctest::Approx(-1.0).epsilon(1e-6));
  CHECK(spans[1].first == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(spans[1].second == doctest::Approx(3.0).epsilon(1e-6));
}

TEST_CASE("deformed model has a Y-shaped component") {
  const auto arcs = obc_arcs({last_panel().to_bipoly(), 1});
  int junction_ends = 0;
  for (const auto& a : arcs)
    for (const auto& e : a.ends) junction_ends += e.kind == EndpointKind::junction ? 1 : 0;
  CHECK(junction_ends == 3);
}

TEST_CASE("arc assembly on synthetic clouds") {
  std::vector<Complex> line;
  for (int k = 0; k <= 100; ++k) line.push_back(Complex(k / 100.0, 0.0));
  std::vector<BranchPoint> bps(2);
  bps[0].location = 0.0;
  bps[1].location = 1.0;
  const auto arcs = assemble_arcs(line, bps);
  REQUIRE(arcs.size() == 1);
  CHECK(arcs[0].ends[0].kind == EndpointKind::branch_point);
  CHECK(arcs[0].ends[1].kind == EndpointKind::branch_point);

  std::vector<Complex> gappy = line;
  gappy.push_back(Complex(50.0, 0.0));
  CHECK(models::error_name([&] { assemble_arcs(gappy, bps); }) == "FragmentedCurve");
}

TEST_CASE("cut consistency") {
  const MonodromyRep rep = monodromy(models::hexagon(), 0.0, Var::omega);
  auto idx = [&](int s) { return rep.find(std::polar(1.0, std::numbers::pi * s / 3)); };
  const auto ok = cut_consistency(rep, {{idx(1), idx(5)}, {idx(2), idx(4)}, {idx(4), idx(5)}});
  CHECK(ok[0]);
  CHECK(ok[1]);
  CHECK_FALSE(ok[2]);
  const std::vector<int> slots{idx(4), idx(5)};
  CHECK(ordered_product(rep, slots).cycle_type() == std::vector<int>{3});

  const std::vector<LoopFactor> f{{idx(1), false}, {idx(1), true}};
  CHECK(loop_product(rep, f).is_identity());
}

TEST_CASE("finite chains sit on the arcs") {
  const auto h = ssh(2.0, 1.0);
  const auto arcs = obc_arcs({char_poly(h), 1});
  CHECK(validate_obc(arcs, h, 60).max_distance < 0.1);
  const auto herm = ssh(1.0, 1.0);
  const auto harcs = obc_arcs({char_poly(herm), 1});
  CHECK(validate_obc(harcs, herm, 60).max_distance < 0.05);
  CHECK(distance_to_arcs(Complex(0.0, 1.0), harcs) == doctest::Approx(1.0).epsilon(1e-6));
}
