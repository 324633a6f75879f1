#include "rsband/riemann.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "rsband/error.hpp"

namespace rsband {

namespace {

constexpr double kPi = std::numbers::pi;

double segment_distance(Complex p, Complex a, Complex b) {
  const Complex ab = b - a;
  const double len2 = std::norm(ab);
  if (len2 == 0.0) return std::abs(p - a);
  const double t = std::clamp(((p - a) * std::conj(ab)).real() / len2, 0.0, 1.0);
  return std::abs(p - (a + t * ab));
}

double min_pairwise_distance(const std::vector<Complex>& xs) {
  double d = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < xs.size(); ++i)
    for (std::size_t j = i + 1; j < xs.size(); ++j) d = std::min(d, std::abs(xs[i] - xs[j]));
  return d;
}

double locations_scale(std::span<const Complex> xs) {
  double s = 1.0;
  for (const auto& x : xs) s = std::max(s, std::abs(x));
  return s;
}

int nearest_index(const std::vector<Complex>& xs, Complex y) {
  int best = 0;
  for (int k = 1; k < static_cast<int>(xs.size()); ++k)
    if (std::abs(xs[k] - y) < std::abs(xs[best] - y)) best = k;
  return best;
}

}  // namespace

// ------------------------------------------------------- special points

std::vector<BranchPoint> poles(const BiPoly& f, Var plane) {
  f.require_curve();
  const UniPoly lead = f.leading(other(plane)).trimmed(1e-14);
  std::vector<BranchPoint> out;
  if (lead.degree() < 1) return out;
  const auto roots = all_roots(lead);
  for (const auto& c : cluster_roots(roots)) out.push_back({c.center, plane, PointKind::pole, std::nullopt, {}});
  return out;
}

std::vector<BranchPoint> branch_points(const BiPoly& f, Var plane, bool require_square_free) {
  f.require_curve();
  const Var fiber = other(plane);
  std::vector<BranchPoint> out;
  if (f.degree(fiber) < 2) return out;
  const UniPoly delta = discriminant(f, fiber);
  if (delta.is_zero())
    throw numerical_error("NonSquareFreeDiscriminant", "discriminant vanishes identically (repeated factor)");
  if (delta.degree() < 1) return out;
  const auto roots = all_roots(delta);
  const auto pole_points = poles(f, plane);
  const double scale = locations_scale(roots);
  for (const auto& c : cluster_roots(roots)) {
    const bool at_pole = std::any_of(pole_points.begin(), pole_points.end(), [&](const BranchPoint& p) {
      return std::abs(p.location - c.center) < 1e-6 * scale;
    });
    if (at_pole) continue;
    if (c.multiplicity > 1 && require_square_free)
      throw numerical_error("NonSquareFreeDiscriminant",
                            "repeated discriminant root: the model is not generic and is rejected");
    out.push_back({c.center, plane, PointKind::branch, std::nullopt, {}});
  }
  std::vector<Complex> locs;
  for (const auto& b : out) locs.push_back(b.location);
  sort_canonical(locs);
  for (std::size_t k = 0; k < out.size(); ++k) out[k].location = locs[k];
  return out;
}

std::vector<BranchPoint> special_points(const BiPoly& f, Var plane) {
  auto out = branch_points(f, plane);
  const auto p = poles(f, plane);
  out.insert(out.end(), p.begin(), p.end());
  return out;
}

// --------------------------------------------------------- FiberTracker

FiberTracker::FiberTracker(BiPoly f, Var plane)
    : f_(std::move(f)), df_dx_(f_.derivative(plane)), df_dy_(f_.derivative(other(plane))), plane_(plane) {}

std::vector<Complex> FiberTracker::fiber(Complex x) const { return all_roots(fiber_poly(x)); }

std::vector<Complex> FiberTracker::advance(Complex x0, Complex x1, std::vector<Complex> fiber,
                                           const StepCallback& on_step) const {
  auto value = [&](const BiPoly& g, Complex x, Complex y) { return plane_ == Var::omega ? g(x, y) : g(y, x); };
  const std::size_t n = fiber.size();
  double t = 0.0;
  double h = 0.125;
  while (t < 1.0) {
    h = std::min(h, 1.0 - t);
    const Complex xa = x0 + t * (x1 - x0);
    const Complex xb = x0 + (t + h) * (x1 - x0);
    const UniPoly q = fiber_poly(xb);
    const UniPoly dq = q.derivative();
    const double limit = min_pairwise_distance(fiber) / 3.0;
    std::vector<Complex> next(n);
    bool ok = true;
    for (std::size_t i = 0; i < n && ok; ++i) {
      const Complex fy = value(df_dy_, xa, fiber[i]);
      Complex y = fiber[i];
      if (fy != Complex{}) y -= value(df_dx_, xa, fiber[i]) / fy * (xb - xa);
      bool converged = false;
      for (int it = 0; it < 12; ++it) {
        const Complex d = eval(dq, y);
        if (d == Complex{}) break;
        const Complex step = eval(q, y) / d;
        y -= step;
        if (!std::isfinite(y.real()) || !std::isfinite(y.imag())) break;
        if (std::abs(step) <= 1e-13 * (1.0 + std::abs(y))) {
          converged = true;
          break;
        }
      }
      if (!converged && std::abs(eval(q, y)) <= 1e-12 * eval_scale(q, y)) converged = true;
      ok = converged && std::abs(y - fiber[i]) < limit;
      next[i] = y;
    }
    if (!ok) {
      h *= 0.5;
      if (h < 1e-13)
        throw numerical_error("TrackingAmbiguity", "step halving exhausted while continuing the fiber");
      continue;
    }
    fiber = std::move(next);
    t += h;
    if (t > 1.0 - 1e-15) t = 1.0;
    if (on_step) on_step(x0 + t * (x1 - x0), fiber);
    h *= 2.0;
  }
  return fiber;
}

TrackResult track_fiber(const BiPoly& f, Var plane, std::span<const Complex> path, std::vector<Complex> start_fiber,
                        std::span<const Complex> avoid, double clearance) {
  if (path.empty()) throw std::invalid_argument("empty path");
  for (std::size_t k = 0; k + 1 < path.size(); ++k)
    for (const auto& p : avoid)
      if (segment_distance(p, path[k], path[k + 1]) < clearance)
        throw numerical_error("PathTooCloseToBranchPoint", "path passes within the tracking clearance of a special point");
  const FiberTracker tracker(f, plane);
  const UniPoly q0 = tracker.fiber_poly(path.front());
  for (const auto& y : start_fiber)
    if (std::abs(eval(q0, y)) > 1e-8 * eval_scale(q0, y))
      throw std::invalid_argument("start fiber does not solve f at the path start");
  std::vector<Complex> fiber = std::move(start_fiber);
  for (std::size_t k = 0; k + 1 < path.size(); ++k) fiber = tracker.advance(path[k], path[k + 1], std::move(fiber));
  const auto sorted = tracker.fiber(path.back());
  std::vector<int> img(fiber.size());
  for (std::size_t i = 0; i < fiber.size(); ++i) img[i] = nearest_index(sorted, fiber[i]);
  return {fiber, Permutation(std::move(img))};
}

BasedLoop make_based_loop(Complex base, Complex target, double epsilon, int circle_samples) {
  BasedLoop loop{base, target, epsilon, {}};
  const Complex dir = (base - target) / std::abs(base - target);
  const Complex start = target + epsilon * dir;
  loop.samples.push_back(base);
  loop.samples.push_back(start);
  for (int k = 1; k <= circle_samples; ++k)
    loop.samples.push_back(target + epsilon * dir * std::polar(1.0, 2.0 * kPi * k / circle_samples));
  loop.samples.back() = start;
  loop.samples.push_back(base);
  return loop;
}

// ------------------------------------------------------------ monodromy

int MonodromyRep::find(Complex location, double tol) const {
  int best = -1;
  for (int k = 0; k < static_cast<int>(entries.size()); ++k) {
    const double d = std::abs(entries[k].point.location - location);
    if (d < tol && (best < 0 || d < std::abs(entries[best].point.location - location))) best = k;
  }
  return best;
}

Permutation MonodromyRep::ordered_product() const {
  Permutation p(degree());
  for (const auto& e : entries) p = p * e.perm;
  return p;
}

namespace {

struct BasePlan {
  Complex base;
  std::vector<double> epsilon;
  double cut_angle = kPi;
  double radius = 1.0;
};

// Checks every straight segment and the ray to the large circle for one
// candidate base point. Each point P gets a small-circle radius
// min(frac * nearest other point, |P - b| / 2).
std::optional<BasePlan> plan_base(Complex b, const std::vector<Complex>& pts, double frac) {
  const std::size_t n = pts.size();
  BasePlan plan{b, std::vector<double>(n), kPi, 1.0};
  for (std::size_t i = 0; i < n; ++i) {
    double nearest = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < n; ++j)
      if (j != i) nearest = std::min(nearest, std::abs(pts[i] - pts[j]));
    const double to_base = std::abs(pts[i] - b);
    if (to_base == 0.0) return std::nullopt;
    plan.epsilon[i] = std::min(frac * nearest, 0.5 * to_base);
  }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (j != i && segment_distance(pts[j], b, pts[i]) < plan.epsilon[j]) return std::nullopt;
  double far = 0.0;
  std::vector<double> angles;
  for (const auto& p : pts) {
    far = std::max(far, std::abs(p - b));
    angles.push_back(std::arg(p - b));
  }
  plan.radius = 2.0 * far + 1.0;
  if (!angles.empty()) {
    // Middle of the angular gap that contains the direction pi.
    const double hi = *std::max_element(angles.begin(), angles.end());
    const double lo = *std::min_element(angles.begin(), angles.end()) + 2.0 * kPi;
    plan.cut_angle = 0.5 * (hi + lo);
    const Complex ray_end = b + std::polar(plan.radius, plan.cut_angle);
    for (std::size_t j = 0; j < n; ++j)
      if (segment_distance(pts[j], b, ray_end) < plan.epsilon[j]) return std::nullopt;
  }
  return plan;
}

}  // namespace

MonodromyRep monodromy(const BiPoly& f, Complex base, Var plane, const MonodromyOptions& opts) {
  f.require_curve();
  const auto specials = special_points(f, plane);
  std::vector<Complex> pts;
  for (const auto& s : specials) pts.push_back(s.location);
  const FiberTracker tracker(f, plane);

  auto fiber_ok = [&](Complex b) {
    if (tracker.fiber_poly(b).trimmed(1e-14).degree() != tracker.fiber_degree()) return false;
    const auto fib = tracker.fiber(b);
    return fib.size() < 2 || min_pairwise_distance(fib) > 1e-6 * locations_scale(fib);
  };
  if (!fiber_ok(base))
    throw numerical_error("BaseOnBranchCutDegenerate", "fiber over the base point is degenerate (coincident or escaping roots)");

  Complex centroid{};
  for (const auto& p : pts) centroid += p;
  if (!pts.empty()) centroid /= static_cast<double>(pts.size());
  double spread = 0.0;
  for (const auto& p : pts) spread = std::max(spread, std::abs(p - centroid));
  if (spread == 0.0) spread = 1.0;

  std::optional<BasePlan> plan;
  for (int k = 0; k <= opts.max_base_perturbations && !plan; ++k) {
    // Sunflower spiral: offsets fill the disc of radius 0.75 * spread evenly.
    const double r = 0.75 * spread * std::sqrt(static_cast<double>(k) / std::max(1, opts.max_base_perturbations));
    const Complex b = k == 0 ? base : base + std::polar(r, 2.399963229728653 * k);
    if (k > 0 && !fiber_ok(b)) continue;
    // Tighter circles before moving the base any further.
    for (double frac : {0.25, 0.125, 0.0625})
      if (!plan) plan = plan_base(b, pts, frac);
  }
  if (!plan) throw numerical_error("PathTooCloseToBranchPoint", "no base point found with clear straight segments");

  MonodromyRep rep;
  rep.plane = plane;
  rep.requested_base = base;
  rep.base = plan->base;
  rep.fiber = tracker.fiber(rep.base);
  const int d = static_cast<int>(rep.fiber.size());

  double min_eps = std::numeric_limits<double>::infinity();
  for (double e : plan->epsilon) min_eps = std::min(min_eps, e);
  const double clearance = pts.empty() ? 0.0 : 0.25 * min_eps;

  std::vector<std::size_t> order(pts.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return std::arg(pts[a] - rep.base) < std::arg(pts[b] - rep.base); });

  for (std::size_t k = 0; k < order.size(); ++k) {
    const std::size_t i = order[k];
    MonodromyEntry e;
    e.label = static_cast<int>(k) + 1;
    e.point = specials[i];
    e.loop = make_based_loop(rep.base, pts[i], plan->epsilon[i], opts.circle_samples);
    e.angle = std::arg(pts[i] - rep.base);
    std::vector<Complex> avoid;
    for (std::size_t j = 0; j < pts.size(); ++j)
      if (j != i) avoid.push_back(pts[j]);
    e.perm = track_fiber(f, plane, e.loop.samples, rep.fiber, avoid, clearance).correspondence;
    e.point.permutation = e.perm;
    e.point.cycle_type = e.perm.cycle_type();
    rep.entries.push_back(std::move(e));
  }

  // Large counterclockwise circle entered along the cut ray; its inverse is
  // the monodromy around infinity.
  std::vector<Complex> big{rep.base};
  const int m = 4 * opts.circle_samples;
  for (int k = 0; k <= m; ++k)
    big.push_back(rep.base + std::polar(plan->radius, plan->cut_angle + 2.0 * kPi * k / m));
  big.push_back(rep.base);
  rep.infinity_perm = d > 0 ? track_fiber(f, plane, big, rep.fiber, pts, clearance).correspondence.inverse()
                            : Permutation(0);
  return rep;
}

ConsistencyCheck check_consistency(const MonodromyRep& rep) {
  const Permutation inferred = rep.ordered_product().inverse();
  return {inferred == rep.infinity_perm, inferred};
}

bool check_connectedness(const MonodromyRep& rep) {
  std::vector<Permutation> gens;
  for (const auto& e : rep.entries) gens.push_back(e.perm);
  if (rep.infinity_perm.size() == rep.degree()) gens.push_back(rep.infinity_perm);
  return is_transitive(rep.degree(), gens);
}

Permutation ordered_product(const MonodromyRep& rep, std::span<const int> slots, double cut_angle) {
  std::vector<int> s(slots.begin(), slots.end());
  auto key = [&](int slot) {
    double k = rep.entries[slot].angle - cut_angle;
    while (k <= 0.0) k += 2.0 * kPi;
    while (k > 2.0 * kPi) k -= 2.0 * kPi;
    return k;
  };
  std::stable_sort(s.begin(), s.end(), [&](int a, int b) { return key(a) < key(b); });
  Permutation p(rep.degree());
  for (int slot : s) p = p * rep.entries[slot].perm;
  return p;
}

MonodromyRep hurwitz_move(const MonodromyRep& rep, int slot, Turn turn) {
  if (slot < 0 || slot + 1 >= static_cast<int>(rep.entries.size()))
    throw numerical_error("NotAdjacent", "hurwitz_move needs two adjacent angular slots");
  MonodromyRep out = rep;
  auto& a = out.entries[slot];
  auto& b = out.entries[slot + 1];
  const Permutation pa = rep.entries[slot].perm;
  const Permutation pb = rep.entries[slot + 1].perm;
  const int la = a.label;
  const int lb = b.label;
  if (turn == Turn::ccw) {
    a.perm = pb;
    b.perm = pa.conjugated_by(pb);
  } else {
    a.perm = pb.conjugated_by(pa.inverse());
    b.perm = pa;
  }
  a.label = lb;
  b.label = la;
  for (auto* e : {&a, &b}) {
    e->point.permutation = e->perm;
    e->point.cycle_type = e->perm.cycle_type();
  }
  return out;
}

HurwitzReport riemann_hurwitz(const MonodromyRep& rep) {
  HurwitzReport out;
  out.degree = rep.degree();
  for (const auto& e : rep.entries) {
    const int k = e.perm.ramification();
    if (k == 0) continue;
    out.ramification.push_back({e.point.location, false, e.perm.cycle_type()});
    out.simple_branch_count += k;
  }
  const int kinf = rep.infinity_perm.ramification();
  if (kinf > 0) {
    out.ramification.push_back({Complex{}, true, rep.infinity_perm.cycle_type()});
    out.simple_branch_count += kinf;
  }
  const int twice_genus = out.simple_branch_count - 2 * out.degree + 2;
  if (twice_genus < 0 || twice_genus % 2 != 0)
    throw consistency_error("NonIntegerGenus", "ramification count is incompatible with an integer genus");
  out.genus = twice_genus / 2;
  return out;
}

}  // namespace rsband
