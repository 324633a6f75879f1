#pragma once

#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "rsband/permutation.hpp"
#include "rsband/polyalg.hpp"

namespace rsband {

enum class PointKind {
  branch,  // root of the discriminant with a finite, colliding fiber
  pole,    // root of the leading coefficient: part of the fiber escapes to infinity
};

struct BranchPoint {
  Complex location;
  Var plane = Var::omega;
  PointKind kind = PointKind::branch;
  std::optional<Permutation> permutation;
  std::vector<int> cycle_type;
};

/// Distinct roots of the discriminant of f with respect to the fiber
/// variable (Delta_z for plane = omega, Delta_omega for plane = z), skipping
/// those that coincide with poles. Throws NonSquareFreeDiscriminant when a
/// remaining root is repeated, unless `require_square_free` is false, in
/// which case a repeated root is reported once.
std::vector<BranchPoint> branch_points(const BiPoly& f, Var plane, bool require_square_free = true);

/// Distinct roots of the fiber variable's leading coefficient.
std::vector<BranchPoint> poles(const BiPoly& f, Var plane);

/// Branch points followed by poles.
std::vector<BranchPoint> special_points(const BiPoly& f, Var plane);

/// Continues the fiber of f over a path in one coordinate plane.
///
/// Each accepted step is a tangent predictor plus Newton corrector on every
/// root, and is accepted only if every root moved by less than a third of the
/// smallest pairwise distance in the previous fiber. Steps are halved until
/// that holds; TrackingAmbiguity is thrown if the step underflows.
class FiberTracker {
 public:
  using StepCallback = std::function<void(Complex x, const std::vector<Complex>& fiber)>;

  FiberTracker(BiPoly f, Var plane);

  Var plane() const { return plane_; }
  int fiber_degree() const { return f_.degree(other(plane_)); }
  UniPoly fiber_poly(Complex x) const { return f_.restrict(plane_, x); }
  /// All fiber points over x, sorted canonically.
  std::vector<Complex> fiber(Complex x) const;

  /// Continues `fiber` along the straight segment x0 -> x1. `on_step`, if
  /// given, sees every accepted intermediate point (x1 included).
  std::vector<Complex> advance(Complex x0, Complex x1, std::vector<Complex> fiber,
                               const StepCallback& on_step = {}) const;

 private:
  BiPoly f_, df_dx_, df_dy_;
  Var plane_;
};

struct TrackResult {
  std::vector<Complex> end_fiber;  // end_fiber[i] continues start_fiber[i]
  /// i -> index of end_fiber[i] in the canonically sorted fiber over the end
  /// point. For a closed path started from the sorted fiber this is the
  /// monodromy permutation of the loop.
  Permutation correspondence;
};

/// Tracks `start_fiber` along the polyline `path`. Throws
/// PathTooCloseToBranchPoint if a segment passes within `clearance` of any
/// point in `avoid`.
TrackResult track_fiber(const BiPoly& f, Var plane, std::span<const Complex> path, std::vector<Complex> start_fiber,
                        std::span<const Complex> avoid = {}, double clearance = 0.0);

/// Straight segment from `base` to within `epsilon` of `target`, a full
/// counterclockwise circle of radius `epsilon` about `target`, and back.
struct BasedLoop {
  Complex base;
  Complex target;
  double epsilon = 0.0;
  std::vector<Complex> samples;
};

BasedLoop make_based_loop(Complex base, Complex target, double epsilon, int circle_samples = 64);

struct MonodromyEntry {
  int label = 0;  // 1-based position in the original angular order
  BranchPoint point;
  Permutation perm;
  BasedLoop loop;
  double angle = 0.0;  // arg(location - base) in (-pi, pi]
};

/// Monodromy representation over a base point. Entries are ordered by
/// ascending arg(location - base) in (-pi, pi]; with the left-to-right
/// product convention, the ordered product of all entries is the monodromy
/// of a large counterclockwise circle entered along the ray at angle pi, so
/// consistency reads  product * infinity_perm == identity.
struct MonodromyRep {
  Var plane = Var::omega;
  Complex requested_base;
  Complex base;  // may differ from requested_base after perturbation
  std::vector<Complex> fiber;
  std::vector<MonodromyEntry> entries;
  Permutation infinity_perm;

  int degree() const { return static_cast<int>(fiber.size()); }
  /// Index of the entry closest to `location`, or -1 if none within tol.
  int find(Complex location, double tol = 1e-6) const;
  Permutation ordered_product() const;
};

struct MonodromyOptions {
  int circle_samples = 64;
  int max_base_perturbations = 400;
};

/// Tracks a based loop around every branch point and pole, plus one large
/// circle for the point at infinity. If a straight segment from the base
/// passes within epsilon of another special point, the base is moved along
/// a deterministic sunflower spiral of offsets until every segment clears.
MonodromyRep monodromy(const BiPoly& f, Complex base, Var plane, const MonodromyOptions& opts = {});

struct ConsistencyCheck {
  bool consistent = false;
  Permutation inferred_infinity;  // inverse of the ordered product
};

ConsistencyCheck check_consistency(const MonodromyRep& rep);
bool check_connectedness(const MonodromyRep& rep);

/// Product of the given entries ordered by ascending angle measured
/// counterclockwise from the ray at `cut_angle` (left-to-right convention).
Permutation ordered_product(const MonodromyRep& rep, std::span<const int> slots, double cut_angle = -3.141592653589793);

enum class Turn { ccw, cw };

/// Exchanges the points in angular slots i and i+1 by a half-turn. Slots
/// keep their locations and the labels move. Counterclockwise:
///   slot i   <- pi_{i+1}
///   slot i+1 <- pi_{i+1}^{-1} pi_i pi_{i+1}
/// Clockwise:
///   slot i   <- pi_i pi_{i+1} pi_i^{-1}
///   slot i+1 <- pi_i
/// Throws NotAdjacent if i+1 is out of range.
MonodromyRep hurwitz_move(const MonodromyRep& rep, int slot, Turn turn);

struct Ramification {
  Complex location;
  bool at_infinity = false;
  std::vector<int> cycle_type;
};

struct HurwitzReport {
  int degree = 0;
  std::vector<Ramification> ramification;
  int simple_branch_count = 0;  // sum over cycles of (length - 1)
  int genus = 0;
};

/// Genus from sum(k_P - 1) = 2g + 2d - 2. Throws NonIntegerGenus if the
/// left side is odd or too small.
HurwitzReport riemann_hurwitz(const MonodromyRep& rep);

}  // namespace rsband
