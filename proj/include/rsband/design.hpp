#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "rsband/lattice.hpp"
#include "rsband/polyalg.hpp"

namespace rsband {

/// Two-band ansatz f = z omega^2 + omega sum_{s<=2} A_s z^s + sum_{s<=3} B_s z^s.
struct TwoBandCoefficients {
  std::array<Complex, 3> A{};
  std::array<Complex, 4> B{};

  BiPoly to_bipoly() const;
  /// Accepts any f of omega-degree 2 whose omega^2 coefficient is a
  /// nonzero multiple of z (normalized away) and whose z-degree is <= 3.
  /// Throws ModelInvalid otherwise.
  static TwoBandCoefficients from_bipoly(const BiPoly& f);

  /// Largest coefficientwise modulus difference.
  double distance(const TwoBandCoefficients& o) const;
};

struct BranchPolynomial {
  UniPoly D;                      // sum D_s omega^s
  bool degenerate_cubic = false;  // B_3 = 0: quadratic discriminant used
};

/// Discriminant in z of C_3 z^3 + C_2 z^2 + C_1 z + C_0 with
/// C_3 = B_3, C_2 = B_2 + A_2 w, C_1 = B_1 + A_1 w + w^2, C_0 = B_0 + A_0 w.
/// When B_3 = 0 the z-degree drops and the quadratic discriminant is used
/// instead. Throws DegenerateCubic when A_2 = B_3 = 0.
BranchPolynomial branch_polynomial(const TwoBandCoefficients& c);

/// z -> lambda z, i.e. A_s -> lambda^{s-1} A_s, B_s -> lambda^{s-1} B_s.
TwoBandCoefficients gauge_transform(const TwoBandCoefficients& c, Complex lambda);

/// Canonical gauge representative: lambda chosen so that A_2 = anchor, or,
/// if A_2 = 0, so that the first nonzero of B_3, B_2, A_0, B_0 equals it
/// (for B_3 the sign of lambda is then fixed by the next odd-weight
/// coefficient). Throws DegenerateCubic if no anchor coefficient is nonzero.
TwoBandCoefficients gauge_fix(const TwoBandCoefficients& c, Complex anchor = 1.0);

/// omega -> a omega + b, renormalized so that the omega^2 coefficient stays z.
/// Branch points t move to (t - b) / a.
TwoBandCoefficients affine_transform(const TwoBandCoefficients& c, Complex a, Complex b);
TwoBandCoefficients conjugate(const TwoBandCoefficients& c);

struct DesignTarget {
  std::vector<Complex> targets;  // six distinct branch point locations
  Complex anchor = 1.0;          // gauge: A_2 is pinned to this value
};

struct DesignOptions {
  int max_iterations = 200;
  double residual_tol = 1e-10;
  double target_tol = 1e-8;
  bool complete_symmetry_orbits = true;
};

struct RestartDiagnostic {
  int restart = 0;
  bool converged = false;
  int iterations = 0;
  double residual = 0.0;
};

struct DesignSolution {
  TwoBandCoefficients coeffs;
  double residual = 0.0;      // || D_s / D_6 - e_s ||
  double target_error = 0.0;  // max distance of the branch points to the targets
};

struct DesignResult {
  std::vector<DesignSolution> solutions;  // sorted by canonical coefficients
  std::vector<RestartDiagnostic> restarts;
  int from_symmetry = 0;  // solutions first reached through orbit completion
};

/// Levenberg-Marquardt on the six complex residuals D_s / D_6 - e_s, where
/// e are the monic coefficients of prod (omega - target), with A_2 fixed to
/// the anchor. Starts are seeded complex Gaussians. Every solution is then
/// pushed through the affine maps (and their antiholomorphic versions) that
/// permute the target set, and polished again. Throws NoSolutionFound.
DesignResult solve_coefficients(const DesignTarget& target, int restarts, std::uint64_t seed,
                                const DesignOptions& opts = {});

/// Single Levenberg-Marquardt solve from `start` (A_2 kept fixed).
struct PolishResult {
  TwoBandCoefficients coeffs;
  bool converged = false;
  int iterations = 0;
  double residual = 0.0;
};
PolishResult polish(const TwoBandCoefficients& start, const std::vector<Complex>& targets,
                    const DesignOptions& opts = {});

/// Maximum distance between the branch points of c and the targets under
/// the best matching (greedy nearest).
double target_error(const TwoBandCoefficients& c, const std::vector<Complex>& targets);

/// Moves each branch point along its own polyline (uniform in arc length),
/// warm-starting the solver from the previous step. Returns steps + 1 sets,
/// the first being `start`. Throws ContinuationLost if a step fails to
/// converge or jumps by more than `jump_factor` times the median step.
std::vector<TwoBandCoefficients> deform_along_paths(const TwoBandCoefficients& start,
                                                    const std::vector<std::vector<Complex>>& paths, int steps,
                                                    double jump_factor = 10.0);

/// Paths that exchange targets i and j by a half-turn about their midpoint
/// (counterclockwise if ccw) and keep every other target fixed.
std::vector<std::vector<Complex>> half_turn_exchange(const std::vector<Complex>& targets, int i, int j, bool ccw,
                                                     int samples = 193);

/// All nearest-neighbour two-chain models (up to 8) whose characteristic
/// polynomial is the given ansatz. Throws DegenerateRealization.
std::vector<TwoBandNN> realize_two_band(const TwoBandCoefficients& c);

}  // namespace rsband
