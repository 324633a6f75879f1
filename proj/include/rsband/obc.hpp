#pragma once

#include <array>
#include <span>
#include <vector>

#include "rsband/lattice.hpp"
#include "rsband/polyalg.hpp"
#include "rsband/riemann.hpp"

namespace rsband {

/// OBC spectrum for boundary index mu: the locus where the mu-th and
/// (mu+1)-th smallest |z| roots of f(omega, .) have equal modulus.
struct GbzProblem {
  BiPoly f;
  int mu = 1;  // 1 <= mu <= u - 1
};

/// Throws ModelInvalid unless u >= 2 and 1 <= mu <= u - 1.
void validate(const GbzProblem& prob);

/// Roots omega of Res_z(f(omega, z), f(omega, z e^{i theta})) over the grid
/// theta_k = 2 pi k / theta_grid, k = 2 .. theta_grid - 2, with the factors
/// c_0(omega) c_u(omega) that do not depend on z removed. Angles at which
/// f(omega, z e^{i theta}) is proportional to f are skipped since the
/// resultant vanishes identically there. Deduplicated union, unsorted.
std::vector<Complex> gbz_candidates(const GbzProblem& prob, int theta_grid = 512);

/// True iff |z_(mu)| / |z_(mu+1)| >= 1 - tol in the |z|-sorted fiber over omega.
bool on_gbz(const GbzProblem& prob, Complex omega, double tol = 1e-6);

/// Candidates that pass on_gbz.
std::vector<Complex> filter_rank(std::span<const Complex> candidates, const GbzProblem& prob, double tol = 1e-6);

/// Omega-plane branch points whose colliding roots are z_(mu) and z_(mu+1).
std::vector<BranchPoint> obc_branch_points(const GbzProblem& prob);

enum class EndpointKind { branch_point, junction, open };

struct ArcEndpoint {
  EndpointKind kind = EndpointKind::open;
  int branch_index = -1;  // index into the branch point list given to assemble_arcs
  Complex location;
};

struct SpectralArc {
  std::vector<Complex> samples;
  std::array<ArcEndpoint, 2> ends;
  int mu = 1;
};

/// Reconstructs curves from an unordered point cloud: Euclidean minimum
/// spanning tree, with edges much longer than the local spacing removed,
/// short spurs pruned, then split at every node whose degree is not two.
/// Leaves near a branch point are snapped onto it; nodes of degree >= 3
/// within a few local spacings of one another form one junction.
/// Throws FragmentedCurve if some nearest-neighbour gap exceeds ten times
/// the median.
std::vector<SpectralArc> assemble_arcs(std::span<const Complex> points, std::span<const BranchPoint> bps, int mu = 1);

/// gbz_candidates + filter_rank + assemble_arcs against obc_branch_points.
std::vector<SpectralArc> obc_arcs(const GbzProblem& prob, int theta_grid = 512);

/// One factor of a loop decomposition: entry index into rep.entries, and
/// whether the based loop is traversed backwards.
struct LoopFactor {
  int entry = 0;
  bool inverse = false;
};

/// Left-to-right product of the listed based-loop permutations.
Permutation loop_product(const MonodromyRep& rep, std::span<const LoopFactor> factors);

/// For each group of entry indices, whether the product of their
/// permutations in angular order is the identity. A cut bounded by exactly
/// these branch points can only be consistent if it is.
std::vector<bool> cut_consistency(const MonodromyRep& rep, const std::vector<std::vector<int>>& groups);

struct ObcValidation {
  std::vector<double> distances;  // per eigenvalue, sorted descending
  int outliers_excluded = 0;
  double max_distance = 0.0;  // after exclusion
};

/// Distance from every finite-chain eigenvalue to the union of arcs, with
/// up to `max_outliers` of the largest distances set aside as edge states.
/// A negative max_outliers means bands * mu.
ObcValidation validate_obc(std::span<const SpectralArc> arcs, const BlochHamiltonian& h, int cells, int mu = 1,
                           int max_outliers = -1);

double distance_to_arcs(Complex w, std::span<const SpectralArc> arcs);

}  // namespace rsband
