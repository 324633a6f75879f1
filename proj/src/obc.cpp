#include "rsband/obc.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <numeric>

#include "rsband/error.hpp"

namespace rsband {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double segment_distance(Complex p, Complex a, Complex b) {
  const Complex ab = b - a;
  const double len2 = std::norm(ab);
  if (len2 == 0.0) return std::abs(p - a);
  const double t = std::clamp(((p - a) * std::conj(ab)).real() / len2, 0.0, 1.0);
  return std::abs(p - (a + t * ab));
}

std::vector<Complex> dedupe(std::vector<Complex> xs, double tol) {
  std::sort(xs.begin(), xs.end(), [](Complex a, Complex b) {
    return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
  });
  std::vector<Complex> out;
  for (const auto& x : xs) {
    bool dup = false;
    for (auto it = out.rbegin(); it != out.rend() && x.real() - it->real() <= tol; ++it)
      if (std::abs(x - *it) <= tol) {
        dup = true;
        break;
      }
    if (!dup) out.push_back(x);
  }
  return out;
}

double median(std::vector<double> v) {
  if (v.empty()) return 0.0;
  const auto mid = v.begin() + static_cast<std::ptrdiff_t>(v.size() / 2);
  std::nth_element(v.begin(), mid, v.end());
  return *mid;
}

}  // namespace

void validate(const GbzProblem& prob) {
  prob.f.require_curve();
  const int u = prob.f.degree(Var::z);
  if (u < 2) throw model_error("ModelInvalid", "OBC spectrum needs at least two z roots");
  if (prob.mu < 1 || prob.mu > u - 1) throw model_error("ModelInvalid", "mu must lie in [1, u - 1]");
}

std::vector<Complex> gbz_candidates(const GbzProblem& prob, int theta_grid) {
  validate(prob);
  if (theta_grid < 64) throw model_error("ModelInvalid", "theta grid must have at least 64 points");
  const BiPoly& f = prob.f;
  const UniPoly c0 = f.coefficient(Var::z, 0).trimmed(1e-14);
  const UniPoly cu = f.leading(Var::z).trimmed(1e-14);
  if (c0.is_zero()) throw model_error("ModelInvalid", "f is divisible by z");

  // f(omega, z e^{i theta}) is proportional to f whenever g theta is a
  // multiple of 2 pi, with g the gcd of the gaps between occupied z powers.
  int g = 0;
  int first = -1;
  for (int j = 0; j <= f.z_degree(); ++j) {
    if (f.coefficient(Var::z, j).is_zero()) continue;
    if (first < 0) first = j;
    else g = std::gcd(g, j - first);
  }

  std::vector<Complex> all;
  for (int k = 2; k <= theta_grid - 2; ++k) {
    const double theta = 2.0 * std::numbers::pi * k / theta_grid;
    if (g > 0 && std::abs(std::polar(1.0, g * theta) - 1.0) < 1e-9) continue;
    Eigen::MatrixXcd c = f.coeffs();
    for (Eigen::Index j = 0; j < c.cols(); ++j) c.col(j) *= std::polar(1.0, static_cast<double>(j) * theta);
    const UniPoly res = resultant(f, BiPoly(c), Var::z);
    if (res.is_zero()) continue;
    const UniPoly reduced = divide_exact(divide_exact(res, c0), cu).trimmed(1e-12);
    if (reduced.degree() < 1) continue;
    const auto roots = all_roots(reduced);
    all.insert(all.end(), roots.begin(), roots.end());
  }
  double scale = 1.0;
  for (const auto& w : all) scale = std::max(scale, std::abs(w));
  return dedupe(std::move(all), 1e-9 * scale);
}

bool on_gbz(const GbzProblem& prob, Complex omega, double tol) {
  const UniPoly q = prob.f.restrict(Var::omega, omega).trimmed(1e-14);
  if (q.degree() != prob.f.degree(Var::z)) return false;
  const auto z = all_roots(q);
  const double a = std::abs(z[prob.mu - 1]);
  const double b = std::abs(z[prob.mu]);
  return b == 0.0 || a / b >= 1.0 - tol;
}

std::vector<Complex> filter_rank(std::span<const Complex> candidates, const GbzProblem& prob, double tol) {
  validate(prob);
  std::vector<Complex> out;
  for (const auto& w : candidates)
    if (on_gbz(prob, w, tol)) out.push_back(w);
  return out;
}

std::vector<BranchPoint> obc_branch_points(const GbzProblem& prob) {
  validate(prob);
  std::vector<BranchPoint> out;
  for (const auto& bp : branch_points(prob.f, Var::omega, false)) {
    const auto z = all_roots(prob.f.restrict(Var::omega, bp.location));
    int bi = 0;
    int bj = 1;
    for (int i = 0; i < static_cast<int>(z.size()); ++i)
      for (int j = i + 1; j < static_cast<int>(z.size()); ++j)
        if (std::abs(z[i] - z[j]) < std::abs(z[bi] - z[bj])) {
          bi = i;
          bj = j;
        }
    if (bi == prob.mu - 1 && bj == prob.mu) out.push_back(bp);
  }
  return out;
}

// ------------------------------------------------------- arc assembly

namespace {

struct Graph {
  std::vector<std::vector<int>> adj;

  void remove_edge(int a, int b) {
    std::erase(adj[a], b);
    std::erase(adj[b], a);
  }
  int degree(int v) const { return static_cast<int>(adj[v].size()); }
};

// Walks from `from` through `next` along degree-2 nodes until a node whose
// degree is not two (or the start again, for closed loops).
std::vector<int> walk(const Graph& g, int from, int next) {
  std::vector<int> path{from, next};
  while (g.degree(path.back()) == 2 && path.back() != from) {
    const int cur = path.back();
    const int prev = path[path.size() - 2];
    const int nxt = g.adj[cur][0] == prev ? g.adj[cur][1] : g.adj[cur][0];
    path.push_back(nxt);
  }
  return path;
}

}  // namespace

std::vector<SpectralArc> assemble_arcs(std::span<const Complex> points, std::span<const BranchPoint> bps, int mu) {
  const int n = static_cast<int>(points.size());
  if (n < 2) return {};

  std::vector<double> nn(n, kInf);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      const double d = std::abs(points[i] - points[j]);
      nn[i] = std::min(nn[i], d);
      nn[j] = std::min(nn[j], d);
    }
  const double med = median(nn);
  if (*std::max_element(nn.begin(), nn.end()) > 10.0 * med)
    throw numerical_error("FragmentedCurve", "sample gaps exceed ten times the median spacing; raise the theta grid");

  // Prim's algorithm on the complete graph.
  Graph g{std::vector<std::vector<int>>(n)};
  {
    std::vector<double> best(n, kInf);
    std::vector<int> parent(n, -1);
    std::vector<bool> in_tree(n, false);
    best[0] = 0.0;
    for (int it = 0; it < n; ++it) {
      int v = -1;
      for (int i = 0; i < n; ++i)
        if (!in_tree[i] && (v < 0 || best[i] < best[v])) v = i;
      in_tree[v] = true;
      if (parent[v] >= 0) {
        const double len = std::abs(points[v] - points[parent[v]]);
        if (len <= 5.0 * std::max(nn[v], nn[parent[v]])) {
          g.adj[v].push_back(parent[v]);
          g.adj[parent[v]].push_back(v);
        }
      }
      for (int i = 0; i < n; ++i) {
        if (in_tree[i]) continue;
        const double d = std::abs(points[i] - points[v]);
        if (d < best[i]) {
          best[i] = d;
          parent[i] = v;
        }
      }
    }
  }

  auto near_branch_point = [&](int v) {
    int best = -1;
    double bd = 10.0 * std::max(nn[v], med);
    for (int k = 0; k < static_cast<int>(bps.size()); ++k) {
      const double d = std::abs(points[v] - bps[k].location);
      if (d < bd) {
        bd = d;
        best = k;
      }
    }
    return best;
  };

  // Prune short spurs hanging off branching nodes.
  for (bool changed = true; changed;) {
    changed = false;
    for (int v = 0; v < n; ++v) {
      if (g.degree(v) != 1 || near_branch_point(v) >= 0) continue;
      const auto path = walk(g, v, g.adj[v][0]);
      if (g.degree(path.back()) < 3 || path.size() > 4) continue;
      for (std::size_t k = 0; k + 1 < path.size(); ++k) g.remove_edge(path[k], path[k + 1]);
      changed = true;
    }
  }

  // Junction clusters among nodes of degree >= 3.
  std::vector<int> junction(n, -1);
  std::vector<Complex> junction_center;
  {
    std::vector<int> hubs;
    for (int v = 0; v < n; ++v)
      if (g.degree(v) >= 3) hubs.push_back(v);
    for (int v : hubs) {
      if (junction[v] >= 0) continue;
      const int id = static_cast<int>(junction_center.size());
      std::vector<int> stack{v};
      junction[v] = id;
      Complex sum{};
      int count = 0;
      while (!stack.empty()) {
        const int a = stack.back();
        stack.pop_back();
        sum += points[a];
        ++count;
        for (int b : hubs)
          if (junction[b] < 0 && std::abs(points[a] - points[b]) <= 3.0 * std::max(nn[a], nn[b])) {
            junction[b] = id;
            stack.push_back(b);
          }
      }
      junction_center.push_back(sum / static_cast<double>(count));
    }
  }

  auto endpoint = [&](int v) {
    ArcEndpoint e;
    e.location = points[v];
    if (junction[v] >= 0) {
      e.kind = EndpointKind::junction;
      e.location = junction_center[junction[v]];
    } else if (g.degree(v) == 1) {
      const int k = near_branch_point(v);
      if (k >= 0) {
        e.kind = EndpointKind::branch_point;
        e.branch_index = k;
        e.location = bps[k].location;
      }
    }
    return e;
  };

  std::vector<SpectralArc> arcs;
  std::vector<bool> used(n, false);
  auto emit = [&](const std::vector<int>& path) {
    const int a = path.front();
    const int b = path.back();
    if (junction[a] >= 0 && junction[a] == junction[b] && path.size() <= 4) return;
    SpectralArc arc;
    arc.mu = mu;
    arc.ends = {endpoint(a), endpoint(b)};
    if (arc.ends[0].kind != EndpointKind::open) arc.samples.push_back(arc.ends[0].location);
    for (int v : path) arc.samples.push_back(points[v]);
    if (arc.ends[1].kind != EndpointKind::open) arc.samples.push_back(arc.ends[1].location);
    arcs.push_back(std::move(arc));
  };

  // Edges are consumed as they are walked so that each arc is emitted once.
  Graph h = g;
  for (int v = 0; v < n; ++v) {
    if (g.degree(v) == 2 || g.degree(v) == 0) continue;
    while (!h.adj[v].empty()) {
      const int next = h.adj[v].front();
      std::vector<int> path{v, next};
      while (g.degree(path.back()) == 2) {
        const int cur = path.back();
        const int prev = path[path.size() - 2];
        path.push_back(g.adj[cur][0] == prev ? g.adj[cur][1] : g.adj[cur][0]);
      }
      for (std::size_t k = 0; k + 1 < path.size(); ++k) h.remove_edge(path[k], path[k + 1]);
      for (int u : path) used[u] = true;
      emit(path);
    }
  }
  // Closed loops have no node of degree other than two.
  for (int v = 0; v < n; ++v) {
    if (used[v] || g.degree(v) != 2) continue;
    const auto path = walk(g, v, g.adj[v][0]);
    for (int u : path) used[u] = true;
    emit(path);
  }

  for (auto& arc : arcs) {
    auto rank = [](const ArcEndpoint& e) {
      return e.kind == EndpointKind::branch_point ? e.branch_index : std::numeric_limits<int>::max();
    };
    if (rank(arc.ends[1]) < rank(arc.ends[0])) {
      std::swap(arc.ends[0], arc.ends[1]);
      std::reverse(arc.samples.begin(), arc.samples.end());
    }
  }
  std::sort(arcs.begin(), arcs.end(), [](const SpectralArc& a, const SpectralArc& b) {
    const auto key = [](const SpectralArc& s) {
      return std::tuple(static_cast<int>(s.ends[0].kind), s.ends[0].branch_index, static_cast<int>(s.ends[1].kind),
                        s.ends[1].branch_index, s.samples.front().real(), s.samples.front().imag());
    };
    return key(a) < key(b);
  });
  return arcs;
}

std::vector<SpectralArc> obc_arcs(const GbzProblem& prob, int theta_grid) {
  const auto pts = filter_rank(gbz_candidates(prob, theta_grid), prob);
  const auto bps = obc_branch_points(prob);
  return assemble_arcs(pts, bps, prob.mu);
}

// --------------------------------------------------- cut consistency

Permutation loop_product(const MonodromyRep& rep, std::span<const LoopFactor> factors) {
  Permutation p(rep.degree());
  for (const auto& f : factors) {
    const Permutation& q = rep.entries.at(f.entry).perm;
    p = p * (f.inverse ? q.inverse() : q);
  }
  return p;
}

std::vector<bool> cut_consistency(const MonodromyRep& rep, const std::vector<std::vector<int>>& groups) {
  std::vector<bool> out;
  for (const auto& grp : groups) out.push_back(ordered_product(rep, grp).is_identity());
  return out;
}

// ---------------------------------------------------------- validation

double distance_to_arcs(Complex w, std::span<const SpectralArc> arcs) {
  double d = kInf;
  for (const auto& arc : arcs) {
    if (arc.samples.size() == 1) d = std::min(d, std::abs(w - arc.samples[0]));
    for (std::size_t k = 0; k + 1 < arc.samples.size(); ++k)
      d = std::min(d, segment_distance(w, arc.samples[k], arc.samples[k + 1]));
  }
  return d;
}

ObcValidation validate_obc(std::span<const SpectralArc> arcs, const BlochHamiltonian& h, int cells, int mu,
                           int max_outliers) {
  const auto spec = finite_chain_spectrum(h, cells);
  ObcValidation out;
  for (Eigen::Index k = 0; k < spec.eigenvalues.size(); ++k)
    out.distances.push_back(distance_to_arcs(spec.eigenvalues[k], arcs));
  std::sort(out.distances.rbegin(), out.distances.rend());
  const int limit = max_outliers < 0 ? h.bands() * mu : max_outliers;
  out.outliers_excluded = std::min(limit, static_cast<int>(out.distances.size()));
  out.max_distance = out.outliers_excluded < static_cast<int>(out.distances.size())
                         ? out.distances[out.outliers_excluded]
                         : 0.0;
  return out;
}

}  // namespace rsband
