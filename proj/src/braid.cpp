#include "rsband/braid.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "rsband/error.hpp"
#include "rsband/riemann.hpp"

namespace rsband {

BraidWord::BraidWord(int strands, std::vector<BraidLetter> letters) : strands_(strands), letters_(std::move(letters)) {
  if (strands < 1) throw std::invalid_argument("braid needs at least one strand");
  for (const auto& l : letters_)
    if (l.mu < 1 || l.mu >= strands_ || (l.sign != 1 && l.sign != -1))
      throw std::invalid_argument("braid letter out of range");
}

BraidWord BraidWord::parse(int strands, const std::string& text) {
  std::istringstream is(text);
  std::vector<BraidLetter> letters;
  std::string tok;
  while (is >> tok) {
    if (tok.size() < 2 || tok[0] != 's') throw std::invalid_argument("bad braid letter: " + tok);
    const auto caret = tok.find('^');
    BraidLetter l;
    l.mu = std::stoi(tok.substr(1, caret == std::string::npos ? std::string::npos : caret - 1));
    if (caret != std::string::npos) {
      const int e = std::stoi(tok.substr(caret + 1));
      if (e != 1 && e != -1) throw std::invalid_argument("braid exponents must be +-1: " + tok);
      l.sign = e;
    }
    letters.push_back(l);
  }
  return BraidWord(strands, std::move(letters));
}

void BraidWord::append(BraidLetter l) {
  if (l.mu < 1 || l.mu >= strands_) throw std::invalid_argument("braid letter out of range");
  letters_.push_back(l);
}

BraidWord BraidWord::reduced() const {
  std::vector<BraidLetter> out;
  for (const auto& l : letters_) {
    if (!out.empty() && out.back().mu == l.mu && out.back().sign == -l.sign) out.pop_back();
    else out.push_back(l);
  }
  return BraidWord(strands_, std::move(out));
}

BraidWord BraidWord::cyclically_reduced() const {
  auto letters = reduced().letters_;
  std::size_t lo = 0;
  std::size_t hi = letters.size();
  while (hi - lo >= 2 && letters[lo].mu == letters[hi - 1].mu && letters[lo].sign == -letters[hi - 1].sign) {
    ++lo;
    --hi;
  }
  return BraidWord(strands_, std::vector<BraidLetter>(letters.begin() + lo, letters.begin() + hi));
}

BraidWord BraidWord::inverse() const {
  std::vector<BraidLetter> out(letters_.rbegin(), letters_.rend());
  for (auto& l : out) l.sign = -l.sign;
  return BraidWord(strands_, std::move(out));
}

std::string BraidWord::to_string() const {
  std::string s;
  for (const auto& l : letters_) {
    if (!s.empty()) s += ' ';
    s += 's' + std::to_string(l.mu);
    if (l.sign < 0) s += "^-1";
  }
  return s;
}

int crossing_number(const BraidWord& w) {
  int n = 0;
  for (const auto& l : w.letters()) n += l.sign;
  return n;
}

Permutation perm_image(const BraidWord& w) {
  Permutation p(w.strands());
  for (const auto& l : w.letters()) p = p * Permutation::transposition(w.strands(), l.mu - 1, l.mu);
  return p;
}

LoopSpec LoopSpec::circle(Complex center, double radius, Orientation o, int samples) {
  LoopSpec s;
  s.kind = Kind::circle;
  s.center = center;
  s.radius = radius;
  s.orientation = o;
  s.samples = samples;
  return s;
}

LoopSpec LoopSpec::polyline(std::vector<Complex> points, Orientation o) {
  LoopSpec s;
  s.kind = Kind::polyline;
  s.points = std::move(points);
  s.orientation = o;
  return s;
}

std::vector<Complex> LoopSpec::vertices() const {
  std::vector<Complex> v;
  if (kind == Kind::circle) {
    if (radius <= 0.0 || samples < 3) throw model_error("InvalidLoop", "circle needs radius > 0 and >= 3 samples");
    for (int k = 0; k < samples; ++k) v.push_back(center + std::polar(radius, 2.0 * std::numbers::pi * k / samples));
  } else {
    v = points;
    if (v.size() >= 2 && v.front() == v.back()) v.pop_back();
    if (v.size() < 3) throw model_error("InvalidLoop", "polyline loop needs at least three distinct points");
  }
  if (orientation == Orientation::cw) std::reverse(v.begin() + 1, v.end());
  v.push_back(v.front());
  return v;
}

namespace {

bool lex_less(Complex a, Complex b) { return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag(); }

// Accumulates crossing letters between consecutive fibers, with strands kept
// in the tracker's (continuation) order and `rank` the current Re-order.
class CrossingRecorder {
 public:
  CrossingRecorder(const FiberTracker& tracker, int strands)
      : tracker_(tracker), word_(strands, {}), rank_(strands) {
    for (int k = 0; k < strands; ++k) rank_[k] = k;
  }

  void step(Complex za, const std::vector<Complex>& fa, Complex zb, const std::vector<Complex>& fb, int depth = 0) {
    auto trial = rank_;
    std::vector<BraidLetter> letters;
    if (try_resolve(fa, fb, trial, letters)) {
      rank_ = trial;
      for (const auto& l : letters) word_.append(l);
      return;
    }
    if (depth < 40) {
      const Complex zm = 0.5 * (za + zb);
      const auto fm = tracker_.advance(za, zm, fa);
      step(za, fa, zm, fm, depth + 1);
      step(zm, fm, zb, fb, depth + 1);
      return;
    }
    bubble(fb);
  }

  const BraidWord& word() const { return word_; }

 private:
  struct Event {
    double tau;
    int a, b;
  };

  static bool try_resolve(const std::vector<Complex>& fa, const std::vector<Complex>& fb, std::vector<int>& rank,
                          std::vector<BraidLetter>& letters) {
    const int n = static_cast<int>(fa.size());
    std::vector<Event> events;
    for (int a = 0; a < n; ++a)
      for (int b = a + 1; b < n; ++b) {
        if (lex_less(fa[a], fa[b]) == lex_less(fb[a], fb[b])) continue;
        const double da = (fa[a] - fa[b]).real();
        const double db = (fb[a] - fb[b]).real();
        const double tau = da == db ? 0.5 : std::clamp(da / (da - db), 0.0, 1.0);
        events.push_back({tau, a, b});
      }
    std::sort(events.begin(), events.end(), [](const Event& x, const Event& y) { return x.tau < y.tau; });
    std::vector<int> pos(n);
    for (int i = 0; i < n; ++i) pos[rank[i]] = i;
    for (std::size_t k = 0; k < events.size(); ++k) {
      // Exactly simultaneous events are only resolvable between disjoint
      // pairs; take the lower rank first.
      if (k + 1 < events.size() && events[k + 1].tau - events[k].tau < 1e-12) {
        auto lo = std::min(pos[events[k].a], pos[events[k].b]);
        auto lo2 = std::min(pos[events[k + 1].a], pos[events[k + 1].b]);
        if (lo2 < lo) std::swap(events[k], events[k + 1]);
      }
      const auto& e = events[k];
      const int pa = pos[e.a];
      const int pb = pos[e.b];
      if (std::abs(pa - pb) != 1) return false;
      const int lo = std::min(pa, pb);
      const int left = rank[lo];
      const int right = rank[lo + 1];
      const double t = e.tau;
      const double im_left = (1.0 - t) * fa[left].imag() + t * fb[left].imag();
      const double im_right = (1.0 - t) * fa[right].imag() + t * fb[right].imag();
      const double scale = 1.0 + std::abs(fa[left]) + std::abs(fa[right]);
      if (std::abs(im_left - im_right) < 1e-10 * scale) return false;
      letters.push_back({lo + 1, im_left < im_right ? 1 : -1});
      std::swap(rank[lo], rank[lo + 1]);
      pos[rank[lo]] = lo;
      pos[rank[lo + 1]] = lo + 1;
    }
    for (int i = 0; i + 1 < n; ++i)
      if (!lex_less(fb[rank[i]], fb[rank[i + 1]])) return false;
    return true;
  }

  // Last resort once bisection stalls: adjacent transpositions that sort the
  // strands into their final order, signed by the final imaginary parts.
  void bubble(const std::vector<Complex>& fb) {
    const int n = static_cast<int>(rank_.size());
    for (int i = 0; i < n; ++i)
      for (int j = 0; j + 1 < n - i; ++j) {
        const Complex l = fb[rank_[j]];
        const Complex r = fb[rank_[j + 1]];
        if (!lex_less(r, l)) continue;
        if (std::abs(l - r) < 1e-9 * (1.0 + std::abs(l)))
          throw numerical_error("StrandCollision", "two eigenvalues coincide on the loop (exceptional point)");
        word_.append({j + 1, l.imag() < r.imag() ? 1 : -1});
        std::swap(rank_[j], rank_[j + 1]);
      }
  }

  const FiberTracker& tracker_;
  BraidWord word_;
  std::vector<int> rank_;  // rank_[i] = strand currently at Re-rank i
};

// Each tracked value replaced by the nearest reference value.
std::vector<Complex> snap(const std::vector<Complex>& tracked, const std::vector<Complex>& reference) {
  std::vector<Complex> out(tracked.size());
  std::vector<bool> taken(reference.size(), false);
  for (std::size_t i = 0; i < tracked.size(); ++i) {
    std::size_t best = 0;
    for (std::size_t j = 1; j < reference.size(); ++j)
      if (std::abs(reference[j] - tracked[i]) < std::abs(reference[best] - tracked[i])) best = j;
    if (taken[best]) throw numerical_error("StrandCollision", "loop end does not match the start fiber");
    taken[best] = true;
    out[i] = reference[best];
  }
  return out;
}

}  // namespace

BraidResult braid_on_loop(const BiPoly& f, const LoopSpec& loop) {
  f.require_curve();
  const int r = f.degree(Var::omega);
  const auto verts = loop.vertices();
  const UniPoly lead = f.leading(Var::omega);
  for (const auto& z : verts)
    if (std::abs(eval(lead, z)) <= 1e-12 * std::max(eval_scale(lead, z), 1e-300))
      throw numerical_error("LeadingCoefficientVanishes", "D_r vanishes on the loop");

  const FiberTracker tracker(f, Var::z);
  auto fiber = tracker.fiber(verts.front());
  std::sort(fiber.begin(), fiber.end(), lex_less);
  const auto start = fiber;

  std::vector<double> arclen{0.0};
  for (std::size_t k = 0; k + 1 < verts.size(); ++k) arclen.push_back(arclen.back() + std::abs(verts[k + 1] - verts[k]));
  const double total = arclen.back();

  BraidResult out;
  auto record = [&](double t, const std::vector<Complex>& fib) {
    for (int s = 0; s < static_cast<int>(fib.size()); ++s) out.trace.push_back({t, s + 1, fib[s]});
  };
  record(0.0, fiber);

  CrossingRecorder rec(tracker, r);
  try {
    Complex prev_z = verts.front();
    std::vector<Complex> prev = fiber;
    for (std::size_t k = 0; k + 1 < verts.size(); ++k) {
      const Complex za = verts[k];
      const Complex seg = verts[k + 1] - za;
      const bool closing = k + 2 == verts.size();
      fiber = tracker.advance(za, verts[k + 1], fiber, [&](Complex z, const std::vector<Complex>& tracked) {
        // The loop closes on the start fiber itself, so Re-ties there
        // (conjugate pairs over real z, say) break the same way at both ends.
        const bool end = closing && std::abs(z - verts.back()) <= 1e-14 * (1.0 + std::abs(z));
        const std::vector<Complex> fib = end ? snap(tracked, start) : tracked;
        rec.step(prev_z, prev, z, fib);
        prev_z = z;
        prev = fib;
        const double frac = std::abs(seg) > 0.0 ? std::abs(z - za) / std::abs(seg) : 1.0;
        record((arclen[k] + frac * std::abs(seg)) / total, fib);
      });
    }
  } catch (const Error& e) {
    if (e.name() == "TrackingAmbiguity")
      throw numerical_error("StrandCollision", "eigenvalue strands could not be separated along the loop");
    throw;
  }
  out.word = rec.word();
  return out;
}

BraidWord pole_braid(const BiPoly& f, double radius) {
  for (const auto& bp : branch_points(f, Var::z))
    if (std::abs(bp.location) < radius)
      throw numerical_error("InvalidLoop", "pole loop encloses a z-plane branch point");
  return braid_on_loop(f, LoopSpec::circle(0.0, radius)).word;
}

namespace {

double accumulate_arg(const UniPoly& p, Complex za, Complex va, Complex zb, Complex vb, int depth) {
  const double inc = std::arg(vb / va);
  if (std::abs(inc) < std::numbers::pi / 2) return inc;
  if (depth > 50) throw numerical_error("ZeroOnLoop", "argument increment could not be resolved");
  const Complex zm = 0.5 * (za + zb);
  const Complex vm = eval(p, zm);
  if (std::abs(vm) <= 1e-13 * std::max(eval_scale(p, zm), 1e-300))
    throw numerical_error("ZeroOnLoop", "polynomial vanishes on the loop");
  return accumulate_arg(p, za, va, zm, vm, depth + 1) + accumulate_arg(p, zm, vm, zb, vb, depth + 1);
}

}  // namespace

int winding_number(const UniPoly& p, std::span<const Complex> closed_path) {
  if (p.is_zero()) throw numerical_error("ZeroOnLoop", "zero polynomial");
  if (p.degree() == 0) return 0;
  std::vector<Complex> vals;
  for (const auto& z : closed_path) {
    const Complex v = eval(p, z);
    if (std::abs(v) <= 1e-13 * std::max(eval_scale(p, z), 1e-300))
      throw numerical_error("ZeroOnLoop", "polynomial vanishes on the loop");
    vals.push_back(v);
  }
  double total = 0.0;
  for (std::size_t k = 0; k + 1 < closed_path.size(); ++k)
    total += accumulate_arg(p, closed_path[k], vals[k], closed_path[k + 1], vals[k + 1], 0);
  return static_cast<int>(std::lround(total / (2.0 * std::numbers::pi)));
}

int discriminant_winding(const BiPoly& f, const LoopSpec& loop) {
  f.require_curve();
  const int r = f.degree(Var::omega);
  if (r < 2) return 0;
  const auto verts = loop.vertices();
  const UniPoly delta = discriminant(f, Var::omega);
  return winding_number(delta, verts) - (2 * r - 2) * winding_number(f.leading(Var::omega), verts);
}

}  // namespace rsband
