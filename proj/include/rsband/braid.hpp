#pragma once

#include <span>
#include <string>
#include <vector>

#include "rsband/permutation.hpp"
#include "rsband/polyalg.hpp"

namespace rsband {

/// sigma_mu^sign: counterclockwise (sign +1) half-twist of the strands
/// ranked mu and mu+1 by Re omega.
struct BraidLetter {
  int mu = 1;
  int sign = 1;

  friend bool operator==(const BraidLetter&, const BraidLetter&) = default;
};

class BraidWord {
 public:
  BraidWord() = default;
  BraidWord(int strands, std::vector<BraidLetter> letters);
  /// Parses "s1 s2^-1 s1"; the empty string is the trivial word.
  static BraidWord parse(int strands, const std::string& text);

  int strands() const { return strands_; }
  const std::vector<BraidLetter>& letters() const { return letters_; }
  std::size_t length() const { return letters_.size(); }
  void append(BraidLetter l);

  /// Adjacent sigma_mu^{+-1} sigma_mu^{-+1} pairs cancelled.
  BraidWord reduced() const;
  /// reduced(), then cancellations across the ends (a conjugacy invariant
  /// representative for free reduction).
  BraidWord cyclically_reduced() const;
  BraidWord inverse() const;
  std::string to_string() const;

  friend bool operator==(const BraidWord&, const BraidWord&) = default;

 private:
  int strands_ = 1;
  std::vector<BraidLetter> letters_;
};

/// Exponent sum.
int crossing_number(const BraidWord& w);
/// Product of the transpositions (mu mu+1), read left to right.
Permutation perm_image(const BraidWord& w);

/// Closed loop in the z-plane.
struct LoopSpec {
  enum class Kind { circle, polyline };
  enum class Orientation { ccw, cw };

  Kind kind = Kind::circle;
  Complex center;
  double radius = 1.0;
  std::vector<Complex> points;
  Orientation orientation = Orientation::ccw;
  int samples = 256;

  static LoopSpec circle(Complex center, double radius, Orientation o = Orientation::ccw, int samples = 256);
  static LoopSpec polyline(std::vector<Complex> points, Orientation o = Orientation::ccw);

  /// Closed vertex list (first == last) in traversal order.
  std::vector<Complex> vertices() const;
};

/// One row of the strand trace: loop parameter t in [0, 1] by arc length.
struct StrandSample {
  double t = 0.0;
  int strand = 0;  // 1-based, by Re-rank at the start of the loop
  Complex omega;
};

struct BraidResult {
  BraidWord word;
  std::vector<StrandSample> trace;
};

/// Tracks the r eigenvalues omega along the loop and records a letter each
/// time two strands adjacent in the Re-ordering exchange rank. The strand
/// that was on the left before the crossing passing below the other (smaller
/// Im omega) gives +1. Simultaneous crossings are taken lower mu first.
/// Throws LeadingCoefficientVanishes or StrandCollision.
BraidResult braid_on_loop(const BiPoly& f, const LoopSpec& loop);

/// braid_on_loop on the ccw circle |z| = radius, which must enclose no
/// z-plane branch point (InvalidLoop otherwise).
BraidWord pole_braid(const BiPoly& f, double radius);

/// wind(Delta_omega) - (2r - 2) wind(D_r) along the loop. Arguments are
/// accumulated with bisection until every increment is below pi/2.
/// Throws ZeroOnLoop.
int discriminant_winding(const BiPoly& f, const LoopSpec& loop);

/// Winding number of a polynomial along a closed polyline.
int winding_number(const UniPoly& p, std::span<const Complex> closed_path);

}  // namespace rsband
