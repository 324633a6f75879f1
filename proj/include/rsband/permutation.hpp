#pragma once

#include <string>
#include <vector>

namespace rsband {

/// Permutation of {0, ..., n-1}, stored as the image of each point.
///
/// Products read left to right: `(a * b)(i) == b(a(i))`, i.e. `a` acts
/// first. This is the order in which monodromy of concatenated loops
/// composes (loop a traversed first, then loop b).
class Permutation {
 public:
  Permutation() = default;
  explicit Permutation(int n);  // identity
  explicit Permutation(std::vector<int> images);

  /// From 1-based one-line notation, e.g. {2, 1, 3}.
  static Permutation from_one_line(const std::vector<int>& one_based);
  /// From 1-based disjoint or overlapping cycles, composed left to right.
  static Permutation from_cycles(int n, const std::vector<std::vector<int>>& one_based_cycles);
  /// Swap of 0-based points a and b.
  static Permutation transposition(int n, int a, int b);

  int size() const { return static_cast<int>(img_.size()); }
  int operator()(int i) const { return img_[i]; }
  const std::vector<int>& images() const { return img_; }

  Permutation inverse() const;
  bool is_identity() const;
  /// Cycle lengths including fixed points, sorted descending.
  std::vector<int> cycle_type() const;
  /// Nontrivial cycles, 1-based, each starting from its smallest element.
  std::vector<std::vector<int>> cycles() const;
  /// e.g. "(1 3 2)", "()" for the identity.
  std::string cycle_notation() const;
  std::vector<int> one_line() const;

  /// Sum over cycles of (length - 1).
  int ramification() const;

  friend Permutation operator*(const Permutation& a, const Permutation& b);
  friend bool operator==(const Permutation& a, const Permutation& b) { return a.img_ == b.img_; }

  /// s^{-1} * this * s
  Permutation conjugated_by(const Permutation& s) const;

 private:
  std::vector<int> img_;
};

/// True iff the group generated by `gens` acts transitively on {0..n-1}.
bool is_transitive(int n, const std::vector<Permutation>& gens);

/// All permutations of {0..n-1} in lexicographic order (small n only).
std::vector<Permutation> all_permutations(int n);

}  // namespace rsband
