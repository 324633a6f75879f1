#include <doctest.h>

#include "rsband/permutation.hpp"

using namespace rsband;

TEST_CASE("left-to-right products") {
  const auto a = Permutation::from_cycles(3, {{1, 2}});
  const auto b = Permutation::from_cycles(3, {{2, 3}});
  // a first: 1 -> 2 -> 3
  CHECK((a * b)(0) == 2);
  CHECK((a * b).cycle_notation() == "(1 3 2)");
  CHECK((b * a).cycle_notation() == "(1 2 3)");
  CHECK((a * a).is_identity());
}

TEST_CASE("notations") {
  const auto p = Permutation::from_one_line({2, 3, 1, 4});
  CHECK(p.one_line() == std::vector<int>{2, 3, 1, 4});
  CHECK(p.cycle_notation() == "(1 2 3)");
  CHECK(p.cycle_type() == std::vector<int>{3, 1});
  CHECK(p.ramification() == 2);
  CHECK(Permutation(3).cycle_notation() == "()");
  CHECK(p.cycles() == std::vector<std::vector<int>>{{1, 2, 3}});
  CHECK(Permutation::transposition(4, 0, 3).cycle_notation() == "(1 4)");
}

TEST_CASE("inverse and conjugation") {
  const auto p = Permutation::from_cycles(4, {{1, 2, 3}});
  const auto s = Permutation::from_cycles(4, {{3, 4}});
  CHECK((p * p.inverse()).is_identity());
  CHECK(p.conjugated_by(s) == s.inverse() * p * s);
  CHECK(p.conjugated_by(s).cycle_type() == p.cycle_type());
}

TEST_CASE("transitivity") {
  CHECK(is_transitive(3, {Permutation::from_cycles(3, {{1, 2}}), Permutation::from_cycles(3, {{2, 3}})}));
  CHECK_FALSE(is_transitive(3, {Permutation::from_cycles(3, {{1, 2}})}));
  CHECK(is_transitive(1, {}));
  CHECK(all_permutations(3).size() == 6);
}
