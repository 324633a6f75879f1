#include "rsband/permutation.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace rsband {

Permutation::Permutation(int n) : img_(n) { std::iota(img_.begin(), img_.end(), 0); }

Permutation::Permutation(std::vector<int> images) : img_(std::move(images)) {
  std::vector<bool> seen(img_.size(), false);
  for (int v : img_) {
    if (v < 0 || v >= size() || seen[v]) throw std::invalid_argument("not a permutation");
    seen[v] = true;
  }
}

Permutation Permutation::from_one_line(const std::vector<int>& one_based) {
  std::vector<int> img(one_based.size());
  std::transform(one_based.begin(), one_based.end(), img.begin(), [](int v) { return v - 1; });
  return Permutation(std::move(img));
}

Permutation Permutation::from_cycles(int n, const std::vector<std::vector<int>>& one_based_cycles) {
  Permutation out(n);
  for (const auto& cyc : one_based_cycles) {
    std::vector<int> img(n);
    std::iota(img.begin(), img.end(), 0);
    for (std::size_t k = 0; k < cyc.size(); ++k) img[cyc[k] - 1] = cyc[(k + 1) % cyc.size()] - 1;
    out = out * Permutation(std::move(img));
  }
  return out;
}

Permutation Permutation::transposition(int n, int a, int b) {
  Permutation p(n);
  std::swap(p.img_[a], p.img_[b]);
  return p;
}

Permutation Permutation::inverse() const {
  std::vector<int> inv(img_.size());
  for (int i = 0; i < size(); ++i) inv[img_[i]] = i;
  return Permutation(std::move(inv));
}

bool Permutation::is_identity() const {
  for (int i = 0; i < size(); ++i)
    if (img_[i] != i) return false;
  return true;
}

std::vector<std::vector<int>> Permutation::cycles() const {
  std::vector<std::vector<int>> out;
  std::vector<bool> seen(img_.size(), false);
  for (int i = 0; i < size(); ++i) {
    if (seen[i]) continue;
    std::vector<int> cyc;
    for (int j = i; !seen[j]; j = img_[j]) {
      seen[j] = true;
      cyc.push_back(j + 1);
    }
    if (cyc.size() > 1) out.push_back(std::move(cyc));
  }
  return out;
}

std::vector<int> Permutation::cycle_type() const {
  std::vector<int> lengths;
  std::vector<bool> seen(img_.size(), false);
  for (int i = 0; i < size(); ++i) {
    if (seen[i]) continue;
    int len = 0;
    for (int j = i; !seen[j]; j = img_[j]) {
      seen[j] = true;
      ++len;
    }
    lengths.push_back(len);
  }
  std::sort(lengths.rbegin(), lengths.rend());
  return lengths;
}

std::string Permutation::cycle_notation() const {
  const auto cyc = cycles();
  if (cyc.empty()) return "()";
  std::ostringstream os;
  for (const auto& c : cyc) {
    os << '(';
    for (std::size_t k = 0; k < c.size(); ++k) os << (k ? " " : "") << c[k];
    os << ')';
  }
  return os.str();
}

std::vector<int> Permutation::one_line() const {
  std::vector<int> out(img_.size());
  std::transform(img_.begin(), img_.end(), out.begin(), [](int v) { return v + 1; });
  return out;
}

int Permutation::ramification() const {
  int total = 0;
  for (int len : cycle_type()) total += len - 1;
  return total;
}

Permutation operator*(const Permutation& a, const Permutation& b) {
  if (a.size() != b.size()) throw std::invalid_argument("permutation size mismatch");
  std::vector<int> img(a.img_.size());
  for (int i = 0; i < a.size(); ++i) img[i] = b.img_[a.img_[i]];
  return Permutation(std::move(img));
}

Permutation Permutation::conjugated_by(const Permutation& s) const { return s.inverse() * *this * s; }

bool is_transitive(int n, const std::vector<Permutation>& gens) {
  if (n <= 1) return true;
  std::vector<bool> reached(n, false);
  std::vector<int> stack{0};
  reached[0] = true;
  while (!stack.empty()) {
    const int i = stack.back();
    stack.pop_back();
    for (const auto& g : gens) {
      for (int j : {g(i), g.inverse()(i)}) {
        if (!reached[j]) {
          reached[j] = true;
          stack.push_back(j);
        }
      }
    }
  }
  return std::all_of(reached.begin(), reached.end(), [](bool b) { return b; });
}

std::vector<Permutation> all_permutations(int n) {
  std::vector<int> v(n);
  std::iota(v.begin(), v.end(), 0);
  std::vector<Permutation> out;
  do {
    out.emplace_back(v);
  } while (std::next_permutation(v.begin(), v.end()));
  return out;
}

}  // namespace rsband
