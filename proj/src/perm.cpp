#include "keq/perm.hpp"

#include <algorithm>

#include "keq/error.hpp"
#include "keq/kernels.hpp"

namespace keq {

Permutation::Permutation(std::vector<Symbol> images) : images_(std::move(images)) {
  if (images_.empty()) throw Error("permutation: image list is empty");
  std::vector<bool> seen(images_.size(), false);
  for (Symbol v : images_) {
    if (v >= images_.size() || seen[v])
      throw Error("permutation: image list is not a bijection");
    seen[v] = true;
  }
}

Permutation Permutation::identity(std::size_t n) {
  if (n == 0) throw Error("permutation: degree must be positive");
  std::vector<Symbol> img(n);
  for (std::size_t i = 0; i < n; ++i) img[i] = static_cast<Symbol>(i);
  return Permutation(std::move(img));
}

Permutation Permutation::from_cycles(std::size_t n,
                                     const std::vector<std::vector<Symbol>>& cycles) {
  if (n == 0) throw Error("permutation: degree must be positive");
  std::vector<Symbol> img(n);
  for (std::size_t i = 0; i < n; ++i) img[i] = static_cast<Symbol>(i);
  std::vector<bool> used(n, false);
  for (const auto& cyc : cycles) {
    for (Symbol s : cyc) {
      if (s >= n) throw Error("permutation: cycle symbol out of range");
      if (used[s]) throw Error("permutation: cycles are not disjoint");
      used[s] = true;
    }
    for (std::size_t i = 0; i + 1 < cyc.size(); ++i) img[cyc[i]] = cyc[i + 1];
    if (cyc.size() >= 2) img[cyc.back()] = cyc.front();
  }
  return Permutation(std::move(img));
}

bool Permutation::is_identity() const {
  for (std::size_t i = 0; i < images_.size(); ++i)
    if (images_[i] != i) return false;
  return true;
}

Permutation compose(const Permutation& p, const Permutation& q) {
  if (p.degree() != q.degree()) throw Error("compose: alphabet mismatch");
  std::vector<Symbol> out(p.degree());
  kernels::gather_u32(out.data(), p.images().data(), q.images().data(), p.degree());
  return Permutation(std::move(out));
}

Permutation inverse(const Permutation& p) {
  std::vector<Symbol> out(p.degree());
  for (std::size_t i = 0; i < p.degree(); ++i) out[p(static_cast<Symbol>(i))] = static_cast<Symbol>(i);
  return Permutation(std::move(out));
}

std::vector<Symbol> fixed_set(const Permutation& p) {
  std::vector<Symbol> out;
  for (std::size_t i = 0; i < p.degree(); ++i)
    if (p(static_cast<Symbol>(i)) == i) out.push_back(static_cast<Symbol>(i));
  return out;
}

std::vector<std::vector<Symbol>> cycle_decomposition(const Permutation& p) {
  std::vector<std::vector<Symbol>> cycles;
  std::vector<bool> seen(p.degree(), false);
  for (std::size_t start = 0; start < p.degree(); ++start) {
    if (seen[start]) continue;
    std::vector<Symbol> cyc;
    Symbol cur = static_cast<Symbol>(start);
    while (!seen[cur]) {
      seen[cur] = true;
      cyc.push_back(cur);
      cur = p(cur);
    }
    // start is the smallest unvisited element, hence the cycle minimum
    if (cyc.size() >= 2) cycles.push_back(std::move(cyc));
  }
  return cycles;
}

Word apply_word(const Permutation& p, const Word& m) {
  for (Symbol s : m)
    if (s >= p.degree()) throw Error("apply_word: symbol out of range");
  Word out(m.size());
  kernels::gather_u32(out.data(), p.images().data(), m.data(), m.size());
  return out;
}

}  // namespace keq
