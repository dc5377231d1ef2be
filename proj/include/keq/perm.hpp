#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace keq {

using Symbol = std::uint32_t;
using Word = std::vector<Symbol>;  // symbol stream over {0..N-1}

// Permutation of {0..n-1} stored as the dense image array p[i] = p(i).
class Permutation {
 public:
  explicit Permutation(std::vector<Symbol> images);
  static Permutation identity(std::size_t n);
  // Builds from disjoint cycles; symbols not mentioned stay fixed.
  static Permutation from_cycles(std::size_t n,
                                 const std::vector<std::vector<Symbol>>& cycles);

  std::size_t degree() const { return images_.size(); }
  Symbol operator()(Symbol i) const { return images_[i]; }
  std::span<const Symbol> images() const { return images_; }
  bool is_identity() const;
  bool operator==(const Permutation&) const = default;

 private:
  std::vector<Symbol> images_;
};

// p after q: compose(p, q)(i) = p(q(i)).
Permutation compose(const Permutation& p, const Permutation& q);
Permutation inverse(const Permutation& p);

// Ascending list of symbols with p(i) == i.
std::vector<Symbol> fixed_set(const Permutation& p);

// Canonical cycle form: only cycles of length >= 2, each rotated to start at
// its smallest element, cycles sorted by first element.
std::vector<std::vector<Symbol>> cycle_decomposition(const Permutation& p);

// Applies p symbolwise; validates every symbol against p's degree.
Word apply_word(const Permutation& p, const Word& m);

}  // namespace keq
