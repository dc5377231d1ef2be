#pragma once

#include <cstdint>
#include <vector>

#include "keq/perm.hpp"

namespace keq {

// GF(p^k) with q = p^k in [2, 4096]. Elements are the integers 0..q-1; for
// extension fields the integer is the base-p encoding of the polynomial
// coefficient vector, constant term in the least significant digit (so the
// field element 1 is the integer 1). The modulus is the lexicographically
// least monic irreducible of degree k, ordering candidates by that same
// integer encoding of their non-leading coefficients; it is found
// deterministically at construction. For reference: GF(4) uses x^2+x+1,
// GF(8) x^3+x+1, GF(9) x^2+1.
class FiniteField {
 public:
  static FiniteField make(std::uint32_t q);

  std::uint32_t order() const { return q_; }
  std::uint32_t characteristic() const { return p_; }
  std::uint32_t degree() const { return k_; }
  // Non-leading modulus coefficients, constant term first; empty for k == 1.
  const std::vector<std::uint32_t>& modulus() const { return modulus_; }

  std::uint32_t add(std::uint32_t a, std::uint32_t b) const;
  std::uint32_t sub(std::uint32_t a, std::uint32_t b) const;
  std::uint32_t neg(std::uint32_t a) const;
  std::uint32_t mul(std::uint32_t a, std::uint32_t b) const;
  std::uint32_t pow(std::uint32_t a, std::uint64_t e) const;
  std::uint32_t inv(std::uint32_t a) const;  // a != 0

 private:
  FiniteField(std::uint32_t p, std::uint32_t k, std::vector<std::uint32_t> modulus);

  std::uint32_t p_ = 0;
  std::uint32_t k_ = 0;
  std::uint32_t q_ = 0;
  std::vector<std::uint32_t> modulus_;
};

// x -> a*x + b on the element encoding; requires a != 0 ("not invertible").
Permutation affine_permutation(const FiniteField& f, std::uint32_t a, std::uint32_t b);

}  // namespace keq
