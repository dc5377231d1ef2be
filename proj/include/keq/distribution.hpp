#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "keq/caps.hpp"
#include "keq/perm.hpp"

namespace keq {

// Probability distribution over an alphabet. Entries must be >= 0 and sum to
// 1 within 1e-12.
class SymbolDistribution {
 public:
  explicit SymbolDistribution(std::vector<double> probs);
  static SymbolDistribution uniform(std::size_t n);

  std::size_t size() const { return probs_.size(); }
  double operator[](std::size_t i) const { return probs_[i]; }
  std::span<const double> probs() const { return probs_; }

  // Total probability of a set of symbols, accumulated in descending
  // probability order (ties by ascending index) with compensated summation.
  // Every fixed-set probability in the library goes through here, so equal
  // value multisets round identically on every code path.
  double prob_of_set(std::span<const Symbol> set) const;

 private:
  std::vector<double> probs_;
};

// Product distribution over blocks of d symbols, big-endian block encoding:
// block (m_0,...,m_{d-1}) has index sum m_i * N^(d-1-i) and probability
// prod P(m_i). Refuses block alphabets larger than alphabet_cap.
SymbolDistribution blockify(const SymbolDistribution& base, unsigned d,
                            std::size_t alphabet_cap = kMaxAlphabet);

}  // namespace keq
