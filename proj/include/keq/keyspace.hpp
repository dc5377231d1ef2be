#pragma once

#include <cstdint>
#include <vector>

#include "json.hpp"

#include "keq/group.hpp"

namespace keq {

// Maximal-key structure of a key space under a symbol distribution. A key is
// maximal when its fixed set is inclusion-maximal among all non-identity
// keys (ties: every key of an inclusion-maximal fixed set is maximal). Both
// the key count and the distinct-fixed-set count are reported; they differ
// whenever several keys share a fixed set.
struct MaximalKeyReport {
  std::size_t group_order = 1;
  bool degenerate = false;  // key space is {identity}

  std::vector<std::uint32_t> maximal_key_indices;  // ascending element index
  std::vector<double> per_key_prob;                // parallel: P over that key's fixed set

  std::vector<std::vector<Symbol>> distinct_maximal_fixed_sets;  // each sorted; list lex-sorted
  std::vector<double> fixed_set_prob;                            // parallel to the sets

  double rate = 0.0;                        // R = max per-key fixed-set probability
  std::vector<std::uint32_t> argmax_keys;   // maximal keys attaining R

  std::size_t n_maximal_keys() const { return maximal_key_indices.size(); }
  std::size_t n_maximal_fixed_sets() const { return distinct_maximal_fixed_sets.size(); }
  nlohmann::json to_json() const;
};

MaximalKeyReport maximal_keys(const GeneratedGroup& g, const SymbolDistribution& dist);
double rate(const GeneratedGroup& g, const SymbolDistribution& dist);

// Closed-form profiles for the named families, computed without enumerating
// the group:
//   symmetric n:  R = sum of the n-2 largest probabilities, order n!,
//                 C(n,2) maximal keys and distinct fixed sets
//   alternating n: R = sum of the n-3 largest, order n!/2, 2*C(n,3) maximal
//                 keys over C(n,3) distinct fixed sets (3-cycles pair up)
//   position d:   R = sum of squared base probabilities, order d!, C(d,2)
//                 maximal keys and distinct fixed sets
//   affine q:     R = largest probability, order q(q-1), q(q-2) maximal keys
//                 over q distinct singleton fixed sets (requires q >= 3)
// The generators family has no closed form.
struct ClosedFormProfile {
  double rate = 0.0;
  std::uint64_t order = 0;
  std::uint64_t n_maximal_keys = 0;
  std::uint64_t n_maximal_fixed_sets = 0;
};

ClosedFormProfile closed_form_profile(const GroupFamilySpec& spec,
                                      const SymbolDistribution& base_dist);

}  // namespace keq
