#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <span>
#include <unordered_map>
#include <vector>

#include "json.hpp"

#include "keq/caps.hpp"
#include "keq/distribution.hpp"
#include "keq/finite_field.hpp"
#include "keq/perm.hpp"

namespace keq {

// A finite permutation group held as an explicit, deduplicated element table.
// Element 0 is always the identity: generator closure seeds its BFS with the
// identity, and the lexicographically enumerated families contain it as their
// lex-least row. Stabilizer queries are memoized per support set and safe to
// run concurrently.
class GeneratedGroup {
 public:
  // Moves transfer the element table; memoized stabilizer state starts fresh
  // in the destination (it is rebuilt on demand).
  GeneratedGroup(GeneratedGroup&& o) noexcept;
  GeneratedGroup& operator=(GeneratedGroup&&) = delete;

  std::size_t degree() const { return degree_; }
  std::size_t order() const { return order_; }
  std::size_t identity_index() const { return 0; }
  std::span<const Symbol> element(std::size_t i) const {
    return {flat_.data() + i * degree_, degree_};
  }
  Permutation permutation(std::size_t i) const;
  const std::vector<Permutation>& generators() const { return generators_; }

  std::optional<std::uint32_t> index_of(std::span<const Symbol> images) const;

  // Elements fixing every listed symbol (duplicates/order in `points` do not
  // matter); the empty set yields the whole group. Returned reference stays
  // valid for the group's lifetime.
  const std::vector<std::uint32_t>& pointwise_stabilizer(std::span<const Symbol> points) const;
  std::size_t stabilizer_size(std::span<const Symbol> points) const;
  // Fast path keyed by support bitmask; requires degree <= 64.
  std::size_t stabilizer_size(std::uint64_t support_mask) const;
  // Stabilizer of a word = pointwise stabilizer of its support.
  const std::vector<std::uint32_t>& word_stabilizer(const Word& m) const;

  // Per-element fixed-point bitmasks (degree <= 64), built lazily.
  std::span<const std::uint64_t> fixed_point_masks() const;

  // dst = element(i) composed after element(j)'s images (dst[x] = row_i[row_j[x]]).
  void compose_rows(std::span<const Symbol> p, std::span<const Symbol> q, Symbol* dst) const;

  static GeneratedGroup closure(const std::vector<Permutation>& gens, std::size_t order_cap);
  static GeneratedGroup from_rows(std::vector<Symbol> flat, std::size_t degree,
                                  std::vector<Permutation> gens);

 private:
  GeneratedGroup() = default;
  void check_identity_first() const;

  std::size_t degree_ = 0;
  std::size_t order_ = 0;
  std::vector<Symbol> flat_;  // element-major image rows
  std::vector<Permutation> generators_;

  mutable std::once_flag masks_once_;
  mutable std::vector<std::uint64_t> fixed_masks_;

  mutable std::once_flag sorted_once_;
  mutable std::vector<std::uint32_t> lex_sorted_;  // element indices in lex row order

  mutable std::shared_mutex stab_mu_;
  mutable std::unordered_map<std::uint64_t, std::shared_ptr<const std::vector<std::uint32_t>>> stab_by_mask_;
  mutable std::map<std::vector<Symbol>, std::shared_ptr<const std::vector<std::uint32_t>>> stab_by_set_;
};

// BFS closure from the identity, generators applied in input order by right
// multiplication; discovery order is the element order. Exceeding order_cap
// raises CapExceeded mentioning the partial count.
GeneratedGroup generate(const std::vector<Permutation>& gens,
                        std::size_t order_cap = kDefaultOrderCap);

// Named families, enumerated in lexicographic image order.
GeneratedGroup symmetric_group(unsigned n, const Caps& caps = {});
GeneratedGroup alternating_group(unsigned n, const Caps& caps = {});
GeneratedGroup affine_group(const FiniteField& f, const Caps& caps = {});
// Block-position permutations: d-symbol blocks over a base alphabet of
// base_n symbols, acting on the N = base_n^d block alphabet.
GeneratedGroup position_group(unsigned d, unsigned base_n, const Caps& caps = {});

// True iff `subset` (element indices) is the left coset rep * H for some
// subgroup H, i.e. inverse(rep) * subset is closed under composition.
// rep must be listed in subset.
bool left_coset_check(const GeneratedGroup& g, std::span<const std::uint32_t> subset,
                      std::uint32_t rep);

// Closure/inverse audit: exhaustive for order <= exhaustive_limit, seeded
// random sampling above.
bool verify_group_closure(const GeneratedGroup& g, std::size_t exhaustive_limit = 5000,
                          std::size_t samples = 20000, std::uint64_t seed = 1);

struct GroupFamilySpec {
  enum class Family { symmetric, alternating, affine, position, generators };
  Family family = Family::symmetric;
  unsigned n = 0;       // symmetric / alternating
  unsigned q = 0;       // affine
  unsigned d = 0;       // position
  unsigned base_n = 0;  // position
  std::vector<Permutation> generator_list;

  static GroupFamilySpec from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;
  // Alphabet the group acts on (base_n^d for position).
  std::size_t alphabet_size() const;
  // Alphabet the user-supplied distribution describes (base_n for position).
  std::size_t base_alphabet_size() const;
  const char* family_name() const;
};

struct CipherModel {
  std::shared_ptr<const GeneratedGroup> group;
  SymbolDistribution distribution;  // over the group's alphabet
  double log_base = 2.0;
  unsigned block_width = 1;  // d for position families, 1 otherwise
};

CipherModel make_model(std::shared_ptr<const GeneratedGroup> group, SymbolDistribution dist,
                       double log_base = 2.0, unsigned block_width = 1);

// Builds the group and attaches the distribution (blockified for position
// families, where base_dist must cover the base alphabet).
CipherModel build_family(const GroupFamilySpec& spec, const SymbolDistribution& base_dist,
                         double log_base = 2.0, const Caps& caps = {});

}  // namespace keq
