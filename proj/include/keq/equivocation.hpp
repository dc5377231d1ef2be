#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "keq/group.hpp"
#include "keq/keyspace.hpp"

namespace keq {

// Probability that an L-symbol word drawn from dist has support exactly equal
// to the given symbol set, by inclusion-exclusion over its subsets:
//   sum_{S subseteq T} (-1)^{|T|-|S|} (P_S)^L
// Terms are accumulated in descending magnitude order with compensation.
double support_probability(const SymbolDistribution& dist, std::span<const Symbol> support,
                           unsigned L);

struct ExactOptions {
  // per_subset runs the public support_probability per candidate support;
  // lattice batches a whole fixed-set subset lattice through one Moebius
  // transform (used automatically for wide fixed sets). Both routes agree and
  // are cross-tested.
  enum class Route { automatic, per_subset, lattice };
  Route route = Route::automatic;
  unsigned max_subset_bits = kMaxSubsetBits;
};

// Exact key appearance equivocation at word length L (in the model's alphabet
// units), in log_base units:
//   H = sum over candidate supports T of log(|pointwise_stabilizer(T)|) * P[support = T]
// where T ranges over the nonempty subsets of the distinct maximal fixed
// sets, deduplicated across overlapping sets (all other supports have trivial
// stabilizer and contribute zero).
double exact_equivocation(const CipherModel& model, unsigned L, const ExactOptions& opts = {});
double exact_equivocation(const CipherModel& model, unsigned L, const MaximalKeyReport& report,
                          const ExactOptions& opts = {});

// Independent oracle: enumerates all N^L words and filters the key list
// directly for each word's stabilizer. Deliberately shares no machinery with
// exact_equivocation (no memoization, no bitmask kernels).
double brute_force_equivocation(const CipherModel& model, unsigned L);

// Sandwich bounds in log_base units. lower <= exact <= upper_tight <=
// upper_coarse always holds (upper_coarse is the product form
// log|K| * n_maximal_keys * R^L; upper_tight refines it to
// log|K| * sum over distinct maximal fixed sets of (P_F)^L).
// All powers are repeated-squaring with deep underflow reported as 0; if
// R == 0 every bound is 0.
struct Bounds {
  double lower = 0.0;
  double upper_coarse = 0.0;  // serialized as "upper_paper"
  double upper_tight = 0.0;
};

Bounds equivocation_bounds(const CipherModel& model, unsigned L);
Bounds equivocation_bounds(const CipherModel& model, unsigned L, const MaximalKeyReport& report);

struct McEstimate {
  double mean = 0.0;
  double std_error = 0.0;  // sample std / sqrt(samples)
  std::size_t samples = 0;
};

// Monte Carlo estimate of the exact equivocation: draws words from the
// product distribution and averages log(|word stabilizer|). Sampling is
// chunked; each fixed-size chunk derives its own RNG stream from (seed,
// chunk index) and partial sums combine in chunk order, so results are
// bit-identical for any worker count.
McEstimate monte_carlo_equivocation(const CipherModel& model, unsigned L, std::size_t samples,
                                    std::uint64_t seed, unsigned workers = 1);

// log_base of the number of keys consistent with the pair (m, c), or nullopt
// when no key maps m to c (a probability-zero pair).
std::optional<double> message_key_entropy(const CipherModel& model, const Word& m, const Word& c);

// One curve row. L is the user-facing length in base symbols (for position
// models the model-unit length times block width).
struct EquivocationRow {
  unsigned L = 0;
  std::optional<double> exact;
  Bounds bounds;
  std::optional<McEstimate> mc;
};

// CSV serialization: '.' decimal separator, 12 significant digits, empty
// fields for skipped computations.
std::string csv_header();
std::string csv_row(const EquivocationRow& row);
std::string format_double(double v);

}  // namespace keq
