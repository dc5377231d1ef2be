#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "keq/group.hpp"

namespace keq {

// Known-plaintext attack outcome for one (plaintext, ciphertext) pair. When
// the pair is consistent the surviving keys form the left coset
// representative * word_stabilizer(m), so consistent_count equals the
// stabilizer size; the representative is the consistent key with the
// smallest element index.
struct AttackOutcome {
  std::size_t consistent_count = 0;
  std::optional<std::uint32_t> representative_index;
  std::optional<Permutation> representative;
  std::size_t stabilizer_size = 0;  // |word_stabilizer(m)|, defined even when count == 0
  double residual_entropy = 0.0;    // log_base(consistent_count); 0 when count == 0
  bool resolved = false;            // exactly one key survives
};

AttackOutcome consistent_keys(const CipherModel& model, const Word& m, const Word& c);

// Direct filter over the whole key list (no coset shortcut); the reference
// route for the coset-law tests.
std::vector<std::uint32_t> consistent_key_indices(const CipherModel& model, const Word& m,
                                                  const Word& c);

struct TrajectoryRow {
  unsigned L = 0;  // model-alphabet units
  double mean_residual_entropy = 0.0;
  double std_error = 0.0;
  double frac_resolved = 0.0;
  std::size_t trials = 0;
};

// Samples `trials` attacks: each trial draws a uniform secret key and an
// L_max-symbol message, then records the per-prefix residual key entropy and
// whether the key is pinned down. Trials are chunked with per-chunk RNG
// streams derived from (seed, chunk index); results are bit-identical for
// any worker count.
std::vector<TrajectoryRow> simulate_attack(const CipherModel& model, unsigned L_max,
                                           std::size_t trials, std::uint64_t seed,
                                           unsigned workers = 1);

std::string trajectory_csv_header();
// length_scale multiplies the printed L (block width for position models).
std::string trajectory_csv_row(const TrajectoryRow& row, unsigned length_scale = 1);

// Reads a plaintext/ciphertext pair: exactly two data lines of 0-based
// integers separated by whitespace and/or commas; '#' starts a comment.
// Errors carry 1-based line numbers.
std::pair<Word, Word> load_pair_file(const std::string& path, std::size_t alphabet_size);

}  // namespace keq
