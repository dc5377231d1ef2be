#include "keq/attack.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <random>
#include <thread>

#include "keq/equivocation.hpp"
#include "keq/error.hpp"
#include "keq/numeric.hpp"

namespace keq {

namespace {

void validate_pair(const CipherModel& model, const Word& m, const Word& c) {
  if (m.size() != c.size()) throw Error("attack: plaintext and ciphertext lengths differ");
  if (m.empty()) throw Error("attack: empty words");
  const std::size_t n = model.group->degree();
  for (Symbol s : m)
    if (s >= n) throw Error("attack: plaintext symbol out of range");
  for (Symbol s : c)
    if (s >= n) throw Error("attack: ciphertext symbol out of range");
}

std::size_t bounded(std::mt19937_64& rng, std::size_t n) {
  return static_cast<std::size_t>(
      (static_cast<unsigned __int128>(rng()) * n) >> 64);
}

}  // namespace

AttackOutcome consistent_keys(const CipherModel& model, const Word& m, const Word& c) {
  validate_pair(model, m, c);
  const GeneratedGroup& g = *model.group;
  const std::size_t n = g.degree();

  AttackOutcome out;
  out.stabilizer_size = g.word_stabilizer(m).size();

  // Distinct constraints s -> t; any repeated source or target conflict means
  // no bijection maps m to c.
  std::vector<std::int64_t> fwd(n, -1), rev(n, -1);
  std::vector<std::pair<Symbol, Symbol>> pairs;
  for (std::size_t i = 0; i < m.size(); ++i) {
    const Symbol s = m[i], t = c[i];
    if (fwd[s] >= 0) {
      if (fwd[s] != t) return out;
      continue;
    }
    if (rev[t] >= 0) return out;
    fwd[s] = t;
    rev[t] = s;
    pairs.emplace_back(s, t);
  }

  for (std::size_t i = 0; i < g.order(); ++i) {
    auto row = g.element(i);
    bool match = true;
    for (const auto& [s, t] : pairs) {
      if (row[s] != t) {
        match = false;
        break;
      }
    }
    if (match) {
      out.representative_index = static_cast<std::uint32_t>(i);
      out.representative = g.permutation(i);
      break;
    }
  }
  if (!out.representative_index) return out;

  out.consistent_count = out.stabilizer_size;
  out.residual_entropy = std::log(static_cast<double>(out.consistent_count)) /
                         std::log(model.log_base);
  out.resolved = out.consistent_count == 1;
  return out;
}

std::vector<std::uint32_t> consistent_key_indices(const CipherModel& model, const Word& m,
                                                  const Word& c) {
  validate_pair(model, m, c);
  const GeneratedGroup& g = *model.group;
  std::vector<std::uint32_t> out;
  for (std::size_t i = 0; i < g.order(); ++i) {
    auto row = g.element(i);
    bool match = true;
    for (std::size_t p = 0; p < m.size(); ++p) {
      if (row[m[p]] != c[p]) {
        match = false;
        break;
      }
    }
    if (match) out.push_back(static_cast<std::uint32_t>(i));
  }
  return out;
}

std::vector<TrajectoryRow> simulate_attack(const CipherModel& model, unsigned L_max,
                                           std::size_t trials, std::uint64_t seed,
                                           unsigned workers) {
  if (L_max == 0) throw Error("attack simulation: maximum length must be >= 1");
  if (trials == 0) throw Error("attack simulation: trial count must be >= 1");
  const GeneratedGroup& g = *model.group;
  const std::size_t n = g.degree();
  const double base_log = std::log(model.log_base);

  std::vector<double> cdf(n);
  double running = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    running += model.distribution[i];
    cdf[i] = running;
  }

  constexpr std::size_t kChunk = 8192;
  const std::size_t n_chunks = (trials + kChunk - 1) / kChunk;
  // per chunk, per prefix length: sum, sum of squares, resolved count
  std::vector<double> sums(n_chunks * L_max, 0.0), sumsqs(n_chunks * L_max, 0.0);
  std::vector<std::size_t> resolved(n_chunks * L_max, 0);

  auto run_chunk = [&](std::size_t ci) {
    const std::size_t count = std::min(kChunk, trials - ci * kChunk);
    std::mt19937_64 rng(derive_stream_seed(seed, ci));
    const bool masked = n <= 64;
    double* sum = sums.data() + ci * L_max;
    double* sumsq = sumsqs.data() + ci * L_max;
    std::size_t* res = resolved.data() + ci * L_max;
    Word w(L_max);
    for (std::size_t trial = 0; trial < count; ++trial) {
      bounded(rng, g.order());  // the secret key; the surviving-key count does not depend on it
      for (unsigned i = 0; i < L_max; ++i) {
        const double u = static_cast<double>(rng() >> 11) * 0x1p-53;
        auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
        std::size_t idx = static_cast<std::size_t>(it - cdf.begin());
        if (idx >= n) idx = n - 1;
        w[i] = static_cast<Symbol>(idx);
      }
      std::uint64_t mask = 0;
      for (unsigned L = 1; L <= L_max; ++L) {
        std::size_t size;
        if (masked) {
          mask |= std::uint64_t{1} << w[L - 1];
          size = g.stabilizer_size(mask);
        } else {
          Word prefix(w.begin(), w.begin() + L);
          size = g.word_stabilizer(prefix).size();
        }
        const double x = std::log(static_cast<double>(size)) / base_log;
        sum[L - 1] += x;
        sumsq[L - 1] += x * x;
        if (size == 1) ++res[L - 1];
      }
    }
  };

  const unsigned n_workers =
      static_cast<unsigned>(std::min<std::size_t>(std::max(1u, workers), n_chunks));
  if (n_workers <= 1) {
    for (std::size_t c = 0; c < n_chunks; ++c) run_chunk(c);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(n_workers);
    for (unsigned t = 0; t < n_workers; ++t)
      pool.emplace_back([&] {
        for (std::size_t c = next.fetch_add(1); c < n_chunks; c = next.fetch_add(1)) run_chunk(c);
      });
    for (auto& th : pool) th.join();
  }

  std::vector<TrajectoryRow> rows(L_max);
  for (unsigned L = 1; L <= L_max; ++L) {
    double total = 0.0, totalsq = 0.0;
    std::size_t res_total = 0;
    for (std::size_t c = 0; c < n_chunks; ++c) {
      total += sums[c * L_max + (L - 1)];
      totalsq += sumsqs[c * L_max + (L - 1)];
      res_total += resolved[c * L_max + (L - 1)];
    }
    TrajectoryRow& row = rows[L - 1];
    row.L = L;
    row.trials = trials;
    row.mean_residual_entropy = total / static_cast<double>(trials);
    if (trials > 1) {
      const double m2 = std::max(0.0, totalsq - total * row.mean_residual_entropy);
      row.std_error = std::sqrt(m2 / static_cast<double>(trials - 1) /
                                static_cast<double>(trials));
    }
    row.frac_resolved = static_cast<double>(res_total) / static_cast<double>(trials);
  }
  return rows;
}

std::string trajectory_csv_header() {
  return "L,mean_residual_entropy,stderr,frac_resolved,trials";
}

std::string trajectory_csv_row(const TrajectoryRow& row, unsigned length_scale) {
  std::string s = std::to_string(static_cast<std::uint64_t>(row.L) * length_scale);
  s += ',';
  s += format_double(row.mean_residual_entropy);
  s += ',';
  s += format_double(row.std_error);
  s += ',';
  s += format_double(row.frac_resolved);
  s += ',';
  s += std::to_string(row.trials);
  return s;
}

std::pair<Word, Word> load_pair_file(const std::string& path, std::size_t alphabet_size) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open pair file: " + path);

  std::vector<Word> words;
  std::vector<std::size_t> word_lines;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    Word w;
    std::string token;
    auto flush_token = [&] {
      if (token.empty()) return;
      char* end = nullptr;
      errno = 0;
      const unsigned long long v = std::strtoull(token.c_str(), &end, 10);
      if (errno != 0 || end != token.c_str() + token.size() ||
          token.find_first_not_of("0123456789") != std::string::npos)
        throw Error("pair file line " + std::to_string(line_no) + ": invalid symbol '" +
                    token + "'");
      if (v >= alphabet_size)
        throw Error("pair file line " + std::to_string(line_no) + ": symbol " +
                    std::to_string(v) + " out of range (alphabet size " +
                    std::to_string(alphabet_size) + ")");
      w.push_back(static_cast<Symbol>(v));
      token.clear();
    };
    for (char ch : line) {
      if (ch == ' ' || ch == '\t' || ch == '\r' || ch == ',')
        flush_token();
      else
        token.push_back(ch);
    }
    flush_token();
    if (!w.empty()) {
      words.push_back(std::move(w));
      word_lines.push_back(line_no);
    }
  }
  if (words.size() != 2)
    throw Error("pair file: expected 2 data lines (plaintext then ciphertext), found " +
                std::to_string(words.size()));
  if (words[0].size() != words[1].size())
    throw Error("pair file: plaintext and ciphertext lengths differ (" +
                std::to_string(words[0].size()) + " vs " + std::to_string(words[1].size()) +
                ")");
  return {std::move(words[0]), std::move(words[1])};
}

}  // namespace keq
