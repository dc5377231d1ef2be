#include "keq/equivocation.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <cstdio>
#include <random>
#include <set>
#include <thread>

#include "keq/attack.hpp"
#include "keq/error.hpp"
#include "keq/kernels.hpp"
#include "keq/numeric.hpp"

namespace keq {

namespace {

// Support symbols arranged so that bit b of a subset mask carries the b-th
// smallest probability (ties: larger symbol index on the lower bit). The
// subset-sum chain S[m] = S[m minus lowest bit] + p[lowest bit] then
// accumulates each subset's probability largest-first.
std::vector<Symbol> bit_order(const SymbolDistribution& dist, std::span<const Symbol> sorted) {
  std::vector<std::pair<double, Symbol>> items;
  items.reserve(sorted.size());
  for (Symbol s : sorted) items.emplace_back(dist[s], s);
  std::sort(items.begin(), items.end(), [](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first < b.first;
    return a.second > b.second;
  });
  std::vector<Symbol> syms(items.size());
  for (std::size_t i = 0; i < items.size(); ++i) syms[i] = items[i].second;
  return syms;
}

std::vector<double> subset_sums(const SymbolDistribution& dist, const std::vector<Symbol>& syms) {
  const std::size_t t = syms.size();
  std::vector<double> s(std::size_t{1} << t, 0.0);
  for (std::size_t m = 1; m < s.size(); ++m) {
    const unsigned low = std::countr_zero(m);
    s[m] = s[m & (m - 1)] + dist[syms[low]];
  }
  return s;
}

double log_ratio(std::size_t count, double base_log) {
  return std::log(static_cast<double>(count)) / base_log;
}

std::vector<Symbol> normalized_support(const SymbolDistribution& dist,
                                       std::span<const Symbol> support) {
  std::vector<Symbol> set(support.begin(), support.end());
  std::sort(set.begin(), set.end());
  set.erase(std::unique(set.begin(), set.end()), set.end());
  for (Symbol s : set)
    if (s >= dist.size()) throw Error("support_probability: symbol out of range");
  return set;
}

}  // namespace

double support_probability(const SymbolDistribution& dist, std::span<const Symbol> support,
                           unsigned L) {
  std::vector<Symbol> set = normalized_support(dist, support);
  const std::size_t t = set.size();
  if (t == 0) return L == 0 ? 1.0 : 0.0;
  if (t > kMaxSubsetBits)
    throw CapExceeded("support_probability: support has " + std::to_string(t) +
                      " symbols (cap " + std::to_string(kMaxSubsetBits) +
                      "); use the Monte Carlo estimator");
  if (t > L) return 0.0;

  auto syms = bit_order(dist, set);
  auto sums = subset_sums(dist, syms);
  std::vector<double> terms(sums.size());
  for (std::size_t m = 0; m < sums.size(); ++m) {
    const double v = pow_prob(sums[m], L);
    terms[m] = ((t - std::popcount(m)) & 1) ? -v : v;
  }
  return std::max(sum_descending(terms), 0.0);
}

namespace {

// Shared state for one exact evaluation.
struct ExactContext {
  const CipherModel& model;
  const MaximalKeyReport& report;
  unsigned L;
  double base_log;
  std::vector<double> terms;
};

void per_subset_terms_masked(ExactContext& ctx) {
  const GeneratedGroup& g = *ctx.model.group;
  std::vector<std::uint64_t> cands;
  for (const auto& f : ctx.report.distinct_maximal_fixed_sets) {
    std::uint64_t fmask = 0;
    for (Symbol s : f) fmask |= std::uint64_t{1} << s;
    for (std::uint64_t sub = fmask; sub != 0; sub = (sub - 1) & fmask) cands.push_back(sub);
  }
  std::sort(cands.begin(), cands.end());
  cands.erase(std::unique(cands.begin(), cands.end()), cands.end());

  std::vector<Symbol> symbols;
  for (std::uint64_t mask : cands) {
    const std::size_t size = g.stabilizer_size(mask);
    if (size <= 1) continue;
    symbols.clear();
    for (std::uint64_t m = mask; m != 0; m &= m - 1)
      symbols.push_back(static_cast<Symbol>(std::countr_zero(m)));
    const double p = support_probability(ctx.model.distribution, symbols, ctx.L);
    if (p > 0.0) ctx.terms.push_back(log_ratio(size, ctx.base_log) * p);
  }
}

void per_subset_terms_sets(ExactContext& ctx) {
  const GeneratedGroup& g = *ctx.model.group;
  std::set<std::vector<Symbol>> cands;
  for (const auto& f : ctx.report.distinct_maximal_fixed_sets) {
    const std::size_t t = f.size();
    for (std::uint64_t sub = 1; sub < (std::uint64_t{1} << t); ++sub) {
      std::vector<Symbol> cand;
      for (std::uint64_t m = sub; m != 0; m &= m - 1)
        cand.push_back(f[std::countr_zero(m)]);
      cands.insert(std::move(cand));
    }
  }
  for (const auto& cand : cands) {
    const std::size_t size = g.stabilizer_size(cand);
    if (size <= 1) continue;
    const double p = support_probability(ctx.model.distribution, cand, ctx.L);
    if (p > 0.0) ctx.terms.push_back(log_ratio(size, ctx.base_log) * p);
  }
}

void lattice_terms(ExactContext& ctx) {
  const GeneratedGroup& g = *ctx.model.group;
  const auto& sets = ctx.report.distinct_maximal_fixed_sets;
  const bool masked = g.degree() <= 64;

  std::vector<std::uint64_t> set_masks;
  if (masked) {
    set_masks.reserve(sets.size());
    for (const auto& f : sets) {
      std::uint64_t m = 0;
      for (Symbol s : f) m |= std::uint64_t{1} << s;
      set_masks.push_back(m);
    }
  }

  std::vector<Symbol> t_syms;
  for (std::size_t fi = 0; fi < sets.size(); ++fi) {
    const auto& f = sets[fi];
    const std::size_t t = f.size();
    if (t == 0) continue;
    auto syms = bit_order(ctx.model.distribution, f);
    auto v = subset_sums(ctx.model.distribution, syms);
    kernels::pow_inplace(v.data(), v.size(), ctx.L);
    // in-place Moebius transform: v[m] becomes P[support == symbols of m]
    for (std::size_t b = 0; b < t; ++b) {
      const std::size_t bit = std::size_t{1} << b;
      for (std::size_t m = 0; m < v.size(); ++m)
        if (m & bit) v[m] -= v[m ^ bit];
    }
    // stabilizer sizes for every subset at once: count elements per restricted
    // fixed mask, then a superset-sum transform
    std::vector<std::uint32_t> cnt(v.size(), 0);
    for (std::size_t i = 0; i < g.order(); ++i) {
      auto row = g.element(i);
      std::size_t m = 0;
      for (std::size_t b = 0; b < t; ++b)
        if (row[syms[b]] == syms[b]) m |= std::size_t{1} << b;
      ++cnt[m];
    }
    for (std::size_t b = 0; b < t; ++b) {
      const std::size_t bit = std::size_t{1} << b;
      for (std::size_t m = 0; m < cnt.size(); ++m)
        if (!(m & bit)) cnt[m] += cnt[m | bit];
    }

    for (std::size_t m = 1; m < v.size(); ++m) {
      if (std::popcount(m) > static_cast<int>(ctx.L)) continue;
      // count each candidate support at the first maximal set containing it
      bool seen = false;
      if (masked) {
        std::uint64_t tg = 0;
        for (std::size_t x = m; x != 0; x &= x - 1)
          tg |= std::uint64_t{1} << syms[std::countr_zero(x)];
        for (std::size_t j = 0; j < fi && !seen; ++j)
          seen = (tg & set_masks[j]) == tg;
      } else {
        t_syms.clear();
        for (std::size_t x = m; x != 0; x &= x - 1)
          t_syms.push_back(syms[std::countr_zero(x)]);
        std::sort(t_syms.begin(), t_syms.end());
        for (std::size_t j = 0; j < fi && !seen; ++j)
          seen = std::includes(sets[j].begin(), sets[j].end(), t_syms.begin(), t_syms.end());
      }
      if (seen) continue;
      const std::size_t size = cnt[m];
      if (size <= 1) continue;
      const double p = std::max(v[m], 0.0);
      if (p > 0.0) ctx.terms.push_back(log_ratio(size, ctx.base_log) * p);
    }
  }
}

}  // namespace

double exact_equivocation(const CipherModel& model, unsigned L, const MaximalKeyReport& report,
                          const ExactOptions& opts) {
  if (L == 0) throw Error("exact: word length must be >= 1");
  if (report.degenerate) return 0.0;

  std::size_t max_f = 0;
  for (const auto& f : report.distinct_maximal_fixed_sets) max_f = std::max(max_f, f.size());
  if (max_f > opts.max_subset_bits)
    throw CapExceeded("exact: a maximal fixed set has " + std::to_string(max_f) +
                      " symbols (cap " + std::to_string(opts.max_subset_bits) +
                      "); use the Monte Carlo estimator");

  auto route = opts.route;
  if (route == ExactOptions::Route::automatic)
    route = max_f <= 14 ? ExactOptions::Route::per_subset : ExactOptions::Route::lattice;

  ExactContext ctx{model, report, L, std::log(model.log_base), {}};
  if (route == ExactOptions::Route::lattice)
    lattice_terms(ctx);
  else if (model.group->degree() <= 64)
    per_subset_terms_masked(ctx);
  else
    per_subset_terms_sets(ctx);
  return sum_descending(ctx.terms);
}

double exact_equivocation(const CipherModel& model, unsigned L, const ExactOptions& opts) {
  return exact_equivocation(model, L, maximal_keys(*model.group, model.distribution), opts);
}

double brute_force_equivocation(const CipherModel& model, unsigned L) {
  if (L == 0) throw Error("brute force: word length must be >= 1");
  const GeneratedGroup& g = *model.group;
  const std::size_t n = g.degree();
  if (g.order() > kMaxBruteKeys)
    throw CapExceeded("brute force: key space exceeds " + std::to_string(kMaxBruteKeys) +
                      " keys");
  double words = 1.0;
  for (unsigned i = 0; i < L; ++i) words *= static_cast<double>(n);
  if (words > static_cast<double>(kMaxBruteWords))
    throw CapExceeded("brute force: word space exceeds " + std::to_string(kMaxBruteWords) +
                      " words");

  const double base_log = std::log(model.log_base);
  std::vector<Symbol> w(L, 0);
  double h = 0.0;
  while (true) {
    double p = 1.0;
    for (Symbol s : w) p *= model.distribution[s];
    if (p > 0.0) {
      std::size_t count = 0;
      for (std::size_t i = 0; i < g.order(); ++i) {
        auto row = g.element(i);
        bool fixes = true;
        for (Symbol s : w) {
          if (row[s] != s) {
            fixes = false;
            break;
          }
        }
        if (fixes) ++count;
      }
      h += p * (std::log(static_cast<double>(count)) / base_log);
    }
    // odometer advance
    unsigned pos = 0;
    while (pos < L && ++w[pos] == n) w[pos++] = 0;
    if (pos == L) break;
  }
  return h;
}

Bounds equivocation_bounds(const CipherModel& model, unsigned L, const MaximalKeyReport& report) {
  if (L == 0) throw Error("bounds: word length must be >= 1");
  Bounds b;
  if (report.degenerate || report.rate == 0.0) return b;
  const double base_log = std::log(model.log_base);
  const double rl = pow_prob(report.rate, L);
  b.lower = (std::log(2.0) / base_log) * rl;
  const double log_k = log_ratio(report.group_order, base_log);
  b.upper_coarse = log_k * static_cast<double>(report.n_maximal_keys()) * rl;
  std::vector<double> terms(report.fixed_set_prob.size());
  for (std::size_t i = 0; i < terms.size(); ++i) terms[i] = pow_prob(report.fixed_set_prob[i], L);
  b.upper_tight = log_k * sum_descending(terms);
  return b;
}

Bounds equivocation_bounds(const CipherModel& model, unsigned L) {
  return equivocation_bounds(model, L, maximal_keys(*model.group, model.distribution));
}

McEstimate monte_carlo_equivocation(const CipherModel& model, unsigned L, std::size_t samples,
                                    std::uint64_t seed, unsigned workers) {
  if (L == 0) throw Error("monte carlo: word length must be >= 1");
  if (samples == 0) throw Error("monte carlo: sample count must be >= 1");
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
  const std::size_t n_chunks = (samples + kChunk - 1) / kChunk;
  std::vector<double> chunk_sum(n_chunks, 0.0), chunk_sumsq(n_chunks, 0.0);

  auto run_chunk = [&](std::size_t c) {
    const std::size_t count = std::min(kChunk, samples - c * kChunk);
    std::mt19937_64 rng(derive_stream_seed(seed, c));
    double sum = 0.0, sumsq = 0.0;
    const bool masked = n <= 64;
    Word w;
    if (!masked) w.resize(L);
    for (std::size_t s = 0; s < count; ++s) {
      std::uint64_t mask = 0;
      for (unsigned i = 0; i < L; ++i) {
        const double u = static_cast<double>(rng() >> 11) * 0x1p-53;
        auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
        std::size_t idx = static_cast<std::size_t>(it - cdf.begin());
        if (idx >= n) idx = n - 1;
        if (masked)
          mask |= std::uint64_t{1} << idx;
        else
          w[i] = static_cast<Symbol>(idx);
      }
      const std::size_t size = masked ? g.stabilizer_size(mask) : g.word_stabilizer(w).size();
      const double x = std::log(static_cast<double>(size)) / base_log;
      sum += x;
      sumsq += x * x;
    }
    chunk_sum[c] = sum;
    chunk_sumsq[c] = sumsq;
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

  double total = 0.0, totalsq = 0.0;
  for (std::size_t c = 0; c < n_chunks; ++c) {
    total += chunk_sum[c];
    totalsq += chunk_sumsq[c];
  }
  McEstimate est;
  est.samples = samples;
  est.mean = total / static_cast<double>(samples);
  if (samples > 1) {
    const double m2 = std::max(0.0, totalsq - total * est.mean);
    est.std_error = std::sqrt(m2 / static_cast<double>(samples - 1) /
                              static_cast<double>(samples));
  }
  return est;
}

std::optional<double> message_key_entropy(const CipherModel& model, const Word& m, const Word& c) {
  AttackOutcome out = consistent_keys(model, m, c);
  if (out.consistent_count == 0) return std::nullopt;
  return out.residual_entropy;
}

std::string csv_header() { return "L,exact,lower,upper_paper,upper_tight,mc_mean,mc_stderr"; }

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::string csv_row(const EquivocationRow& row) {
  std::string s = std::to_string(row.L);
  s += ',';
  if (row.exact) s += format_double(*row.exact);
  s += ',';
  s += format_double(row.bounds.lower);
  s += ',';
  s += format_double(row.bounds.upper_coarse);
  s += ',';
  s += format_double(row.bounds.upper_tight);
  s += ',';
  if (row.mc) s += format_double(row.mc->mean);
  s += ',';
  if (row.mc) s += format_double(row.mc->std_error);
  return s;
}

}  // namespace keq
