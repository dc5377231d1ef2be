#include "keq/keyspace.hpp"

#include <algorithm>
#include <functional>
#include <map>

#include "keq/error.hpp"
#include "keq/numeric.hpp"

namespace keq {

namespace {

// b strictly contains a (both sorted ascending)
bool strict_superset(const std::vector<Symbol>& b, const std::vector<Symbol>& a) {
  if (b.size() <= a.size()) return false;
  return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

// Sum of the k largest probabilities, accumulated largest-first with Kahan
// compensation — the same value order prob_of_set uses, so closed forms and
// enumerated fixed-set probabilities agree bit for bit.
double sum_top_k(std::vector<double> probs, std::size_t k) {
  std::sort(probs.begin(), probs.end(), std::greater<>());
  KahanSum sum;
  for (std::size_t i = 0; i < k && i < probs.size(); ++i) sum.add(probs[i]);
  return sum.value();
}

std::uint64_t factorial_checked(std::uint64_t n) {
  std::uint64_t r = 1;
  for (std::uint64_t i = 2; i <= n; ++i) {
    if (r > UINT64_MAX / i) throw CapExceeded("closed form: order exceeds 64-bit range");
    r *= i;
  }
  return r;
}

std::uint64_t choose2(std::uint64_t n) { return n * (n - 1) / 2; }
std::uint64_t choose3(std::uint64_t n) { return n * (n - 1) * (n - 2) / 6; }

}  // namespace

MaximalKeyReport maximal_keys(const GeneratedGroup& g, const SymbolDistribution& dist) {
  if (dist.size() != g.degree())
    throw Error("maximal_keys: alphabet mismatch between group and distribution");

  MaximalKeyReport report;
  report.group_order = g.order();
  if (g.order() == 1) {
    report.degenerate = true;
    return report;
  }

  // Distinct fixed sets of the non-identity keys, in lexicographic order,
  // each with the keys that share it.
  std::map<std::vector<Symbol>, std::vector<std::uint32_t>> by_set;
  for (std::size_t i = 1; i < g.order(); ++i) {
    auto row = g.element(i);
    std::vector<Symbol> fixed;
    for (std::size_t x = 0; x < row.size(); ++x)
      if (row[x] == x) fixed.push_back(static_cast<Symbol>(x));
    by_set[std::move(fixed)].push_back(static_cast<std::uint32_t>(i));
  }

  // Keep the inclusion-maximal sets (every key of such a set is maximal).
  std::vector<const std::vector<Symbol>*> sets;
  sets.reserve(by_set.size());
  for (const auto& kv : by_set) sets.push_back(&kv.first);

  std::vector<std::pair<std::uint32_t, double>> keys_with_prob;
  for (const auto& kv : by_set) {
    bool dominated = false;
    for (const auto* other : sets) {
      if (strict_superset(*other, kv.first)) {
        dominated = true;
        break;
      }
    }
    if (dominated) continue;
    double p = dist.prob_of_set(kv.first);
    report.distinct_maximal_fixed_sets.push_back(kv.first);
    report.fixed_set_prob.push_back(p);
    for (std::uint32_t k : kv.second) keys_with_prob.emplace_back(k, p);
  }

  std::sort(keys_with_prob.begin(), keys_with_prob.end());
  report.maximal_key_indices.reserve(keys_with_prob.size());
  report.per_key_prob.reserve(keys_with_prob.size());
  for (const auto& [k, p] : keys_with_prob) {
    report.maximal_key_indices.push_back(k);
    report.per_key_prob.push_back(p);
  }

  report.rate = 0.0;
  for (double p : report.fixed_set_prob) report.rate = std::max(report.rate, p);
  for (const auto& [k, p] : keys_with_prob)
    if (p == report.rate) report.argmax_keys.push_back(k);
  return report;
}

double rate(const GeneratedGroup& g, const SymbolDistribution& dist) {
  return maximal_keys(g, dist).rate;
}

nlohmann::json MaximalKeyReport::to_json() const {
  nlohmann::json j;
  j["R"] = rate;
  j["order"] = group_order;
  j["n_maximal_keys"] = n_maximal_keys();
  j["n_maximal_fixed_sets"] = n_maximal_fixed_sets();
  j["maximal_fixed_sets"] = distinct_maximal_fixed_sets;
  j["argmax_keys"] = argmax_keys;
  return j;
}

ClosedFormProfile closed_form_profile(const GroupFamilySpec& spec,
                                      const SymbolDistribution& base_dist) {
  if (base_dist.size() != spec.base_alphabet_size())
    throw Error("closed form: distribution length does not match the family alphabet");
  ClosedFormProfile out;
  const std::span<const double> p = base_dist.probs();
  switch (spec.family) {
    case GroupFamilySpec::Family::symmetric: {
      if (spec.n < 2) throw Error("closed form: symmetric family requires n >= 2");
      out.rate = sum_top_k({p.begin(), p.end()}, spec.n - 2);
      out.order = factorial_checked(spec.n);
      out.n_maximal_keys = choose2(spec.n);
      out.n_maximal_fixed_sets = choose2(spec.n);
      return out;
    }
    case GroupFamilySpec::Family::alternating: {
      if (spec.n < 3) throw Error("closed form: alternating family requires n >= 3");
      out.rate = sum_top_k({p.begin(), p.end()}, spec.n - 3);
      out.order = factorial_checked(spec.n) / 2;
      out.n_maximal_keys = 2 * choose3(spec.n);
      out.n_maximal_fixed_sets = choose3(spec.n);
      return out;
    }
    case GroupFamilySpec::Family::position: {
      if (spec.d < 2) throw Error("closed form: position family requires d >= 2");
      std::vector<double> sq(p.size());
      for (std::size_t i = 0; i < p.size(); ++i) sq[i] = p[i] * p[i];
      out.rate = sum_top_k(std::move(sq), p.size());
      out.order = factorial_checked(spec.d);
      out.n_maximal_keys = choose2(spec.d);
      out.n_maximal_fixed_sets = choose2(spec.d);
      return out;
    }
    case GroupFamilySpec::Family::affine: {
      if (spec.q < 3) throw Error("closed form: affine family requires q >= 3");
      out.rate = *std::max_element(p.begin(), p.end());
      out.order = std::uint64_t{spec.q} * (spec.q - 1);
      out.n_maximal_keys = std::uint64_t{spec.q} * (spec.q - 2);
      out.n_maximal_fixed_sets = spec.q;
      return out;
    }
    case GroupFamilySpec::Family::generators:
      throw Error("closed form: not available for generator-built key spaces");
  }
  throw Error("closed form: unknown family");
}

}  // namespace keq
