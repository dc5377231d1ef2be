#include "keq/distribution.hpp"

#include <algorithm>
#include <cmath>

#include "keq/error.hpp"
#include "keq/numeric.hpp"

namespace keq {

SymbolDistribution::SymbolDistribution(std::vector<double> probs) : probs_(std::move(probs)) {
  if (probs_.empty()) throw Error("distribution: empty");
  double sum = 0.0;
  for (double p : probs_) {
    if (!(p >= 0.0) || !std::isfinite(p)) throw Error("distribution: probabilities must be >= 0");
    sum += p;
  }
  if (std::abs(sum - 1.0) > 1e-12) throw Error("distribution: probabilities must sum to 1");
}

SymbolDistribution SymbolDistribution::uniform(std::size_t n) {
  if (n == 0) throw Error("distribution: empty");
  return SymbolDistribution(std::vector<double>(n, 1.0 / static_cast<double>(n)));
}

double SymbolDistribution::prob_of_set(std::span<const Symbol> set) const {
  std::vector<std::pair<double, Symbol>> items;
  items.reserve(set.size());
  for (Symbol s : set) {
    if (s >= probs_.size()) throw Error("prob_of_set: symbol out of range");
    items.emplace_back(probs_[s], s);
  }
  std::sort(items.begin(), items.end(), [](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first > b.first;
    return a.second < b.second;
  });
  KahanSum sum;
  for (const auto& it : items) sum.add(it.first);
  return sum.value();
}

SymbolDistribution blockify(const SymbolDistribution& base, unsigned d,
                            std::size_t alphabet_cap) {
  if (d == 0) throw Error("blockify: block width must be >= 1");
  std::size_t n = base.size();
  std::size_t total = 1;
  for (unsigned i = 0; i < d; ++i) {
    if (total > alphabet_cap / n + 1) throw CapExceeded("blockify: block alphabet exceeds cap");
    total *= n;
    if (total > alphabet_cap) throw CapExceeded("blockify: block alphabet exceeds cap");
  }
  // iterated Kronecker product; index grows big-endian (first symbol most
  // significant), matching the block encoding
  std::vector<double> out(base.probs().begin(), base.probs().end());
  for (unsigned step = 1; step < d; ++step) {
    std::vector<double> next(out.size() * n);
    for (std::size_t i = 0; i < out.size(); ++i)
      for (std::size_t j = 0; j < n; ++j) next[i * n + j] = out[i] * base[j];
    out = std::move(next);
  }
  return SymbolDistribution(std::move(out));
}

}  // namespace keq
