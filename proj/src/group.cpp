#include "keq/group.hpp"

#include <algorithm>
#include <queue>
#include <random>

#include "keq/error.hpp"
#include "keq/kernels.hpp"

namespace keq {

namespace {

std::uint64_t hash_row(std::span<const Symbol> row) {
  std::uint64_t h = 0xcbf29ce484222325ull;  // FNV-1a over the image words
  for (Symbol s : row) {
    h ^= s;
    h *= 0x100000001b3ull;
  }
  return h;
}

bool rows_equal(std::span<const Symbol> a, std::span<const Symbol> b) {
  return std::equal(a.begin(), a.end(), b.begin());
}

bool row_less(std::span<const Symbol> a, std::span<const Symbol> b) {
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

std::size_t bounded(std::mt19937_64& rng, std::size_t n) {
  return static_cast<std::size_t>(
      (static_cast<unsigned __int128>(rng()) * n) >> 64);
}

std::uint64_t checked_pow(std::uint64_t base, unsigned e, std::uint64_t cap,
                          const char* what) {
  std::uint64_t v = 1;
  for (unsigned i = 0; i < e; ++i) {
    if (v > cap / base) throw CapExceeded(what);
    v *= base;
    if (v > cap) throw CapExceeded(what);
  }
  return v;
}

int parity(std::span<const Symbol> row) {
  int inv = 0;
  for (std::size_t i = 0; i < row.size(); ++i)
    for (std::size_t j = i + 1; j < row.size(); ++j)
      if (row[i] > row[j]) ++inv;
  return inv & 1;
}

}  // namespace

GeneratedGroup::GeneratedGroup(GeneratedGroup&& o) noexcept
    : degree_(o.degree_),
      order_(o.order_),
      flat_(std::move(o.flat_)),
      generators_(std::move(o.generators_)) {}

Permutation GeneratedGroup::permutation(std::size_t i) const {
  auto row = element(i);
  return Permutation(std::vector<Symbol>(row.begin(), row.end()));
}

void GeneratedGroup::check_identity_first() const {
  auto row = element(0);
  for (std::size_t i = 0; i < degree_; ++i)
    if (row[i] != i) throw Error("internal: identity is not element 0");
}

void GeneratedGroup::compose_rows(std::span<const Symbol> p, std::span<const Symbol> q,
                                  Symbol* dst) const {
  kernels::gather_u32(dst, p.data(), q.data(), degree_);
}

GeneratedGroup GeneratedGroup::from_rows(std::vector<Symbol> flat, std::size_t degree,
                                         std::vector<Permutation> gens) {
  GeneratedGroup g;
  g.degree_ = degree;
  g.order_ = flat.size() / degree;
  g.flat_ = std::move(flat);
  g.generators_ = std::move(gens);
  g.check_identity_first();
  return g;
}

GeneratedGroup GeneratedGroup::closure(const std::vector<Permutation>& gens,
                                       std::size_t order_cap) {
  if (gens.empty()) throw Error("generate: generator list is empty");
  const std::size_t n = gens[0].degree();
  for (const auto& g : gens)
    if (g.degree() != n) throw Error("generate: alphabet mismatch between generators");
  if (n > kMaxAlphabet) throw CapExceeded("generate: alphabet exceeds cap");

  std::vector<Symbol> flat;
  flat.reserve(64 * n);
  std::unordered_map<std::uint64_t, std::vector<std::uint32_t>> buckets;

  auto row_at = [&](std::size_t i) {
    return std::span<const Symbol>{flat.data() + i * n, n};
  };
  auto insert_if_new = [&](std::span<const Symbol> row) -> std::optional<std::uint32_t> {
    auto& bucket = buckets[hash_row(row)];
    for (std::uint32_t i : bucket)
      if (rows_equal(row_at(i), row)) return std::nullopt;
    auto idx = static_cast<std::uint32_t>(flat.size() / n);
    flat.insert(flat.end(), row.begin(), row.end());
    bucket.push_back(idx);
    return idx;
  };

  std::vector<Symbol> ident(n);
  for (std::size_t i = 0; i < n; ++i) ident[i] = static_cast<Symbol>(i);
  insert_if_new(ident);

  std::queue<std::uint32_t> frontier;
  frontier.push(0);
  std::vector<Symbol> scratch(n);
  while (!frontier.empty()) {
    std::uint32_t cur = frontier.front();
    frontier.pop();
    for (const auto& gen : gens) {
      // right multiplication: (cur * gen)(x) = cur(gen(x))
      kernels::gather_u32(scratch.data(), flat.data() + cur * n, gen.images().data(), n);
      if (auto idx = insert_if_new(scratch)) {
        if (flat.size() / n > order_cap)
          throw CapExceeded("group order cap exceeded: closure reached " +
                            std::to_string(flat.size() / n) + " elements (cap " +
                            std::to_string(order_cap) + ")");
        frontier.push(*idx);
      }
    }
  }
  return from_rows(std::move(flat), n, gens);
}

std::optional<std::uint32_t> GeneratedGroup::index_of(std::span<const Symbol> images) const {
  if (images.size() != degree_) return std::nullopt;
  std::call_once(sorted_once_, [this] {
    lex_sorted_.resize(order_);
    for (std::size_t i = 0; i < order_; ++i) lex_sorted_[i] = static_cast<std::uint32_t>(i);
    std::sort(lex_sorted_.begin(), lex_sorted_.end(),
              [this](std::uint32_t a, std::uint32_t b) { return row_less(element(a), element(b)); });
  });
  auto it = std::lower_bound(lex_sorted_.begin(), lex_sorted_.end(), images,
                             [this](std::uint32_t a, std::span<const Symbol> v) {
                               return row_less(element(a), v);
                             });
  if (it == lex_sorted_.end() || !rows_equal(element(*it), images)) return std::nullopt;
  return *it;
}

std::span<const std::uint64_t> GeneratedGroup::fixed_point_masks() const {
  if (degree_ > 64) throw Error("fixed_point_masks: degree exceeds 64");
  std::call_once(masks_once_, [this] {
    fixed_masks_.resize(order_);
    for (std::size_t i = 0; i < order_; ++i)
      fixed_masks_[i] = kernels::fixed_mask64(flat_.data() + i * degree_, degree_);
  });
  return fixed_masks_;
}

const std::vector<std::uint32_t>& GeneratedGroup::pointwise_stabilizer(
    std::span<const Symbol> points) const {
  std::vector<Symbol> key(points.begin(), points.end());
  std::sort(key.begin(), key.end());
  key.erase(std::unique(key.begin(), key.end()), key.end());
  for (Symbol s : key)
    if (s >= degree_) throw Error("pointwise_stabilizer: symbol out of range");

  if (degree_ <= 64) {
    std::uint64_t mask = 0;
    for (Symbol s : key) mask |= std::uint64_t{1} << s;
    {
      std::shared_lock lock(stab_mu_);
      auto it = stab_by_mask_.find(mask);
      if (it != stab_by_mask_.end()) return *it->second;
    }
    auto masks = fixed_point_masks();
    std::vector<std::uint32_t> out(order_);
    out.resize(kernels::filter_supersets64(masks.data(), order_, mask, out.data()));
    auto sp = std::make_shared<const std::vector<std::uint32_t>>(std::move(out));
    std::unique_lock lock(stab_mu_);
    return *stab_by_mask_.try_emplace(mask, std::move(sp)).first->second;
  }

  {
    std::shared_lock lock(stab_mu_);
    auto it = stab_by_set_.find(key);
    if (it != stab_by_set_.end()) return *it->second;
  }
  std::vector<std::uint32_t> out;
  for (std::size_t i = 0; i < order_; ++i) {
    auto row = element(i);
    bool ok = true;
    for (Symbol s : key) {
      if (row[s] != s) {
        ok = false;
        break;
      }
    }
    if (ok) out.push_back(static_cast<std::uint32_t>(i));
  }
  auto sp = std::make_shared<const std::vector<std::uint32_t>>(std::move(out));
  std::unique_lock lock(stab_mu_);
  return *stab_by_set_.try_emplace(std::move(key), std::move(sp)).first->second;
}

std::size_t GeneratedGroup::stabilizer_size(std::span<const Symbol> points) const {
  return pointwise_stabilizer(points).size();
}

std::size_t GeneratedGroup::stabilizer_size(std::uint64_t support_mask) const {
  if (degree_ > 64) throw Error("stabilizer_size(mask): degree exceeds 64");
  {
    std::shared_lock lock(stab_mu_);
    auto it = stab_by_mask_.find(support_mask);
    if (it != stab_by_mask_.end()) return it->second->size();
  }
  auto masks = fixed_point_masks();
  std::vector<std::uint32_t> out(order_);
  out.resize(kernels::filter_supersets64(masks.data(), order_, support_mask, out.data()));
  auto sp = std::make_shared<const std::vector<std::uint32_t>>(std::move(out));
  std::unique_lock lock(stab_mu_);
  return stab_by_mask_.try_emplace(support_mask, std::move(sp)).first->second->size();
}

const std::vector<std::uint32_t>& GeneratedGroup::word_stabilizer(const Word& m) const {
  for (Symbol s : m)
    if (s >= degree_) throw Error("word_stabilizer: symbol out of range");
  return pointwise_stabilizer(std::span<const Symbol>{m.data(), m.size()});
}

GeneratedGroup generate(const std::vector<Permutation>& gens, std::size_t order_cap) {
  if (order_cap == 0) throw Error("generate: order cap must be >= 1");
  return GeneratedGroup::closure(gens, order_cap);
}

GeneratedGroup symmetric_group(unsigned n, const Caps& caps) {
  if (n == 0) throw Error("symmetric_group: n must be >= 1");
  if (n > caps.max_alphabet) throw CapExceeded("symmetric_group: alphabet exceeds cap");
  std::uint64_t order = 1;
  for (unsigned i = 2; i <= n; ++i) {
    order *= i;
    if (order > caps.max_order) throw CapExceeded("symmetric_group: group order exceeds cap");
  }
  std::vector<Symbol> row(n);
  for (unsigned i = 0; i < n; ++i) row[i] = i;
  std::vector<Symbol> flat;
  flat.reserve(static_cast<std::size_t>(order) * n);
  do {
    flat.insert(flat.end(), row.begin(), row.end());
  } while (std::next_permutation(row.begin(), row.end()));
  return GeneratedGroup::from_rows(std::move(flat), n, {});
}

GeneratedGroup alternating_group(unsigned n, const Caps& caps) {
  if (n == 0) throw Error("alternating_group: n must be >= 1");
  if (n > caps.max_alphabet) throw CapExceeded("alternating_group: alphabet exceeds cap");
  std::uint64_t order = 1;
  for (unsigned i = 2; i <= n; ++i) {
    order *= i;
    if (order / 2 > caps.max_order) throw CapExceeded("alternating_group: group order exceeds cap");
  }
  std::vector<Symbol> row(n);
  for (unsigned i = 0; i < n; ++i) row[i] = i;
  std::vector<Symbol> flat;
  do {
    if (parity(row) == 0) flat.insert(flat.end(), row.begin(), row.end());
  } while (std::next_permutation(row.begin(), row.end()));
  return GeneratedGroup::from_rows(std::move(flat), n, {});
}

namespace {

GeneratedGroup sorted_rows_group(std::vector<std::vector<Symbol>> rows, std::size_t degree) {
  std::sort(rows.begin(), rows.end());
  std::vector<Symbol> flat;
  flat.reserve(rows.size() * degree);
  for (const auto& r : rows) flat.insert(flat.end(), r.begin(), r.end());
  return GeneratedGroup::from_rows(std::move(flat), degree, {});
}

}  // namespace

GeneratedGroup affine_group(const FiniteField& f, const Caps& caps) {
  const std::uint64_t q = f.order();
  if (q > caps.max_alphabet) throw CapExceeded("affine_group: alphabet exceeds cap");
  if (q * (q - 1) > caps.max_order) throw CapExceeded("affine_group: group order exceeds cap");
  std::vector<std::vector<Symbol>> rows;
  rows.reserve(static_cast<std::size_t>(q * (q - 1)));
  for (std::uint32_t a = 1; a < q; ++a)
    for (std::uint32_t b = 0; b < q; ++b) {
      std::vector<Symbol> row(q);
      for (std::uint32_t x = 0; x < q; ++x) row[x] = f.add(f.mul(a, x), b);
      rows.push_back(std::move(row));
    }
  return sorted_rows_group(std::move(rows), static_cast<std::size_t>(q));
}

GeneratedGroup position_group(unsigned d, unsigned base_n, const Caps& caps) {
  if (d == 0) throw Error("position_group: d must be >= 1");
  if (base_n < 2) throw Error("position_group: base alphabet must be >= 2");
  const std::uint64_t degree =
      checked_pow(base_n, d, caps.max_alphabet, "position_group: block alphabet exceeds cap");
  std::uint64_t order = 1;
  for (unsigned i = 2; i <= d; ++i) {
    order *= i;
    if (order > caps.max_order) throw CapExceeded("position_group: group order exceeds cap");
  }
  // digit place values, big-endian (first position most significant)
  std::vector<std::uint64_t> place(d);
  place[d - 1] = 1;
  for (unsigned i = d - 1; i-- > 0;) place[i] = place[i + 1] * base_n;

  std::vector<Symbol> pi(d);
  for (unsigned i = 0; i < d; ++i) pi[i] = i;
  std::vector<std::vector<Symbol>> rows;
  std::vector<Symbol> digits(d);
  do {
    std::vector<Symbol> row(degree);
    for (std::uint64_t b = 0; b < degree; ++b) {
      for (unsigned i = 0; i < d; ++i)
        digits[i] = static_cast<Symbol>(b / place[i] % base_n);
      std::uint64_t img = 0;
      for (unsigned i = 0; i < d; ++i) img += static_cast<std::uint64_t>(digits[pi[i]]) * place[i];
      row[b] = static_cast<Symbol>(img);
    }
    rows.push_back(std::move(row));
  } while (std::next_permutation(pi.begin(), pi.end()));
  return sorted_rows_group(std::move(rows), static_cast<std::size_t>(degree));
}

bool left_coset_check(const GeneratedGroup& g, std::span<const std::uint32_t> subset,
                      std::uint32_t rep) {
  if (subset.empty()) throw Error("left_coset_check: empty subset");
  bool rep_listed = false;
  for (std::uint32_t s : subset) {
    if (s >= g.order()) throw Error("left_coset_check: element index out of range");
    if (s == rep) rep_listed = true;
  }
  if (!rep_listed) throw Error("left_coset_check: representative not in subset");

  const std::size_t n = g.degree();
  auto rep_row = g.element(rep);
  std::vector<Symbol> rep_inv(n);
  for (std::size_t i = 0; i < n; ++i) rep_inv[rep_row[i]] = static_cast<Symbol>(i);

  std::vector<std::uint32_t> h_list;
  std::vector<char> in_h(g.order(), 0);
  std::vector<Symbol> scratch(n);
  for (std::uint32_t s : subset) {
    g.compose_rows(rep_inv, g.element(s), scratch.data());
    auto idx = g.index_of(scratch);
    if (!idx) throw Error("left_coset_check: subset element outside group");
    if (!in_h[*idx]) {
      in_h[*idx] = 1;
      h_list.push_back(*idx);
    }
  }
  // H = rep^-1 * S must be closed under composition (finite, so that implies
  // a subgroup; the identity is rep^-1 * rep).
  for (std::uint32_t h1 : h_list)
    for (std::uint32_t h2 : h_list) {
      g.compose_rows(g.element(h1), g.element(h2), scratch.data());
      auto idx = g.index_of(scratch);
      if (!idx || !in_h[*idx]) return false;
    }
  return true;
}

bool verify_group_closure(const GeneratedGroup& g, std::size_t exhaustive_limit,
                          std::size_t samples, std::uint64_t seed) {
  const std::size_t n = g.degree();
  std::vector<Symbol> scratch(n);
  std::vector<Symbol> inv(n);
  auto check_pair = [&](std::size_t i, std::size_t j) {
    g.compose_rows(g.element(i), g.element(j), scratch.data());
    return g.index_of(scratch).has_value();
  };
  auto check_inverse = [&](std::size_t i) {
    auto row = g.element(i);
    for (std::size_t x = 0; x < n; ++x) inv[row[x]] = static_cast<Symbol>(x);
    return g.index_of(inv).has_value();
  };
  if (g.order() <= exhaustive_limit) {
    for (std::size_t i = 0; i < g.order(); ++i) {
      if (!check_inverse(i)) return false;
      for (std::size_t j = 0; j < g.order(); ++j)
        if (!check_pair(i, j)) return false;
    }
    return true;
  }
  std::mt19937_64 rng(seed);
  for (std::size_t s = 0; s < samples; ++s) {
    std::size_t i = bounded(rng, g.order());
    std::size_t j = bounded(rng, g.order());
    if (!check_pair(i, j) || !check_inverse(i)) return false;
  }
  return true;
}

namespace {

const nlohmann::json& require_field(const nlohmann::json& j, const char* name) {
  auto it = j.find(name);
  if (it == j.end()) throw Error(std::string("group spec: missing field '") + name + "'");
  return *it;
}

unsigned get_uint(const nlohmann::json& j, const char* name) {
  const auto& v = require_field(j, name);
  if (!v.is_number_unsigned() || v.get<std::uint64_t>() == 0 ||
      v.get<std::uint64_t>() > 1u << 30)
    throw Error(std::string("group spec: field '") + name + "' must be a positive integer");
  return v.get<unsigned>();
}

}  // namespace

GroupFamilySpec GroupFamilySpec::from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw Error("group spec: expected a JSON object");
  const auto& fam = require_field(j, "family");
  if (!fam.is_string()) throw Error("group spec: 'family' must be a string");
  const std::string name = fam.get<std::string>();
  GroupFamilySpec spec;
  if (name == "symmetric") {
    spec.family = Family::symmetric;
    spec.n = get_uint(j, "n");
  } else if (name == "alternating") {
    spec.family = Family::alternating;
    spec.n = get_uint(j, "n");
  } else if (name == "affine") {
    spec.family = Family::affine;
    spec.q = get_uint(j, "q");
  } else if (name == "position") {
    spec.family = Family::position;
    spec.d = get_uint(j, "d");
    spec.base_n = get_uint(j, "base_n");
  } else if (name == "generators") {
    spec.family = Family::generators;
    const auto& gens = require_field(j, "generators");
    if (!gens.is_array() || gens.empty())
      throw Error("group spec: 'generators' must be a non-empty array of image arrays");
    for (const auto& g : gens) {
      if (!g.is_array()) throw Error("group spec: each generator must be an image array");
      std::vector<Symbol> img;
      img.reserve(g.size());
      for (const auto& v : g) {
        if (!v.is_number_unsigned()) throw Error("group spec: generator images must be >= 0");
        img.push_back(v.get<Symbol>());
      }
      spec.generator_list.emplace_back(std::move(img));
    }
  } else {
    throw Error("group spec: unknown family '" + name + "'");
  }
  return spec;
}

nlohmann::json GroupFamilySpec::to_json() const {
  nlohmann::json j;
  j["family"] = family_name();
  switch (family) {
    case Family::symmetric:
    case Family::alternating:
      j["n"] = n;
      break;
    case Family::affine:
      j["q"] = q;
      break;
    case Family::position:
      j["d"] = d;
      j["base_n"] = base_n;
      break;
    case Family::generators: {
      nlohmann::json gens = nlohmann::json::array();
      for (const auto& g : generator_list)
        gens.push_back(std::vector<Symbol>(g.images().begin(), g.images().end()));
      j["generators"] = gens;
      break;
    }
  }
  return j;
}

const char* GroupFamilySpec::family_name() const {
  switch (family) {
    case Family::symmetric: return "symmetric";
    case Family::alternating: return "alternating";
    case Family::affine: return "affine";
    case Family::position: return "position";
    case Family::generators: return "generators";
  }
  return "?";
}

std::size_t GroupFamilySpec::alphabet_size() const {
  switch (family) {
    case Family::symmetric:
    case Family::alternating:
      return n;
    case Family::affine:
      return q;
    case Family::position: {
      std::uint64_t v = 1;
      for (unsigned i = 0; i < d; ++i) v *= base_n;
      return static_cast<std::size_t>(v);
    }
    case Family::generators:
      return generator_list.empty() ? 0 : generator_list.front().degree();
  }
  return 0;
}

std::size_t GroupFamilySpec::base_alphabet_size() const {
  return family == Family::position ? base_n : alphabet_size();
}

CipherModel make_model(std::shared_ptr<const GeneratedGroup> group, SymbolDistribution dist,
                       double log_base, unsigned block_width) {
  if (!group) throw Error("model: missing group");
  if (dist.size() != group->degree())
    throw Error("model: alphabet mismatch between group and distribution");
  if (!(log_base > 0.0) || log_base == 1.0)
    throw Error("model: log base must be positive and != 1");
  if (block_width == 0) throw Error("model: block width must be >= 1");
  return CipherModel{std::move(group), std::move(dist), log_base, block_width};
}

CipherModel build_family(const GroupFamilySpec& spec, const SymbolDistribution& base_dist,
                         double log_base, const Caps& caps) {
  if (base_dist.size() != spec.base_alphabet_size())
    throw Error("build_family: distribution length does not match the family alphabet");
  switch (spec.family) {
    case GroupFamilySpec::Family::symmetric:
      return make_model(std::make_shared<GeneratedGroup>(symmetric_group(spec.n, caps)),
                        base_dist, log_base, 1);
    case GroupFamilySpec::Family::alternating:
      return make_model(std::make_shared<GeneratedGroup>(alternating_group(spec.n, caps)),
                        base_dist, log_base, 1);
    case GroupFamilySpec::Family::affine: {
      FiniteField f = FiniteField::make(spec.q);
      return make_model(std::make_shared<GeneratedGroup>(affine_group(f, caps)), base_dist,
                        log_base, 1);
    }
    case GroupFamilySpec::Family::position:
      return make_model(std::make_shared<GeneratedGroup>(position_group(spec.d, spec.base_n, caps)),
                        blockify(base_dist, spec.d, caps.max_alphabet), log_base, spec.d);
    case GroupFamilySpec::Family::generators:
      return make_model(
          std::make_shared<GeneratedGroup>(generate(spec.generator_list, caps.max_order)),
          base_dist, log_base, 1);
  }
  throw Error("build_family: unknown family");
}

}  // namespace keq
