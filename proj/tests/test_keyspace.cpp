#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <set>
#include <string>
#include <vector>

#include "fixtures.hpp"
#include "keq/error.hpp"
#include "keq/keyspace.hpp"

using keq::GroupFamilySpec;
using keq::MaximalKeyReport;
using keq::Symbol;

namespace {

bool is_subset(const std::vector<Symbol>& a, const std::vector<Symbol>& b) {
  return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

}  // namespace

TEST_CASE("three-symbol substitution keys: singleton fixed sets") {
  auto model = fixtures::s3_uniform();
  auto report = keq::maximal_keys(*model.group, model.distribution);
  CHECK(report.group_order == 6);
  CHECK_FALSE(report.degenerate);
  CHECK(report.n_maximal_keys() == 3);
  CHECK(report.n_maximal_fixed_sets() == 3);
  CHECK(report.distinct_maximal_fixed_sets ==
        std::vector<std::vector<Symbol>>{{0}, {1}, {2}});
  // transpositions sit at element indices 1, 2, 5
  CHECK(report.maximal_key_indices == std::vector<std::uint32_t>{1, 2, 5});
  CHECK(report.rate == doctest::Approx(1.0 / 3).epsilon(1e-15));
  CHECK(report.argmax_keys == report.maximal_key_indices);  // uniform ties
  CHECK(keq::rate(*model.group, model.distribution) == report.rate);
}

TEST_CASE("weighted rate picks the heaviest fixed set") {
  auto model = fixtures::s3_weighted();
  auto report = keq::maximal_keys(*model.group, model.distribution);
  CHECK(report.rate == 0.5);
  CHECK(report.argmax_keys == std::vector<std::uint32_t>{1});  // the key fixing symbol 0
  // per-key probabilities line up with the key list
  REQUIRE(report.per_key_prob.size() == 3);
  for (std::size_t i = 0; i < 3; ++i) {
    auto idx = report.maximal_key_indices[i];
    auto fs = keq::fixed_set(model.group->permutation(idx));
    CHECK(report.per_key_prob[i] == model.distribution.prob_of_set(fs));
  }
}

TEST_CASE("four-symbol rate sums the two largest probabilities") {
  auto group = std::make_shared<keq::GeneratedGroup>(keq::symmetric_group(4));
  keq::SymbolDistribution dist({0.4, 0.3, 0.2, 0.1});
  CHECK(keq::rate(*group, dist) == doctest::Approx(0.7).epsilon(1e-15));
}

TEST_CASE("even-permutation keys: three-cycles are maximal") {
  auto model = fixtures::a4_uniform();
  auto report = keq::maximal_keys(*model.group, model.distribution);
  CHECK(report.n_maximal_keys() == 8);
  CHECK(report.n_maximal_fixed_sets() == 4);  // two 3-cycles share each singleton
  CHECK(report.rate == doctest::Approx(0.25).epsilon(1e-15));
  for (const auto& f : report.distinct_maximal_fixed_sets) CHECK(f.size() == 1);

  auto a5 = keq::alternating_group(5);
  auto r5 = keq::maximal_keys(a5, keq::SymbolDistribution::uniform(5));
  CHECK(r5.n_maximal_keys() == 20);
  CHECK(r5.n_maximal_fixed_sets() == 10);
  CHECK(r5.rate == doctest::Approx(0.4).epsilon(1e-15));
}

TEST_CASE("affine keys fix one point each") {
  auto model = fixtures::affine5_weighted();
  auto report = keq::maximal_keys(*model.group, model.distribution);
  CHECK(report.group_order == 20);
  CHECK(report.n_maximal_keys() == 15);  // q(q-2)
  CHECK(report.n_maximal_fixed_sets() == 5);
  CHECK(report.rate == 0.4);
  for (std::uint32_t k : report.argmax_keys) {
    auto fs = keq::fixed_set(model.group->permutation(k));
    REQUIRE(fs.size() == 1);
    CHECK(fs[0] == 0);  // the heaviest symbol
  }
}

TEST_CASE("closed forms equal enumeration exactly") {
  struct Case {
    GroupFamilySpec spec;
    keq::SymbolDistribution dist;
  };
  std::vector<Case> cases;
  for (unsigned n : {3u, 4u, 5u, 6u}) {
    cases.push_back({fixtures::symmetric_spec(n), keq::SymbolDistribution::uniform(n)});
    cases.push_back({fixtures::symmetric_spec(n), fixtures::ramp(n)});
  }
  for (unsigned n : {3u, 4u, 5u}) {
    cases.push_back({fixtures::alternating_spec(n), keq::SymbolDistribution::uniform(n)});
    cases.push_back({fixtures::alternating_spec(n), fixtures::ramp(n)});
  }
  for (unsigned q : {3u, 4u, 5u, 7u, 8u, 9u}) {
    cases.push_back({fixtures::affine_spec(q), keq::SymbolDistribution::uniform(q)});
    cases.push_back({fixtures::affine_spec(q), fixtures::ramp(q)});
  }
  // dyadic base distributions keep the enumerated sums exact for blocks
  cases.push_back({fixtures::position_spec(2, 2), keq::SymbolDistribution({0.7, 0.3})});
  cases.push_back({fixtures::position_spec(2, 4), keq::SymbolDistribution::uniform(4)});
  cases.push_back({fixtures::position_spec(3, 2), keq::SymbolDistribution({0.75, 0.25})});
  cases.push_back({fixtures::position_spec(4, 2), keq::SymbolDistribution::uniform(2)});

  for (const auto& c : cases) {
    const std::string label =
        std::string(c.spec.family_name()) + "/" + std::to_string(c.spec.alphabet_size());
    CAPTURE(label);
    auto model = keq::build_family(c.spec, c.dist);
    auto report = keq::maximal_keys(*model.group, model.distribution);
    auto profile = keq::closed_form_profile(c.spec, c.dist);
    CHECK(report.rate == profile.rate);  // no tolerance
    CHECK(report.group_order == profile.order);
    CHECK(report.n_maximal_keys() == profile.n_maximal_keys);
    CHECK(report.n_maximal_fixed_sets() == profile.n_maximal_fixed_sets);
  }
}

TEST_CASE("closed forms reject unsupported parameters") {
  CHECK_THROWS_AS(
      keq::closed_form_profile(fixtures::affine_spec(2), keq::SymbolDistribution::uniform(2)),
      keq::Error);
  CHECK_THROWS_AS(
      keq::closed_form_profile(fixtures::alternating_spec(2), keq::SymbolDistribution::uniform(2)),
      keq::Error);
  GroupFamilySpec gens;
  gens.family = GroupFamilySpec::Family::generators;
  gens.generator_list.push_back(keq::Permutation({1, 0, 2}));
  CHECK_THROWS_AS(keq::closed_form_profile(gens, keq::SymbolDistribution::uniform(3)),
                  keq::Error);
  CHECK_THROWS_AS(
      keq::closed_form_profile(fixtures::symmetric_spec(3), keq::SymbolDistribution::uniform(4)),
      keq::Error);  // distribution length mismatch
}

TEST_CASE("maximal sets form an antichain that covers every fixed set") {
  for (const auto& model :
       {fixtures::s3_weighted(), fixtures::a4_uniform(), fixtures::affine5_weighted(),
        fixtures::pos22_uniform()}) {
    auto report = keq::maximal_keys(*model.group, model.distribution);
    const auto& sets = report.distinct_maximal_fixed_sets;
    for (std::size_t i = 0; i < sets.size(); ++i)
      for (std::size_t j = 0; j < sets.size(); ++j)
        if (i != j) CHECK_FALSE(is_subset(sets[i], sets[j]));
    // every non-identity key's fixed set lies inside some maximal set
    for (std::size_t e = 1; e < model.group->order(); ++e) {
      auto fs = keq::fixed_set(model.group->permutation(e));
      bool covered = false;
      for (const auto& f : sets) covered = covered || is_subset(fs, f);
      CHECK(covered);
    }
    // parallel arrays
    CHECK(report.per_key_prob.size() == report.maximal_key_indices.size());
    CHECK(report.fixed_set_prob.size() == sets.size());
  }
}

TEST_CASE("relabeling the alphabet permutes the report without changing the rate") {
  auto group = keq::symmetric_group(4);
  keq::SymbolDistribution dist({0.4, 0.3, 0.2, 0.1});
  auto base = keq::maximal_keys(group, dist);

  // conjugate every element by sigma and permute the distribution to match
  keq::Permutation sigma({2, 0, 3, 1});
  auto sigma_inv = keq::inverse(sigma);
  std::vector<Symbol> flat;
  for (std::size_t i = 0; i < group.order(); ++i) {
    auto conj = keq::compose(sigma, keq::compose(group.permutation(i), sigma_inv));
    flat.insert(flat.end(), conj.images().begin(), conj.images().end());
  }
  // rows must again start with the identity: conjugation fixes it, and we
  // re-sort into lexicographic order via the sorted-copy constructor path
  std::vector<std::vector<Symbol>> rows;
  for (std::size_t i = 0; i < group.order(); ++i)
    rows.emplace_back(flat.begin() + i * 4, flat.begin() + (i + 1) * 4);
  std::sort(rows.begin(), rows.end());
  std::vector<Symbol> sorted_flat;
  for (const auto& r : rows) sorted_flat.insert(sorted_flat.end(), r.begin(), r.end());
  auto conj_group = keq::GeneratedGroup::from_rows(std::move(sorted_flat), 4, {});

  std::vector<double> probs(4);
  for (Symbol s = 0; s < 4; ++s) probs[sigma(s)] = dist[s];
  auto conj_report = keq::maximal_keys(conj_group, keq::SymbolDistribution(probs));

  CHECK(conj_report.rate == base.rate);  // same value multiset, same summation order
  CHECK(conj_report.n_maximal_keys() == base.n_maximal_keys());
  CHECK(conj_report.n_maximal_fixed_sets() == base.n_maximal_fixed_sets());
  // the relabeled maximal sets are exactly sigma applied to the originals
  std::set<std::vector<Symbol>> expect;
  for (auto f : base.distinct_maximal_fixed_sets) {
    for (auto& s : f) s = sigma(s);
    std::sort(f.begin(), f.end());
    expect.insert(f);
  }
  std::set<std::vector<Symbol>> got(conj_report.distinct_maximal_fixed_sets.begin(),
                                    conj_report.distinct_maximal_fixed_sets.end());
  CHECK(got == expect);
}

TEST_CASE("degenerate and fixed-point-free key spaces") {
  auto trivial = keq::generate({keq::Permutation::identity(3)});
  auto report = keq::maximal_keys(trivial, keq::SymbolDistribution::uniform(3));
  CHECK(report.degenerate);
  CHECK(report.group_order == 1);
  CHECK(report.rate == 0.0);
  CHECK(report.n_maximal_keys() == 0);

  // affine over GF(2) is {identity, x+1}; the only maximal fixed set is empty
  auto f2 = keq::FiniteField::make(2);
  auto aff2 = keq::affine_group(f2);
  auto r2 = keq::maximal_keys(aff2, keq::SymbolDistribution::uniform(2));
  CHECK_FALSE(r2.degenerate);
  CHECK(r2.rate == 0.0);
  CHECK(r2.n_maximal_keys() == 1);
  REQUIRE(r2.n_maximal_fixed_sets() == 1);
  CHECK(r2.distinct_maximal_fixed_sets[0].empty());
  CHECK(r2.argmax_keys == std::vector<std::uint32_t>{1});
}

TEST_CASE("report serializes the pinned fields") {
  auto model = fixtures::s3_uniform();
  auto j = keq::maximal_keys(*model.group, model.distribution).to_json();
  CHECK(j.contains("R"));
  CHECK(j.contains("order"));
  CHECK(j.contains("n_maximal_keys"));
  CHECK(j.contains("n_maximal_fixed_sets"));
  CHECK(j.contains("maximal_fixed_sets"));
  CHECK(j.contains("argmax_keys"));
  CHECK(j["order"] == 6);
  CHECK(j["maximal_fixed_sets"].size() == 3);
}

TEST_CASE("alphabet mismatch is rejected") {
  auto g = keq::symmetric_group(3);
  CHECK_THROWS_AS(keq::maximal_keys(g, keq::SymbolDistribution::uniform(4)), keq::Error);
}
