#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <set>
#include <vector>

#include "fixtures.hpp"
#include "keq/error.hpp"
#include "keq/group.hpp"

using keq::GeneratedGroup;
using keq::Permutation;
using keq::Symbol;

TEST_CASE("closure generates the full symmetric group from standard generators") {
  auto g = keq::generate({Permutation({1, 0, 2}), Permutation({1, 2, 0})});
  CHECK(g.degree() == 3);
  CHECK(g.order() == 6);
  CHECK(g.identity_index() == 0);
  CHECK(g.permutation(0).is_identity());
  CHECK(keq::verify_group_closure(g));
  CHECK(g.generators().size() == 2);
}

TEST_CASE("closure respects the order cap") {
  // 5-cycle plus transposition generate all 120 permutations
  std::vector<Permutation> gens{Permutation({1, 0, 2, 3, 4}), Permutation({1, 2, 3, 4, 0})};
  CHECK(keq::generate(gens).order() == 120);
  try {
    keq::generate(gens, 50);
    FAIL("expected the cap to fire");
  } catch (const keq::CapExceeded& e) {
    CHECK(std::string(e.what()).find("cap") != std::string::npos);
  }
  CHECK_THROWS_AS(keq::generate({}), keq::Error);
}

TEST_CASE("family tables are ordered with identity first") {
  auto s3 = keq::symmetric_group(3);
  REQUIRE(s3.order() == 6);
  // lexicographic image order
  const std::vector<std::vector<Symbol>> expected{
      {0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};
  for (std::size_t i = 0; i < 6; ++i) {
    auto row = s3.element(i);
    CHECK(std::vector<Symbol>(row.begin(), row.end()) == expected[i]);
  }

  auto a4 = keq::alternating_group(4);
  CHECK(a4.order() == 12);
  CHECK(a4.permutation(0).is_identity());
  for (std::size_t i = 0; i < a4.order(); ++i) {
    // every member is an even permutation: cycle type e, 3-cycle, or 2+2
    auto cycles = keq::cycle_decomposition(a4.permutation(i));
    std::size_t moved = 0;
    for (const auto& c : cycles) moved += c.size();
    CHECK((moved == 0 || moved == 3 || moved == 4));
  }

  auto f4 = keq::FiniteField::make(4);
  auto aff = keq::affine_group(f4);
  CHECK(aff.order() == 12);
  CHECK(aff.permutation(0).is_identity());
  CHECK(keq::verify_group_closure(aff));

  auto pos = keq::position_group(2, 2);
  REQUIRE(pos.order() == 2);
  CHECK(pos.permutation(0).is_identity());
  CHECK(std::vector<Symbol>(pos.element(1).begin(), pos.element(1).end()) ==
        std::vector<Symbol>{0, 2, 1, 3});
}

TEST_CASE("closure of family generators reproduces the family table") {
  auto direct = keq::symmetric_group(4);
  auto generated = keq::generate({Permutation({1, 0, 2, 3}), Permutation({1, 2, 3, 0})});
  REQUIRE(direct.order() == generated.order());
  for (std::size_t i = 0; i < generated.order(); ++i)
    CHECK(direct.index_of(generated.element(i)).has_value());
}

TEST_CASE("position blocks permute base digits") {
  auto g = keq::position_group(3, 2);
  CHECK(g.degree() == 8);
  CHECK(g.order() == 6);
  CHECK(keq::verify_group_closure(g));
  for (std::size_t i = 0; i < g.order(); ++i) {
    auto row = g.element(i);
    CHECK(row[0] == 0);  // all-zero block is fixed by every position shuffle
    CHECK(row[7] == 7);  // all-one block likewise
  }
  // the full swap of outer positions maps block (b2 b1 b0) to (b0 b1 b2)
  std::vector<Symbol> reversed(8);
  for (Symbol b = 0; b < 8; ++b)
    reversed[b] = static_cast<Symbol>(((b & 1) << 2) | (b & 2) | ((b >> 2) & 1));
  CHECK(g.index_of(reversed).has_value());
}

TEST_CASE("family caps produce cap errors") {
  CHECK_THROWS_AS(keq::symmetric_group(13), keq::CapExceeded);
  CHECK_THROWS_AS(keq::alternating_group(13), keq::CapExceeded);
  auto big = keq::FiniteField::make(2048);
  CHECK_THROWS_AS(keq::affine_group(big), keq::CapExceeded);
  // the order cap admits every affine group up to GF(1024) (order 1047552);
  // build a mid-size one here to keep the test's memory footprint small
  auto f256 = keq::FiniteField::make(256);
  CHECK(keq::affine_group(f256).order() == 65280);
  CHECK(std::uint64_t{1024} * 1023 <= keq::kDefaultOrderCap);
  CHECK_THROWS_AS(keq::position_group(13, 2), keq::CapExceeded);
  CHECK_THROWS_AS(keq::position_group(2, 70), keq::CapExceeded);  // 70^2 > alphabet cap
}

TEST_CASE("index_of finds members and rejects non-members") {
  auto g = keq::symmetric_group(3);
  CHECK(g.index_of(std::vector<Symbol>{0, 2, 1}) == 1);
  CHECK(g.index_of(std::vector<Symbol>{1, 0, 2}) == 2);
  CHECK_FALSE(g.index_of(std::vector<Symbol>{0, 1}).has_value());
  auto a4 = keq::alternating_group(4);
  CHECK_FALSE(a4.index_of(std::vector<Symbol>{1, 0, 2, 3}).has_value());  // odd
}

TEST_CASE("pointwise stabilizers, masks, and word stabilizers agree") {
  auto g = keq::symmetric_group(3);
  const std::vector<Symbol> zero{0};
  auto& st0 = g.pointwise_stabilizer(zero);
  CHECK(st0 == std::vector<std::uint32_t>{0, 1});  // identity and the swap of 1,2
  CHECK(g.stabilizer_size(std::span<const Symbol>(zero)) == 2);
  CHECK(g.stabilizer_size(std::uint64_t{1}) == 2);
  CHECK(g.word_stabilizer({0, 0, 0}) == st0);

  // empty support stabilizer is the whole group
  CHECK(g.pointwise_stabilizer(std::vector<Symbol>{}).size() == 6);
  CHECK(g.stabilizer_size(std::uint64_t{0}) == 6);
  // full support pins the identity
  CHECK(g.pointwise_stabilizer(std::vector<Symbol>{0, 1, 2}).size() == 1);
  // duplicates and order do not matter
  CHECK(g.pointwise_stabilizer(std::vector<Symbol>{2, 0, 2, 0}).size() ==
        g.pointwise_stabilizer(std::vector<Symbol>{0, 2}).size());
  CHECK_THROWS_AS(g.pointwise_stabilizer(std::vector<Symbol>{7}), keq::Error);

  // brute comparison for every subset of a degree-5 group
  auto s5 = keq::symmetric_group(5);
  for (std::uint64_t mask = 0; mask < 32; ++mask) {
    std::vector<Symbol> pts;
    for (Symbol s = 0; s < 5; ++s)
      if (mask & (1u << s)) pts.push_back(s);
    std::vector<std::uint32_t> expect;
    for (std::size_t i = 0; i < s5.order(); ++i) {
      auto row = s5.element(i);
      bool ok = true;
      for (Symbol s : pts) ok = ok && row[s] == s;
      if (ok) expect.push_back(static_cast<std::uint32_t>(i));
    }
    CHECK(s5.pointwise_stabilizer(pts) == expect);
    CHECK(s5.stabilizer_size(mask) == expect.size());
  }
}

TEST_CASE("affine stabilizer of a point matches the solved form") {
  auto f = keq::FiniteField::make(5);
  auto g = keq::affine_group(f);
  const std::vector<Symbol> four{4};
  auto& st = g.pointwise_stabilizer(four);
  REQUIRE(st.size() == 4);
  // maps fixing 4 are x -> a x + (1-a)*4: a=1 (identity), 2x+1, 3x+2, 4x+3
  std::set<std::vector<Symbol>> images;
  for (auto idx : st) {
    auto row = g.element(idx);
    images.insert(std::vector<Symbol>(row.begin(), row.end()));
  }
  std::set<std::vector<Symbol>> expected;
  for (std::uint32_t a : {1u, 2u, 3u, 4u}) {
    const std::uint32_t b = f.mul(f.sub(1, a), 4);
    auto p = keq::affine_permutation(f, a, b);
    expected.insert(std::vector<Symbol>(p.images().begin(), p.images().end()));
  }
  CHECK(images == expected);
}

TEST_CASE("left coset test accepts cosets and rejects non-cosets") {
  auto g = keq::symmetric_group(3);
  // keys sending 0 to 1: rows [1,0,2] and [1,2,0] at indices 2 and 3
  std::vector<std::uint32_t> coset{2, 3};
  CHECK(keq::left_coset_check(g, coset, 2));
  CHECK(keq::left_coset_check(g, coset, 3));
  // subgroup {identity, swap(0,1)} is a coset of itself
  std::vector<std::uint32_t> subgroup{0, 2};
  CHECK(keq::left_coset_check(g, subgroup, 0));
  // {identity, 3-cycle} is not closed
  std::vector<std::uint32_t> broken{0, 3};
  CHECK_FALSE(keq::left_coset_check(g, broken, 0));
  CHECK_THROWS_AS(keq::left_coset_check(g, std::vector<std::uint32_t>{}, 0), keq::Error);
  CHECK_THROWS_AS(keq::left_coset_check(g, coset, 0), keq::Error);  // rep not listed
}

TEST_CASE("closure audit flags an incomplete table") {
  // identity, a transposition, and a 3-cycle do not close under composition
  std::vector<Symbol> flat{0, 1, 2, 1, 0, 2, 1, 2, 0};
  auto broken = GeneratedGroup::from_rows(std::move(flat), 3, {});
  CHECK_FALSE(keq::verify_group_closure(broken));
  CHECK(keq::verify_group_closure(keq::symmetric_group(4)));
}

TEST_CASE("family specs round-trip through JSON") {
  using F = keq::GroupFamilySpec::Family;
  for (const auto& spec :
       {fixtures::symmetric_spec(5), fixtures::alternating_spec(4), fixtures::affine_spec(9),
        fixtures::position_spec(3, 2)}) {
    auto j = spec.to_json();
    auto back = keq::GroupFamilySpec::from_json(j);
    CHECK(back.family == spec.family);
    CHECK(back.n == spec.n);
    CHECK(back.q == spec.q);
    CHECK(back.d == spec.d);
    CHECK(back.base_n == spec.base_n);
  }

  keq::GroupFamilySpec gens;
  gens.family = F::generators;
  gens.generator_list.push_back(Permutation({1, 0, 2}));
  auto back = keq::GroupFamilySpec::from_json(gens.to_json());
  REQUIRE(back.generator_list.size() == 1);
  CHECK(back.generator_list[0] == gens.generator_list[0]);

  CHECK_THROWS_AS(keq::GroupFamilySpec::from_json(nlohmann::json::parse(R"({"family":"ring"})")),
                  keq::Error);
  CHECK_THROWS_AS(keq::GroupFamilySpec::from_json(nlohmann::json::parse(R"({"family":"symmetric"})")),
                  keq::Error);
  CHECK_THROWS_AS(keq::GroupFamilySpec::from_json(nlohmann::json::parse(R"({"n": 3})")),
                  keq::Error);
  CHECK_THROWS_AS(
      keq::GroupFamilySpec::from_json(nlohmann::json::parse(R"({"family":"generators","generators":[]})")),
      keq::Error);
}

TEST_CASE("model construction validates its inputs") {
  auto group = std::make_shared<keq::GeneratedGroup>(keq::symmetric_group(3));
  CHECK_THROWS_AS(keq::make_model(group, keq::SymbolDistribution::uniform(4)), keq::Error);
  CHECK_THROWS_AS(keq::make_model(group, keq::SymbolDistribution::uniform(3), 1.0), keq::Error);
  CHECK_THROWS_AS(keq::make_model(group, keq::SymbolDistribution::uniform(3), -2.0), keq::Error);
  CHECK_THROWS_AS(keq::make_model(nullptr, keq::SymbolDistribution::uniform(3)), keq::Error);
  auto model = keq::make_model(group, keq::SymbolDistribution::uniform(3), 2.0);
  CHECK(model.block_width == 1);
}

TEST_CASE("build_family blockifies position distributions") {
  auto model = keq::build_family(fixtures::position_spec(2, 2),
                                 keq::SymbolDistribution({0.7, 0.3}));
  CHECK(model.block_width == 2);
  REQUIRE(model.distribution.size() == 4);
  CHECK(model.distribution[0] == doctest::Approx(0.49).epsilon(1e-15));
  CHECK(model.distribution[1] == doctest::Approx(0.21).epsilon(1e-15));
  CHECK(model.distribution[2] == doctest::Approx(0.21).epsilon(1e-15));
  CHECK(model.distribution[3] == doctest::Approx(0.09).epsilon(1e-15));

  CHECK_THROWS_AS(
      keq::build_family(fixtures::position_spec(2, 2), keq::SymbolDistribution::uniform(4)),
      keq::Error);  // distribution must cover the base alphabet
  auto sym = keq::build_family(fixtures::symmetric_spec(3), keq::SymbolDistribution::uniform(3));
  CHECK(sym.group->order() == 6);
}

TEST_CASE("distribution blockify and prob_of_set behave canonically") {
  keq::SymbolDistribution base({0.7, 0.3});
  auto blocks = keq::blockify(base, 2);
  REQUIRE(blocks.size() == 4);
  // big-endian: block index 1 is (0,1) with probability 0.7*0.3
  CHECK(blocks[1] == 0.7 * 0.3);
  CHECK(blocks[2] == 0.3 * 0.7);

  keq::SymbolDistribution d({0.5, 0.2, 0.3});
  CHECK(d.prob_of_set(std::vector<Symbol>{0, 1, 2}) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(d.prob_of_set(std::vector<Symbol>{1}) == 0.2);
  CHECK(d.prob_of_set(std::vector<Symbol>{}) == 0.0);
  CHECK_THROWS_AS(d.prob_of_set(std::vector<Symbol>{3}), keq::Error);
  CHECK_THROWS_AS(keq::SymbolDistribution({0.5, 0.4}), keq::Error);        // sums to 0.9
  CHECK_THROWS_AS(keq::SymbolDistribution({1.2, -0.2}), keq::Error);       // negative entry
  CHECK_THROWS_AS(keq::blockify(base, 13), keq::CapExceeded);              // 2^13 > alphabet cap
}
