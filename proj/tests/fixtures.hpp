#pragma once

#include <memory>
#include <vector>

#include "keq/group.hpp"
#include "keq/keyspace.hpp"

namespace fixtures {

inline keq::CipherModel s3_uniform() {
  return keq::make_model(std::make_shared<keq::GeneratedGroup>(keq::symmetric_group(3)),
                         keq::SymbolDistribution::uniform(3));
}

inline keq::CipherModel s3_weighted() {
  return keq::make_model(std::make_shared<keq::GeneratedGroup>(keq::symmetric_group(3)),
                         keq::SymbolDistribution({0.5, 0.3, 0.2}));
}

inline keq::CipherModel a4_uniform() {
  return keq::make_model(std::make_shared<keq::GeneratedGroup>(keq::alternating_group(4)),
                         keq::SymbolDistribution::uniform(4));
}

inline keq::CipherModel affine5_weighted() {
  keq::FiniteField f = keq::FiniteField::make(5);
  return keq::make_model(std::make_shared<keq::GeneratedGroup>(keq::affine_group(f)),
                         keq::SymbolDistribution({0.4, 0.2, 0.2, 0.1, 0.1}));
}

inline keq::CipherModel affine5_uniform() {
  keq::FiniteField f = keq::FiniteField::make(5);
  return keq::make_model(std::make_shared<keq::GeneratedGroup>(keq::affine_group(f)),
                         keq::SymbolDistribution::uniform(5));
}

// position blocks of width 2 over a uniform binary alphabet
inline keq::CipherModel pos22_uniform() {
  keq::GroupFamilySpec spec;
  spec.family = keq::GroupFamilySpec::Family::position;
  spec.d = 2;
  spec.base_n = 2;
  return keq::build_family(spec, keq::SymbolDistribution::uniform(2));
}

inline keq::GroupFamilySpec symmetric_spec(unsigned n) {
  keq::GroupFamilySpec s;
  s.family = keq::GroupFamilySpec::Family::symmetric;
  s.n = n;
  return s;
}

inline keq::GroupFamilySpec alternating_spec(unsigned n) {
  keq::GroupFamilySpec s;
  s.family = keq::GroupFamilySpec::Family::alternating;
  s.n = n;
  return s;
}

inline keq::GroupFamilySpec affine_spec(unsigned q) {
  keq::GroupFamilySpec s;
  s.family = keq::GroupFamilySpec::Family::affine;
  s.q = q;
  return s;
}

inline keq::GroupFamilySpec position_spec(unsigned d, unsigned base_n) {
  keq::GroupFamilySpec s;
  s.family = keq::GroupFamilySpec::Family::position;
  s.d = d;
  s.base_n = base_n;
  return s;
}

// probabilities proportional to 1, 2, ..., n
inline keq::SymbolDistribution ramp(unsigned n) {
  std::vector<double> p(n);
  const double total = n * (n + 1) / 2.0;
  for (unsigned i = 0; i < n; ++i) p[i] = (i + 1) / total;
  return keq::SymbolDistribution(std::move(p));
}

}  // namespace fixtures
