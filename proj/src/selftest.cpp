#include "keq/selftest.hpp"

#include <cmath>
#include <memory>

#include "keq/attack.hpp"
#include "keq/equivocation.hpp"
#include "keq/error.hpp"
#include "keq/group.hpp"
#include "keq/kernels.hpp"
#include "keq/keyspace.hpp"

namespace keq {

namespace {

CipherModel s3_weighted() {
  return make_model(std::make_shared<GeneratedGroup>(symmetric_group(3)),
                    SymbolDistribution({0.5, 0.3, 0.2}));
}

CipherModel affine5_uniform() {
  FiniteField f = FiniteField::make(5);
  return make_model(std::make_shared<GeneratedGroup>(affine_group(f)),
                    SymbolDistribution::uniform(5));
}

std::string fmt(double v) { return format_double(v); }

}  // namespace

std::vector<CheckResult> run_selftest() {
  std::vector<CheckResult> out;
  auto push = [&](const char* name, bool pass, std::string detail) {
    out.push_back({name, pass, std::move(detail)});
  };

  const CipherModel models[] = {s3_weighted(), affine5_uniform()};

  {
    bool ok = true;
    std::string detail = "exact and the word-enumeration oracle agree to 1e-12";
    for (const auto& model : models) {
      for (unsigned L = 1; L <= 3 && ok; ++L) {
        const double e = exact_equivocation(model, L);
        const double b = brute_force_equivocation(model, L);
        if (std::abs(e - b) > 1e-12) {
          ok = false;
          detail = "L=" + std::to_string(L) + ": exact=" + fmt(e) + " oracle=" + fmt(b);
        }
      }
    }
    push("exact equivocation matches the enumeration oracle", ok, detail);
  }

  {
    bool ok = true;
    std::string detail = "closed-form R/order/key counts equal the enumerated ones";
    struct Case {
      GroupFamilySpec spec;
      SymbolDistribution dist;
    };
    GroupFamilySpec sym5;
    sym5.family = GroupFamilySpec::Family::symmetric;
    sym5.n = 5;
    GroupFamilySpec alt4;
    alt4.family = GroupFamilySpec::Family::alternating;
    alt4.n = 4;
    GroupFamilySpec aff7;
    aff7.family = GroupFamilySpec::Family::affine;
    aff7.q = 7;
    const Case cases[] = {
        {sym5, SymbolDistribution({0.3, 0.25, 0.2, 0.15, 0.1})},
        {alt4, SymbolDistribution::uniform(4)},
        {aff7, SymbolDistribution::uniform(7)},
    };
    for (const auto& c : cases) {
      CipherModel model = build_family(c.spec, c.dist);
      auto report = maximal_keys(*model.group, model.distribution);
      auto profile = closed_form_profile(c.spec, c.dist);
      if (report.rate != profile.rate || report.group_order != profile.order ||
          report.n_maximal_keys() != profile.n_maximal_keys ||
          report.n_maximal_fixed_sets() != profile.n_maximal_fixed_sets) {
        ok = false;
        detail = std::string(c.spec.family_name()) + ": enumerated R=" + fmt(report.rate) +
                 " closed-form R=" + fmt(profile.rate);
      }
    }
    push("closed forms match enumeration", ok, detail);
  }

  {
    bool ok = true;
    std::string detail = "lower <= exact <= tight upper <= coarse upper";
    for (const auto& model : models) {
      auto report = maximal_keys(*model.group, model.distribution);
      for (unsigned L = 1; L <= 6 && ok; ++L) {
        const double e = exact_equivocation(model, L, report);
        const Bounds b = equivocation_bounds(model, L, report);
        const double slack = 1e-12 * (1.0 + std::abs(e));
        if (!(b.lower <= e + slack && e <= b.upper_tight + slack &&
              b.upper_tight <= b.upper_coarse + slack)) {
          ok = false;
          detail = "L=" + std::to_string(L) + ": lower=" + fmt(b.lower) + " exact=" + fmt(e) +
                   " tight=" + fmt(b.upper_tight) + " coarse=" + fmt(b.upper_coarse);
        }
      }
    }
    push("bound sandwich holds", ok, detail);
  }

  {
    bool ok = true;
    std::string detail = "surviving keys form rep * stabilizer for every single-symbol pair";
    for (const auto& model : models) {
      const GeneratedGroup& g = *model.group;
      for (std::size_t k = 0; k < g.order() && ok; ++k) {
        auto row = g.element(k);
        for (Symbol s = 0; s < g.degree() && ok; ++s) {
          const Word m{s}, c{row[s]};
          auto direct = consistent_key_indices(model, m, c);
          auto outcome = consistent_keys(model, m, c);
          if (direct.size() != outcome.consistent_count || direct.empty() ||
              !outcome.representative_index ||
              direct.front() != *outcome.representative_index ||
              !left_coset_check(g, direct, *outcome.representative_index)) {
            ok = false;
            detail = "key " + std::to_string(k) + ", symbol " + std::to_string(s);
          }
        }
      }
    }
    push("coset law holds for consistent pairs", ok, detail);
  }

  {
    bool ok = true;
    std::string detail = "instruction-set variants agree bit for bit";
    if (kernels::supports(kernels::Isa::avx2)) {
      const kernels::Isa orig = kernels::active();
      double a[7] = {0.5, 0.3, 0.25, 0.125, 0.9, 1e-3, 0.6180339887};
      double b[7];
      for (int i = 0; i < 7; ++i) b[i] = a[i];
      kernels::force(kernels::Isa::avx2);
      kernels::pow_inplace(a, 7, 13);
      kernels::force(kernels::Isa::scalar);
      kernels::pow_inplace(b, 7, 13);
      kernels::force(orig);
      for (int i = 0; i < 7; ++i)
        if (a[i] != b[i]) {
          ok = false;
          detail = "pow_inplace lane " + std::to_string(i);
        }
    } else {
      detail = "only the scalar kernels are available on this machine";
    }
    push("kernel variants agree", ok, detail);
  }

  {
    const CipherModel model = s3_weighted();
    auto one = monte_carlo_equivocation(model, 3, 20000, 42, 1);
    auto two = monte_carlo_equivocation(model, 3, 20000, 42, 4);
    const bool ok = one.mean == two.mean && one.std_error == two.std_error;
    push("Monte Carlo is worker-count independent", ok,
         ok ? "identical estimates for 1 and 4 workers"
            : "mean " + fmt(one.mean) + " vs " + fmt(two.mean));
  }

  return out;
}

}  // namespace keq
