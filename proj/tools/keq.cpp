// Command-line front end: key-space analysis, equivocation curves,
// known-plaintext attacks, and a built-in self test.
//
// Exit codes: 0 success, 1 usage/config/validation error, 2 a resource cap
// was exceeded.
#include <cstdint>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "keq/attack.hpp"
#include "keq/caps.hpp"
#include "keq/equivocation.hpp"
#include "keq/error.hpp"
#include "keq/group.hpp"
#include "keq/kernels.hpp"
#include "keq/keyspace.hpp"
#include "keq/numeric.hpp"
#include "keq/selftest.hpp"

namespace {

using nlohmann::json;

struct RunConfig {
  keq::GroupFamilySpec spec;
  keq::SymbolDistribution base_dist{std::vector<double>{1.0}};
  double log_base = 2.0;
  std::vector<unsigned> lengths;  // base-symbol units
  std::size_t samples = 100000;
  std::size_t trials = 1000;
  std::uint64_t seed = 42;
  unsigned workers = 1;
  std::size_t max_order = keq::kDefaultOrderCap;
};

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw keq::Error("cannot open config file: " + path);
  json j;
  try {
    j = json::parse(in, nullptr, true, /*ignore_comments=*/true);
  } catch (const json::exception& e) {
    throw keq::Error("config parse error: " + std::string(e.what()));
  }
  if (!j.is_object()) throw keq::Error("config: expected a JSON object");

  static const char* allowed[] = {"group",  "distribution", "log_base", "lengths",
                                  "samples", "trials",      "seed",     "workers",
                                  "max_order"};
  for (const auto& item : j.items()) {
    bool known = false;
    for (const char* k : allowed) known = known || item.key() == k;
    if (!known) throw keq::Error("config: unknown field '" + item.key() + "'");
  }

  RunConfig cfg;
  if (!j.contains("group")) throw keq::Error("config: missing 'group'");
  cfg.spec = keq::GroupFamilySpec::from_json(j["group"]);

  if (j.contains("distribution")) {
    const auto& d = j["distribution"];
    if (!d.is_array() || d.empty())
      throw keq::Error("config: 'distribution' must be a non-empty array of probabilities");
    std::vector<double> probs;
    probs.reserve(d.size());
    for (const auto& v : d) {
      if (!v.is_number()) throw keq::Error("config: 'distribution' entries must be numbers");
      probs.push_back(v.get<double>());
    }
    cfg.base_dist = keq::SymbolDistribution(std::move(probs));
  } else {
    cfg.base_dist = keq::SymbolDistribution::uniform(cfg.spec.base_alphabet_size());
  }

  if (j.contains("log_base")) {
    if (!j["log_base"].is_number()) throw keq::Error("config: 'log_base' must be a number");
    cfg.log_base = j["log_base"].get<double>();
  }
  if (j.contains("lengths")) {
    const auto& ls = j["lengths"];
    if (!ls.is_array() || ls.empty())
      throw keq::Error("config: 'lengths' must be a non-empty array of positive integers");
    for (const auto& v : ls) {
      if (!v.is_number_unsigned() || v.get<std::uint64_t>() == 0 ||
          v.get<std::uint64_t>() > 100000)
        throw keq::Error("config: 'lengths' entries must be integers in [1, 100000]");
      cfg.lengths.push_back(v.get<unsigned>());
    }
  } else {
    for (unsigned l = 1; l <= 8; ++l) cfg.lengths.push_back(l);
  }

  auto positive = [&](const char* name, std::uint64_t maxv) -> std::uint64_t {
    const auto& v = j[name];
    if (!v.is_number_unsigned() || v.get<std::uint64_t>() == 0 || v.get<std::uint64_t>() > maxv)
      throw keq::Error(std::string("config: '") + name + "' must be an integer in [1, " +
                       std::to_string(maxv) + "]");
    return v.get<std::uint64_t>();
  };
  if (j.contains("samples")) cfg.samples = positive("samples", 1000000000ull);
  if (j.contains("trials")) cfg.trials = positive("trials", 1000000000ull);
  if (j.contains("workers")) cfg.workers = static_cast<unsigned>(positive("workers", 256));
  if (j.contains("max_order")) cfg.max_order = positive("max_order", std::size_t{1} << 26);
  if (j.contains("seed")) {
    if (!j["seed"].is_number_unsigned())
      throw keq::Error("config: 'seed' must be a non-negative integer");
    cfg.seed = j["seed"].get<std::uint64_t>();
  }
  return cfg;
}

keq::CipherModel build(const RunConfig& cfg) {
  keq::Caps caps;
  caps.max_order = cfg.max_order;
  return keq::build_family(cfg.spec, cfg.base_dist, cfg.log_base, caps);
}

// Lengths are counted in base symbols; position models consume whole blocks.
unsigned to_model_units(const keq::CipherModel& model, unsigned base_len) {
  const unsigned d = model.block_width;
  if (d <= 1) return base_len;
  if (base_len % d != 0)
    throw keq::Error("length " + std::to_string(base_len) + " is not a multiple of the block width " +
                     std::to_string(d) + " (position lengths count base symbols)");
  return base_len / d;
}

std::string group_label(const keq::GroupFamilySpec& spec) {
  using F = keq::GroupFamilySpec::Family;
  switch (spec.family) {
    case F::symmetric: return "symmetric(n=" + std::to_string(spec.n) + ")";
    case F::alternating: return "alternating(n=" + std::to_string(spec.n) + ")";
    case F::affine: return "affine(q=" + std::to_string(spec.q) + ")";
    case F::position:
      return "position(d=" + std::to_string(spec.d) + ",base_n=" + std::to_string(spec.base_n) +
             ")";
    case F::generators:
      return "generators(" + std::to_string(spec.generator_list.size()) + ")";
  }
  return "?";
}

void emit(const std::string& text, const std::string& output_path) {
  if (output_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(output_path, std::ios::binary);
  if (!out) throw keq::Error("cannot open output file: " + output_path);
  out << text;
  if (!out) throw keq::Error("failed writing output file: " + output_path);
}

struct AnalyzeArgs {
  std::string config;
  std::string output;
  std::string format = "text";
  bool verify = false;
};

int run_analyze(const AnalyzeArgs& args) {
  RunConfig cfg = load_config(args.config);
  keq::CipherModel model = build(cfg);
  auto report = keq::maximal_keys(*model.group, model.distribution);

  bool have_profile = false;
  keq::ClosedFormProfile profile;
  try {
    profile = keq::closed_form_profile(cfg.spec, cfg.base_dist);
    have_profile = true;
  } catch (const keq::Error&) {
    // family has no closed form (generator-built or parameters out of range)
  }
  const bool profile_match =
      have_profile && report.rate == profile.rate && report.group_order == profile.order &&
      report.n_maximal_keys() == profile.n_maximal_keys &&
      report.n_maximal_fixed_sets() == profile.n_maximal_fixed_sets;

  bool closure_ok = true;
  if (args.verify) closure_ok = keq::verify_group_closure(*model.group);

  std::string text;
  if (args.format == "json") {
    json out;
    out["group"] = cfg.spec.to_json();
    out["log_base"] = model.log_base;
    out["report"] = report.to_json();
    if (have_profile) {
      json p;
      p["R"] = profile.rate;
      p["order"] = profile.order;
      p["n_maximal_keys"] = profile.n_maximal_keys;
      p["n_maximal_fixed_sets"] = profile.n_maximal_fixed_sets;
      p["match"] = profile_match;
      out["closed_form"] = p;
    }
    if (args.verify) out["closure_verified"] = closure_ok;
    text = out.dump(2) + "\n";
  } else {
    text += "group=" + group_label(cfg.spec) + "\n";
    text += "order=" + std::to_string(report.group_order) + "\n";
    text += std::string("degenerate=") + (report.degenerate ? "true" : "false") + "\n";
    text += "R=" + keq::format_double(report.rate) + "\n";
    text += "n_maximal_keys=" + std::to_string(report.n_maximal_keys()) + "\n";
    text += "n_maximal_fixed_sets=" + std::to_string(report.n_maximal_fixed_sets()) + "\n";
    if (report.n_maximal_fixed_sets() <= 64) {
      text += "maximal_fixed_sets=" + json(report.distinct_maximal_fixed_sets).dump() + "\n";
      text += "argmax_keys=" + json(report.argmax_keys).dump() + "\n";
    } else {
      text += "maximal_fixed_sets=(" + std::to_string(report.n_maximal_fixed_sets()) +
              " sets; use --format json)\n";
    }
    if (have_profile)
      text += std::string("closed_form=") + (profile_match ? "MATCH" : "MISMATCH") + "\n";
    if (args.verify)
      text += std::string("group_closure=") + (closure_ok ? "ok" : "FAILED") + "\n";
  }
  emit(text, args.output);
  return closure_ok ? 0 : 1;
}

struct CurveArgs {
  std::string config;
  std::string output;
  bool simulate = false;
  bool no_exact = false;
  std::uint64_t seed = 0;
  bool seed_set = false;
  std::size_t samples = 0;
  unsigned workers = 0;
};

int run_curve(const CurveArgs& args) {
  RunConfig cfg = load_config(args.config);
  if (args.seed_set) cfg.seed = args.seed;
  if (args.samples) cfg.samples = args.samples;
  if (args.workers) cfg.workers = args.workers;

  keq::CipherModel model = build(cfg);
  auto report = keq::maximal_keys(*model.group, model.distribution);

  bool exact_enabled = !args.no_exact;
  std::string text = keq::csv_header() + "\n";
  for (unsigned len : cfg.lengths) {
    const unsigned ml = to_model_units(model, len);
    keq::EquivocationRow row;
    row.L = len;
    if (exact_enabled) {
      try {
        row.exact = keq::exact_equivocation(model, ml, report);
      } catch (const keq::CapExceeded& e) {
        std::cerr << "note: exact column skipped: " << e.what() << "\n";
        exact_enabled = false;
      }
    }
    row.bounds = keq::equivocation_bounds(model, ml, report);
    if (args.simulate)
      row.mc = keq::monte_carlo_equivocation(model, ml, cfg.samples,
                                             keq::derive_stream_seed(cfg.seed, len), cfg.workers);
    text += keq::csv_row(row) + "\n";
  }
  emit(text, args.output);
  return 0;
}

struct AttackArgs {
  std::string config;
  std::string output;
  std::string pairs;
  bool simulate = false;
  std::uint64_t seed = 0;
  bool seed_set = false;
  std::size_t trials = 0;
  unsigned workers = 0;
};

int run_attack(const AttackArgs& args) {
  RunConfig cfg = load_config(args.config);
  if (args.seed_set) cfg.seed = args.seed;
  if (args.trials) cfg.trials = args.trials;
  if (args.workers) cfg.workers = args.workers;
  if (args.pairs.empty() == !args.simulate)
    throw keq::Error("attack: provide exactly one of --pairs or --simulate");

  keq::CipherModel model = build(cfg);

  if (args.simulate) {
    unsigned base_lmax = 0;
    for (unsigned l : cfg.lengths) base_lmax = std::max(base_lmax, l);
    const unsigned lmax = to_model_units(model, base_lmax);
    auto rows = keq::simulate_attack(model, lmax, cfg.trials, cfg.seed, cfg.workers);
    std::string text = keq::trajectory_csv_header() + "\n";
    for (const auto& row : rows) text += keq::trajectory_csv_row(row, model.block_width) + "\n";
    emit(text, args.output);
    return 0;
  }

  auto [m_base, c_base] = keq::load_pair_file(args.pairs, cfg.spec.base_alphabet_size());
  keq::Word m = m_base, c = c_base;
  if (model.block_width > 1) {
    const unsigned d = model.block_width;
    if (m_base.size() % d != 0)
      throw keq::Error("pair length " + std::to_string(m_base.size()) +
                       " is not a multiple of the block width " + std::to_string(d));
    const std::size_t base_n = cfg.spec.base_alphabet_size();
    auto pack = [&](const keq::Word& w) {
      keq::Word out(w.size() / d);
      for (std::size_t b = 0; b < out.size(); ++b) {
        std::uint64_t v = 0;
        for (unsigned i = 0; i < d; ++i) v = v * base_n + w[b * d + i];
        out[b] = static_cast<keq::Symbol>(v);
      }
      return out;
    };
    m = pack(m_base);
    c = pack(c_base);
  }

  auto outcome = keq::consistent_keys(model, m, c);
  std::string text;
  text += "consistent_count=" + std::to_string(outcome.consistent_count);
  if (outcome.consistent_count == 0)
    text += " (pair has probability zero under this key space)";
  text += "\n";
  text += "stabilizer_size=" + std::to_string(outcome.stabilizer_size) + "\n";
  text += "residual_entropy=" + keq::format_double(outcome.residual_entropy) + "\n";
  text += std::string("resolved=") + (outcome.resolved ? "true" : "false") + "\n";
  if (outcome.representative_index) {
    text += "representative_index=" + std::to_string(*outcome.representative_index) + "\n";
    const auto& img = outcome.representative->images();
    text += "representative=" + json(std::vector<keq::Symbol>(img.begin(), img.end())).dump() +
            "\n";
  }
  emit(text, args.output);
  return 0;
}

int run_verify() {
  std::cout << "kernels=" << keq::kernels::isa_name(keq::kernels::active()) << "\n";
  auto checks = keq::run_selftest();
  std::size_t passed = 0;
  for (const auto& c : checks) {
    if (c.pass) {
      ++passed;
      std::cout << "ok   - " << c.name << "\n";
    } else {
      std::cout << "FAIL - " << c.name << " (" << c.detail << ")\n";
    }
  }
  std::cout << passed << "/" << checks.size() << " checks passed\n";
  return passed == checks.size() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"exact, bounded, and Monte Carlo key equivocation for substitution ciphers "
               "with subgroup key spaces"};
  app.require_subcommand(1);

  AnalyzeArgs analyze_args;
  auto* analyze = app.add_subcommand("analyze", "key-space structure: maximal keys, rate R, "
                                                "closed-form cross-check");
  analyze->add_option("--config", analyze_args.config, "JSON run configuration")
      ->required();
  analyze->add_option("--output", analyze_args.output, "write to this file instead of stdout");
  analyze->add_option("--format", analyze_args.format, "text or json")
      ->check(CLI::IsMember({"text", "json"}));
  analyze->add_flag("--verify", analyze_args.verify, "audit group closure/inverses first");

  CurveArgs curve_args;
  auto* curve = app.add_subcommand("curve", "equivocation curve: exact values, bounds, and "
                                            "optional Monte Carlo estimates (CSV)");
  curve->add_option("--config", curve_args.config, "JSON run configuration")->required();
  curve->add_option("--output", curve_args.output, "write to this file instead of stdout");
  curve->add_flag("--simulate", curve_args.simulate, "add Monte Carlo mean/stderr columns");
  curve->add_flag("--no-exact", curve_args.no_exact, "skip the exact column");
  auto* curve_seed = curve->add_option("--seed", curve_args.seed, "master RNG seed");
  curve->add_option("--samples", curve_args.samples, "Monte Carlo samples per length");
  curve->add_option("--workers", curve_args.workers, "worker threads (results do not depend on this)");

  AttackArgs attack_args;
  auto* attack = app.add_subcommand("attack", "known-plaintext attack: one pair from a file, or "
                                              "a simulated residual-entropy trajectory (CSV)");
  attack->add_option("--config", attack_args.config, "JSON run configuration")->required();
  attack->add_option("--output", attack_args.output, "write to this file instead of stdout");
  attack->add_option("--pairs", attack_args.pairs, "plaintext/ciphertext pair file");
  attack->add_flag("--simulate", attack_args.simulate, "simulate random attacks up to max length");
  auto* attack_seed = attack->add_option("--seed", attack_args.seed, "master RNG seed");
  attack->add_option("--trials", attack_args.trials, "simulated attack trials");
  attack->add_option("--workers", attack_args.workers, "worker threads (results do not depend on this)");

  auto* verify = app.add_subcommand("verify", "run the built-in self test");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  curve_args.seed_set = curve_seed->count() > 0;
  attack_args.seed_set = attack_seed->count() > 0;

  try {
    if (analyze->parsed()) return run_analyze(analyze_args);
    if (curve->parsed()) return run_curve(curve_args);
    if (attack->parsed()) return run_attack(attack_args);
    if (verify->parsed()) return run_verify();
  } catch (const keq::CapExceeded& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
