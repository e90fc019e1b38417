#pragma once

#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <iterator>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "colcomm/colcomm.hpp"

namespace colcomm::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitVerificationFailed = 1;
inline constexpr int kExitUsage = 2;

inline constexpr std::uint64_t kDefaultSeed = 1;
inline constexpr std::uint64_t kGenCap = std::uint64_t{1} << 16;
inline constexpr std::uint64_t kReduceCap = 64;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Verification failed; carries the witness line(s).
class VerificationFailure : public std::runtime_error {
 public:
  VerificationFailure(std::string summary, std::string witness)
      : std::runtime_error(std::move(summary)), witness_(std::move(witness)) {}
  const std::string& witness() const noexcept { return witness_; }

 private:
  std::string witness_;
};

namespace detail {

using io::json;

inline std::uint64_t default_seed() {
  if (const char* env = std::getenv("COLCOMM_SEED")) {
    try {
      std::size_t used = 0;
      const auto v = std::stoull(env, &used, 0);
      if (used == std::string(env).size()) return v;
    } catch (const std::exception&) {
    }
    throw UsageError(std::string("COLCOMM_SEED is not an unsigned integer: '") + env + "'");
  }
  return kDefaultSeed;
}

inline json read_json(const std::string& path) {
  std::string text;
  if (path == "-") {
    text.assign(std::istreambuf_iterator<char>(std::cin), {});
  } else {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot open '" + path + "'");
    text.assign(std::istreambuf_iterator<char>(in), {});
  }
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw UsageError("malformed JSON in '" + path + "': " + e.what());
  }
}

inline void write_json(const json& j, const std::string& path, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << j.dump() << '\n';
    return;
  }
  std::ofstream f(path);
  if (!f) throw UsageError("cannot write '" + path + "'");
  f << j.dump() << '\n';
}

inline Gadget load_gadget(const std::string& spec) {
  if (spec == "ver") return ver_gadget();
  if (spec == "xor") return xor_gadget();
  return io::gadget_from_json(read_json(spec));
}

inline SymmetryGroup load_group(const std::string& spec, const std::string& gadget_spec) {
  const std::string& which = spec.empty() ? gadget_spec : spec;
  if (which == "ver") return ver_group();
  if (which == "xor") return xor_group();
  if (spec.empty()) throw UsageError("--group is required for a gadget read from a file");
  return io::group_from_json(read_json(spec));
}

inline RegularGadget load_regular(const std::string& gadget_spec, const std::string& group_spec) {
  Gadget g = load_gadget(gadget_spec);
  SymmetryGroup S = load_group(group_spec, gadget_spec);
  if (S.domain_size() != g.side()) throw UsageError("group and gadget act on different domains");
  const auto report = check_regular(g, S);
  if (!report.passed()) {
    throw VerificationFailure("gadget is not regular under the given group",
                              "WITNESS: " + report.witness->describe());
  }
  return RegularGadget(std::move(g), std::move(S));
}

inline PromiseClass parse_class(const std::string& s) {
  if (s == "1to1") return PromiseClass::OneToOne;
  if (s == "2to1") return PromiseClass::TwoToOne;
  throw UsageError("--class must be 1to1 or 2to1");
}

inline std::string class_tag(PromiseClass c) {
  return c == PromiseClass::OneToOne ? "1to1" : c == PromiseClass::TwoToOne ? "2to1" : "neither";
}

inline OracleStrategy parse_oracle(const std::string& s) {
  if (s == "lex") return OracleStrategy::LexFirst;
  if (s == "rand") return OracleStrategy::UniformRandom;
  if (s == "adv") return OracleStrategy::MinIndexAdversary;
  throw UsageError("--oracle must be lex, rand or adv");
}

inline void check_N(std::uint64_t N, std::uint64_t cap, bool force) {
  if (N < 2 || !is_power_of_two(N)) throw UsageError("N = " + std::to_string(N) + " is not a power of two >= 2");
  if (N > cap && !force) {
    throw UsageError("N = " + std::to_string(N) + " exceeds the cap of " + std::to_string(cap) +
                     " (use --force)");
  }
}

inline void csv_header(std::ostream& out) {
  out << "protocol,N,trials,correct_rate,ci_low,ci_high,mean_cost\n";
}

inline void csv_row(std::ostream& out, const std::string& protocol, std::uint64_t N, const SuccessStats& s) {
  const auto [lo, hi] = s.wilson95();
  std::ostringstream row;
  row.precision(6);
  row << std::fixed << protocol << ',' << N << ',' << s.trials << ',' << s.rate() << ',' << lo << ',' << hi
      << ',' << s.mean_cost() << '\n';
  out << row.str();
}

}  // namespace detail

/// Runs the command line `args` (args[0] is the program name). Output goes
/// to `out`, diagnostics to `err`. Returns the process exit code:
/// 0 success, 1 verification failure (witness printed), 2 usage error.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  using namespace detail;

  CLI::App app{"Collision-problem communication toolkit"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all");

  std::uint64_t seed = 0;
  bool seed_given = false;
  auto add_seed = [&](CLI::App* sub) {
    sub->add_option_function<std::uint64_t>("--seed", [&](std::uint64_t v) {
      seed = v;
      seed_given = true;
    }, "master seed (default: $COLCOMM_SEED or 1)");
  };

  // gen
  std::string gen_kind = "bicol", gen_class, gen_gadget = "ver", gen_out;
  std::uint64_t gen_N = 0;
  bool gen_balanced = false, gen_force = false;
  auto* gen = app.add_subcommand("gen", "generate a seeded promise instance");
  gen->add_option("--kind", gen_kind, "full | bicol | composed")->check(CLI::IsMember({"full", "bicol", "composed"}));
  gen->add_option("--class", gen_class, "1to1 | 2to1")->required();
  gen->add_option("--N", gen_N, "list length (power of two)")->required();
  gen->add_flag("--balanced", gen_balanced, "bicol: every Alice half-number occurs sqrt(N) times");
  gen->add_option("--gadget", gen_gadget, "composed: ver | xor | gadget.json");
  gen->add_option("--out", gen_out, "output file (default stdout)");
  gen->add_flag("--force", gen_force, "lift the size cap");
  add_seed(gen);

  // classify
  std::string cls_in, cls_gadget = "ver";
  auto* cls = app.add_subcommand("classify", "report OneToOne / TwoToOne / Neither");
  cls->add_option("--in", cls_in, "instance or composed-input JSON ('-' for stdin)")->required();
  cls->add_option("--gadget", cls_gadget, "gadget for composed inputs");

  // verify-regular
  std::string vr_gadget, vr_group;
  auto* vr = app.add_subcommand("verify-regular", "check that a group makes a gadget regular");
  vr->add_option("--gadget", vr_gadget, "ver | xor | gadget.json")->required();
  vr->add_option("--group", vr_group, "ver | xor | group.json")->required();

  // reduce
  std::string red_gadget = "ver", red_group, red_in, red_out;
  unsigned red_n = 0;
  bool red_force = false;
  std::uint64_t red_cap = kReduceCap;
  auto* red = app.add_subcommand("reduce", "map a composed input to a bipartite collision instance");
  red->add_option("--gadget", red_gadget, "ver | xor | gadget.json");
  red->add_option("--group", red_group, "ver | xor | group.json (defaults to the gadget's own)");
  red->add_option("--n", red_n, "gadget inputs per block (N = 2^n)")->required();
  red->add_option("--in", red_in, "composed-input JSON")->required();
  red->add_option("--out", red_out, "output file (default stdout)");
  red->add_option("--cap", red_cap, "maximum N without --force");
  red->add_flag("--force", red_force, "lift the size cap");

  // verify-claim
  std::string vc_gadget = "ver", vc_group, vc_mode = "exhaustive";
  unsigned vc_n = 1;
  std::size_t vc_trials = 10'000;
  std::uint64_t vc_cap = std::uint64_t{1} << 12;
  auto* vc = app.add_subcommand("verify-claim", "check the four Unfold set properties");
  vc->add_option("--gadget", vc_gadget, "ver | xor | gadget.json");
  vc->add_option("--group", vc_group, "ver | xor | group.json");
  vc->add_option("--n", vc_n, "gadget inputs per block");
  vc->add_option("--mode", vc_mode, "exhaustive | sampled")->check(CLI::IsMember({"exhaustive", "sampled"}));
  vc->add_option("--trials", vc_trials, "sampled pairs");
  vc->add_option("--cap", vc_cap, "maximum number of inputs for exhaustive mode");
  add_seed(vc);

  // simulate
  std::string sim_protocol, sim_in, sim_class = "2to1", sim_oracle = "rand";
  std::uint64_t sim_N = 16, sim_d = 0;
  std::size_t sim_trials = 1000, sim_t = 3;
  double sim_c = 2.0;
  unsigned sim_workers = 1;
  bool sim_balanced = false, sim_force = false;
  auto* sim = app.add_subcommand("simulate", "run a protocol repeatedly and emit CSV statistics");
  sim->add_option("--protocol", sim_protocol, "det | rand | dec2search")
      ->required()
      ->check(CLI::IsMember({"det", "rand", "dec2search"}));
  sim->add_option("--in", sim_in, "fixed instance JSON (otherwise fresh instances per trial)");
  sim->add_option("--N", sim_N, "length of generated instances");
  sim->add_option("--class", sim_class, "class of generated instances: 1to1 | 2to1");
  sim->add_flag("--balanced", sim_balanced, "generate balanced instances");
  sim->add_option("--trials", sim_trials, "number of trials");
  sim->add_option("--t", sim_t, "dec2search rounds");
  sim->add_option("--oracle", sim_oracle, "lex | rand | adv");
  sim->add_option("--c", sim_c, "rand sampling constant");
  sim->add_option("--d", sim_d, "declared oracle cost in bits");
  sim->add_option("--workers", sim_workers, "worker threads");
  sim->add_flag("--force", sim_force, "lift the size cap");
  add_seed(sim);

  // bench
  std::vector<std::uint64_t> bench_N{16, 256};
  std::size_t bench_trials = 1000, bench_t = 3;
  double bench_c = 2.0;
  std::uint64_t bench_d = 0;
  unsigned bench_workers = 1;
  auto* bench = app.add_subcommand("bench", "CSV statistics for every protocol over a grid of N");
  bench->add_option("--N", bench_N, "list lengths (even powers of two)")->delimiter(',');
  bench->add_option("--trials", bench_trials, "trials per row");
  bench->add_option("--t", bench_t, "dec2search rounds");
  bench->add_option("--c", bench_c, "rand sampling constant");
  bench->add_option("--d", bench_d, "declared oracle cost in bits");
  bench->add_option("--workers", bench_workers, "worker threads");
  add_seed(bench);

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n' << "WITNESS: usage " << e.get_name() << '\n';
    return kExitUsage;
  }

  try {
    if (!seed_given) seed = default_seed();

    if (gen->parsed()) {
      const PromiseClass c = parse_class(gen_class);
      check_N(gen_N, kGenCap, gen_force);
      json j;
      if (gen_kind == "full") {
        j = io::to_json(gen_promise(gen_N, c, seed));
      } else if (gen_kind == "bicol") {
        if (exact_log2(gen_N) % 2 != 0) throw UsageError("bicol instances need N = 4^m");
        j = io::to_json(gen_balanced ? gen_balanced_promise(gen_N, c, seed) : split(gen_promise(gen_N, c, seed)));
      } else {
        j = io::to_json(gen_composed(load_gadget(gen_gadget), gen_N, c, seed));
      }
      j["seed"] = seed;
      write_json(j, gen_out, out);
      return kExitOk;
    }

    if (cls->parsed()) {
      const json j = read_json(cls_in);
      PromiseClass c;
      if (j.is_object() && j.contains("alice")) {
        c = eval_composed(load_gadget(cls_gadget), io::composed_from_json(j));
      } else {
        c = classify(io::as_number_list(io::instance_from_json(j)));
      }
      out << to_string(c) << '\n';
      return kExitOk;
    }

    if (vr->parsed()) {
      const Gadget g = load_gadget(vr_gadget);
      const SymmetryGroup S = load_group(vr_group, vr_gadget);
      if (S.domain_size() != g.side()) throw UsageError("group and gadget act on different domains");
      const auto report = check_regular(g, S);
      if (!report.passed()) {
        throw VerificationFailure("FAIL, |S|=" + std::to_string(report.group_order),
                                  "WITNESS: " + report.witness->describe());
      }
      out << "PASS, |S|=" << report.group_order << ", |g^-1(0)|=" << report.preimage_sizes[0]
          << ", |g^-1(1)|=" << report.preimage_sizes[1] << ", uniqueness checks=" << report.uniqueness_checks
          << '\n';
      return kExitOk;
    }

    if (red->parsed()) {
      const RegularGadget rg = load_regular(red_gadget, red_group);
      const ComposedInput c = io::composed_from_json(read_json(red_in));
      if (c.n() != red_n) {
        throw UsageError("--n " + std::to_string(red_n) + " disagrees with the input (n = " +
                         std::to_string(c.n()) + ")");
      }
      if (c.blocks() > red_cap && !red_force) {
        throw UsageError("N = " + std::to_string(c.blocks()) + " exceeds the reduce cap of " +
                         std::to_string(red_cap) + " (use --force)");
      }
      const BipartitePair reduced = reduce_to_bicol(rg, c);
      const PromiseClass before = eval_composed(rg.gadget(), c);
      const PromiseClass after = classify(concat(reduced));
      write_json(io::to_json(reduced), red_out, out);
      std::ostream& summary = red_out.empty() || red_out == "-" ? err : out;
      summary << "length=" << reduced.size() << " input=" << to_string(before) << " output=" << to_string(after)
              << '\n';
      if (satisfies_promise(before) && before != after) {
        throw VerificationFailure("reduction changed the promise class",
                                  "WITNESS: input " + std::string(to_string(before)) + " output " +
                                      std::string(to_string(after)));
      }
      return kExitOk;
    }

    if (vc->parsed()) {
      const RegularGadget rg = load_regular(vc_gadget, vc_group);
      ClaimOptions opt;
      opt.mode = vc_mode == "sampled" ? VerifyMode::Sampled : VerifyMode::Exhaustive;
      opt.trials = vc_trials;
      opt.seed = seed;
      opt.exhaustive_cap = vc_cap;
      ClaimReport report;
      try {
        report = verify_claim(rg, vc_n, opt);
      } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
      }
      if (!report.passed()) {
        const auto& v = *report.first_violation;
        std::ostringstream w;
        w << "WITNESS: part=" << static_cast<int>(v.part) << " a=" << json(v.a).dump() << " b=" << json(v.b).dump();
        if (v.a2) w << " a'=" << json(*v.a2).dump() << " b'=" << json(*v.b2).dump();
        throw VerificationFailure("FAIL, violations=" + std::to_string(report.total_violations()), w.str());
      }
      out << "PASS, seed=" << seed << ", inputs=" << report.inputs_checked << ", pairs=" << report.pairs_checked
          << '\n';
      return kExitOk;
    }

    if (sim->parsed()) {
      std::optional<BipartitePair> fixed;
      std::uint64_t N = sim_N;
      if (!sim_in.empty()) {
        fixed = io::as_bipartite(io::instance_from_json(read_json(sim_in)));
        N = fixed->size();
        if (!satisfies_promise(classify(concat(*fixed)))) {
          throw UsageError("instance violates the promise (class Neither)");
        }
      }
      check_N(N, kGenCap, sim_force);
      if (exact_log2(N) % 2 != 0) throw UsageError("protocols need N = 4^m");
      if (fixed && exact_log2(N) != fixed->bits()) throw UsageError("instance length is not 2^n");
      const InstanceRecipe recipe{N, parse_class(sim_class), sim_balanced};
      auto make = [&](std::uint64_t s) { return fixed ? *fixed : recipe.make(s); };

      SuccessStats stats;
      std::string name = sim_protocol;
      if (sim_protocol == "det") {
        stats = run_trials(sim_trials, seed, make, [](const BipartitePair& p, std::uint64_t) {
          return run_deterministic_bicol(p);
        }, sim_workers);
      } else if (sim_protocol == "rand") {
        stats = run_trials(sim_trials, seed, make, [&](const BipartitePair& p, std::uint64_t s) {
          return run_randomized_bicol(p, sim_c, s);
        }, sim_workers);
      } else {
        if (sim_t == 0) throw UsageError("--t must be at least 1");
        const PhpOracle oracle{parse_oracle(sim_oracle), sim_d};
        name += "/" + sim_oracle;
        stats = run_trials(sim_trials, seed, make, [&](const BipartitePair& p, std::uint64_t s) {
          return decision_from_search(p, oracle, sim_t, s);
        }, sim_workers);
      }
      out << "# seed=" << seed << '\n';
      csv_header(out);
      csv_row(out, name, N, stats);
      return kExitOk;
    }

    if (bench->parsed()) {
      for (auto N : bench_N) {
        check_N(N, kGenCap, false);
        if (exact_log2(N) % 2 != 0) throw UsageError("bench needs N = 4^m, got " + std::to_string(N));
      }
      out << "# seed=" << seed << '\n';
      csv_header(out);
      for (auto N : bench_N) {
        for (auto c : {PromiseClass::OneToOne, PromiseClass::TwoToOne}) {
          const InstanceRecipe recipe{N, c, true};
          auto make = [&](std::uint64_t s) { return recipe.make(s); };
          const std::string tag = ":" + class_tag(c);
          csv_row(out, "det" + tag, N,
                  run_trials(bench_trials, seed, make,
                             [](const BipartitePair& p, std::uint64_t) { return run_deterministic_bicol(p); },
                             bench_workers));
          csv_row(out, "rand" + tag, N,
                  run_trials(bench_trials, seed, make,
                             [&](const BipartitePair& p, std::uint64_t s) {
                               return run_randomized_bicol(p, bench_c, s);
                             },
                             bench_workers));
          for (const auto& [strategy, stats] :
               estimate_success_by_strategy(recipe, bench_d, bench_t, bench_trials, seed, bench_workers)) {
            csv_row(out, "dec2search/" + std::string(to_string(strategy)) + tag, N, stats);
          }
        }
      }
      return kExitOk;
    }
  } catch (const VerificationFailure& e) {
    out << e.what() << '\n' << e.witness() << '\n';
    return kExitVerificationFailed;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n' << "WITNESS: usage " << e.what() << '\n';
    return kExitUsage;
  } catch (const io::FormatError& e) {
    err << "error: " << e.what() << '\n' << "WITNESS: format " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n' << "WITNESS: usage " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace colcomm::cli
