// Command-line front end: instance validation, reduction, plan evaluation,
// optimisation and the reproduction targets.

#include <cmath>
#include <filesystem>
#include <iostream>
#include <random>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "scenred/evaluation.hpp"
#include "scenred/ga.hpp"
#include "scenred/instance.hpp"
#include "scenred/oracle.hpp"
#include "scenred/permutation_search.hpp"
#include "scenred/reduction.hpp"
#include "scenred/reproduce.hpp"

#ifndef SCENRED_SOURCE_DIR
#define SCENRED_SOURCE_DIR "."
#endif

namespace fs = std::filesystem;
using namespace scenred;

namespace {

struct InstanceArgs {
  std::string path;
  std::string overlay;

  Instance load() const {
    Instance inst = load_instance_file(path);
    if (!overlay.empty()) inst = apply_overlay_file(inst, overlay);
    return inst;
  }
};

struct PermArgs {
  std::vector<std::string> perms;       // one comma list per pair, in pair order
  std::vector<std::string> perm_files;  // same, from set-file headers

  /// Permutation for pair `k`, falling back to the heuristic ordering.
  std::vector<LinkId> for_pair(const Instance& inst, std::size_t k) const {
    if (!perms.empty() && !perm_files.empty()) throw CLI::ValidationError("use either --perm or --perm-file");
    if (!perms.empty()) {
      if (perms.size() != 1 && perms.size() != inst.pairs.size())
        throw CLI::ValidationError(fmt::format("give one --perm per pair ({} pairs)", inst.pairs.size()));
      return parse_permutation(perms.size() == 1 ? perms[0] : perms[k]);
    }
    if (!perm_files.empty()) {
      if (perm_files.size() != 1 && perm_files.size() != inst.pairs.size())
        throw CLI::ValidationError(fmt::format("give one --perm-file per pair ({} pairs)", inst.pairs.size()));
      return read_permutation_file(perm_files.size() == 1 ? perm_files[0] : perm_files[k]);
    }
    return heuristic_permutation(inst, k);
  }

  std::vector<MultiscenarioSet> sets(const Instance& inst) const {
    if ((perms.size() == 1 || perm_files.size() == 1) && inst.pairs.size() > 1)
      throw CLI::ValidationError("a single permutation only applies to single-pair instances; repeat the flag per pair");
    std::vector<MultiscenarioSet> out;
    for (std::size_t k = 0; k < inst.pairs.size(); ++k) out.push_back(reduce(inst, k, for_pair(inst, k)));
    return out;
  }
};

struct ObjectiveArgs {
  std::string kind = "exp";
  double alpha = 0.9;

  Objective get() const { return kind == "cvar" ? Objective::cvar(alpha) : Objective::expectation(); }
};

void add_instance(CLI::App* cmd, InstanceArgs& args) {
  cmd->add_option("instance", args.path, "Instance JSON file")->required()->check(CLI::ExistingFile);
  cmd->add_option("--overlay", args.overlay, "Overlay JSON merged over the instance")->check(CLI::ExistingFile);
}

void add_perms(CLI::App* cmd, PermArgs& args) {
  cmd->add_option("--perm", args.perms, "Comma-separated link permutation (repeat per pair)");
  cmd->add_option("--perm-file", args.perm_files, "Set or permutation file whose header is used (repeat per pair)")
      ->check(CLI::ExistingFile);
}

void add_objective(CLI::App* cmd, ObjectiveArgs& args) {
  cmd->add_option("--objective", args.kind, "exp or cvar")->check(CLI::IsMember({"exp", "cvar"}));
  cmd->add_option("--alpha", args.alpha, "CVaR level in (0,1)")->check(CLI::Range(0.0, 1.0));
}

fs::path default_dir(const std::string& name) {
  if (fs::is_directory(name)) return name;
  return fs::path(SCENRED_SOURCE_DIR) / name;
}

int run_oracle_check(const Instance& inst, std::uint64_t seed, std::size_t plans, std::size_t samples) {
  inst.require_probabilities();
  std::mt19937_64 rng(seed);
  std::bernoulli_distribution coin(0.5);
  bool all_ok = true;
  auto line = [&](const std::string& name, bool ok, const std::string& detail) {
    all_ok = all_ok && ok;
    std::cout << fmt::format("{}  {:<40} {}\n", ok ? "PASS" : "FAIL", name, detail);
  };

  for (std::size_t k = 0; k < inst.pairs.size(); ++k) {
    std::vector<MultiscenarioSet> perms_sets;
    auto perm = heuristic_permutation(inst, k);
    for (int r = 0; r < 3; ++r) {
      perms_sets.push_back(reduce(inst, k, perm));
      std::shuffle(perm.begin(), perm.end(), rng);
    }
    double worst = 0.0;
    double worst_perm = 0.0;
    double worst_mass = 0.0;
    for (std::size_t t = 0; t < plans; ++t) {
      InvestmentPlan plan{std::vector<bool>(inst.link_count())};
      for (std::size_t i = 0; i < inst.link_count(); ++i) plan.invest[i] = coin(rng);
      const double exact = oracle::brute_force_expected(inst, k, plan);
      const double first = expected_length(perms_sets[0], inst, plan);
      for (const auto& set : perms_sets) {
        const double v = expected_length(set, inst, plan);
        worst = std::max(worst, std::abs(v - exact));
        worst_perm = std::max(worst_perm, std::abs(v - first));
        double mass = 0.0;
        for (const auto& atom : length_distribution(set, inst, plan)) mass += atom.probability;
        worst_mass = std::max(worst_mass, std::abs(mass - 1.0));
      }
    }
    line(fmt::format("pair {} engine == brute force", k), worst <= 1e-10, fmt::format("max |diff| = {:.3g}", worst));
    line(fmt::format("pair {} permutation invariance", k), worst_perm <= 1e-12,
         fmt::format("max |diff| = {:.3g}", worst_perm));
    line(fmt::format("pair {} probability mass", k), worst_mass <= 1e-12,
         fmt::format("max |sum - 1| = {:.3g}", worst_mass));
  }

  const InvestmentPlan none{std::vector<bool>(inst.link_count(), false)};
  PermArgs defaults;
  const auto sets = defaults.sets(inst);
  const double exact = objective_value(sets, inst, none, Objective::expectation());
  const auto mc = oracle::monte_carlo_estimate(inst, none, Objective::expectation(), samples, seed);
  const bool within = std::abs(mc.estimate - exact) <= 3.0 * mc.standard_error + 1e-12;
  line("monte carlo within 3 SE (no investment)", within,
       fmt::format("exact {:.6f} estimate {:.6f} se {:.2g}", exact, mc.estimate, mc.standard_error));
  return all_ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact expected shortest-path objectives via multiscenario reduction"};
  app.require_subcommand(1, 1);
  unsigned jobs = 1;
  app.add_option("--jobs", jobs, "Worker threads (default 1)")->check(CLI::PositiveNumber);

  InstanceArgs inst_args;
  PermArgs perm_args;
  ObjectiveArgs obj_args;
  std::size_t pair = 0;
  std::uint64_t seed = 0;
  std::string plan_bits;

  auto* validate = app.add_subcommand("validate", "Load and validate an instance");
  add_instance(validate, inst_args);

  auto* paths = app.add_subcommand("paths", "List a pair's allowed paths (enumerated from the graph when present)");
  add_instance(paths, inst_args);
  paths->add_option("--pair", pair, "Pair index (0-based)");

  auto* reduce_cmd = app.add_subcommand("reduce", "Build a pair's multiscenario set");
  add_instance(reduce_cmd, inst_args);
  add_perms(reduce_cmd, perm_args);
  reduce_cmd->add_option("--pair", pair, "Pair index (0-based)");

  PermSearchParams search;
  auto* perm_search = app.add_subcommand("perm-search", "Hill-climb a permutation minimising the set size");
  add_instance(perm_search, inst_args);
  perm_search->add_option("--pair", pair, "Pair index (0-based)");
  perm_search->add_option("--seed", seed, "RNG seed")->required();
  perm_search->add_option("--iterations", search.max_iterations, "Evaluated moves per restart");
  perm_search->add_option("--restarts", search.restarts, "Independent climbs");
  perm_search->add_option("--sideways", search.sideways_limit, "Consecutive equal-size moves before a jump (0: 10|E|)");

  auto* eval = app.add_subcommand("eval", "Evaluate an investment plan exactly");
  add_instance(eval, inst_args);
  add_perms(eval, perm_args);
  add_objective(eval, obj_args);
  eval->add_option("--plan", plan_bits, "0/1 string in link-id order")->required();

  GaParams ga;
  auto* solve_ga = app.add_subcommand("solve-ga", "Genetic algorithm over investment plans");
  add_instance(solve_ga, inst_args);
  add_perms(solve_ga, perm_args);
  add_objective(solve_ga, obj_args);
  solve_ga->add_option("--seed", seed, "RNG seed")->required();
  solve_ga->add_option("--pop", ga.population, "Population size");
  solve_ga->add_option("--gens", ga.generations, "Generations");
  solve_ga->add_option("--mutation", ga.mutation_rate, "Per-gene mutation rate (default 1/|E|)");
  solve_ga->add_option("--crossover", ga.crossover_rate, "Crossover rate");
  solve_ga->add_option("--tournament", ga.tournament, "Tournament size");
  solve_ga->add_option("--elitism", ga.elitism, "Elite chromosomes kept per generation");

  auto* solve_exact = app.add_subcommand("solve-exact", "Exhaustive search over maximal budget-feasible plans");
  add_instance(solve_exact, inst_args);
  add_perms(solve_exact, perm_args);
  add_objective(solve_exact, obj_args);

  std::size_t samples = 1000000;
  auto* mc = app.add_subcommand("mc-compare", "Compare Monte Carlo sampling with the exact value");
  add_instance(mc, inst_args);
  add_perms(mc, perm_args);
  mc->add_option("--plan", plan_bits, "0/1 string in link-id order")->required();
  mc->add_option("--samples", samples, "Number of sampled scenarios");
  mc->add_option("--seed", seed, "RNG seed")->required();

  std::size_t check_plans = 100;
  std::size_t check_samples = 100000;
  auto* oracle_check = app.add_subcommand("oracle-check", "Certify the reduction engine against brute force");
  add_instance(oracle_check, inst_args);
  oracle_check->add_option("--seed", seed, "RNG seed")->required();
  oracle_check->add_option("--plans", check_plans, "Random plans per pair");
  oracle_check->add_option("--samples", check_samples, "Monte Carlo samples");

  std::string target;
  std::string data_dir;
  std::string golden_dir;
  auto* repro = app.add_subcommand("reproduce", "Re-run a reference table and diff it against golden files");
  repro->add_option("target", target, "table2 | table3 | table4 | small-optimum | all")
      ->required()
      ->check(CLI::IsMember({"table2", "table3", "table4", "small-optimum", "all"}));
  repro->add_option("--data-dir", data_dir, "Directory holding the bundled instances");
  repro->add_option("--golden-dir", golden_dir, "Directory holding the golden files");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*validate) {
      const Instance inst = inst_args.load();
      std::size_t n_paths = 0;
      for (const auto& p : inst.pairs) n_paths += p.allowed_paths.size();
      std::cout << fmt::format("ok: '{}' links={} pairs={} allowed_paths={} budget={} probabilities={}\n", inst.name,
                               inst.link_count(), inst.pairs.size(), n_paths, inst.budget,
                               inst.probabilities_given() ? "yes" : "no");
      return 0;
    }
    if (*paths) {
      const Instance inst = inst_args.load();
      if (pair >= inst.pairs.size()) throw ValidationError(fmt::format("pair index {} out of range", pair));
      const auto& spec = inst.pairs[pair];
      const auto list = inst.graph ? enumerate_allowed_paths(inst, spec) : spec.allowed_paths;
      for (const auto& p : list) std::cout << format_permutation(p.links) << ' ' << fmt::format("{}", p.length) << '\n';
      return 0;
    }
    if (*reduce_cmd) {
      const Instance inst = inst_args.load();
      if (pair >= inst.pairs.size()) throw ValidationError(fmt::format("pair index {} out of range", pair));
      std::cout << format_set(reduce(inst, pair, perm_args.for_pair(inst, pair)));
      return 0;
    }
    if (*perm_search) {
      const Instance inst = inst_args.load();
      search.seed = seed;
      search.jobs = jobs;
      const auto result = optimize_permutation(inst, pair, search);
      std::cerr << fmt::format("initial size {} -> best size {} (restart {}, {} evaluations)\n", result.initial_size,
                               result.set.size(), result.best_restart, result.evaluations);
      std::cout << format_set(result.set);
      return 0;
    }
    if (*eval) {
      const Instance inst = inst_args.load();
      inst.require_probabilities();
      const auto sets = perm_args.sets(inst);
      const auto plan = parse_plan(plan_bits, inst.link_count());
      std::cout << format_report(evaluate_plan(sets, inst, plan, obj_args.get()));
      return 0;
    }
    if (*solve_ga) {
      const Instance inst = inst_args.load();
      inst.require_probabilities();
      const auto sets = perm_args.sets(inst);
      const CompiledSets compiled(sets, inst);
      ga.seed = seed;
      ga.jobs = jobs;
      const auto objective = obj_args.get();
      const auto result = run_ga(inst, compiled, objective, ga);
      std::cout << fmt::format("best plan {} value {:.6f} ({} distinct plans evaluated)\n\n", format_plan(result.plan),
                               result.value, result.evaluations);
      std::cout << format_report(evaluate_plan(sets, inst, result.plan, objective));
      return 0;
    }
    if (*solve_exact) {
      const Instance inst = inst_args.load();
      const auto objective = obj_args.get();
      const auto [plan, value] = oracle::brute_force_optimal(inst, objective);
      std::cout << fmt::format("optimal plan {} value {:.6f}\n\n", format_plan(plan), value);
      std::cout << format_report(evaluate_plan(perm_args.sets(inst), inst, plan, objective));
      return 0;
    }
    if (*mc) {
      const Instance inst = inst_args.load();
      inst.require_probabilities();
      const auto plan = parse_plan(plan_bits, inst.link_count());
      const auto objective = Objective::expectation();
      const double exact = objective_value(perm_args.sets(inst), inst, plan, objective);
      const auto est = oracle::monte_carlo_estimate(inst, plan, objective, samples, seed);
      const double z = est.standard_error > 0 ? (est.estimate - exact) / est.standard_error : 0.0;
      const bool within = std::abs(est.estimate - exact) <= 3.0 * est.standard_error + 1e-12;
      std::cout << fmt::format("exact={:.12g}\nestimate={:.12g}\nstandard_error={:.6g}\nsamples={}\nz={:.3f}\n"
                               "within_3se={}\n",
                               exact, est.estimate, est.standard_error, est.samples, z, within ? "yes" : "no");
      return within ? 0 : 1;
    }
    if (*oracle_check) {
      return run_oracle_check(inst_args.load(), seed, check_plans, check_samples);
    }
    if (*repro) {
      const fs::path data = data_dir.empty() ? default_dir("data") : fs::path(data_dir);
      const fs::path golden = golden_dir.empty() ? default_dir("golden") : fs::path(golden_dir);
      std::vector<std::string> targets =
          target == "all" ? reproduce_targets() : std::vector<std::string>{target};
      bool ok = true;
      for (const auto& t : targets) {
        const auto outcome = reproduce(t, data, golden);
        std::cout << "== " << t << '\n' << outcome.report;
        std::cout << (outcome.match ? "MATCH" : "MISMATCH") << ' ' << t << '\n';
        if (!outcome.match) {
          std::cerr << outcome.diff;
          ok = false;
        }
      }
      return ok ? 0 : 1;
    }
  } catch (const CLI::ValidationError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 2;
}
