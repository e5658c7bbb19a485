#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <future>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "gapfill/artifacts.hpp"
#include "gapfill/classical.hpp"
#include "gapfill/encode.hpp"
#include "gapfill/errors.hpp"
#include "gapfill/eval.hpp"
#include "gapfill/instance.hpp"
#include "gapfill/iterqaoa.hpp"
#include "gapfill/qsim.hpp"
#include "gapfill/version.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace gapfill;

namespace {

// Flat JSON object as a CLI11 config source; command-line flags keep
// precedence over file values.
class JsonConfig : public CLI::Config {
 public:
  std::string to_config(const CLI::App*, bool, bool,
                        std::string) const override {
    return "{}\n";
  }

  std::vector<CLI::ConfigItem> from_config(std::istream& input) const override {
    json j;
    try {
      input >> j;
    } catch (const json::parse_error& e) {
      throw FormatError(std::string("config parse failure: ") + e.what());
    }
    if (!j.is_object()) throw FormatError("config must be a JSON object");
    std::vector<CLI::ConfigItem> items;
    for (const auto& [key, value] : j.items()) {
      CLI::ConfigItem item;
      item.name = key;
      if (value.is_string())
        item.inputs = {value.get<std::string>()};
      else
        item.inputs = {value.dump()};
      items.push_back(std::move(item));
    }
    return items;
  }
};

fs::path resolve_out(const std::string& out) {
  if (!out.empty()) return out;
  if (const char* env = std::getenv("GAPFILL_OUT_DIR")) return env;
  return ".";
}

class Stopwatch {
 public:
  double seconds() const {
    return std::chrono::duration<double>(
               std::chrono::steady_clock::now() - start_)
        .count();
  }

 private:
  std::chrono::steady_clock::time_point start_ =
      std::chrono::steady_clock::now();
};

SolutionCandidate make_candidate(const SspInstance& inst,
                                 const IsingHamiltonian& ham,
                                 const Assignment& a, double lambda) {
  SolutionCandidate c;
  c.bits = a.to_string();
  c.energy = evaluate_energy(ham, inst, a, lambda);
  c.objective = objective_value(inst, a);
  c.feasible = check_constraints(inst, a).feasible();
  return c;
}

ExactResult solve_oracle(const SspInstance& inst, const IsingHamiltonian& ham,
                         double lambda) {
  if (inst.n() <= kExhaustiveMaxQubits)
    return exhaustive_ground_state(ham, inst, lambda);
  return feasible_optimum(inst, lambda);
}

void warn_penalty_scale(const SspInstance& inst, double lambda) {
  if (auto warning = penalty_scale_warning(normalize(inst), lambda))
    std::cerr << "warning: " << *warning << "\n";
}

// ---------------------------------------------------------------- generate

struct GenerateArgs {
  std::uint64_t seed = 0;
  int scenarios = 1;
  std::string out;
  ScenarioConfig base;
};

int run_generate(const GenerateArgs& args) {
  Stopwatch watch;
  if (args.scenarios < 1) throw ConfigError("scenarios must be >= 1");
  const fs::path dir = resolve_out(args.out);
  const std::string manifest_name = "generate.manifest.json";

  std::vector<std::string> outputs(args.scenarios);
  auto one = [&](int k) {
    ScenarioConfig cfg = args.base;
    cfg.seed = args.seed + static_cast<std::uint64_t>(k);
    SspInstance inst = generate_instance(cfg);
    inst.meta.manifest = manifest_name;
    const std::string name = "instance_" + std::to_string(cfg.seed) + ".json";
    write_file_atomic(dir / name, to_json(inst));
    outputs[k] = name;
  };
  if (args.scenarios == 1) {
    one(0);
  } else {
    std::vector<std::future<void>> jobs;
    jobs.reserve(args.scenarios);
    for (int k = 0; k < args.scenarios; ++k)
      jobs.push_back(std::async(std::launch::async, one, k));
    for (auto& job : jobs) job.get();
  }

  RunManifest manifest;
  manifest.command = "generate";
  manifest.tool_version = kVersion;
  manifest.config = {{"seed", args.seed},
                     {"scenarios", args.scenarios},
                     {"vehicles", args.base.num_vehicles},
                     {"days", args.base.horizon_days},
                     {"cancellations", args.base.cancellations},
                     {"seq_mean", args.base.sequences_per_gap_mean},
                     {"min_gap_hours", args.base.min_gap_hours},
                     {"lambda_q", args.base.lambda_q}};
  manifest.outputs = outputs;
  manifest.wall_seconds = watch.seconds();
  write_manifest(manifest, dir / manifest_name);
  std::cout << "wrote " << args.scenarios << " instance(s) to " << dir.string()
            << "\n";
  return 0;
}

// ------------------------------------------------------------------ encode

struct EncodeArgs {
  std::string instance;
  std::string out;
  double lambda = 10.0;
};

int run_encode(const EncodeArgs& args) {
  Stopwatch watch;
  const fs::path dir = resolve_out(args.out);
  SspInstance inst = load_instance(args.instance);
  warn_penalty_scale(inst, args.lambda);
  const QuboModel qubo = build_qubo(inst, args.lambda);
  const IsingHamiltonian ham = qubo_to_ising(qubo);

  const std::string manifest_name = "encode.manifest.json";
  const std::string header = "# manifest: " + manifest_name + "\n";
  write_file_atomic(dir / "qubo.txt", header + qubo_to_text(qubo));
  write_file_atomic(dir / "ising.txt", header + ising_to_text(ham));

  RunManifest manifest;
  manifest.command = "encode";
  manifest.tool_version = kVersion;
  manifest.config = {{"lambda", args.lambda}};
  manifest.inputs = {args.instance};
  manifest.outputs = {"qubo.txt", "ising.txt"};
  manifest.wall_seconds = watch.seconds();
  write_manifest(manifest, dir / manifest_name);
  std::cout << "wrote qubo.txt and ising.txt to " << dir.string() << "\n";
  return 0;
}

// ------------------------------------------------------------------- solve

struct SolveArgs {
  std::string instance;
  std::string solver = "quantum";
  std::string out;
  QaoaConfig qaoa;
  double p_flag = 0;      // staging for optional fields
  double delta_flag = 0;
  bool p_set = false;
  bool delta_set = false;
  bool refine_flag = false;
  RefineConfig refine_cfg;
};

json qaoa_config_json(const QaoaConfig& cfg, int p, double delta) {
  return {{"p", p},           {"delta", delta},   {"shots", cfg.shots},
          {"n_iter", cfg.n_iter}, {"top_k", cfg.top_k}, {"lambda", cfg.lambda},
          {"tau", cfg.tau},   {"eta", cfg.eta},   {"clip", cfg.clip},
          {"seed", cfg.seed}};
}

int run_solve(const SolveArgs& args) {
  Stopwatch watch;
  const fs::path dir = resolve_out(args.out);
  SspInstance inst = load_instance(args.instance);
  const std::string digest = instance_digest(inst);
  const double lambda = args.qaoa.lambda;
  warn_penalty_scale(inst, lambda);
  const IsingHamiltonian ham = qubo_to_ising(build_qubo(inst, lambda));

  const std::string manifest_name =
      "solve_" + args.solver + ".manifest.json";
  RunManifest manifest;
  manifest.command = "solve";
  manifest.tool_version = kVersion;
  manifest.inputs = {args.instance};
  manifest.wall_seconds = 0;

  SolutionFile sol;
  sol.instance_path = args.instance;
  sol.instance_digest = digest;
  sol.manifest = manifest_name;

  if (args.solver == "exact") {
    const ExactResult oracle = solve_oracle(inst, ham, lambda);
    sol.solver = "exact";
    sol.config = {{"lambda", lambda},
                  {"method", oracle.method == ExactMethod::exhaustive_bitstrings
                                 ? "exhaustive_bitstrings"
                                 : "per_gap_enumeration"}};
    sol.candidates = {make_candidate(inst, ham, oracle.assignment, lambda)};
    const std::string name = "solution_exact.json";
    save_solution(sol, dir / name);
    manifest.outputs = {name};
  } else if (args.solver == "greedy") {
    const Assignment greedy = greedy_baseline(inst);
    sol.solver = "greedy";
    sol.config = {{"lambda", lambda}};
    sol.candidates = {make_candidate(inst, ham, greedy, lambda)};
    const std::string name = "solution_greedy.json";
    save_solution(sol, dir / name);
    manifest.outputs = {name};
  } else if (args.solver == "quantum") {
    QaoaConfig cfg = args.qaoa;
    if (args.p_set) cfg.p = static_cast<int>(args.p_flag);
    if (args.delta_set) cfg.delta = args.delta_flag;
    const QuantumResult result = gapfill::run(inst, cfg);

    sol.solver = "quantum";
    sol.config = qaoa_config_json(cfg, result.p, result.delta);
    for (const auto& cand : result.candidates)
      sol.candidates.push_back(
          make_candidate(inst, ham, cand.assignment, lambda));
    const std::string name = "solution_quantum.json";
    save_solution(sol, dir / name);
    write_file_atomic(dir / "iterations.tsv",
                      iteration_log_table(result, manifest_name));
    manifest.outputs = {name, "iterations.tsv"};

    if (args.refine_flag) {
      // Refine every candidate, then keep the ten lowest-energy distinct
      // refined assignments.
      std::map<Assignment, SolutionCandidate> refined;
      for (const auto& cand : result.candidates) {
        const Assignment r = refine(inst, cand.assignment, args.refine_cfg);
        refined.emplace(r, make_candidate(inst, ham, r, lambda));
      }
      std::vector<SolutionCandidate> ranked;
      for (const auto& [a, c] : refined) ranked.push_back(c);
      std::stable_sort(ranked.begin(), ranked.end(),
                       [](const SolutionCandidate& a,
                          const SolutionCandidate& b) {
                         if (a.energy != b.energy) return a.energy < b.energy;
                         return a.bits < b.bits;
                       });
      if (ranked.size() > 10) ranked.resize(10);

      SolutionFile refined_sol = sol;
      refined_sol.solver = "quantum_refined";
      refined_sol.config["refine_t_max"] = args.refine_cfg.t_max;
      refined_sol.config["refine_randomize_top2"] =
          args.refine_cfg.randomize_top2;
      refined_sol.config["refine_seed"] = args.refine_cfg.seed;
      refined_sol.candidates = std::move(ranked);
      const std::string refined_name = "solution_quantum_refined.json";
      save_solution(refined_sol, dir / refined_name);
      manifest.outputs.push_back(refined_name);
    }
  } else {
    throw ConfigError("unknown solver: " + args.solver +
                      " (expected quantum|exact|greedy)");
  }

  manifest.config = sol.config;
  manifest.wall_seconds = watch.seconds();
  write_manifest(manifest, dir / manifest_name);
  std::cout << "wrote " << manifest.outputs.front() << " to " << dir.string()
            << "\n";
  return 0;
}

// ------------------------------------------------------------------ refine

struct RefineArgs {
  std::string instance;  // optional override of the path in the solution
  std::string solution;
  std::string out;
  RefineConfig cfg;
  double lambda = 10.0;
};

int run_refine(const RefineArgs& args) {
  Stopwatch watch;
  const fs::path dir = resolve_out(args.out);
  const SolutionFile input = load_solution(args.solution);
  const std::string instance_path =
      args.instance.empty() ? input.instance_path : args.instance;
  SspInstance inst = load_instance(instance_path);
  if (instance_digest(inst) != input.instance_digest)
    throw ValidationError("solution " + args.solution +
                          " does not match instance " + instance_path);
  const IsingHamiltonian ham =
      qubo_to_ising(build_qubo(inst, args.lambda));

  std::map<Assignment, SolutionCandidate> refined;
  for (const auto& cand : input.candidates) {
    const Assignment r =
        refine(inst, Assignment::from_string(cand.bits), args.cfg);
    refined.emplace(r, make_candidate(inst, ham, r, args.lambda));
  }
  std::vector<SolutionCandidate> ranked;
  for (const auto& [a, c] : refined) ranked.push_back(c);
  std::stable_sort(ranked.begin(), ranked.end(),
                   [](const SolutionCandidate& a, const SolutionCandidate& b) {
                     if (a.energy != b.energy) return a.energy < b.energy;
                     return a.bits < b.bits;
                   });
  if (ranked.size() > 10) ranked.resize(10);

  const std::string solver = input.solver == "quantum"
                                 ? "quantum_refined"
                                 : input.solver + "_refined";
  const std::string manifest_name = "refine.manifest.json";
  SolutionFile out_sol;
  out_sol.instance_path = instance_path;
  out_sol.instance_digest = input.instance_digest;
  out_sol.solver = solver;
  out_sol.config = {{"t_max", args.cfg.t_max},
                    {"randomize_top2", args.cfg.randomize_top2},
                    {"seed", args.cfg.seed},
                    {"lambda", args.lambda}};
  out_sol.candidates = std::move(ranked);
  out_sol.manifest = manifest_name;
  const std::string name = "solution_" + solver + ".json";
  save_solution(out_sol, dir / name);

  RunManifest manifest;
  manifest.command = "refine";
  manifest.tool_version = kVersion;
  manifest.config = out_sol.config;
  manifest.inputs = {args.solution, instance_path};
  manifest.outputs = {name};
  manifest.wall_seconds = watch.seconds();
  write_manifest(manifest, dir / manifest_name);
  std::cout << "wrote " << name << " to " << dir.string() << "\n";
  return 0;
}

// ------------------------------------------------------------------- sweep

struct SweepArgs {
  std::string instance;
  std::string out;
  double delta_min = 0.05;
  double delta_max = 1.0;
  int delta_steps = 20;
  int p_min = 1;
  int p_max = 10;
  double lambda = 10.0;
};

int run_sweep(const SweepArgs& args) {
  Stopwatch watch;
  if (args.delta_steps < 1) throw ConfigError("delta-steps must be >= 1");
  if (args.p_min < 1 || args.p_max < args.p_min)
    throw ConfigError("depth range must satisfy 1 <= p-min <= p-max");
  if (args.delta_min <= 0 || args.delta_max < args.delta_min)
    throw ConfigError("slope range must satisfy 0 < delta-min <= delta-max");
  const fs::path dir = resolve_out(args.out);
  SspInstance inst = load_instance(args.instance);
  const IsingHamiltonian ham = qubo_to_ising(build_qubo(inst, args.lambda));
  const auto table = energy_table(ham, inst, args.lambda);

  std::vector<double> deltas;
  for (int i = 0; i < args.delta_steps; ++i)
    deltas.push_back(args.delta_steps == 1
                         ? args.delta_min
                         : args.delta_min + (args.delta_max - args.delta_min) *
                                                i / (args.delta_steps - 1));

  const std::vector<double> rho(inst.n(), 0.5);  // cold start
  const WarmStartAngles angles = angles_from_bias(rho);

  const std::string manifest_name = "sweep.manifest.json";
  std::ostringstream out;
  out.precision(12);
  out << "# manifest: " << manifest_name << "\n";
  out << "p\tdelta\texpectation\n";
  double best_overall = 0.0, best_overall_delta = 0.0;
  int best_overall_p = 0;
  bool first_overall = true;
  std::ostringstream summary;
  summary.precision(12);
  for (int p = args.p_min; p <= args.p_max; ++p) {
    const PrunedHamiltonian pruned = prune(ham, p);
    const auto diag = pruned_diagonal(pruned);
    double best = 0.0, best_delta = 0.0;
    bool first = true;
    for (double delta : deltas) {
      const Statevector psi =
          run_circuit(inst.n(), diag, angles, lr_schedule(p, delta));
      const double expectation = exact_expectation(psi, table);
      out << p << "\t" << delta << "\t" << expectation << "\n";
      if (first || expectation < best) {
        best = expectation;
        best_delta = delta;
        first = false;
      }
    }
    summary << "# argmin p=" << p << " delta=" << best_delta
            << " expectation=" << best << "\n";
    if (first_overall || best < best_overall) {
      best_overall = best;
      best_overall_delta = best_delta;
      best_overall_p = p;
      first_overall = false;
    }
  }
  summary << "# argmin overall p=" << best_overall_p
          << " delta=" << best_overall_delta
          << " expectation=" << best_overall << "\n";
  write_file_atomic(dir / "sweep.tsv", out.str() + summary.str());

  RunManifest manifest;
  manifest.command = "sweep";
  manifest.tool_version = kVersion;
  manifest.config = {{"delta_min", args.delta_min},
                     {"delta_max", args.delta_max},
                     {"delta_steps", args.delta_steps},
                     {"p_min", args.p_min},
                     {"p_max", args.p_max},
                     {"lambda", args.lambda}};
  manifest.inputs = {args.instance};
  manifest.outputs = {"sweep.tsv"};
  manifest.wall_seconds = watch.seconds();
  write_manifest(manifest, dir / manifest_name);
  std::cout << "wrote sweep.tsv to " << dir.string() << "\n";
  return 0;
}

// ---------------------------------------------------------------- evaluate

struct EvaluateArgs {
  std::vector<std::string> solutions;
  std::string instance;  // optional override
  std::string out;
  double lambda = 10.0;
};

SolutionSource source_of(const std::string& solver) {
  if (solver == "quantum") return SolutionSource::quantum_raw;
  if (solver == "quantum_refined") return SolutionSource::quantum_refined;
  if (solver == "greedy") return SolutionSource::greedy_baseline;
  if (solver == "exact") return SolutionSource::oracle;
  throw ValidationError("unknown solver in solution file: " + solver);
}

int run_evaluate(const EvaluateArgs& args) {
  Stopwatch watch;
  if (args.solutions.empty())
    throw ConfigError("evaluate requires at least one solution file");
  const fs::path dir = resolve_out(args.out);

  // Group solutions by the instance they reference; each group is one
  // scenario.
  std::map<std::string, std::vector<SolutionFile>> scenarios;
  for (const auto& path : args.solutions) {
    SolutionFile sol = load_solution(path);
    const std::string key =
        args.instance.empty() ? sol.instance_path : args.instance;
    scenarios[key].push_back(std::move(sol));
  }

  std::vector<ComparisonRow> all_rows;
  // Per-scenario KPI bundles for the aggregation step.
  std::map<SolutionSource, std::vector<KpiReport>> per_source;
  std::map<SolutionSource, std::vector<double>> ar_per_source;
  std::vector<std::map<SolutionSource, KpiReport>> scenario_kpis;

  for (const auto& [instance_path, sols] : scenarios) {
    SspInstance inst = load_instance(instance_path);
    const std::string digest = instance_digest(inst);
    const std::string scenario_id = fs::path(instance_path).stem().string();
    std::map<SolutionSource, Assignment> assignments;
    for (const auto& sol : sols) {
      if (sol.instance_digest != digest)
        throw ValidationError("solution for solver " + sol.solver +
                              " does not match instance " + instance_path);
      if (sol.candidates.empty())
        throw ValidationError("solution for solver " + sol.solver +
                              " has no candidates");
      const SolutionSource source = source_of(sol.solver);
      if (!assignments.emplace(source, Assignment::from_string(
                                           sol.candidates.front().bits))
               .second)
        throw ValidationError("duplicate source " + to_string(source) +
                              " for scenario " + scenario_id);
    }
    const IsingHamiltonian ham =
        qubo_to_ising(build_qubo(inst, args.lambda));
    const ExactResult oracle = solve_oracle(inst, ham, args.lambda);
    auto rows = compare(inst, assignments, oracle, args.lambda, scenario_id);
    std::map<SolutionSource, KpiReport> this_scenario;
    for (const auto& row : rows) {
      per_source[row.source].push_back(row.kpis);
      ar_per_source[row.source].push_back(row.ar);
      this_scenario[row.source] = row.kpis;
    }
    scenario_kpis.push_back(std::move(this_scenario));
    all_rows.insert(all_rows.end(), rows.begin(), rows.end());
  }

  const std::string manifest_name = "evaluate.manifest.json";
  write_file_atomic(dir / "evaluate.tsv",
                    "# manifest: " + manifest_name + "\n" +
                        comparison_table(all_rows));

  // Aggregate mirrors the scenario-matched comparison: when every scenario
  // carries a greedy row, columns are relative to it; otherwise absolute.
  const bool vs_greedy = std::all_of(
      scenario_kpis.begin(), scenario_kpis.end(), [](const auto& m) {
        return m.count(SolutionSource::greedy_baseline) > 0;
      });
  std::ostringstream agg;
  agg.precision(6);
  agg << "# manifest: " << manifest_name << "\n";
  if (vs_greedy) {
    agg << "source\tsd_ratio\tdelta_scs\ttdd_pct\ttdd_per_sd_pct\tar\n";
    for (const auto& [source, ars] : ar_per_source) {
      if (source == SolutionSource::greedy_baseline) continue;
      std::vector<double> sd_ratio, delta_scs, tdd_pct, tddsd_pct;
      for (const auto& m : scenario_kpis) {
        if (!m.count(source)) continue;
        const KpiReport& kpi = m.at(source);
        const KpiReport& base = m.at(SolutionSource::greedy_baseline);
        if (base.sd > 0) sd_ratio.push_back(static_cast<double>(kpi.sd) / base.sd);
        delta_scs.push_back(kpi.scs - base.scs);
        if (base.tdd > 0) tdd_pct.push_back(100.0 * (kpi.tdd / base.tdd - 1.0));
        if (base.tdd > 0 && base.sd > 0 && kpi.sd > 0)
          tddsd_pct.push_back(100.0 * (kpi.tdd_per_sd / base.tdd_per_sd - 1.0));
      }
      agg << to_string(source) << "\t";
      agg << (sd_ratio.empty() ? "n/a" : format_average_best(aggregate(sd_ratio, true))) << "\t";
      agg << format_average_best(aggregate(delta_scs, true)) << "\t";
      agg << (tdd_pct.empty() ? "n/a" : format_average_best(aggregate(tdd_pct, false))) << "\t";
      agg << (tddsd_pct.empty() ? "n/a" : format_average_best(aggregate(tddsd_pct, false))) << "\t";
      agg << format_average_best(aggregate(ars, true)) << "\n";
    }
  } else {
    agg << "source\tsd\tscs\ttdd\ttdd_per_sd\tar\n";
    for (const auto& [source, reports] : per_source) {
      std::vector<double> sd, scs_v, tdd, tddsd;
      for (const auto& r : reports) {
        sd.push_back(r.sd);
        scs_v.push_back(r.scs);
        tdd.push_back(r.tdd);
        tddsd.push_back(r.tdd_per_sd);
      }
      agg << to_string(source) << "\t"
          << format_average_best(aggregate(sd, true)) << "\t"
          << format_average_best(aggregate(scs_v, true)) << "\t"
          << format_average_best(aggregate(tdd, false)) << "\t"
          << format_average_best(aggregate(tddsd, false)) << "\t"
          << format_average_best(aggregate(ar_per_source.at(source), true))
          << "\n";
    }
  }
  write_file_atomic(dir / "aggregate.tsv", agg.str());

  RunManifest manifest;
  manifest.command = "evaluate";
  manifest.tool_version = kVersion;
  manifest.config = {{"lambda", args.lambda}};
  manifest.inputs = args.solutions;
  manifest.outputs = {"evaluate.tsv", "aggregate.tsv"};
  manifest.wall_seconds = watch.seconds();
  write_manifest(manifest, dir / manifest_name);
  std::cout << "wrote evaluate.tsv and aggregate.tsv to " << dir.string()
            << "\n";
  return 0;
}

void add_config_support(CLI::App* cmd) {
  cmd->set_config("--config", "", "JSON config file (flags take precedence)");
  cmd->config_formatter(std::make_shared<JsonConfig>());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"shipment gap-filling optimization pipeline"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  GenerateArgs gen;
  CLI::App* cmd_generate =
      app.add_subcommand("generate", "generate synthetic scenario instances");
  cmd_generate->add_option("--seed", gen.seed, "base seed; scenario k uses seed+k");
  cmd_generate->add_option("--scenarios", gen.scenarios, "number of scenarios");
  cmd_generate->add_option("--out", gen.out, "output directory");
  cmd_generate->add_option("--vehicles", gen.base.num_vehicles, "fleet size");
  cmd_generate->add_option("--days", gen.base.horizon_days, "planning horizon");
  cmd_generate->add_option("--cancellations", gen.base.cancellations,
                           "cancelled shipments per scenario");
  cmd_generate->add_option("--seq-mean", gen.base.sequences_per_gap_mean,
                           "mean candidate sequences per gap");
  cmd_generate->add_option("--min-gap-hours", gen.base.min_gap_hours,
                           "minimum usable gap duration");
  cmd_generate->add_option("--lambda-q", gen.base.lambda_q,
                           "quadratic interaction weight");
  add_config_support(cmd_generate);

  EncodeArgs enc;
  CLI::App* cmd_encode =
      app.add_subcommand("encode", "export QUBO and Ising coefficient lists");
  cmd_encode->add_option("--instance", enc.instance, "instance file")->required();
  cmd_encode->add_option("--out", enc.out, "output directory");
  cmd_encode->add_option("--lambda", enc.lambda, "exclusivity penalty weight");
  add_config_support(cmd_encode);

  SolveArgs slv;
  CLI::App* cmd_solve = app.add_subcommand("solve", "solve an instance");
  cmd_solve->add_option("--instance", slv.instance, "instance file")->required();
  cmd_solve->add_option("--solver", slv.solver, "quantum|exact|greedy");
  cmd_solve->add_option("--out", slv.out, "output directory");
  auto* popt = cmd_solve->add_option("--p", slv.p_flag, "circuit depth");
  auto* dopt = cmd_solve->add_option("--delta", slv.delta_flag, "ramp slope");
  cmd_solve->add_option("--shots", slv.qaoa.shots, "shots per circuit");
  cmd_solve->add_option("--iters", slv.qaoa.n_iter, "warm-start iterations");
  cmd_solve->add_option("--top-k", slv.qaoa.top_k, "samples driving the update");
  cmd_solve->add_option("--lambda", slv.qaoa.lambda, "penalty weight");
  cmd_solve->add_option("--tau", slv.qaoa.tau, "energy-gap tolerance");
  cmd_solve->add_option("--eta", slv.qaoa.eta, "bias sign (+1 or -1)");
  cmd_solve->add_option("--clip", slv.qaoa.clip, "bias clipping bound");
  cmd_solve->add_option("--seed", slv.qaoa.seed, "sampling seed");
  cmd_solve->add_flag("--refine", slv.refine_flag,
                      "refine candidates and keep the ten best");
  cmd_solve->add_option("--refine-tmax", slv.refine_cfg.t_max,
                        "refinement trajectories");
  cmd_solve->add_flag("--randomize-top2", slv.refine_cfg.randomize_top2,
                      "randomize among the top-2 refinement moves");
  add_config_support(cmd_solve);

  RefineArgs ref;
  CLI::App* cmd_refine =
      app.add_subcommand("refine", "refine a solution file's candidates");
  cmd_refine->add_option("--instance", ref.instance,
                         "instance file (defaults to the solution's reference)");
  cmd_refine->add_option("--solution", ref.solution, "solution file")->required();
  cmd_refine->add_option("--out", ref.out, "output directory");
  cmd_refine->add_option("--t-max", ref.cfg.t_max, "refinement trajectories");
  cmd_refine->add_flag("--randomize-top2", ref.cfg.randomize_top2,
                       "randomize among the top-2 moves");
  cmd_refine->add_option("--seed", ref.cfg.seed, "randomization seed");
  cmd_refine->add_option("--lambda", ref.lambda, "penalty weight");
  add_config_support(cmd_refine);

  SweepArgs swp;
  CLI::App* cmd_sweep = app.add_subcommand(
      "sweep", "exact-expectation landscape over (delta, p)");
  cmd_sweep->add_option("--instance", swp.instance, "instance file")->required();
  cmd_sweep->add_option("--out", swp.out, "output directory");
  cmd_sweep->add_option("--delta-min", swp.delta_min, "smallest slope");
  cmd_sweep->add_option("--delta-max", swp.delta_max, "largest slope");
  cmd_sweep->add_option("--delta-steps", swp.delta_steps, "grid points");
  cmd_sweep->add_option("--p-min", swp.p_min, "smallest depth");
  cmd_sweep->add_option("--p-max", swp.p_max, "largest depth");
  cmd_sweep->add_option("--lambda", swp.lambda, "penalty weight");
  add_config_support(cmd_sweep);

  EvaluateArgs ev;
  CLI::App* cmd_evaluate = app.add_subcommand(
      "evaluate", "KPI comparison tables across solution files");
  cmd_evaluate->add_option("solutions", ev.solutions, "solution files")
      ->required();
  cmd_evaluate->add_option("--instance", ev.instance,
                           "instance override for all solutions");
  cmd_evaluate->add_option("--out", ev.out, "output directory");
  cmd_evaluate->add_option("--lambda", ev.lambda, "penalty weight");
  add_config_support(cmd_evaluate);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const Error& e) {  // config file problems surface during parse
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }

  try {
    if (cmd_generate->parsed()) return run_generate(gen);
    if (cmd_encode->parsed()) return run_encode(enc);
    if (cmd_solve->parsed()) {
      slv.p_set = popt->count() > 0;
      slv.delta_set = dopt->count() > 0;
      return run_solve(slv);
    }
    if (cmd_refine->parsed()) return run_refine(ref);
    if (cmd_sweep->parsed()) return run_sweep(swp);
    if (cmd_evaluate->parsed()) return run_evaluate(ev);
  } catch (const ResourceError& e) {
    std::cerr << "resource error: " << e.what() << "\n";
    return 3;
  } catch (const IoError& e) {
    std::cerr << "io error: " << e.what() << "\n";
    return 4;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "unexpected error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
