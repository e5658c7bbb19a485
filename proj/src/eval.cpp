#include "gapfill/eval.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "gapfill/errors.hpp"

namespace gapfill {

std::string to_string(SolutionSource source) {
  switch (source) {
    case SolutionSource::quantum_raw: return "quantum_raw";
    case SolutionSource::quantum_refined: return "quantum_refined";
    case SolutionSource::greedy_baseline: return "greedy_baseline";
    case SolutionSource::oracle: return "oracle";
  }
  return "unknown";
}

double scs(const SspInstance& inst, const Assignment& x) {
  const int k = x.count_selected();
  if (k <= 1) return 0.0;
  const NormalizedObjective obj = normalize(inst);
  double total = 0.0;
  for (const auto& [key, w] : obj.interaction)
    if (x.bits[key.first] && x.bits[key.second]) total += w;
  return total / (static_cast<double>(k) * k);
}

KpiReport kpis(const SspInstance& inst, const Assignment& x) {
  if (x.n() != inst.n())
    throw DimensionError("assignment length does not match instance");
  KpiReport report;
  std::set<std::string> delivered;
  for (int v : x.selected()) {
    const Sequence& seq = inst.sequences[v];
    delivered.insert(seq.shipments.begin(), seq.shipments.end());
    report.tdd += seq.drive_distance;
  }
  report.sd = static_cast<int>(delivered.size());
  report.tdd_per_sd = report.sd > 0 ? report.tdd / report.sd : 0.0;
  report.scs = scs(inst, x);
  report.objective = objective_value(inst, x);
  report.feasible = check_constraints(inst, x).feasible();
  return report;
}

double approximation_ratio(double best_energy, double oracle_energy) {
  if (oracle_energy >= 0.0)
    throw UndefinedRatioError(
        "approximation ratio requires a negative reference energy; got " +
        std::to_string(oracle_energy));
  return best_energy / oracle_energy;
}

Assignment greedy_baseline(const SspInstance& inst) {
  Assignment x = Assignment::zeros(inst.n());
  std::set<std::string> used;
  for (int g = 0; g < inst.num_gaps(); ++g) {
    const auto [first, last] = inst.var_range(g);
    int pick = -1;
    for (int v = first; v < last; ++v) {
      const Sequence& seq = inst.sequences[v];
      if (seq.duration > inst.gaps[g].capacity) continue;
      bool clash = false;
      for (const auto& sid : seq.shipments)
        if (used.count(sid)) {
          clash = true;
          break;
        }
      if (clash) continue;
      if (pick == -1 || seq.value > inst.sequences[pick].value) pick = v;
    }
    if (pick != -1) {
      x.bits[pick] = 1;
      used.insert(inst.sequences[pick].shipments.begin(),
                  inst.sequences[pick].shipments.end());
    }
  }
  return x;
}

std::vector<ComparisonRow> compare(
    const SspInstance& inst,
    const std::map<SolutionSource, Assignment>& solutions,
    const ExactResult& oracle, double lambda, const std::string& scenario_id) {
  const IsingHamiltonian ham = qubo_to_ising(build_qubo(inst, lambda));
  std::vector<ComparisonRow> rows;
  for (const auto& [source, assignment] : solutions) {
    ComparisonRow row;
    row.scenario = scenario_id;
    row.source = source;
    row.kpis = kpis(inst, assignment);
    const double energy = evaluate_energy(ham, inst, assignment, lambda);
    row.ar = approximation_ratio(energy, oracle.energy);
    rows.push_back(std::move(row));
  }
  return rows;
}

Aggregate aggregate(std::span<const double> values, bool higher_is_better) {
  if (values.empty()) throw DimensionError("aggregate requires values");
  Aggregate a;
  for (double v : values) a.average += v;
  a.average /= static_cast<double>(values.size());
  a.best = higher_is_better
               ? *std::max_element(values.begin(), values.end())
               : *std::min_element(values.begin(), values.end());
  return a;
}

std::string format_average_best(const Aggregate& a) {
  std::ostringstream out;
  out.precision(4);
  out << a.average << " (" << a.best << ")";
  return out.str();
}

std::string comparison_table(std::span<const ComparisonRow> rows) {
  std::ostringstream out;
  out.precision(12);
  out << "scenario\tsource\tsd\tscs\ttdd\ttdd_per_sd\tobjective\tfeasible\tar\n";
  for (const auto& row : rows)
    out << row.scenario << "\t" << to_string(row.source) << "\t" << row.kpis.sd
        << "\t" << row.kpis.scs << "\t" << row.kpis.tdd << "\t"
        << row.kpis.tdd_per_sd << "\t" << row.kpis.objective << "\t"
        << (row.kpis.feasible ? 1 : 0) << "\t" << row.ar << "\n";
  return out.str();
}

}  // namespace gapfill
