#pragma once

#include <map>
#include <span>
#include <string>
#include <vector>

#include "gapfill/classical.hpp"
#include "gapfill/encode.hpp"

namespace gapfill {

struct KpiReport {
  int sd = 0;            // distinct shipments over the selected sequences
  double scs = 0.0;      // schedule compatibility score
  double tdd = 0.0;      // total drive distance, km
  double tdd_per_sd = 0.0;  // defined only when sd > 0
  double objective = 0.0;
  bool feasible = true;
};

enum class SolutionSource { quantum_raw, quantum_refined, greedy_baseline, oracle };

std::string to_string(SolutionSource source);

struct ComparisonRow {
  std::string scenario;
  SolutionSource source = SolutionSource::oracle;
  KpiReport kpis;
  double ar = 0.0;
};

// (1/k^2) sum of normalized w over selected cross-gap pairs; 0 when fewer
// than two sequences are selected.
double scs(const SspInstance& instance, const Assignment& x);

KpiReport kpis(const SspInstance& instance, const Assignment& x);

// best_energy / oracle_energy; requires oracle_energy < 0.
double approximation_ratio(double best_energy, double oracle_energy);

// Per-gap cold-start baseline: walks gaps in canonical order and takes the
// highest-value sequence that fits the remaining capacity and shipment
// pool. Ignores pairwise interactions entirely.
Assignment greedy_baseline(const SspInstance& instance);

std::vector<ComparisonRow> compare(
    const SspInstance& instance,
    const std::map<SolutionSource, Assignment>& solutions,
    const ExactResult& oracle, double lambda = 10.0,
    const std::string& scenario_id = "");

struct Aggregate {
  double average = 0.0;
  double best = 0.0;
};

Aggregate aggregate(std::span<const double> values, bool higher_is_better);

std::string format_average_best(const Aggregate& a);

// Tab-separated table, one row per (scenario, source).
std::string comparison_table(std::span<const ComparisonRow> rows);

}  // namespace gapfill
