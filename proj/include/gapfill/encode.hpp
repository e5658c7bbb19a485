#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "gapfill/instance.hpp"

namespace gapfill {

using PairKey = std::pair<int, int>;  // unordered variable pair, first < second

// Binary selection vector over the instance's canonical variable order.
// String form lists x_0 first; as a basis-state index, variable q is bit q.
struct Assignment {
  std::vector<std::uint8_t> bits;

  static Assignment zeros(int n) { return Assignment{std::vector<std::uint8_t>(n, 0)}; }
  static Assignment from_index(std::uint64_t index, int n);
  static Assignment from_string(std::string_view s);

  int n() const { return static_cast<int>(bits.size()); }
  std::vector<int> selected() const;
  int count_selected() const;
  std::uint64_t to_index() const;
  std::string to_string() const;

  bool operator==(const Assignment&) const = default;
  bool operator<(const Assignment& other) const { return bits < other.bits; }
};

// Objective coefficients after joint normalization: sum(value) +
// sum(interaction) == 100 up to round-off.
struct NormalizedObjective {
  std::vector<double> value;                // v' per variable
  std::map<PairKey, double> interaction;    // w' on cross-gap pairs
  double normalization = 1.0;               // N = (V + W) / 100
};

// Raw pairwise coefficients w = lambda_q * f * d over cross-gap pairs,
// each unordered pair once (upper-triangular flow entry for asymmetric f).
// Zero entries are omitted.
std::map<PairKey, double> build_interactions(const SspInstance& instance);

// Throws DegenerateInstanceError when V + W <= 0.
NormalizedObjective normalize(const SspInstance& instance);

struct QuboModel {
  int n = 0;
  std::map<int, double> linear;
  std::map<PairKey, double> quadratic;
  double offset = 0.0;
  double lambda = 10.0;
  double normalization = 1.0;

  double energy(const Assignment& x) const;
};

// Minimization QUBO: negated normalized objective plus lambda penalties on
// every same-gap pair and every pair sharing a shipment (one lambda per
// shared shipment). Capacity is deliberately not encoded; it enters as a
// soft term in evaluate_energy.
QuboModel build_qubo(const SspInstance& instance, double lambda = 10.0);

// Diagonal cost operator E0 + sum h_q Z_q + sum J_qq' Z_q Z_q' with
// s_q = (-1)^{x_q}.
struct IsingHamiltonian {
  int n = 0;
  double e0 = 0.0;
  std::map<int, double> h;
  std::map<PairKey, double> j;

  double energy(const Assignment& x) const;
};

// Exact on every bitstring: ising.energy(x) == qubo.energy(x).
IsingHamiltonian qubo_to_ising(const QuboModel& qubo);

// Coupling subset retained for circuit construction: largest |J| first,
// at most floor(30 n / p), none below 1% of max |J|. Local fields are
// kept in full. Ties break on (i, j) order.
struct PrunedHamiltonian {
  IsingHamiltonian base;
  std::vector<PairKey> kept_pairs;  // in canonical pair order
  int budget = 0;
};

PrunedHamiltonian prune(const IsingHamiltonian& hamiltonian, int depth);

// lambda * sum_g erf(max(0, load_g - C_g)).
double capacity_penalty(const SspInstance& instance, const Assignment& x,
                        double lambda);

// Full (unpruned) diagonal energy plus the capacity soft penalty. This is
// the quantity every sampled bitstring is ranked by.
double evaluate_energy(const IsingHamiltonian& hamiltonian,
                       const SspInstance& instance, const Assignment& x,
                       double lambda);

struct ConstraintReport {
  std::vector<std::string> shipment_violations;
  std::vector<std::string> gap_violations;
  std::vector<std::string> capacity_violations;

  bool feasible() const {
    return shipment_violations.empty() && gap_violations.empty() &&
           capacity_violations.empty();
  }
};

ConstraintReport check_constraints(const SspInstance& instance,
                                   const Assignment& x);

// Normalized utility of a selection (no penalties). On feasible points
// this equals -qubo.energy exactly.
double objective_value(const SspInstance& instance, const Assignment& x);
double objective_value(const NormalizedObjective& objective,
                       const Assignment& x);

// Set when the largest normalized value exceeds lambda, i.e. exclusivity
// penalties may not bind at the ground state.
std::optional<std::string> penalty_scale_warning(
    const NormalizedObjective& objective, double lambda);

// Variable-indexed coefficient lists for cross-checking against external
// solvers.
std::string qubo_to_text(const QuboModel& qubo);
std::string ising_to_text(const IsingHamiltonian& hamiltonian);

}  // namespace gapfill
