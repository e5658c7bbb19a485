#pragma once

#include <cstdint>
#include <vector>

#include "gapfill/encode.hpp"

namespace gapfill {

enum class ExactMethod { exhaustive_bitstrings, per_gap_enumeration };

struct ExactResult {
  Assignment assignment;
  double objective = 0.0;
  double energy = 0.0;  // full penalized energy of `assignment`
  ExactMethod method = ExactMethod::exhaustive_bitstrings;
};

inline constexpr int kExhaustiveMaxQubits = 22;
inline constexpr double kEnumerationBound = 1e7;

// Minimizes the full penalized energy over all 2^n bitstrings. Ties break
// to the lexicographically smallest bitstring (x_0 first). The ground
// state need not be feasible when penalties do not bind.
ExactResult exhaustive_ground_state(const IsingHamiltonian& hamiltonian,
                                    const SspInstance& instance,
                                    double lambda);

// Enumerates at-most-one-per-gap selections, keeps shipment-exclusive and
// capacity-feasible ones, and maximizes the normalized objective. Requires
// prod_g (|Q_g| + 1) <= 1e7.
ExactResult feasible_optimum(const SspInstance& instance,
                             double lambda = 10.0);

struct RefineConfig {
  int t_max = 10;              // outer trajectories
  bool randomize_top2 = false;  // uniform choice among the top-2 valid moves
  std::uint64_t seed = 0;

  void validate() const;
};

struct RefineAction {
  int trajectory = 0;
  bool add = false;  // false = remove
  int var = -1;
  double delta = 0.0;  // score change of the move when taken
};

// Greedy add/remove trajectories with a per-trajectory tabu on touched
// sequences; keeps the best feasible solution observed. Never returns an
// infeasible assignment and never decreases the objective of a feasible
// input. Exclusivity-infeasible inputs are repaired first by dropping the
// lowest-value conflicting selections.
Assignment refine(const SspInstance& instance, const Assignment& initial,
                  const RefineConfig& config = {});

// Same, recording every applied action (for debugging and the tabu check).
Assignment refine_traced(const SspInstance& instance,
                         const Assignment& initial, const RefineConfig& config,
                         std::vector<RefineAction>& trace);

}  // namespace gapfill
