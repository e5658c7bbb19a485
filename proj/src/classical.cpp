#include "gapfill/classical.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "gapfill/errors.hpp"
#include "gapfill/qsim.hpp"
#include "gapfill/random.hpp"

namespace gapfill {

namespace {

// x_0 compares first, so this is not plain integer order.
bool lex_index_less(std::uint64_t a, std::uint64_t b, int n) {
  for (int q = 0; q < n; ++q) {
    const auto ba = (a >> q) & 1u, bb = (b >> q) & 1u;
    if (ba != bb) return ba < bb;
  }
  return false;
}

}  // namespace

ExactResult exhaustive_ground_state(const IsingHamiltonian& ham,
                                    const SspInstance& inst, double lambda) {
  const int n = ham.n;
  if (n > kExhaustiveMaxQubits)
    throw ResourceError("exhaustive ground-state search is capped at n <= " +
                        std::to_string(kExhaustiveMaxQubits) +
                        "; got n = " + std::to_string(n));
  const auto energies = energy_table(ham, inst, lambda);
  std::uint64_t best = 0;
  for (std::uint64_t i = 1; i < energies.size(); ++i) {
    if (energies[i] < energies[best] ||
        (energies[i] == energies[best] && lex_index_less(i, best, n)))
      best = i;
  }
  ExactResult result;
  result.assignment = Assignment::from_index(best, n);
  result.energy = energies[best];
  result.objective = objective_value(inst, result.assignment);
  result.method = ExactMethod::exhaustive_bitstrings;
  return result;
}

namespace {

struct DenseObjective {
  std::vector<double> value;
  std::vector<std::vector<double>> w;  // symmetric, zero where absent

  explicit DenseObjective(const SspInstance& inst) {
    const NormalizedObjective obj = normalize(inst);
    value = obj.value;
    const int n = inst.n();
    w.assign(n, std::vector<double>(n, 0.0));
    for (const auto& [key, coeff] : obj.interaction)
      w[key.first][key.second] = w[key.second][key.first] = coeff;
  }
};

struct ShipmentIndex {
  std::vector<std::vector<int>> of_var;  // shipment indices per variable
  int count = 0;

  explicit ShipmentIndex(const SspInstance& inst) {
    std::map<std::string, int> ids;
    for (const auto& s : inst.shipments)
      ids.emplace(s.id, static_cast<int>(ids.size()));
    count = static_cast<int>(ids.size());
    of_var.resize(inst.n());
    for (int v = 0; v < inst.n(); ++v)
      for (const auto& sid : inst.sequences[v].shipments)
        of_var[v].push_back(ids.at(sid));
  }
};

}  // namespace

ExactResult feasible_optimum(const SspInstance& inst, double lambda) {
  double nodes = 1.0;
  for (int g = 0; g < inst.num_gaps(); ++g) {
    const auto [first, last] = inst.var_range(g);
    nodes *= last - first + 1;
    if (nodes > kEnumerationBound)
      throw ResourceError(
          "per-gap enumeration bound exceeded: prod (|Q_g| + 1) > 1e7");
  }

  const int n = inst.n();
  const DenseObjective obj(inst);
  const ShipmentIndex ships(inst);
  std::vector<char> used(ships.count, 0);
  std::vector<char> fits(n);
  for (int v = 0; v < n; ++v)
    fits[v] = inst.sequences[v].duration <= inst.gap_of_var(v).capacity;

  Assignment current = Assignment::zeros(n);
  Assignment best = Assignment::zeros(n);
  double best_objective = 0.0;  // the empty assignment is always feasible
  std::vector<int> selected;

  // Per gap, options in lex order of the gap-local bits: none first, then
  // sequences by descending variable index. The first strict improvement
  // found is therefore the lexicographically smallest argmax.
  auto visit = [&](auto&& self, int g, double objective) -> void {
    if (g == inst.num_gaps()) {
      if (objective > best_objective) {
        best_objective = objective;
        best = current;
      }
      return;
    }
    self(self, g + 1, objective);  // leave this gap empty
    const auto [first, last] = inst.var_range(g);
    for (int v = last - 1; v >= first; --v) {
      if (!fits[v]) continue;
      bool clash = false;
      for (int s : ships.of_var[v])
        if (used[s]) {
          clash = true;
          break;
        }
      if (clash) continue;
      double gain = obj.value[v];
      for (int u : selected) gain += obj.w[v][u];
      for (int s : ships.of_var[v]) used[s] = 1;
      current.bits[v] = 1;
      selected.push_back(v);
      self(self, g + 1, objective + gain);
      selected.pop_back();
      current.bits[v] = 0;
      for (int s : ships.of_var[v]) used[s] = 0;
    }
  };
  visit(visit, 0, 0.0);

  ExactResult result;
  result.assignment = best;
  result.objective = objective_value(inst, best);  // recompute, no drift
  const IsingHamiltonian ham = qubo_to_ising(build_qubo(inst, lambda));
  result.energy = evaluate_energy(ham, inst, best, lambda);
  result.method = ExactMethod::per_gap_enumeration;
  return result;
}

void RefineConfig::validate() const {
  if (t_max < 1) throw ConfigError("t_max must be >= 1");
}

namespace {

// Penalty weight for capacity overloads inside move scoring; identical to
// the default energy-evaluation lambda.
constexpr double kRefineLambda = 10.0;

struct RefineState {
  const SspInstance& inst;
  const DenseObjective& obj;
  const ShipmentIndex& ships;

  std::vector<char> in_solution;
  std::vector<int> shipment_uses;
  std::vector<int> gap_occupant;  // -1 when empty

  RefineState(const SspInstance& i, const DenseObjective& o,
              const ShipmentIndex& s)
      : inst(i),
        obj(o),
        ships(s),
        in_solution(i.n(), 0),
        shipment_uses(s.count, 0),
        gap_occupant(i.num_gaps(), -1) {}

  // Overload penalty of a variable occupying its gap alone; exclusivity
  // keeps every reachable state single-occupancy.
  double own_overload(int v) const {
    const double over =
        inst.sequences[v].duration - inst.gap_of_var(v).capacity;
    return over > 0.0 ? kRefineLambda * std::erf(over) : 0.0;
  }

  void load(const Assignment& x) {
    for (int v : x.selected()) apply(v, true);
  }

  void apply(int v, bool add) {
    const int g = inst.gap_index_of_var(v);
    in_solution[v] = add;
    gap_occupant[g] = add ? v : -1;
    for (int s : ships.of_var[v]) shipment_uses[s] += add ? 1 : -1;
  }

  bool add_valid(int v) const {
    if (in_solution[v]) return false;
    if (gap_occupant[inst.gap_index_of_var(v)] != -1) return false;
    for (int s : ships.of_var[v])
      if (shipment_uses[s] > 0) return false;
    return true;
  }

  bool feasible() const {
    for (int v = 0; v < inst.n(); ++v)
      if (in_solution[v] &&
          inst.sequences[v].duration > inst.gap_of_var(v).capacity)
        return false;
    return true;  // exclusivity holds by construction
  }

  // Recomputed in a fixed order so identical states score identically;
  // only the move deltas are maintained incrementally.
  double score() const {
    double total = 0.0;
    std::vector<int> sel;
    for (int v = 0; v < inst.n(); ++v)
      if (in_solution[v]) {
        total += obj.value[v];
        for (int u : sel) total += obj.w[u][v];
        sel.push_back(v);
        total -= own_overload(v);
      }
    return total;
  }

  Assignment assignment() const {
    Assignment x = Assignment::zeros(inst.n());
    for (int v = 0; v < inst.n(); ++v) x.bits[v] = in_solution[v];
    return x;
  }
};

// Drop lowest-value conflicting selections until exclusivity and capacity
// hold, so every trajectory starts from a feasible solution.
Assignment repair(const SspInstance& inst, const DenseObjective& obj,
                  const ShipmentIndex& ships, Assignment x) {
  // One sequence per gap: keep the highest value, ties to the lower index.
  for (int g = 0; g < inst.num_gaps(); ++g) {
    const auto [first, last] = inst.var_range(g);
    int keep = -1;
    for (int v = first; v < last; ++v)
      if (x.bits[v] && (keep == -1 || obj.value[v] > obj.value[keep]))
        keep = v;
    for (int v = first; v < last; ++v)
      if (x.bits[v] && v != keep) x.bits[v] = 0;
  }
  // Each shipment once: drop the lowest-value user, ties to the higher
  // index, until no shipment is shared.
  for (;;) {
    std::vector<int> uses(ships.count, 0);
    for (int v : x.selected())
      for (int s : ships.of_var[v]) ++uses[s];
    int shared = -1;
    for (int s = 0; s < ships.count && shared == -1; ++s)
      if (uses[s] > 1) shared = s;
    if (shared == -1) break;
    int drop = -1;
    for (int v : x.selected()) {
      if (std::find(ships.of_var[v].begin(), ships.of_var[v].end(), shared) ==
          ships.of_var[v].end())
        continue;
      if (drop == -1 || obj.value[v] < obj.value[drop] ||
          (obj.value[v] == obj.value[drop] && v > drop))
        drop = v;
    }
    x.bits[drop] = 0;
  }
  // Overloaded single selections cannot be made feasible by other moves.
  for (int v : x.selected())
    if (inst.sequences[v].duration > inst.gap_of_var(v).capacity)
      x.bits[v] = 0;
  return x;
}

}  // namespace

Assignment refine_traced(const SspInstance& inst, const Assignment& initial,
                         const RefineConfig& config,
                         std::vector<RefineAction>& trace) {
  config.validate();
  if (initial.n() != inst.n())
    throw DimensionError("assignment length does not match instance");
  const DenseObjective obj(inst);
  const ShipmentIndex ships(inst);
  Random rng(config.seed);

  Assignment best = repair(inst, obj, ships, initial);
  double best_score;
  {
    RefineState start(inst, obj, ships);
    start.load(best);
    best_score = start.score();
  }

  for (int t = 1; t <= config.t_max; ++t) {
    RefineState state(inst, obj, ships);
    state.load(best);

    // Fixed at trajectory start: remove for members, add for the rest.
    std::vector<char> is_remove(inst.n(), 0);
    std::vector<char> open(inst.n(), 1);
    for (int v = 0; v < inst.n(); ++v) is_remove[v] = state.in_solution[v];

    // Delta of each pending action, maintained incrementally through the
    // interaction matrix as the working solution changes.
    std::vector<double> delta(inst.n(), 0.0);
    for (int v = 0; v < inst.n(); ++v) {
      double pair_sum = 0.0;
      for (int u = 0; u < inst.n(); ++u)
        if (state.in_solution[u] && u != v) pair_sum += obj.w[v][u];
      if (is_remove[v])
        delta[v] = -obj.value[v] - pair_sum + state.own_overload(v);
      else
        delta[v] = obj.value[v] + pair_sum - state.own_overload(v);
    }

    double traj_best = best_score;
    Assignment traj_assign = best;

    for (;;) {
      int first_choice = -1, second_choice = -1;
      for (int v = 0; v < inst.n(); ++v) {
        if (!open[v]) continue;
        if (!is_remove[v] && !state.add_valid(v)) continue;
        if (first_choice == -1 || delta[v] > delta[first_choice]) {
          second_choice = first_choice;
          first_choice = v;
        } else if (second_choice == -1 || delta[v] > delta[second_choice]) {
          second_choice = v;
        }
      }
      if (first_choice == -1) break;
      int act = first_choice;
      if (config.randomize_top2 && second_choice != -1 &&
          rng.uniform_int(0, 1) == 1)
        act = second_choice;

      const bool adding = !is_remove[act];
      state.apply(act, adding);
      open[act] = 0;  // tabu: each sequence moved at most once per trajectory
      trace.push_back({t, adding, act, delta[act]});

      // Incremental delta update for the untouched actions.
      for (int v = 0; v < inst.n(); ++v) {
        if (!open[v] || v == act) continue;
        const double w = obj.w[v][act];
        if (w == 0.0) continue;
        const double sign = adding ? 1.0 : -1.0;
        if (is_remove[v])
          delta[v] -= sign * w;
        else
          delta[v] += sign * w;
      }

      if (state.feasible() && state.score() > traj_best) {
        traj_best = state.score();
        traj_assign = state.assignment();
      }
    }

    if (traj_best > best_score) {
      best_score = traj_best;
      best = traj_assign;
    } else {
      break;  // this trajectory did not improve the incumbent
    }
  }
  return best;
}

Assignment refine(const SspInstance& inst, const Assignment& initial,
                  const RefineConfig& config) {
  std::vector<RefineAction> trace;
  return refine_traced(inst, initial, config, trace);
}

}  // namespace gapfill
