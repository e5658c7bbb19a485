#include "gapfill/iterqaoa.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "gapfill/errors.hpp"
#include "gapfill/random.hpp"

namespace gapfill {

void QaoaConfig::validate() const {
  if (p && *p < 1) throw ConfigError("depth p must be >= 1");
  if (delta && (*delta <= 0.0 || !std::isfinite(*delta)))
    throw ConfigError("slope delta must be > 0");
  if (shots < 1) throw ConfigError("shots must be >= 1");
  if (n_iter < 1) throw ConfigError("n_iter must be >= 1");
  if (top_k < 2) throw ConfigError("top_k must be >= 2");
  if (lambda <= 0.0) throw ConfigError("lambda must be > 0");
  if (tau < 0.0) throw ConfigError("tau must be >= 0");
  if (eta != 1 && eta != -1) throw ConfigError("eta must be +1 or -1");
  if (clip <= 0.0 || clip >= 0.5) throw ConfigError("clip must lie in (0, 0.5)");
}

Schedule lr_schedule(int p, double delta) {
  if (p < 1) throw ConfigError("depth p must be >= 1");
  if (delta <= 0.0) throw ConfigError("slope delta must be > 0");
  Schedule sched;
  sched.gamma.reserve(p);
  sched.beta.reserve(p);
  for (int k = 1; k <= p; ++k) {
    sched.gamma.push_back(static_cast<double>(k) / p * delta);
    sched.beta.push_back(static_cast<double>(p - k + 1) / p * delta);
  }
  return sched;
}

std::vector<double> boltzmann(std::span<const double> energies, double beta_t) {
  if (energies.empty())
    throw DimensionError("boltzmann weighting requires a nonempty energy list");
  const double e_min = *std::min_element(energies.begin(), energies.end());
  std::vector<double> p(energies.size());
  double total = 0.0;
  for (std::size_t i = 0; i < energies.size(); ++i) {
    p[i] = std::exp(-beta_t * (energies[i] - e_min));
    total += p[i];
  }
  for (double& v : p) v /= total;
  return p;
}

double beta_schedule(int j, int n_iter, std::span<const double> energies,
                     double tau, double prev_beta) {
  const double frac = static_cast<double>(j) / n_iter;
  const double base = 0.1 + 0.9 * frac * frac;
  double min_gap = 0.0;
  bool found = false;
  for (std::size_t m = 0; m + 1 < energies.size(); ++m) {
    const double gap = energies[m + 1] - energies[m];
    if (gap > tau && (!found || gap < min_gap)) {
      min_gap = gap;
      found = true;
    }
  }
  if (!found) return prev_beta;
  return base / min_gap;
}

std::vector<double> bias_update(
    const std::vector<std::pair<std::uint64_t, double>>& samples, int n,
    int eta, double clip) {
  std::vector<double> rho(n);
  for (int q = 0; q < n; ++q) {
    double m = 0.0;
    for (const auto& [index, prob] : samples)
      m += (index >> q) & 1u ? -prob : prob;
    rho[q] = std::clamp(0.5 * (1.0 - eta * m), clip, 1.0 - clip);
  }
  return rho;
}

namespace {

Histogram bin_energies(const std::map<std::uint64_t, int>& counts,
                       const std::map<std::uint64_t, double>& energies) {
  constexpr int kBins = 24;
  Histogram hist;
  if (counts.empty()) return hist;
  double lo = energies.at(counts.begin()->first);
  double hi = lo;
  for (const auto& [index, count] : counts) {
    const double e = energies.at(index);
    lo = std::min(lo, e);
    hi = std::max(hi, e);
  }
  hist.lo = lo;
  hist.width = hi > lo ? (hi - lo) / kBins : 1.0;
  hist.counts.assign(kBins, 0);
  for (const auto& [index, count] : counts) {
    int bin = static_cast<int>((energies.at(index) - lo) / hist.width);
    hist.counts[std::min(bin, kBins - 1)] += count;
  }
  return hist;
}

// Ascending energy, ties by bitstring (x_0 first).
bool candidate_less(double ea, std::uint64_t a, double eb, std::uint64_t b,
                    int n) {
  if (ea != eb) return ea < eb;
  for (int q = 0; q < n; ++q) {
    const auto ba = (a >> q) & 1u, bb = (b >> q) & 1u;
    if (ba != bb) return ba < bb;
  }
  return false;
}

}  // namespace

QuantumResult run(const SspInstance& inst, const QaoaConfig& config) {
  config.validate();
  const int n = inst.n();
  const int p = config.resolve_p(n);
  const double delta = config.resolve_delta(n);

  const QuboModel qubo = build_qubo(inst, config.lambda);
  const IsingHamiltonian ham = qubo_to_ising(qubo);
  const PrunedHamiltonian pruned = prune(ham, p);
  const auto diag = pruned_diagonal(pruned);  // throws ResourceError for large n
  const Schedule schedule = lr_schedule(p, delta);

  QuantumResult result;
  result.config = config;
  result.p = p;
  result.delta = delta;

  std::vector<double> rho(n, 0.5);
  double prev_beta = 0.1;
  double best_energy = 0.0;
  bool have_best = false;
  std::map<std::uint64_t, double> seen;  // all sampled bitstrings, any iteration

  for (int j = 0; j < config.n_iter; ++j) {
    const WarmStartAngles angles = angles_from_bias(rho, config.clip);
    const Statevector psi = run_circuit(n, diag, angles, schedule);
    const SampleSet samples =
        sample(psi, config.shots, derive_seed(config.seed, j));

    // Full (unpruned) energies with the capacity soft term, one evaluation
    // per distinct bitstring.
    std::map<std::uint64_t, double> energies;
    double energy_sum = 0.0;
    for (const auto& [index, count] : samples.counts) {
      const double e = evaluate_energy(
          ham, inst, Assignment::from_index(index, n), config.lambda);
      energies.emplace(index, e);
      energy_sum += e * count;
      seen.emplace(index, e);
      if (!have_best || e < best_energy) {
        best_energy = e;
        have_best = true;
      }
    }

    // Unique lowest-energy samples drive the update; multiplicities do not
    // weight the Boltzmann distribution.
    std::vector<std::uint64_t> order;
    order.reserve(energies.size());
    for (const auto& [index, e] : energies) order.push_back(index);
    std::sort(order.begin(), order.end(),
              [&](std::uint64_t a, std::uint64_t b) {
                return candidate_less(energies.at(a), a, energies.at(b), b, n);
              });
    if (static_cast<int>(order.size()) > config.top_k)
      order.resize(config.top_k);

    std::vector<double> shifted;
    shifted.reserve(order.size());
    const double e1 = energies.at(order.front());
    for (std::uint64_t index : order) shifted.push_back(energies.at(index) - e1);

    const double beta_t =
        beta_schedule(j, config.n_iter, shifted, config.tau, prev_beta);
    prev_beta = beta_t;

    const std::vector<double> probs = boltzmann(shifted, beta_t);
    std::vector<std::pair<std::uint64_t, double>> weighted;
    weighted.reserve(order.size());
    for (std::size_t i = 0; i < order.size(); ++i)
      weighted.emplace_back(order[i], probs[i]);
    rho = bias_update(weighted, n, config.eta, config.clip);

    IterationRecord record;
    record.index = j;
    record.beta_t = beta_t;
    record.best_energy = best_energy;
    record.mean_energy = energy_sum / samples.shots;
    record.energy_histogram = bin_energies(samples.counts, energies);
    record.rho = rho;
    result.records.push_back(std::move(record));
  }

  std::vector<std::uint64_t> ranked;
  ranked.reserve(seen.size());
  for (const auto& [index, e] : seen) ranked.push_back(index);
  std::sort(ranked.begin(), ranked.end(), [&](std::uint64_t a, std::uint64_t b) {
    return candidate_less(seen.at(a), a, seen.at(b), b, n);
  });
  if (static_cast<int>(ranked.size()) > config.top_k)
    ranked.resize(config.top_k);
  for (std::uint64_t index : ranked)
    result.candidates.push_back(
        {Assignment::from_index(index, n), seen.at(index)});
  return result;
}

}  // namespace gapfill
