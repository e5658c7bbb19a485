#include "gapfill/qsim.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "gapfill/errors.hpp"
#include "gapfill/random.hpp"

namespace gapfill {

namespace {

std::size_t dim_for(int n) {
  if (n < 0 || n > kMaxQubits)
    throw ResourceError("statevector simulation is capped at n <= " +
                        std::to_string(kMaxQubits) + " qubits; got n = " +
                        std::to_string(n));
  return std::size_t{1} << n;
}

void check_dims(const Statevector& state, int n, const char* what) {
  if (state.n != n || state.amp.size() != (std::size_t{1} << state.n))
    throw DimensionError(std::string(what) + ": state/operator size mismatch");
}

}  // namespace

double Statevector::norm() const {
  double total = 0.0;
  for (const auto& a : amp) total += std::norm(a);
  return std::sqrt(total);
}

std::vector<double> Statevector::probabilities() const {
  std::vector<double> p(amp.size());
  for (std::size_t i = 0; i < amp.size(); ++i) p[i] = std::norm(amp[i]);
  return p;
}

WarmStartAngles angles_from_bias(std::span<const double> rho, double clip) {
  if (clip <= 0.0 || clip >= 0.5) throw ConfigError("clip must lie in (0, 0.5)");
  WarmStartAngles angles;
  angles.theta.reserve(rho.size());
  for (double r : rho) {
    const double clipped = std::clamp(r, clip, 1.0 - clip);
    angles.theta.push_back(2.0 * std::asin(std::sqrt(clipped)));
  }
  return angles;
}

Statevector prepare_init(const WarmStartAngles& angles) {
  const int n = angles.n();
  Statevector state;
  state.n = n;
  state.amp.assign(dim_for(n), {0.0, 0.0});
  state.amp[0] = 1.0;
  // Tensor in one qubit at a time.
  for (int q = 0; q < n; ++q) {
    const double c = std::cos(angles.theta[q] / 2.0);
    const double s = std::sin(angles.theta[q] / 2.0);
    const std::size_t bit = std::size_t{1} << q;
    for (std::size_t i = 0; i < bit; ++i) {
      state.amp[i | bit] = state.amp[i] * s;
      state.amp[i] *= c;
    }
  }
  return state;
}

std::vector<double> pruned_diagonal(const PrunedHamiltonian& pruned) {
  const int n = pruned.base.n;
  std::vector<double> diag(dim_for(n), 0.0);
  const std::size_t dim = diag.size();
  for (const auto& [q, field] : pruned.base.h) {
    const std::size_t bit = std::size_t{1} << q;
    for (std::size_t i = 0; i < dim; ++i)
      diag[i] += (i & bit) ? -field : field;
  }
  for (const auto& [a, b] : pruned.kept_pairs) {
    const double coupling = pruned.base.j.at({a, b});
    const std::size_t ba = std::size_t{1} << a;
    const std::size_t bb = std::size_t{1} << b;
    for (std::size_t i = 0; i < dim; ++i) {
      const bool same = ((i & ba) != 0) == ((i & bb) != 0);
      diag[i] += same ? coupling : -coupling;
    }
  }
  return diag;
}

std::vector<double> energy_table(const IsingHamiltonian& ham,
                                 const SspInstance& inst, double lambda) {
  const int n = ham.n;
  std::vector<double> diag(dim_for(n), ham.e0);
  const std::size_t dim = diag.size();
  for (const auto& [q, field] : ham.h) {
    const std::size_t bit = std::size_t{1} << q;
    for (std::size_t i = 0; i < dim; ++i)
      diag[i] += (i & bit) ? -field : field;
  }
  for (const auto& [key, coupling] : ham.j) {
    const std::size_t ba = std::size_t{1} << key.first;
    const std::size_t bb = std::size_t{1} << key.second;
    for (std::size_t i = 0; i < dim; ++i) {
      const bool same = ((i & ba) != 0) == ((i & bb) != 0);
      diag[i] += same ? coupling : -coupling;
    }
  }
  // Capacity soft penalty per gap: erf saturates, so large overloads do
  // not blow up the energy scale.
  for (int g = 0; g < inst.num_gaps(); ++g) {
    const auto [first, last] = inst.var_range(g);
    if (first == last) continue;
    const double capacity = inst.gaps[g].capacity;
    for (std::size_t i = 0; i < dim; ++i) {
      double load = 0.0;
      for (int v = first; v < last; ++v)
        if (i & (std::size_t{1} << v)) load += inst.sequences[v].duration;
      if (load > capacity) diag[i] += lambda * std::erf(load - capacity);
    }
  }
  return diag;
}

void apply_phase(Statevector& state, std::span<const double> diag,
                 double gamma) {
  if (diag.size() != state.amp.size())
    throw DimensionError("phase diagonal size mismatch");
  for (std::size_t i = 0; i < state.amp.size(); ++i)
    state.amp[i] *= std::polar(1.0, -gamma * diag[i]);
}

void apply_cost_layer(Statevector& state, const PrunedHamiltonian& pruned,
                      double gamma) {
  check_dims(state, pruned.base.n, "cost layer");
  const auto diag = pruned_diagonal(pruned);
  apply_phase(state, diag, gamma);
}

void apply_mixer_layer(Statevector& state, const WarmStartAngles& angles,
                       double beta) {
  check_dims(state, angles.n(), "mixer layer");
  const double cb = std::cos(beta);
  const double sb = std::sin(beta);
  for (int q = 0; q < state.n; ++q) {
    // Ry(theta) Rz(-2 beta) Ry(-theta) in operator order; the biased
    // product state is an eigenstate with eigenvalue e^{i beta}.
    const double ct = std::cos(angles.theta[q]);
    const double st = std::sin(angles.theta[q]);
    const std::complex<double> u00(cb, sb * ct);
    const std::complex<double> u01(0.0, sb * st);
    const std::complex<double> u10(0.0, sb * st);
    const std::complex<double> u11(cb, -sb * ct);
    const std::size_t bit = std::size_t{1} << q;
    for (std::size_t i = 0; i < state.amp.size(); ++i) {
      if (i & bit) continue;
      const auto a0 = state.amp[i];
      const auto a1 = state.amp[i | bit];
      state.amp[i] = u00 * a0 + u01 * a1;
      state.amp[i | bit] = u10 * a0 + u11 * a1;
    }
  }
}

Statevector run_circuit(int n, std::span<const double> diag,
                        const WarmStartAngles& angles,
                        const Schedule& schedule) {
  if (angles.n() != n) throw DimensionError("angle count does not match qubit count");
  if (schedule.depth() < 1 ||
      schedule.beta.size() != schedule.gamma.size())
    throw ConfigError("schedule must hold p >= 1 (gamma, beta) pairs");
  Statevector state = prepare_init(angles);
  for (int k = 0; k < schedule.depth(); ++k) {
    apply_phase(state, diag, schedule.gamma[k]);
    apply_mixer_layer(state, angles, schedule.beta[k]);
  }
  return state;
}

Statevector run_circuit(const PrunedHamiltonian& pruned,
                        const WarmStartAngles& angles,
                        const Schedule& schedule) {
  const auto diag = pruned_diagonal(pruned);
  return run_circuit(pruned.base.n, diag, angles, schedule);
}

SampleSet sample(const Statevector& state, int shots, std::uint64_t seed) {
  if (shots < 1) throw ConfigError("shots must be >= 1");
  // Sorted inverse-CDF draws: one sweep over the amplitudes regardless of
  // shot count, no cumulative table.
  Random rng(seed);
  std::vector<double> draws(shots);
  for (auto& d : draws) d = rng.uniform();
  std::sort(draws.begin(), draws.end());

  SampleSet set;
  set.shots = shots;
  double cumulative = 0.0;
  std::size_t next = 0;
  for (std::size_t i = 0; i < state.amp.size() && next < draws.size(); ++i) {
    cumulative += std::norm(state.amp[i]);
    int hits = 0;
    while (next < draws.size() && draws[next] < cumulative) {
      ++hits;
      ++next;
    }
    if (hits > 0) set.counts[i] += hits;
  }
  // Round-off can leave the tail of draws above the final cumulative sum.
  if (next < draws.size() && !state.amp.empty()) {
    std::size_t last = state.amp.size() - 1;
    while (last > 0 && std::norm(state.amp[last]) == 0.0) --last;
    set.counts[last] += static_cast<int>(draws.size() - next);
  }
  return set;
}

double exact_expectation(const Statevector& state,
                         std::span<const double> energies) {
  if (energies.size() != state.amp.size())
    throw DimensionError("energy table size mismatch");
  double total = 0.0;
  for (std::size_t i = 0; i < state.amp.size(); ++i)
    total += std::norm(state.amp[i]) * energies[i];
  return total;
}

double exact_expectation(const Statevector& state,
                         const IsingHamiltonian& ham, const SspInstance& inst,
                         double lambda) {
  check_dims(state, ham.n, "expectation");
  const auto energies = energy_table(ham, inst, lambda);
  return exact_expectation(state, energies);
}

std::string to_bitstring(std::uint64_t index, int n) {
  std::string s(n, '0');
  for (int q = 0; q < n; ++q)
    if (index & (std::uint64_t{1} << q)) s[q] = '1';
  return s;
}

std::string dump_amplitudes(const Statevector& state) {
  if (state.n > 10)
    throw ResourceError("amplitude dump is limited to n <= 10");
  std::ostringstream out;
  out.precision(17);
  for (std::size_t i = 0; i < state.amp.size(); ++i)
    out << to_bitstring(i, state.n) << " " << state.amp[i].real() << " "
        << state.amp[i].imag() << "\n";
  return out.str();
}

}  // namespace gapfill
