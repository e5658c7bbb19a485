#pragma once

#include <complex>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "gapfill/encode.hpp"

namespace gapfill {

// Dense statevectors only; 2^26 amplitudes is already 1 GiB.
inline constexpr int kMaxQubits = 26;

// Qubit q is bit q of the basis-state index (qubit 0 = least significant).
struct Statevector {
  int n = 0;
  std::vector<std::complex<double>> amp;

  double norm() const;
  std::vector<double> probabilities() const;
};

// Product-state angles theta_q = 2 asin(sqrt(rho_q)).
struct WarmStartAngles {
  std::vector<double> theta;
  int n() const { return static_cast<int>(theta.size()); }
};

// rho is clipped to [clip, 1-clip] before conversion.
WarmStartAngles angles_from_bias(std::span<const double> rho,
                                 double clip = 1e-3);

// (x) cos(theta_q/2)|0> + sin(theta_q/2)|1>. Throws ResourceError above
// kMaxQubits.
Statevector prepare_init(const WarmStartAngles& angles);

// Diagonal of the pruned operator (fields plus kept couplings, no offset),
// indexed by basis state. Computed once per instance and reused across
// layers and iterations.
std::vector<double> pruned_diagonal(const PrunedHamiltonian& pruned);

// Full-energy lookup table: ising energy incl. offset plus the capacity
// soft penalty for every basis state. Intended for exhaustive oracles and
// exact expectations at small n.
std::vector<double> energy_table(const IsingHamiltonian& hamiltonian,
                                 const SspInstance& instance, double lambda);

// amp[x] *= exp(-i gamma diag[x])
void apply_phase(Statevector& state, std::span<const double> diag,
                 double gamma);

void apply_cost_layer(Statevector& state, const PrunedHamiltonian& pruned,
                      double gamma);

// Per-qubit rotated mixer: circuit Ry(-theta), Rz(-2 beta), Ry(theta).
// The warm-start product state with the same angles is an eigenstate.
void apply_mixer_layer(Statevector& state, const WarmStartAngles& angles,
                       double beta);

struct Schedule {
  std::vector<double> gamma;
  std::vector<double> beta;
  int depth() const { return static_cast<int>(gamma.size()); }
};

Statevector run_circuit(const PrunedHamiltonian& pruned,
                        const WarmStartAngles& angles,
                        const Schedule& schedule);
// Fast path with a precomputed pruned diagonal.
Statevector run_circuit(int n, std::span<const double> diag,
                        const WarmStartAngles& angles,
                        const Schedule& schedule);

struct SampleSet {
  std::map<std::uint64_t, int> counts;  // basis index -> shots
  int shots = 0;
};

// i.i.d. computational-basis measurements; deterministic for a fixed seed.
SampleSet sample(const Statevector& state, int shots, std::uint64_t seed);

// sum_x |amp_x|^2 evaluate_energy(x); exact, no sampling noise.
double exact_expectation(const Statevector& state,
                         const IsingHamiltonian& hamiltonian,
                         const SspInstance& instance, double lambda);
double exact_expectation(const Statevector& state,
                         std::span<const double> energies);

std::string to_bitstring(std::uint64_t index, int n);

// Debug dump, one basis state per line; refuses n > 10.
std::string dump_amplitudes(const Statevector& state);

}  // namespace gapfill
