#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "gapfill/encode.hpp"
#include "gapfill/qsim.hpp"

namespace gapfill {

struct QaoaConfig {
  std::optional<int> p;         // depth; unset -> 5 if n < 50 else 6
  std::optional<double> delta;  // slope; unset -> 0.37 if n < 30 else 0.30
  int shots = 4000;
  int n_iter = 20;
  int top_k = 100;       // lowest-energy unique samples fed to the update
  double lambda = 10.0;  // penalty weight, shared by QUBO and capacity term
  double tau = 1e-6;     // energy-gap tolerance for the beta_T rescaling
  int eta = +1;          // bias sign, +1 reinforces observed bits
  double clip = 1e-3;    // rho clipping bound
  std::uint64_t seed = 0;

  int resolve_p(int n) const { return p ? *p : (n < 50 ? 5 : 6); }
  double resolve_delta(int n) const {
    return delta ? *delta : (n < 30 ? 0.37 : 0.30);
  }
  void validate() const;  // throws ConfigError
};

struct Histogram {
  double lo = 0.0;
  double width = 0.0;
  std::vector<int> counts;
};

struct IterationRecord {
  int index = 0;
  double beta_t = 0.0;
  double best_energy = 0.0;  // best seen up to and including this iteration
  double mean_energy = 0.0;  // shot-weighted mean of this iteration
  Histogram energy_histogram;
  std::vector<double> rho;  // bias produced by this iteration
};

struct Candidate {
  Assignment assignment;
  double energy = 0.0;
};

struct QuantumResult {
  std::vector<IterationRecord> records;
  std::vector<Candidate> candidates;  // ascending energy, unique bitstrings
  QaoaConfig config;                  // as supplied
  int p = 0;                          // resolved depth
  double delta = 0.0;                 // resolved slope
};

// gamma_k = (k/p) delta, beta_k = ((p - k + 1)/p) delta, k = 1..p.
Schedule lr_schedule(int p, double delta);

// Max-shifted Boltzmann weights; sums to 1, nonincreasing in energy.
std::vector<double> boltzmann(std::span<const double> energies, double beta_t);

// Base quadratic schedule 0.1 + 0.9 (j/n_iter)^2 rescaled by the smallest
// adjacent gap above tau; falls back to prev_beta when no gap qualifies.
// Energies must be sorted ascending and shifted so the minimum is 0.
double beta_schedule(int j, int n_iter, std::span<const double> energies,
                     double tau, double prev_beta);

// m_q = sum_j P_j (-1)^{bit q}, rho_q = (1 - eta m_q)/2 clipped.
std::vector<double> bias_update(
    const std::vector<std::pair<std::uint64_t, double>>& samples, int n,
    int eta, double clip = 1e-3);

// The full measurement-driven warm-start loop. Iteration 0 starts from
// rho = 0.5 everywhere; each iteration re-prepares the initial state from
// the bias of the previous one. Deterministic in (instance, config.seed).
QuantumResult run(const SspInstance& instance, const QaoaConfig& config);

}  // namespace gapfill
