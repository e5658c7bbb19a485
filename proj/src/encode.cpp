#include "gapfill/encode.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "gapfill/errors.hpp"

namespace gapfill {

Assignment Assignment::from_index(std::uint64_t index, int n) {
  Assignment a = zeros(n);
  for (int q = 0; q < n; ++q) a.bits[q] = (index >> q) & 1u;
  return a;
}

Assignment Assignment::from_string(std::string_view s) {
  Assignment a = zeros(static_cast<int>(s.size()));
  for (size_t q = 0; q < s.size(); ++q) {
    if (s[q] != '0' && s[q] != '1')
      throw FormatError("bitstring may contain only 0/1");
    a.bits[q] = s[q] == '1';
  }
  return a;
}

std::vector<int> Assignment::selected() const {
  std::vector<int> out;
  for (int q = 0; q < n(); ++q)
    if (bits[q]) out.push_back(q);
  return out;
}

int Assignment::count_selected() const {
  return static_cast<int>(std::count(bits.begin(), bits.end(), 1));
}

std::uint64_t Assignment::to_index() const {
  std::uint64_t idx = 0;
  for (int q = 0; q < n(); ++q)
    if (bits[q]) idx |= std::uint64_t{1} << q;
  return idx;
}

std::string Assignment::to_string() const {
  std::string s(bits.size(), '0');
  for (int q = 0; q < n(); ++q)
    if (bits[q]) s[q] = '1';
  return s;
}

std::map<PairKey, double> build_interactions(const SspInstance& inst) {
  std::map<PairKey, double> w;
  const int n = inst.n();
  for (int a = 0; a < n; ++a) {
    const int ga = inst.gap_index_of_var(a);
    const int la = inst.gaps[ga].location_index;
    for (int b = a + 1; b < n; ++b) {
      const int gb = inst.gap_index_of_var(b);
      if (ga == gb) continue;  // zero-diagonal distance
      const int lb = inst.gaps[gb].location_index;
      const double value =
          inst.lambda_q * inst.flow[a][b] * inst.gap_distance[la][lb];
      if (value != 0.0) w[{a, b}] = value;
    }
  }
  return w;
}

NormalizedObjective normalize(const SspInstance& inst) {
  NormalizedObjective out;
  auto w = build_interactions(inst);
  double total = 0.0;
  for (const auto& seq : inst.sequences) total += seq.value;
  for (const auto& [key, value] : w) total += value;
  if (total <= 0.0)
    throw DegenerateInstanceError(
        "joint coefficient total V + W must be positive; got " +
        std::to_string(total));
  out.normalization = total / 100.0;
  out.value.reserve(inst.n());
  for (const auto& seq : inst.sequences)
    out.value.push_back(seq.value / out.normalization);
  for (auto& [key, value] : w) value /= out.normalization;
  out.interaction = std::move(w);
  return out;
}

double QuboModel::energy(const Assignment& x) const {
  if (x.n() != n) throw DimensionError("assignment length does not match QUBO");
  double e = offset;
  for (const auto& [q, c] : linear)
    if (x.bits[q]) e += c;
  for (const auto& [key, c] : quadratic)
    if (x.bits[key.first] && x.bits[key.second]) e += c;
  return e;
}

QuboModel build_qubo(const SspInstance& inst, double lambda) {
  if (lambda <= 0.0) throw ConfigError("penalty weight lambda must be > 0");
  const NormalizedObjective obj = normalize(inst);
  QuboModel qubo;
  qubo.n = inst.n();
  qubo.lambda = lambda;
  qubo.normalization = obj.normalization;

  for (int q = 0; q < qubo.n; ++q)
    if (obj.value[q] != 0.0) qubo.linear[q] = -obj.value[q];
  for (const auto& [key, w] : obj.interaction) qubo.quadratic[key] -= w;

  // At-most-one penalties, slack-free: lambda x_i x_j per same-gap pair
  // and per pair sharing a shipment (once per shared shipment).
  for (int g = 0; g < inst.num_gaps(); ++g) {
    const auto [first, last] = inst.var_range(g);
    for (int a = first; a < last; ++a)
      for (int b = a + 1; b < last; ++b) qubo.quadratic[{a, b}] += lambda;
  }
  for (int a = 0; a < qubo.n; ++a) {
    const std::set<std::string> sa(inst.sequences[a].shipments.begin(),
                                   inst.sequences[a].shipments.end());
    for (int b = a + 1; b < qubo.n; ++b) {
      int shared = 0;
      for (const auto& sid : inst.sequences[b].shipments)
        if (sa.count(sid)) ++shared;
      if (shared > 0) qubo.quadratic[{a, b}] += lambda * shared;
    }
  }
  // Drop exact cancellations so the coupling list stays minimal.
  std::erase_if(qubo.quadratic, [](const auto& kv) { return kv.second == 0.0; });
  return qubo;
}

double IsingHamiltonian::energy(const Assignment& x) const {
  if (x.n() != n) throw DimensionError("assignment length does not match Hamiltonian");
  double e = e0;
  for (const auto& [q, field] : h) e += x.bits[q] ? -field : field;
  for (const auto& [key, coupling] : j)
    e += (x.bits[key.first] == x.bits[key.second]) ? coupling : -coupling;
  return e;
}

IsingHamiltonian qubo_to_ising(const QuboModel& qubo) {
  // x -> (1 - Z)/2: a x contributes a/2 to E0 and -a/2 to h; b x x'
  // contributes b/4 to E0, -b/4 to both fields, +b/4 to the coupling.
  IsingHamiltonian ham;
  ham.n = qubo.n;
  ham.e0 = qubo.offset;
  for (const auto& [q, a] : qubo.linear) {
    ham.e0 += a / 2.0;
    ham.h[q] += -a / 2.0;
  }
  for (const auto& [key, b] : qubo.quadratic) {
    ham.e0 += b / 4.0;
    ham.h[key.first] += -b / 4.0;
    ham.h[key.second] += -b / 4.0;
    ham.j[key] += b / 4.0;
  }
  std::erase_if(ham.h, [](const auto& kv) { return kv.second == 0.0; });
  std::erase_if(ham.j, [](const auto& kv) { return kv.second == 0.0; });
  return ham;
}

PrunedHamiltonian prune(const IsingHamiltonian& ham, int depth) {
  if (depth < 1) throw ConfigError("circuit depth must be >= 1");
  PrunedHamiltonian out;
  out.base = ham;
  out.budget = static_cast<int>(30.0 * ham.n / depth);
  if (ham.j.empty()) return out;

  double max_abs = 0.0;
  for (const auto& [key, coupling] : ham.j)
    max_abs = std::max(max_abs, std::abs(coupling));
  const double threshold = 0.01 * max_abs;

  std::vector<std::pair<PairKey, double>> ranked(ham.j.begin(), ham.j.end());
  std::stable_sort(ranked.begin(), ranked.end(),
                   [](const auto& a, const auto& b) {
                     const double ma = std::abs(a.second), mb = std::abs(b.second);
                     if (ma != mb) return ma > mb;
                     return a.first < b.first;
                   });
  for (const auto& [key, coupling] : ranked) {
    if (static_cast<int>(out.kept_pairs.size()) >= out.budget) break;
    if (std::abs(coupling) < threshold) break;  // ranked, so all later fail too
    out.kept_pairs.push_back(key);
  }
  std::sort(out.kept_pairs.begin(), out.kept_pairs.end());
  return out;
}

double capacity_penalty(const SspInstance& inst, const Assignment& x,
                        double lambda) {
  if (x.n() != inst.n()) throw DimensionError("assignment length does not match instance");
  double penalty = 0.0;
  for (int g = 0; g < inst.num_gaps(); ++g) {
    const auto [first, last] = inst.var_range(g);
    double load = 0.0;
    for (int v = first; v < last; ++v)
      if (x.bits[v]) load += inst.sequences[v].duration;
    const double overload = load - inst.gaps[g].capacity;
    if (overload > 0.0) penalty += lambda * std::erf(overload);
  }
  return penalty;
}

double evaluate_energy(const IsingHamiltonian& ham, const SspInstance& inst,
                       const Assignment& x, double lambda) {
  if (x.n() != ham.n) throw DimensionError("assignment length does not match Hamiltonian");
  return ham.energy(x) + capacity_penalty(inst, x, lambda);
}

ConstraintReport check_constraints(const SspInstance& inst,
                                   const Assignment& x) {
  if (x.n() != inst.n()) throw DimensionError("assignment length does not match instance");
  ConstraintReport report;
  std::map<std::string, int> shipment_uses;
  for (int v : x.selected())
    for (const auto& sid : inst.sequences[v].shipments) ++shipment_uses[sid];
  for (const auto& [sid, uses] : shipment_uses)
    if (uses > 1) report.shipment_violations.push_back(sid);

  for (int g = 0; g < inst.num_gaps(); ++g) {
    const auto [first, last] = inst.var_range(g);
    int picked = 0;
    double load = 0.0;
    for (int v = first; v < last; ++v)
      if (x.bits[v]) {
        ++picked;
        load += inst.sequences[v].duration;
      }
    if (picked > 1) report.gap_violations.push_back(inst.gaps[g].id);
    if (load > inst.gaps[g].capacity)
      report.capacity_violations.push_back(inst.gaps[g].id);
  }
  return report;
}

double objective_value(const NormalizedObjective& obj, const Assignment& x) {
  if (x.n() != static_cast<int>(obj.value.size()))
    throw DimensionError("assignment length does not match objective");
  double total = 0.0;
  for (int q = 0; q < x.n(); ++q)
    if (x.bits[q]) total += obj.value[q];
  for (const auto& [key, w] : obj.interaction)
    if (x.bits[key.first] && x.bits[key.second]) total += w;
  return total;
}

double objective_value(const SspInstance& inst, const Assignment& x) {
  return objective_value(normalize(inst), x);
}

std::optional<std::string> penalty_scale_warning(const NormalizedObjective& obj,
                                                 double lambda) {
  double max_value = 0.0;
  for (double v : obj.value) max_value = std::max(max_value, v);
  if (max_value <= lambda) return std::nullopt;
  std::ostringstream msg;
  msg << "largest normalized value " << max_value << " exceeds penalty weight "
      << lambda << "; exclusivity penalties may not bind at the ground state";
  return msg.str();
}

namespace {

void print_coef(std::ostringstream& out, double c) {
  out.precision(17);
  out << c;
}

}  // namespace

std::string qubo_to_text(const QuboModel& qubo) {
  std::ostringstream out;
  out << "# qubo n=" << qubo.n << " lambda=" << qubo.lambda
      << " normalization=" << qubo.normalization << " offset=";
  print_coef(out, qubo.offset);
  out << "\n# L <var> <coeff>\n# Q <var> <var> <coeff>\n";
  for (const auto& [q, c] : qubo.linear) {
    out << "L " << q << " ";
    print_coef(out, c);
    out << "\n";
  }
  for (const auto& [key, c] : qubo.quadratic) {
    out << "Q " << key.first << " " << key.second << " ";
    print_coef(out, c);
    out << "\n";
  }
  return out.str();
}

std::string ising_to_text(const IsingHamiltonian& ham) {
  std::ostringstream out;
  out << "# ising n=" << ham.n << " e0=";
  print_coef(out, ham.e0);
  out << "\n# H <qubit> <field>\n# J <qubit> <qubit> <coupling>\n";
  for (const auto& [q, field] : ham.h) {
    out << "H " << q << " ";
    print_coef(out, field);
    out << "\n";
  }
  for (const auto& [key, coupling] : ham.j) {
    out << "J " << key.first << " " << key.second << " ";
    print_coef(out, coupling);
    out << "\n";
  }
  return out.str();
}

}  // namespace gapfill
