#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace gapfill {

using Matrix = std::vector<std::vector<double>>;

struct Shipment {
  std::string id;
  bool operator==(const Shipment&) const = default;
};

struct Gap {
  std::string id;
  double capacity = 0.0;   // hours
  int location_index = 0;  // row into the gap distance matrix
  bool operator==(const Gap&) const = default;
};

// One candidate insertion for a specific gap.
struct Sequence {
  std::string id;
  std::string gap_id;
  double value = 0.0;     // cost saving, arbitrary units
  double duration = 0.0;  // hours
  std::vector<std::string> shipments;
  double drive_distance = 0.0;  // km
  bool operator==(const Sequence&) const = default;
};

struct InstanceMeta {
  std::uint64_t seed = 0;
  std::string generator_version;
  std::string manifest;  // path of the run manifest that produced the file
  bool operator==(const InstanceMeta&) const = default;
};

// A shipment-selection problem: pick at most one sequence per gap,
// maximizing value plus pairwise compatibility, subject to shipment
// exclusivity and per-gap time capacity.
//
// Canonical variable order is lexicographic by (gap id, sequence id);
// `sequences[i]` is decision variable i, and `flow` is indexed the same
// way. Instances are immutable once finalize() has run.
class SspInstance {
 public:
  std::vector<Gap> gaps;            // sorted by id
  std::vector<Sequence> sequences;  // sorted by (gap id, id)
  std::vector<Shipment> shipments;  // sorted by id
  Matrix flow;                      // n x n, possibly asymmetric
  Matrix gap_distance;              // symmetric, zero diagonal
  double lambda_q = 1.0;
  InstanceMeta meta;

  // Validates every invariant and builds the index tables. Throws
  // ValidationError naming the violated invariant. Must be called after
  // constructing an instance by hand; generate/load do it internally.
  void finalize();

  int n() const { return static_cast<int>(sequences.size()); }
  int num_gaps() const { return static_cast<int>(gaps.size()); }

  int variable_index(std::string_view gap_id, std::string_view seq_id) const;
  int gap_index(std::string_view gap_id) const;
  int gap_index_of_var(int var) const { return var_gap_[var]; }
  const Gap& gap_of_var(int var) const { return gaps[var_gap_[var]]; }
  // Variables of gap g occupy the contiguous range [first, last).
  std::pair<int, int> var_range(int gap_idx) const { return gap_vars_[gap_idx]; }

  bool operator==(const SspInstance& other) const;

 private:
  std::vector<int> var_gap_;
  std::vector<std::pair<int, int>> gap_vars_;
  std::map<std::string, int, std::less<>> gap_by_id_;
  std::map<std::string, int, std::less<>> var_by_seq_id_;
};

struct ScenarioConfig {
  int num_vehicles = 5;
  int horizon_days = 7;
  int cancellations = 11;  // c11 disruption level
  double sequences_per_gap_mean = 7.0;
  double min_gap_hours = 2.0;
  double lambda_q = 1.0;
  std::uint64_t seed = 0;

  void validate() const;  // throws ConfigError
};

// Deterministic synthetic scenario: same config (incl. seed) yields a
// byte-identical instance.
SspInstance generate_instance(const ScenarioConfig& config);

std::string to_json(const SspInstance& instance);
SspInstance from_json(const std::string& text);

SspInstance load_instance(const std::filesystem::path& path);
void save_instance(const SspInstance& instance,
                   const std::filesystem::path& path);

// FNV-1a over the canonical serialization; used by solution files to
// reference the instance they were produced from.
std::string instance_digest(const SspInstance& instance);

}  // namespace gapfill
