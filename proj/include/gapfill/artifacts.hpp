#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "gapfill/iterqaoa.hpp"

namespace gapfill {

std::string read_file(const std::filesystem::path& path);

// Write-then-rename so readers never observe a partial file.
void write_file_atomic(const std::filesystem::path& path,
                       const std::string& content);

// Provenance record written next to every command's outputs.
struct RunManifest {
  std::string command;
  std::string tool_version;
  nlohmann::json config;  // flag snapshot incl. seeds
  std::vector<std::string> inputs;
  std::vector<std::string> outputs;
  double wall_seconds = 0.0;

  nlohmann::json to_json() const;
};

void write_manifest(const RunManifest& manifest,
                    const std::filesystem::path& path);

// Ranked candidate assignments plus a reference back to the instance they
// were solved from.
struct SolutionCandidate {
  std::string bits;  // x_0 first
  double energy = 0.0;
  double objective = 0.0;
  bool feasible = true;
};

struct SolutionFile {
  std::string instance_path;
  std::string instance_digest;
  std::string solver;  // quantum | quantum_refined | exact | greedy
  nlohmann::json config;
  std::vector<SolutionCandidate> candidates;
  std::string manifest;

  std::string to_json_text() const;
};

SolutionFile load_solution(const std::filesystem::path& path);
void save_solution(const SolutionFile& solution,
                   const std::filesystem::path& path);

// One row per iteration: index, beta_T, best/mean energy, histogram.
std::string iteration_log_table(const QuantumResult& result,
                                const std::string& manifest_ref);

}  // namespace gapfill
