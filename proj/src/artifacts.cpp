#include "gapfill/artifacts.hpp"

#include <fstream>
#include <sstream>

#include "gapfill/errors.hpp"
#include "gapfill/version.hpp"

namespace gapfill {

using nlohmann::json;

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open file: " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file_atomic(const std::filesystem::path& path,
                       const std::string& content) {
  const auto parent = path.parent_path();
  if (!parent.empty()) std::filesystem::create_directories(parent);
  const auto tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write file: " + tmp);
    out << content;
    if (!out) throw IoError("short write: " + tmp);
  }
  std::filesystem::rename(tmp, path);
}

json RunManifest::to_json() const {
  json j;
  j["command"] = command;
  j["tool_version"] = tool_version.empty() ? kVersion : tool_version;
  j["config"] = config;
  j["inputs"] = inputs;
  j["outputs"] = outputs;
  j["wall_seconds"] = wall_seconds;
  return j;
}

void write_manifest(const RunManifest& manifest,
                    const std::filesystem::path& path) {
  write_file_atomic(path, manifest.to_json().dump(2) + "\n");
}

std::string SolutionFile::to_json_text() const {
  json j;
  j["instance_path"] = instance_path;
  j["instance_digest"] = instance_digest;
  j["solver"] = solver;
  j["config"] = config;
  json cands = json::array();
  for (const auto& c : candidates)
    cands.push_back({{"bits", c.bits},
                     {"energy", c.energy},
                     {"objective", c.objective},
                     {"feasible", c.feasible}});
  j["candidates"] = std::move(cands);
  j["manifest"] = manifest;
  return j.dump(2) + "\n";
}

SolutionFile load_solution(const std::filesystem::path& path) {
  json j;
  try {
    j = json::parse(read_file(path));
  } catch (const json::parse_error& e) {
    throw FormatError("solution parse failure in " + path.string() + ": " +
                      e.what());
  }
  try {
    SolutionFile sol;
    sol.instance_path = j.at("instance_path");
    sol.instance_digest = j.at("instance_digest");
    sol.solver = j.at("solver");
    sol.config = j.value("config", json::object());
    for (const auto& c : j.at("candidates"))
      sol.candidates.push_back({c.at("bits"), c.at("energy"), c.at("objective"),
                                c.at("feasible")});
    sol.manifest = j.value("manifest", "");
    return sol;
  } catch (const json::exception& e) {
    throw FormatError("solution field error in " + path.string() + ": " +
                      e.what());
  }
}

void save_solution(const SolutionFile& solution,
                   const std::filesystem::path& path) {
  write_file_atomic(path, solution.to_json_text());
}

std::string iteration_log_table(const QuantumResult& result,
                                const std::string& manifest_ref) {
  std::ostringstream out;
  out.precision(12);
  if (!manifest_ref.empty()) out << "# manifest: " << manifest_ref << "\n";
  out << "iteration\tbeta_t\tbest_energy\tmean_energy\thistogram\n";
  for (const auto& rec : result.records) {
    out << rec.index << "\t" << rec.beta_t << "\t" << rec.best_energy << "\t"
        << rec.mean_energy << "\t";
    const auto& h = rec.energy_histogram;
    for (std::size_t b = 0; b < h.counts.size(); ++b) {
      if (b) out << ";";
      out << (h.lo + h.width * static_cast<double>(b)) << ":" << h.counts[b];
    }
    out << "\n";
  }
  return out.str();
}

}  // namespace gapfill
