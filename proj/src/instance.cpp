#include "gapfill/instance.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "gapfill/errors.hpp"
#include "gapfill/random.hpp"
#include "gapfill/version.hpp"

namespace gapfill {

namespace {

bool is_finite(double v) { return std::isfinite(v); }

void require(bool ok, const std::string& what) {
  if (!ok) throw ValidationError(what);
}

}  // namespace

void SspInstance::finalize() {
  // Canonical order is part of the contract: flow indices follow it.
  require(std::is_sorted(gaps.begin(), gaps.end(),
                         [](const Gap& a, const Gap& b) { return a.id < b.id; }),
          "gaps must be sorted by id (canonical order)");
  require(std::is_sorted(sequences.begin(), sequences.end(),
                         [](const Sequence& a, const Sequence& b) {
                           return std::tie(a.gap_id, a.id) < std::tie(b.gap_id, b.id);
                         }),
          "sequences must be sorted by (gap id, id) (canonical order)");
  require(std::is_sorted(shipments.begin(), shipments.end(),
                         [](const Shipment& a, const Shipment& b) { return a.id < b.id; }),
          "shipments must be sorted by id");

  gap_by_id_.clear();
  var_by_seq_id_.clear();
  var_gap_.clear();
  gap_vars_.clear();

  std::set<std::string> shipment_ids;
  for (const auto& s : shipments) {
    require(!s.id.empty(), "shipment id must be nonempty");
    require(shipment_ids.insert(s.id).second, "duplicate shipment id: " + s.id);
  }

  const int m = static_cast<int>(gap_distance.size());
  for (const auto& row : gap_distance)
    require(static_cast<int>(row.size()) == m, "gap_distance must be square");
  for (int i = 0; i < m; ++i) {
    require(gap_distance[i][i] == 0.0, "gap_distance diagonal must be zero");
    for (int k = 0; k < m; ++k) {
      require(is_finite(gap_distance[i][k]), "gap_distance entries must be finite");
      require(gap_distance[i][k] == gap_distance[k][i],
              "gap_distance must be symmetric");
    }
  }

  for (int g = 0; g < static_cast<int>(gaps.size()); ++g) {
    const Gap& gap = gaps[g];
    require(!gap.id.empty(), "gap id must be nonempty");
    require(gap_by_id_.emplace(gap.id, g).second, "duplicate gap id: " + gap.id);
    require(gap.capacity >= 0.0 && is_finite(gap.capacity),
            "gap capacity must be >= 0: " + gap.id);
    require(gap.location_index >= 0 && gap.location_index < m,
            "gap location_index out of range: " + gap.id);
  }

  var_gap_.resize(sequences.size());
  for (int v = 0; v < n(); ++v) {
    const Sequence& seq = sequences[v];
    require(!seq.id.empty(), "sequence id must be nonempty");
    require(var_by_seq_id_.emplace(seq.id, v).second,
            "duplicate sequence id: " + seq.id);
    auto it = gap_by_id_.find(seq.gap_id);
    require(it != gap_by_id_.end(),
            "sequence " + seq.id + " references unknown gap " + seq.gap_id);
    require(seq.duration > 0.0 && is_finite(seq.duration),
            "sequence duration must be > 0: " + seq.id);
    require(is_finite(seq.value), "sequence value must be finite: " + seq.id);
    require(seq.drive_distance >= 0.0 && is_finite(seq.drive_distance),
            "sequence drive_distance must be >= 0: " + seq.id);
    require(!seq.shipments.empty(),
            "sequence shipment set must be nonempty: " + seq.id);
    std::set<std::string> seen;
    for (const auto& sid : seq.shipments) {
      require(shipment_ids.count(sid) > 0,
              "sequence " + seq.id + " references unknown shipment " + sid);
      require(seen.insert(sid).second,
              "sequence " + seq.id + " repeats shipment " + sid);
    }
    var_gap_[v] = it->second;
  }

  // Sorted order makes var_gap_ nondecreasing, so per-gap variable ranges
  // are contiguous scans.
  gap_vars_.assign(gaps.size(), {0, 0});
  for (int g = 0, v = 0; g < num_gaps(); ++g) {
    const int first = v;
    while (v < n() && var_gap_[v] == g) ++v;
    gap_vars_[g] = {first, v};
  }

  require(static_cast<int>(flow.size()) == n(),
          "flow must be square with one row per sequence");
  for (const auto& row : flow) {
    require(static_cast<int>(row.size()) == n(), "flow must be square");
    for (double v : row) require(is_finite(v), "flow entries must be finite");
  }
  require(lambda_q >= 0.0 && is_finite(lambda_q), "lambda_q must be >= 0");
}

int SspInstance::variable_index(std::string_view gap_id,
                                std::string_view seq_id) const {
  auto g = gap_by_id_.find(gap_id);
  if (g == gap_by_id_.end())
    throw LookupError("unknown gap id: " + std::string(gap_id));
  auto v = var_by_seq_id_.find(seq_id);
  if (v == var_by_seq_id_.end() || sequences[v->second].gap_id != gap_id)
    throw LookupError("unknown sequence id " + std::string(seq_id) +
                      " in gap " + std::string(gap_id));
  return v->second;
}

int SspInstance::gap_index(std::string_view gap_id) const {
  auto g = gap_by_id_.find(gap_id);
  if (g == gap_by_id_.end())
    throw LookupError("unknown gap id: " + std::string(gap_id));
  return g->second;
}

bool SspInstance::operator==(const SspInstance& other) const {
  return gaps == other.gaps && sequences == other.sequences &&
         shipments == other.shipments && flow == other.flow &&
         gap_distance == other.gap_distance && lambda_q == other.lambda_q &&
         meta == other.meta;
}

void ScenarioConfig::validate() const {
  if (num_vehicles < 1) throw ConfigError("num_vehicles must be >= 1");
  if (horizon_days < 1) throw ConfigError("horizon_days must be >= 1");
  if (cancellations < 0) throw ConfigError("cancellations must be >= 0");
  if (sequences_per_gap_mean < 0.0 || !std::isfinite(sequences_per_gap_mean))
    throw ConfigError("sequences_per_gap_mean must be >= 0");
  if (min_gap_hours <= 0.0 || !std::isfinite(min_gap_hours))
    throw ConfigError("min_gap_hours must be > 0");
  if (lambda_q < 0.0 || !std::isfinite(lambda_q))
    throw ConfigError("lambda_q must be >= 0");
}

namespace {

std::string padded(const char* prefix, int i) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%s%03d", prefix, i);
  return buf;
}

}  // namespace

SspInstance generate_instance(const ScenarioConfig& config) {
  config.validate();
  Random rng(config.seed);
  SspInstance inst;
  inst.lambda_q = config.lambda_q;
  inst.meta.seed = config.seed;
  inst.meta.generator_version = kGeneratorVersion;

  // Each cancellation leaves an idle slot; roughly 85% survive the
  // minimum-duration filter. The schedule frame bounds how many distinct
  // gaps a fleet can expose at once.
  const int max_gaps = config.num_vehicles * config.horizon_days;
  int num_gaps = 0;
  for (int c = 0; c < config.cancellations && num_gaps < max_gaps; ++c)
    if (rng.uniform() < 0.85) ++num_gaps;
  if (config.cancellations > 0 && num_gaps == 0) num_gaps = 1;

  std::vector<std::pair<double, double>> locations;
  for (int g = 0; g < num_gaps; ++g) {
    Gap gap;
    gap.id = padded("g", g);
    gap.capacity = rng.uniform(config.min_gap_hours, 10.0);
    gap.location_index = g;
    locations.emplace_back(rng.uniform(0.0, 10.0), rng.uniform(0.0, 10.0));
    inst.gaps.push_back(std::move(gap));
  }

  inst.gap_distance.assign(num_gaps, std::vector<double>(num_gaps, 0.0));
  for (int a = 0; a < num_gaps; ++a)
    for (int b = a + 1; b < num_gaps; ++b) {
      const double dx = locations[a].first - locations[b].first;
      const double dy = locations[a].second - locations[b].second;
      const double d = std::sqrt(dx * dx + dy * dy);
      inst.gap_distance[a][b] = inst.gap_distance[b][a] = d;
    }

  // Pool of unassigned shipments the candidate sequences draw from; sized
  // slightly above the expected number of sequences so attractive
  // shipments recur in several candidates and exclusivity bites.
  const double expected_seqs = num_gaps * config.sequences_per_gap_mean;
  const int pool_size = std::max(6, static_cast<int>(std::lround(1.2 * expected_seqs)));
  for (int s = 0; s < pool_size; ++s) inst.shipments.push_back({padded("s", s)});

  const double mean = config.sequences_per_gap_mean;
  for (int g = 0; g < num_gaps; ++g) {
    const int count = mean >= 1.0 ? 1 + rng.poisson(mean - 1.0) : rng.poisson(mean);
    for (int q = 0; q < count; ++q) {
      Sequence seq;
      seq.id = inst.gaps[g].id + padded("q", q);
      seq.gap_id = inst.gaps[g].id;
      // The first candidate always fits, so a nonempty feasible
      // assignment exists; later ones may overload the gap.
      const double cap = inst.gaps[g].capacity;
      seq.duration = q == 0 ? rng.uniform(0.5, cap) : rng.uniform(0.5, cap + 1.0);
      seq.value = rng.lognormal(std::log(20.0), 0.5);
      seq.drive_distance = seq.duration * rng.uniform(30.0, 70.0);
      const double u = rng.uniform();
      const int size = std::min(pool_size, u < 0.55 ? 1 : (u < 0.90 ? 2 : 3));
      std::set<int> picked;
      while (static_cast<int>(picked.size()) < size)
        picked.insert(rng.uniform_int(0, pool_size - 1));
      for (int s : picked) seq.shipments.push_back(inst.shipments[s].id);
      inst.sequences.push_back(std::move(seq));
    }
  }

  const int n = static_cast<int>(inst.sequences.size());
  inst.flow.assign(n, std::vector<double>(n, 0.0));
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      if (a != b) inst.flow[a][b] = rng.uniform();

  inst.finalize();
  return inst;
}

namespace {

using nlohmann::json;

json matrix_to_json(const Matrix& m) {
  json rows = json::array();
  for (const auto& row : m) rows.push_back(row);
  return rows;
}

Matrix matrix_from_json(const json& j, const char* field) {
  if (!j.is_array()) throw FormatError(std::string(field) + ": expected array of arrays");
  Matrix m;
  for (const auto& row : j) {
    if (!row.is_array()) throw FormatError(std::string(field) + ": expected array of arrays");
    m.push_back(row.get<std::vector<double>>());
  }
  return m;
}

template <typename T>
T get_field(const json& j, const char* field) {
  auto it = j.find(field);
  if (it == j.end()) throw FormatError(std::string("missing field: ") + field);
  try {
    return it->get<T>();
  } catch (const json::exception& e) {
    throw FormatError(std::string("field ") + field + ": " + e.what());
  }
}

}  // namespace

std::string to_json(const SspInstance& inst) {
  json j;
  json gaps = json::array();
  for (const auto& g : inst.gaps)
    gaps.push_back({{"id", g.id},
                    {"capacity", g.capacity},
                    {"location_index", g.location_index}});
  json seqs = json::array();
  for (const auto& s : inst.sequences)
    seqs.push_back({{"id", s.id},
                    {"gap_id", s.gap_id},
                    {"value", s.value},
                    {"duration", s.duration},
                    {"shipments", s.shipments},
                    {"drive_distance", s.drive_distance}});
  json ships = json::array();
  for (const auto& s : inst.shipments) ships.push_back({{"id", s.id}});

  j["gaps"] = std::move(gaps);
  j["sequences"] = std::move(seqs);
  j["shipments"] = std::move(ships);
  j["flow"] = matrix_to_json(inst.flow);
  j["gap_distance"] = matrix_to_json(inst.gap_distance);
  j["lambda_q"] = inst.lambda_q;
  json meta;
  meta["seed"] = inst.meta.seed;
  meta["generator_version"] = inst.meta.generator_version;
  if (!inst.meta.manifest.empty()) meta["manifest"] = inst.meta.manifest;
  j["meta"] = std::move(meta);
  return j.dump(2) + "\n";
}

SspInstance from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw FormatError(std::string("instance parse failure: ") + e.what());
  }
  SspInstance inst;
  for (const auto& g : get_field<json>(j, "gaps")) {
    Gap gap;
    gap.id = get_field<std::string>(g, "id");
    gap.capacity = get_field<double>(g, "capacity");
    gap.location_index = get_field<int>(g, "location_index");
    inst.gaps.push_back(std::move(gap));
  }
  for (const auto& s : get_field<json>(j, "sequences")) {
    Sequence seq;
    seq.id = get_field<std::string>(s, "id");
    seq.gap_id = get_field<std::string>(s, "gap_id");
    seq.value = get_field<double>(s, "value");
    seq.duration = get_field<double>(s, "duration");
    seq.shipments = get_field<std::vector<std::string>>(s, "shipments");
    seq.drive_distance = get_field<double>(s, "drive_distance");
    inst.sequences.push_back(std::move(seq));
  }
  for (const auto& s : get_field<json>(j, "shipments"))
    inst.shipments.push_back({get_field<std::string>(s, "id")});
  inst.flow = matrix_from_json(get_field<json>(j, "flow"), "flow");
  inst.gap_distance =
      matrix_from_json(get_field<json>(j, "gap_distance"), "gap_distance");
  inst.lambda_q = get_field<double>(j, "lambda_q");
  const json meta = get_field<json>(j, "meta");
  inst.meta.seed = get_field<std::uint64_t>(meta, "seed");
  inst.meta.generator_version = get_field<std::string>(meta, "generator_version");
  if (meta.contains("manifest")) inst.meta.manifest = meta["manifest"];
  inst.finalize();
  return inst;
}

SspInstance load_instance(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open instance file: " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return from_json(buf.str());
}

void save_instance(const SspInstance& inst, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write instance file: " + path.string());
  out << to_json(inst);
  if (!out) throw IoError("short write: " + path.string());
}

std::string instance_digest(const SspInstance& inst) {
  const std::string text = to_json(inst);
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace gapfill
