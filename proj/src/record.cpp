#include "pathscape/record.hpp"

#include <algorithm>
#include <ostream>

#include "pathscape/errors.hpp"
#include "pathscape/rng.hpp"

#ifndef PATHSCAPE_VERSION
#define PATHSCAPE_VERSION "0.0.0"
#endif

namespace pathscape {
namespace {

const char* const kReserved[] = {"command", "version", "params", "seed", "replicas", "rng", "wall_time"};

bool reserved(const std::string& key) {
  return std::find(std::begin(kReserved), std::end(kReserved), key) != std::end(kReserved);
}

std::string scalar_text(const Json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_null()) return "";
  return v.dump();
}

}  // namespace

std::string artifact_version() { return PATHSCAPE_VERSION; }

void ExperimentRecord::set_stream(std::uint64_t master_seed, std::uint64_t replica_count) {
  seed = master_seed;
  replicas = replica_count;
  rng = std::string(kRngStreamTag);
}

Json ExperimentRecord::to_json() const {
  Json j;
  j["command"] = command;
  j["version"] = version;
  j["params"] = params;
  if (seed) j["seed"] = *seed;
  if (replicas) j["replicas"] = *replicas;
  if (rng) j["rng"] = *rng;
  for (const auto& [key, value] : stats.items()) {
    require(!reserved(key), "statistic name collides with a record field: " + key);
    j[key] = value;
  }
  if (wall_time) j["wall_time"] = *wall_time;
  return j;
}

ExperimentRecord ExperimentRecord::from_json(const Json& j) {
  ExperimentRecord r;
  r.command = j.at("command").get<std::string>();
  r.version = j.at("version").get<std::string>();
  r.params = j.at("params");
  if (j.contains("seed")) r.seed = j["seed"].get<std::uint64_t>();
  if (j.contains("replicas")) r.replicas = j["replicas"].get<std::uint64_t>();
  if (j.contains("rng")) r.rng = j["rng"].get<std::string>();
  if (j.contains("wall_time")) r.wall_time = j["wall_time"].get<double>();
  for (const auto& [key, value] : j.items())
    if (!reserved(key)) r.stats[key] = value;
  return r;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

void write_csv(std::ostream& out, const std::vector<ExperimentRecord>& records) {
  std::vector<std::string> columns{"command", "version", "seed", "replicas", "rng"};
  auto add = [&](const std::string& c) {
    if (std::find(columns.begin(), columns.end(), c) == columns.end()) columns.push_back(c);
  };
  for (const auto& r : records) {
    for (const auto& [key, value] : r.params.items()) add("params." + key);
    for (const auto& [key, value] : r.stats.items()) add(key);
    if (r.wall_time) add("wall_time");
  }
  for (std::size_t i = 0; i < columns.size(); ++i) out << (i ? "," : "") << csv_field(columns[i]);
  out << "\r\n";
  for (const auto& r : records) {
    const Json j = r.to_json();
    for (std::size_t i = 0; i < columns.size(); ++i) {
      const std::string& c = columns[i];
      std::string cell;
      if (c.rfind("params.", 0) == 0) {
        const std::string key = c.substr(7);
        if (r.params.contains(key)) cell = scalar_text(r.params[key]);
      } else if (j.contains(c)) {
        cell = scalar_text(j[c]);
      }
      out << (i ? "," : "") << csv_field(cell);
    }
    out << "\r\n";
  }
}

}  // namespace pathscape
