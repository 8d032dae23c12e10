#pragma once

// Serializable experiment rows.  JSON output is one object per line with
// the statistics flattened to top-level keys; CSV mirrors the same fields.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

namespace pathscape {

using Json = nlohmann::ordered_json;

std::string artifact_version();

struct ExperimentRecord {
  std::string command;
  Json params = Json::object();
  std::optional<std::uint64_t> seed;      // stochastic records only
  std::optional<std::uint64_t> replicas;
  std::optional<std::string> rng;         // stream construction tag
  Json stats = Json::object();            // flattened into the top level
  std::optional<double> wall_time;        // seconds; omitted unless requested
  std::string version = artifact_version();

  /// Marks the record stochastic: sets seed, replica count and RNG tag.
  void set_stream(std::uint64_t master_seed, std::uint64_t replica_count);

  Json to_json() const;
  static ExperimentRecord from_json(const Json& j);
};

/// Header plus one row per record.  Columns: the fixed fields, then
/// params.<name> and the statistic names, in first-seen order.
void write_csv(std::ostream& out, const std::vector<ExperimentRecord>& records);

/// RFC 4180 quoting of a single field.
std::string csv_field(const std::string& s);

}  // namespace pathscape
