#pragma once
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "flatspin/crystal.hpp"
#include "flatspin/lifting.hpp"

namespace flatspin {

using Json = nlohmann::ordered_json;

/// On-disk group description: dimension plus diagonal generators with
/// rational translations serialized as strings ("1/2", never floats).
struct GroupFile {
  int dimension = 0;
  std::string label;  // empty = unnamed
  std::vector<AffineElement> generators;
};

/// Parse with element-path diagnostics; rejects signs other than +-1.
GroupFile parse_group_file(const std::string& text);
/// Canonical serialization: fixed key order, two-space indent, rationals in
/// lowest terms, trailing newline. parse . serialize is the identity on
/// canonical files byte for byte.
std::string serialize_group_file(const GroupFile& gf);

GroupFile group_file_from(const BieberbachGroup& g, const std::string& label);

/// Built-in groups: "torus-<n>", "cyclic-hw-<n>" (odd n >= 3), "hw-5-1",
/// and "hw-5-2" (the cyclic five-dimensional group).
std::optional<GroupFile> catalog_group(const std::string& name);
std::vector<std::string> catalog_names();

Json affine_to_json(const AffineElement& a);
AffineElement affine_from_json(const Json& j, int n);
Json verdict_to_json(const StructureVerdict& v);
StructureVerdict verdict_from_json(const Json& j);

extern const std::set<std::string> kAllChecks;  // spin spinc betti h1 torsion characters

/// Runs the requested checks and assembles the machine-readable report.
/// Returns ok = false (validation failure, witness in the report) when the
/// group does not build or has torsion; verdict checks are skipped then.
std::pair<Json, bool> analyze_report(const GroupFile& gf,
                                     const std::set<std::string>& checks);

/// Text rendering with the same facts as the structured report.
std::string report_to_text(const Json& report);

struct ReplayResult {
  bool ok = true;
  std::vector<std::string> messages;
};

/// Re-checks everything a saved report claims: witnesses are verified
/// against the rebuilt group, obstruction certificates are replayed, and a
/// spinc NO is confirmed to be backed by b_2 = 0.
ReplayResult replay_report(const Json& report);

}  // namespace flatspin
