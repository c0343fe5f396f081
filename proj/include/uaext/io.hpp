#pragma once

// JSON and CSV serialisation. Complex numbers are [re, im] pairs, tables are
// arrays aligned with their space's point order, and doubles are written in
// shortest round-trip form so reading back is bit-faithful.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

#include "json.hpp"

#include "uaext/boundary.hpp"
#include "uaext/cole.hpp"
#include "uaext/group.hpp"
#include "uaext/measures.hpp"

namespace uaext::io {

using nlohmann::json;

json complex_to_json(Complex z);
Complex complex_from_json(const json& j);

json table_to_json(const CVector& values);
/// Throws InputError when the length differs from `expected`.
CVector table_from_json(const json& j, std::size_t expected);

json space_to_json(const FiniteSpace& space);
SpacePtr space_from_json(const json& j);

json map_to_json(const SurjectionMap& pi);
SurjectionMap map_from_json(const json& j, SpacePtr source, SpacePtr target);

json measure_to_json(const Measure& mu);
Measure measure_from_json(const json& j, SpacePtr space);

json system_to_json(const FunctionSystem& system);
FunctionSystem system_from_json(const json& j, SpacePtr space);

/// {"rows": [{"entries": [[index, [re, im]], ...]}, ...]}
json operator_to_json(const OperatorTable& t);
OperatorTable operator_from_json(const json& j, SpacePtr source, SpacePtr target);

json action_to_json(const GroupAction& action);
GroupAction action_from_json(const json& j, SpacePtr space);

struct LoadedBundle {
  ExtensionBundle bundle;
  std::optional<ColeBundle> cole;
  std::optional<GroupAction> action;
};

json bundle_to_json(const ExtensionBundle& bundle, const ColeBundle* cole = nullptr,
                    const GroupAction* action = nullptr);
LoadedBundle bundle_from_json(const json& j);

json clause_to_json(const Clause& c);
json certificate_to_json(const Certificate& cert);
json jensen_to_json(const JensenReport& r, const std::string& check = "jensen");
json choquet_to_json(const FunctionSystem& system, const std::vector<ChoquetReport>& reports, bool witnesses);
json tolerances_to_json(const CertTolerances& tol);

/// One CSV row per clause: name,applicable,pass,residual,tolerance,probe_count,note
void write_certificate_csv(std::ostream& out, const Certificate& cert);

struct Manifest {
  std::string command;
  json parameters = json::object();
  std::uint64_t seed = kDefaultSeed;
  std::string tool_version;
  json tolerances = json::object();

  json to_json() const;
};

/// Parses a file; any I/O or syntax failure is an InputError naming the path.
json read_json_file(const std::string& path);
/// Pretty-printed (indent 2) for reports, compact for bundles; LF terminated.
std::string dump(const json& j, bool pretty);

}  // namespace uaext::io
