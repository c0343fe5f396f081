#include "uaext/io.hpp"

#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

#include "uaext/errors.hpp"

namespace uaext::io {

namespace {

const json& field(const json& j, const char* key) {
  if (!j.is_object()) throw InputError(std::string("json: expected an object holding \"") + key + "\"");
  auto it = j.find(key);
  if (it == j.end()) throw InputError(std::string("json: missing field \"") + key + "\"");
  return *it;
}

double number(const json& j, const char* what) {
  if (!j.is_number()) throw InputError(std::string("json: ") + what + " must be a number");
  return j.get<double>();
}

std::size_t index(const json& j, const char* what) {
  if (!j.is_number_unsigned() && !(j.is_number_integer() && j.get<long long>() >= 0))
    throw InputError(std::string("json: ") + what + " must be a non-negative integer");
  return j.get<std::size_t>();
}

std::string csv_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string csv_text(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

}  // namespace

json complex_to_json(Complex z) { return json::array({z.real(), z.imag()}); }

Complex complex_from_json(const json& j) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (!j.is_array() || j.size() != 2) throw InputError("json: complex numbers are [re, im] pairs");
  return {number(j[0], "real part"), number(j[1], "imaginary part")};
}

json table_to_json(const CVector& values) {
  json out = json::array();
  for (Eigen::Index i = 0; i < values.size(); ++i) out.push_back(complex_to_json(values[i]));
  return out;
}

CVector table_from_json(const json& j, std::size_t expected) {
  if (!j.is_array()) throw InputError("json: a table must be an array");
  if (j.size() != expected)
    throw InputError("json: table has " + std::to_string(j.size()) + " values, expected " + std::to_string(expected));
  CVector out(static_cast<Eigen::Index>(expected));
  for (std::size_t i = 0; i < expected; ++i) out[static_cast<Eigen::Index>(i)] = complex_from_json(j[i]);
  return out;
}

json space_to_json(const FiniteSpace& space) {
  json points = json::array();
  for (const auto& p : space.points()) {
    json coords = json::array();
    for (const auto& c : p.coords) coords.push_back(complex_to_json(c));
    points.push_back({{"label", p.label}, {"coords", coords}});
  }
  return {{"points", points}};
}

SpacePtr space_from_json(const json& j) {
  const json& pts = field(j, "points");
  if (!pts.is_array()) throw InputError("json: \"points\" must be an array");
  std::vector<Point> points;
  for (const auto& p : pts) {
    Point q;
    const json& label = field(p, "label");
    if (!label.is_string()) throw InputError("json: point labels must be strings");
    q.label = label.get<std::string>();
    const json& coords = field(p, "coords");
    if (!coords.is_array()) throw InputError("json: point coordinates must be an array");
    for (const auto& c : coords) q.coords.push_back(complex_from_json(c));
    points.push_back(std::move(q));
  }
  return std::make_shared<const FiniteSpace>(std::move(points));
}

json map_to_json(const SurjectionMap& pi) { return {{"assignment", pi.assignment()}}; }

SurjectionMap map_from_json(const json& j, SpacePtr source, SpacePtr target) {
  const json& a = field(j, "assignment");
  if (!a.is_array()) throw InputError("json: \"assignment\" must be an array");
  IndexList assignment;
  for (const auto& v : a) assignment.push_back(index(v, "assignment entry"));
  return make_surjection(std::move(source), std::move(target), std::move(assignment));
}

json measure_to_json(const Measure& mu) { return {{"weights", table_to_json(mu.weights())}}; }

Measure measure_from_json(const json& j, SpacePtr space) {
  CVector w = table_from_json(field(j, "weights"), space->size());
  return Measure(std::move(space), std::move(w));
}

json system_to_json(const FunctionSystem& system) {
  json gens = json::array();
  for (const auto& g : system.generators()) gens.push_back({{"name", g.name}, {"values", table_to_json(g.values)}});
  json basis = json::array();
  for (Eigen::Index k = 0; k < system.basis().cols(); ++k) basis.push_back(table_to_json(system.basis().col(k)));
  return {{"degree_cap", system.degree_cap()},
          {"rank_tol", system.rank_tol()},
          {"generator_weights", system.generator_weights()},
          {"generators", gens},
          {"basis", basis}};
}

FunctionSystem system_from_json(const json& j, SpacePtr space) {
  const std::size_t n = space->size();
  const json& gens_j = field(j, "generators");
  const json& basis_j = field(j, "basis");
  if (!gens_j.is_array() || !basis_j.is_array()) throw InputError("json: generators and basis must be arrays");
  std::vector<FunctionTable> gens;
  for (const auto& g : gens_j) {
    const json& name = field(g, "name");
    if (!name.is_string()) throw InputError("json: generator names must be strings");
    gens.emplace_back(space, table_from_json(field(g, "values"), n), name.get<std::string>());
  }
  CMatrix basis(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(basis_j.size()));
  for (std::size_t k = 0; k < basis_j.size(); ++k) basis.col(static_cast<Eigen::Index>(k)) = table_from_json(basis_j[k], n);
  std::vector<int> weights;
  if (j.contains("generator_weights")) {
    for (const auto& w : field(j, "generator_weights")) weights.push_back(static_cast<int>(index(w, "generator weight")));
  }
  const double rank_tol = j.contains("rank_tol") ? number(j["rank_tol"], "rank_tol") : kDefaultRankTol;
  const int cap = static_cast<int>(index(field(j, "degree_cap"), "degree_cap"));
  return FunctionSystem::from_orthonormal(std::move(space), std::move(basis), std::move(gens), cap, rank_tol,
                                          std::move(weights));
}

json operator_to_json(const OperatorTable& t) {
  json rows = json::array();
  for (const auto& row : t.rows()) {
    json entries = json::array();
    for (const auto& e : row) entries.push_back(json::array({e.index, complex_to_json(e.weight)}));
    rows.push_back({{"entries", entries}});
  }
  return {{"rows", rows}};
}

OperatorTable operator_from_json(const json& j, SpacePtr source, SpacePtr target) {
  const json& rows_j = field(j, "rows");
  if (!rows_j.is_array()) throw InputError("json: \"rows\" must be an array");
  std::vector<SparseRow> rows;
  for (const auto& r : rows_j) {
    SparseRow row;
    for (const auto& e : field(r, "entries")) {
      if (!e.is_array() || e.size() != 2) throw InputError("json: operator entries are [index, [re, im]]");
      row.push_back({index(e[0], "operator entry index"), complex_from_json(e[1])});
    }
    rows.push_back(std::move(row));
  }
  return OperatorTable(std::move(source), std::move(target), std::move(rows));
}

json action_to_json(const GroupAction& action) { return {{"elements", action.elements}}; }

GroupAction action_from_json(const json& j, SpacePtr space) {
  std::vector<IndexList> perms;
  for (const auto& p : field(j, "elements")) {
    IndexList perm;
    for (const auto& v : p) perm.push_back(index(v, "permutation entry"));
    perms.push_back(std::move(perm));
  }
  return make_action(std::move(space), std::move(perms));
}

json bundle_to_json(const ExtensionBundle& bundle, const ColeBundle* cole, const GroupAction* action) {
  json j = {{"name", bundle.name},
            {"x", space_to_json(*bundle.pi.target())},
            {"y", space_to_json(*bundle.pi.source())},
            {"pi", map_to_json(bundle.pi)},
            {"a", system_to_json(bundle.a)},
            {"b", system_to_json(bundle.b)},
            {"t", bundle.t ? operator_to_json(*bundle.t) : json(nullptr)},
            {"flags", {{"open_map", bundle.flags.open_map}, {"group_implemented", bundle.flags.group_implemented}}},
            {"metadata", bundle.metadata}};
  if (cole) {
    json coeffs = json::array();
    for (const auto& c : cole->coefficients) coeffs.push_back(table_to_json(c.values));
    json slots = json::array();
    for (const auto& s : cole->root_slots) {
      json roots = json::array();
      for (const auto& z : s) roots.push_back(complex_to_json(z));
      slots.push_back(roots);
    }
    j["cole"] = {{"degree", cole->degree}, {"coefficients", coeffs}, {"p_q", table_to_json(cole->p_q.values)},
                 {"root_slots", slots}};
  }
  if (action) j["action"] = action_to_json(*action);
  return j;
}

LoadedBundle bundle_from_json(const json& in) {
  const json& j = in.contains("bundle") ? in["bundle"] : in;
  SpacePtr x = space_from_json(field(j, "x"));
  SpacePtr y = space_from_json(field(j, "y"));
  SurjectionMap pi = map_from_json(field(j, "pi"), y, x);
  FunctionSystem a = system_from_json(field(j, "a"), x);
  FunctionSystem b = system_from_json(field(j, "b"), y);
  std::optional<OperatorTable> t;
  if (j.contains("t") && !j["t"].is_null()) t = operator_from_json(j["t"], y, x);
  ExtensionFlags flags;
  if (j.contains("flags")) {
    flags.open_map = j["flags"].value("open_map", false);
    flags.group_implemented = j["flags"].value("group_implemented", false);
  }
  const json& name = field(j, "name");
  if (!name.is_string()) throw InputError("json: bundle name must be a string");
  LoadedBundle out{{name.get<std::string>(), std::move(a), std::move(b), std::move(pi), std::move(t), flags,
                    j.value("metadata", json::object())},
                   std::nullopt,
                   std::nullopt};
  check_bundle_shape(out.bundle);
  if (j.contains("cole")) {
    const json& c = j["cole"];
    ColeBundle cb{out.bundle, {}, FunctionTable(y, table_from_json(field(c, "p_q"), y->size()), "p_q"), {},
                  static_cast<int>(index(field(c, "degree"), "degree"))};
    std::size_t i = 0;
    for (const auto& t_j : field(c, "coefficients"))
      cb.coefficients.emplace_back(x, table_from_json(t_j, x->size()), "h_" + std::to_string(i++));
    for (const auto& s : field(c, "root_slots")) {
      std::vector<Complex> roots;
      for (const auto& z : s) roots.push_back(complex_from_json(z));
      cb.root_slots.push_back(std::move(roots));
    }
    if (cb.coefficients.size() != static_cast<std::size_t>(cb.degree) || cb.root_slots.size() != x->size())
      throw InputError("json: cole section does not match the bundle");
    out.cole = std::move(cb);
  }
  if (j.contains("action")) out.action = action_from_json(j["action"], y);
  return out;
}

json clause_to_json(const Clause& c) {
  return {{"clause", c.name},         {"pass", c.pass}, {"residual", c.residual}, {"tolerance", c.tolerance},
          {"probe_count", c.probe_count}, {"note", c.note}, {"applicable", c.applicable}};
}

json certificate_to_json(const Certificate& cert) {
  json clauses = json::array();
  for (const auto& c : cert.clauses) clauses.push_back(clause_to_json(c));
  return {{"name", cert.name}, {"applicable", cert.applicable}, {"passed", cert.passed()}, {"clauses", clauses}};
}

json jensen_to_json(const JensenReport& r, const std::string& check) {
  return {{"check", check}, {"holds", r.holds}, {"worst_violation", r.worst_violation}, {"probe_count", r.probe_count}};
}

json choquet_to_json(const FunctionSystem& system, const std::vector<ChoquetReport>& reports, bool witnesses) {
  json points = json::array();
  for (const auto& r : reports) {
    json p = {{"label", system.space()->point(r.point).label},
              {"escaping_mass", r.escaping_mass},
              {"is_choquet", r.is_choquet}};
    if (witnesses && r.witness) p["witness"] = measure_to_json(*r.witness);
    points.push_back(std::move(p));
  }
  return {{"points", points}};
}

json tolerances_to_json(const CertTolerances& tol) {
  return {{"unital", tol.unital},
          {"norm", tol.norm},
          {"section", tol.section},
          {"pullback_inclusion", tol.pullback_inclusion},
          {"image_in_a", tol.image_in_a},
          {"onto", tol.onto},
          {"adjoint_annihilation", tol.adjoint_annihilation},
          {"pushforward_inversion", tol.pushforward_inversion},
          {"pushforward_annihilation", tol.pushforward_annihilation},
          {"invariant_intersection", tol.invariant_intersection},
          {"positivity", tol.positivity},
          {"kelley", tol.kelley},
          {"module", tol.module},
          {"off_fiber", tol.off_fiber},
          {"hull", tol.hull},
          {"multiplicative", tol.multiplicative},
          {"stability", tol.stability},
          {"orbit_measure", tol.orbit_measure}};
}

void write_certificate_csv(std::ostream& out, const Certificate& cert) {
  out << "clause,applicable,pass,residual,tolerance,probe_count,note\n";
  for (const auto& c : cert.clauses)
    out << csv_text(c.name) << ',' << (c.applicable ? "true" : "false") << ',' << (c.pass ? "true" : "false") << ','
        << csv_number(c.residual) << ',' << csv_number(c.tolerance) << ',' << c.probe_count << ',' << csv_text(c.note)
        << '\n';
}

json Manifest::to_json() const {
  return {{"command", command},
          {"parameters", parameters},
          {"seed", seed},
          {"tool_version", tool_version},
          {"tolerances", tolerances}};
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw InputError(path + ": " + e.what());
  }
}

std::string dump(const json& j, bool pretty) { return j.dump(pretty ? 2 : -1) + "\n"; }

}  // namespace uaext::io
