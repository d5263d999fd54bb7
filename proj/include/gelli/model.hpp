#pragma once

#include <json.hpp>

#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "gelli/orbit_break.hpp"

namespace gelli {

using Json = nlohmann::ordered_json;

struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

namespace modeljson {

inline void check_keys(const Json& j, const std::set<std::string>& allowed,
                       const std::string& where) {
  if (!j.is_object()) throw ParseError(where + ": expected an object");
  for (const auto& [key, value] : j.items()) {
    (void)value;
    if (!allowed.count(key))
      throw ParseError(where + ": unknown key '" + key + "'");
  }
}

inline Int parse_int(const Json& j, const std::string& where) {
  try {
    if (j.is_number_integer()) return Int(static_cast<long>(j.get<long long>()));
    if (j.is_string()) return Int(j.get<std::string>());
  } catch (const std::invalid_argument&) {
  }
  throw ParseError(where + ": expected an integer or decimal string");
}

inline Rat parse_rational(const Json& j, const std::string& where) {
  try {
    if (j.is_number_integer()) return Rat(static_cast<long>(j.get<long long>()));
    if (j.is_string()) return parse_rat(j.get<std::string>());
  } catch (const std::invalid_argument&) {
  }
  throw ParseError(where + ": expected a rational 'p/q' string");
}

inline RealExpr parse_realexpr(const Json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 2)
    throw ParseError(where + ": expected [a, b] for a + b*theta");
  return RealExpr(parse_rational(j[0], where), parse_rational(j[1], where));
}

inline std::vector<Int> parse_int_vector(const Json& j,
                                         const std::string& where) {
  if (!j.is_array()) throw ParseError(where + ": expected an array");
  std::vector<Int> out;
  for (const auto& e : j) out.push_back(parse_int(e, where));
  return out;
}

inline IntMatrix parse_matrix(const Json& j, std::size_t rows,
                              std::size_t cols, const std::string& where) {
  if (!j.is_array() || j.size() != rows)
    throw ParseError(where + ": expected " + std::to_string(rows) + " rows");
  IntMatrix m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i) {
    if (!j[i].is_array() || j[i].size() != cols)
      throw ParseError(where + ": row " + std::to_string(i) + " needs " +
                       std::to_string(cols) + " entries");
    for (std::size_t k = 0; k < cols; ++k)
      m(i, k) = parse_int(j[i][k], where);
  }
  return m;
}

inline PresentedGroup parse_group(const Json& j, const std::string& where) {
  check_keys(j, {"generators", "relations"}, where);
  if (!j.contains("generators"))
    throw ParseError(where + ": missing 'generators'");
  std::size_t gens = j.at("generators").get<std::size_t>();
  std::vector<std::vector<Int>> cols;
  if (j.contains("relations")) {
    for (const auto& col : j.at("relations")) {
      std::vector<Int> c = parse_int_vector(col, where + ".relations");
      if (c.size() != gens)
        throw ParseError(where + ": relation length does not match generators");
      cols.push_back(std::move(c));
    }
  }
  IntMatrix rel(gens, cols.size());
  for (std::size_t k = 0; k < cols.size(); ++k) rel.set_col(k, cols[k]);
  return PresentedGroup(gens, rel);
}

inline Json group_json(const PresentedGroup& g) {
  Json j;
  j["generators"] = g.generator_count();
  Json rels = Json::array();
  for (std::size_t k = 0; k < g.relations().cols(); ++k) {
    Json col = Json::array();
    for (std::size_t i = 0; i < g.generator_count(); ++i)
      col.push_back(g.relations()(i, k).get_str());
    rels.push_back(std::move(col));
  }
  j["relations"] = std::move(rels);
  return j;
}

inline Json matrix_json(const IntMatrix& m) {
  Json rows = Json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (std::size_t k = 0; k < m.cols(); ++k) row.push_back(m(i, k).get_str());
    rows.push_back(std::move(row));
  }
  return rows;
}

inline Json int_vector_json(const std::vector<Int>& v) {
  Json out = Json::array();
  for (const Int& x : v) out.push_back(x.get_str());
  return out;
}

inline Json realexpr_json(const RealExpr& x) {
  return Json::array({rat_str(x.a), rat_str(x.b)});
}

inline CohomologyEntry parse_entry(const Json& j, const std::string& where) {
  check_keys(j, {"degree", "group", "alpha", "coinvariants", "invariants"},
             where);
  if (j.contains("group") &&
      (j.contains("coinvariants") || j.contains("invariants")))
    throw ParseError(where + ": give either a module or declared ends, not both");
  if (j.contains("group")) {
    PresentedGroup g = parse_group(j.at("group"), where + ".group");
    IntMatrix a = j.contains("alpha")
                      ? parse_matrix(j.at("alpha"), g.generator_count(),
                                     g.generator_count(), where + ".alpha")
                      : IntMatrix::identity(g.generator_count());
    try {
      return CohomologyEntry::of_module(ZModule(g, GroupHom(g, g, a)));
    } catch (const std::invalid_argument& e) {
      throw ParseError(where + ": " + e.what());
    }
  }
  if (j.contains("coinvariants") || j.contains("invariants")) {
    PresentedGroup co = j.contains("coinvariants")
                            ? parse_group(j.at("coinvariants"),
                                          where + ".coinvariants")
                            : PresentedGroup::trivial();
    PresentedGroup in = j.contains("invariants")
                            ? parse_group(j.at("invariants"),
                                          where + ".invariants")
                            : PresentedGroup::trivial();
    return CohomologyEntry::declared(std::move(co), std::move(in));
  }
  throw ParseError(where + ": entry needs 'group' or declared ends");
}

inline Json entry_json(const CohomologyEntry& e) {
  Json j;
  if (e.module) {
    j["group"] = group_json(e.module->group());
    j["alpha"] = matrix_json(e.module->alpha().matrix());
  } else {
    j["coinvariants"] = group_json(e.declared_coinvariants);
    j["invariants"] = group_json(e.declared_invariants);
  }
  return j;
}

inline std::vector<RealExpr> parse_values(const Json& j,
                                          const std::string& where) {
  if (!j.is_array()) throw ParseError(where + ": expected an array");
  std::vector<RealExpr> out;
  for (const auto& e : j) out.push_back(parse_realexpr(e, where));
  return out;
}

}  // namespace modeljson

struct OrbitBreakRef {
  std::string name;
  std::string x;
  std::string y;
  bool split_declared = false;
};

struct NamedInvariant {
  std::string name;
  EllInvariant invariant;
};

struct DeclaredHomology {
  std::string name;
  std::vector<std::pair<int, PresentedGroup>> entries;

  GradedInvariant graded() const {
    GradedInvariant g;
    for (const auto& [n, grp] : entries) g.set_resolved(n, grp);
    return g;
  }
};

// Default object a fixture's bare commands act on.
struct DefaultTarget {
  std::string kind = "space";  // space | orbit_break | homology
  std::string name;
};

// Parsed model file: theta, space models, orbit-breaking setups, declared
// invariants and homology profiles.
struct ModelFile {
  std::string schema;
  std::string theta_named;       // "golden" / "silver" / "" for explicit cf
  std::vector<Int> theta_cf;     // explicit terms when theta_named empty
  std::vector<SpaceModel> spaces;
  std::vector<YModel> y_spaces;
  std::vector<OrbitBreakRef> orbit_breaks;
  std::vector<NamedInvariant> invariants;
  std::vector<DeclaredHomology> homologies;
  DefaultTarget default_target;

  Theta theta() const {
    if (theta_named == "golden") return Theta::golden();
    if (theta_named == "silver") return Theta::silver();
    if (!theta_cf.empty()) return Theta(theta_cf);
    return Theta::golden();
  }

  const SpaceModel* find_space(const std::string& name) const {
    for (const auto& s : spaces)
      if (s.name == name) return &s;
    return nullptr;
  }
  const YModel* find_y(const std::string& name) const {
    for (const auto& y : y_spaces)
      if (y.name == name) return &y;
    return nullptr;
  }
  const OrbitBreakRef* find_orbit_break(const std::string& name) const {
    for (const auto& ob : orbit_breaks)
      if (ob.name == name) return &ob;
    return nullptr;
  }
  const NamedInvariant* find_invariant(const std::string& name) const {
    for (const auto& i : invariants)
      if (i.name == name) return &i;
    return nullptr;
  }
  const DeclaredHomology* find_homology(const std::string& name) const {
    for (const auto& h : homologies)
      if (h.name == name) return &h;
    return nullptr;
  }

  OrbitBreakInput orbit_break_input(const OrbitBreakRef& ref) const {
    const SpaceModel* x = find_space(ref.x);
    const YModel* y = find_y(ref.y);
    if (!x) throw ParseError("orbit break references unknown space '" + ref.x + "'");
    if (!y) throw ParseError("orbit break references unknown y-space '" + ref.y + "'");
    return OrbitBreakInput{*x, *y, ref.split_declared};
  }
};

namespace modeljson {

inline SpaceModel parse_space(const Json& j) {
  check_keys(j,
             {"name", "connected", "compact", "free_action", "minimal_action",
              "dimension_bound", "cup_trivial", "chern_integral",
              "spheres_product", "cohomology", "k0", "k1", "unit_h0",
              "unit_k0", "traces"},
             "space");
  SpaceModel x;
  x.name = j.at("name").get<std::string>();
  std::string where = "space '" + x.name + "'";
  if (j.contains("connected")) x.connected = j.at("connected").get<bool>();
  if (j.contains("compact")) x.compact = j.at("compact").get<bool>();
  if (j.contains("free_action")) x.free_action = j.at("free_action").get<bool>();
  if (j.contains("minimal_action"))
    x.minimal_action = j.at("minimal_action").get<bool>();
  if (j.contains("dimension_bound"))
    x.dimension_bound = j.at("dimension_bound").get<int>();
  if (j.contains("cup_trivial"))
    x.cup_trivial_declared = j.at("cup_trivial").get<bool>();
  if (j.contains("chern_integral"))
    x.chern_integral_declared = j.at("chern_integral").get<bool>();
  if (j.contains("spheres_product"))
    x.spheres_product = j.at("spheres_product").get<bool>();
  if (j.contains("cohomology")) {
    for (const auto& entry : j.at("cohomology")) {
      if (!entry.contains("degree"))
        throw ParseError(where + ": cohomology entry needs a degree");
      int q = entry.at("degree").get<int>();
      x.cohomology[q] = parse_entry(entry, where + ".H^" + std::to_string(q));
    }
  }
  if (j.contains("k0")) x.k0 = parse_entry(j.at("k0"), where + ".k0");
  if (j.contains("k1")) x.k1 = parse_entry(j.at("k1"), where + ".k1");
  if (j.contains("unit_h0"))
    x.unit_h0 = parse_int_vector(j.at("unit_h0"), where + ".unit_h0");
  if (j.contains("unit_k0"))
    x.unit_k0 = parse_int_vector(j.at("unit_k0"), where + ".unit_k0");
  if (j.contains("traces")) {
    for (const auto& t : j.at("traces")) {
      check_keys(t, {"name", "h0", "h1", "k0", "k1"}, where + ".trace");
      TraceSpec spec;
      spec.name = t.at("name").get<std::string>();
      if (t.contains("h0")) spec.h0.values = parse_values(t.at("h0"), where);
      if (t.contains("h1")) spec.h1.values = parse_values(t.at("h1"), where);
      if (t.contains("k0")) spec.k0.values = parse_values(t.at("k0"), where);
      if (t.contains("k1")) spec.k1.values = parse_values(t.at("k1"), where);
      x.traces.push_back(std::move(spec));
    }
  }
  // Structural sanity on the connected flag.
  if (x.connected && !x.cohomology_at(0).is_zero() &&
      x.cohomology_at(0).module) {
    const ZModule& m = *x.cohomology_at(0).module;
    if (!(m.group().canonical() == CanonicalForm{1, {}}) ||
        !m.action_is_identity())
      throw ParseError(where + ": connected space needs H^0 = Z with trivial action");
  }
  return x;
}

inline Json space_json(const SpaceModel& x) {
  Json j;
  j["name"] = x.name;
  j["connected"] = x.connected;
  j["compact"] = x.compact;
  j["free_action"] = x.free_action;
  j["minimal_action"] = x.minimal_action;
  if (x.dimension_bound >= 0) j["dimension_bound"] = x.dimension_bound;
  if (x.cup_trivial_declared) j["cup_trivial"] = true;
  if (x.chern_integral_declared) j["chern_integral"] = true;
  if (x.spheres_product) j["spheres_product"] = true;
  Json coh = Json::array();
  for (const auto& [q, e] : x.cohomology) {
    Json entry = entry_json(e);
    Json withdeg;
    withdeg["degree"] = q;
    for (auto& [k, v] : entry.items()) withdeg[k] = v;
    coh.push_back(std::move(withdeg));
  }
  j["cohomology"] = std::move(coh);
  if (!x.k0.is_zero()) j["k0"] = entry_json(x.k0);
  if (!x.k1.is_zero()) j["k1"] = entry_json(x.k1);
  if (!x.unit_h0.empty()) j["unit_h0"] = int_vector_json(x.unit_h0);
  if (!x.unit_k0.empty()) j["unit_k0"] = int_vector_json(x.unit_k0);
  Json traces = Json::array();
  for (const TraceSpec& t : x.traces) {
    Json tj;
    tj["name"] = t.name;
    auto values = [](const LinearFunctional& f) {
      Json out = Json::array();
      for (const RealExpr& v : f.values) out.push_back(realexpr_json(v));
      return out;
    };
    if (!t.h0.values.empty()) tj["h0"] = values(t.h0);
    if (!t.h1.values.empty()) tj["h1"] = values(t.h1);
    if (!t.k0.values.empty()) tj["k0"] = values(t.k0);
    if (!t.k1.values.empty()) tj["k1"] = values(t.k1);
    traces.push_back(std::move(tj));
  }
  if (!traces.empty()) j["traces"] = std::move(traces);
  return j;
}

inline YModel parse_y_space(const Json& j) {
  check_keys(j,
             {"name", "connected", "dimension_bound", "cohomology", "k0",
              "k1", "unit_k0"},
             "y_space");
  YModel y;
  y.name = j.at("name").get<std::string>();
  std::string where = "y_space '" + y.name + "'";
  if (j.contains("connected")) y.connected = j.at("connected").get<bool>();
  if (j.contains("dimension_bound"))
    y.dimension_bound = j.at("dimension_bound").get<int>();
  if (j.contains("cohomology"))
    for (const auto& entry : j.at("cohomology")) {
      check_keys(entry, {"degree", "group"}, where + ".cohomology");
      int q = entry.at("degree").get<int>();
      y.cohomology[q] =
          parse_group(entry.at("group"), where + ".H^" + std::to_string(q));
    }
  if (j.contains("k0")) y.k0 = parse_group(j.at("k0"), where + ".k0");
  if (j.contains("k1")) y.k1 = parse_group(j.at("k1"), where + ".k1");
  if (j.contains("unit_k0"))
    y.unit_k0 = parse_int_vector(j.at("unit_k0"), where + ".unit_k0");
  return y;
}

inline Json y_space_json(const YModel& y) {
  Json j;
  j["name"] = y.name;
  j["connected"] = y.connected;
  if (y.dimension_bound >= 0) j["dimension_bound"] = y.dimension_bound;
  Json coh = Json::array();
  for (const auto& [q, g] : y.cohomology) {
    Json entry;
    entry["degree"] = q;
    entry["group"] = group_json(g);
    coh.push_back(std::move(entry));
  }
  j["cohomology"] = std::move(coh);
  if (!y.k0.is_trivial() || y.k0.generator_count() > 0)
    j["k0"] = group_json(y.k0);
  if (!y.k1.is_trivial() || y.k1.generator_count() > 0)
    j["k1"] = group_json(y.k1);
  if (!y.unit_k0.empty()) j["unit_k0"] = int_vector_json(y.unit_k0);
  return j;
}

inline EllInvariant parse_invariant_body(const Json& j,
                                         const std::string& where) {
  check_keys(j, {"name", "even", "odd", "unit", "simplex", "traces"}, where);
  EllInvariant inv;
  inv.even = parse_group(j.at("even"), where + ".even");
  inv.odd = j.contains("odd") ? parse_group(j.at("odd"), where + ".odd")
                              : PresentedGroup::trivial();
  inv.unit = parse_int_vector(j.at("unit"), where + ".unit");
  if (j.contains("simplex")) {
    const Json& s = j.at("simplex");
    check_keys(s, {"dimension", "unique_trace"}, where + ".simplex");
    if (s.contains("dimension"))
      inv.simplex.dimension = s.at("dimension").get<int>();
    if (s.contains("unique_trace"))
      inv.simplex.unique_trace = s.at("unique_trace").get<bool>();
  }
  for (const auto& t : j.at("traces")) {
    check_keys(t, {"name", "values"}, where + ".trace");
    TraceFunctional f;
    f.name = t.at("name").get<std::string>();
    f.values = parse_values(t.at("values"), where + ".trace.values");
    inv.traces.push_back(std::move(f));
  }
  try {
    inv.validate();
  } catch (const std::invalid_argument& e) {
    throw ParseError(where + ": " + e.what());
  }
  return inv;
}

inline Json invariant_json(const EllInvariant& inv) {
  Json j;
  j["even"] = group_json(inv.even);
  j["odd"] = group_json(inv.odd);
  j["unit"] = int_vector_json(inv.unit);
  Json s;
  s["dimension"] = inv.simplex.dimension;
  s["unique_trace"] = inv.simplex.unique_trace;
  j["simplex"] = std::move(s);
  Json traces = Json::array();
  for (const TraceFunctional& t : inv.traces) {
    Json tj;
    tj["name"] = t.name;
    Json values = Json::array();
    for (const RealExpr& v : t.values) values.push_back(realexpr_json(v));
    tj["values"] = std::move(values);
    traces.push_back(std::move(tj));
  }
  j["traces"] = std::move(traces);
  return j;
}

}  // namespace modeljson

inline ModelFile parse_model(const Json& j) {
  using namespace modeljson;
  check_keys(j,
             {"schema", "theta", "spaces", "y_spaces", "orbit_breaks",
              "invariants", "homologies", "default"},
             "model");
  ModelFile m;
  if (!j.contains("schema")) throw ParseError("model: missing 'schema'");
  m.schema = j.at("schema").get<std::string>();
  if (m.schema != "gelli/1")
    throw ParseError("model: unsupported schema '" + m.schema + "'");
  if (j.contains("theta")) {
    const Json& t = j.at("theta");
    check_keys(t, {"named", "cf"}, "theta");
    if (t.contains("named")) {
      m.theta_named = t.at("named").get<std::string>();
      if (m.theta_named != "golden" && m.theta_named != "silver")
        throw ParseError("theta: unknown name '" + m.theta_named + "'");
    } else if (t.contains("cf")) {
      m.theta_cf = parse_int_vector(t.at("cf"), "theta.cf");
    }
  }
  if (j.contains("spaces"))
    for (const auto& s : j.at("spaces")) m.spaces.push_back(parse_space(s));
  if (j.contains("y_spaces"))
    for (const auto& y : j.at("y_spaces")) m.y_spaces.push_back(parse_y_space(y));
  if (j.contains("orbit_breaks"))
    for (const auto& ob : j.at("orbit_breaks")) {
      check_keys(ob, {"name", "x", "y", "split_declared"}, "orbit_break");
      OrbitBreakRef ref;
      ref.name = ob.at("name").get<std::string>();
      ref.x = ob.at("x").get<std::string>();
      ref.y = ob.at("y").get<std::string>();
      if (ob.contains("split_declared"))
        ref.split_declared = ob.at("split_declared").get<bool>();
      m.orbit_breaks.push_back(std::move(ref));
    }
  if (j.contains("invariants"))
    for (const auto& inv : j.at("invariants")) {
      NamedInvariant ni;
      ni.name = inv.at("name").get<std::string>();
      ni.invariant =
          modeljson::parse_invariant_body(inv, "invariant '" + ni.name + "'");
      m.invariants.push_back(std::move(ni));
    }
  if (j.contains("homologies"))
    for (const auto& h : j.at("homologies")) {
      check_keys(h, {"name", "entries"}, "homology");
      DeclaredHomology dh;
      dh.name = h.at("name").get<std::string>();
      for (const auto& e : h.at("entries")) {
        check_keys(e, {"degree", "group"}, "homology entry");
        dh.entries.emplace_back(
            e.at("degree").get<int>(),
            modeljson::parse_group(e.at("group"), "homology entry"));
      }
      m.homologies.push_back(std::move(dh));
    }
  if (j.contains("default")) {
    const Json& d = j.at("default");
    modeljson::check_keys(d, {"kind", "name"}, "default");
    m.default_target.kind = d.at("kind").get<std::string>();
    m.default_target.name = d.at("name").get<std::string>();
  } else if (!m.spaces.empty()) {
    m.default_target.kind = "space";
    m.default_target.name = m.spaces.front().name;
  }
  return m;
}

inline ModelFile parse_model_text(const std::string& text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("json: ") + e.what());
  }
  return parse_model(j);
}

inline Json serialize_model(const ModelFile& m) {
  using namespace modeljson;
  Json j;
  j["schema"] = m.schema;
  if (!m.theta_named.empty()) {
    j["theta"] = Json{{"named", m.theta_named}};
  } else if (!m.theta_cf.empty()) {
    Json cf = Json::array();
    for (const Int& t : m.theta_cf) cf.push_back(t.get_str());
    j["theta"] = Json{{"cf", std::move(cf)}};
  }
  if (!m.spaces.empty()) {
    Json arr = Json::array();
    for (const auto& s : m.spaces) arr.push_back(space_json(s));
    j["spaces"] = std::move(arr);
  }
  if (!m.y_spaces.empty()) {
    Json arr = Json::array();
    for (const auto& y : m.y_spaces) arr.push_back(y_space_json(y));
    j["y_spaces"] = std::move(arr);
  }
  if (!m.orbit_breaks.empty()) {
    Json arr = Json::array();
    for (const auto& ob : m.orbit_breaks) {
      Json o;
      o["name"] = ob.name;
      o["x"] = ob.x;
      o["y"] = ob.y;
      o["split_declared"] = ob.split_declared;
      arr.push_back(std::move(o));
    }
    j["orbit_breaks"] = std::move(arr);
  }
  if (!m.invariants.empty()) {
    Json arr = Json::array();
    for (const auto& ni : m.invariants) {
      Json o = invariant_json(ni.invariant);
      Json named;
      named["name"] = ni.name;
      for (auto& [k, v] : o.items()) named[k] = v;
      arr.push_back(std::move(named));
    }
    j["invariants"] = std::move(arr);
  }
  if (!m.homologies.empty()) {
    Json arr = Json::array();
    for (const auto& dh : m.homologies) {
      Json o;
      o["name"] = dh.name;
      Json entries = Json::array();
      for (const auto& [n, g] : dh.entries) {
        Json e;
        e["degree"] = n;
        e["group"] = group_json(g);
        entries.push_back(std::move(e));
      }
      o["entries"] = std::move(entries);
      arr.push_back(std::move(o));
    }
    j["homologies"] = std::move(arr);
  }
  Json d;
  d["kind"] = m.default_target.kind;
  d["name"] = m.default_target.name;
  j["default"] = std::move(d);
  return j;
}

}  // namespace gelli
