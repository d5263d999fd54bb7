// Command-line front end: load a model file or built-in fixture, run the
// exact computations, and print deterministic reports.
//
// Exit codes: 0 success, 1 NOT_GOOD where the command decides goodness,
// 2 input error, 3 UNDECIDED.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "gelli/assemble.hpp"
#include "gelli/circle.hpp"
#include "gelli/fixtures.hpp"
#include "gelli/report.hpp"

namespace {

using namespace gelli;

struct CommonOpts {
  std::string model_path;
  std::string fixture;
  std::string theta_spec;
  bool json = false;
  long search_budget = -1;
};

void add_common(CLI::App* cmd, CommonOpts& opts, bool with_budget = false) {
  cmd->add_option("--model", opts.model_path, "path to a model JSON file");
  cmd->add_option("--fixture", opts.fixture, "built-in fixture name");
  cmd->add_option("--theta", opts.theta_spec,
                  "theta as a name (golden, silver) or comma-separated "
                  "continued-fraction terms starting with 0");
  cmd->add_flag("--json", opts.json, "machine-readable report");
  if (with_budget)
    cmd->add_option("--search-budget", opts.search_budget,
                    "candidate cap for the isomorphism search");
}

ModelFile load(const CommonOpts& opts) {
  if (!opts.fixture.empty() && !opts.model_path.empty())
    throw ParseError("pass either --model or --fixture, not both");
  if (!opts.fixture.empty()) return load_fixture(opts.fixture);
  if (!opts.model_path.empty()) {
    std::ifstream in(opts.model_path);
    if (!in) throw ParseError("cannot open '" + opts.model_path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_model_text(buf.str());
  }
  throw ParseError("a --model file or --fixture name is required");
}

Theta resolve_theta(const CommonOpts& opts, const ModelFile* m) {
  if (!opts.theta_spec.empty()) {
    if (opts.theta_spec == "golden") return Theta::golden();
    if (opts.theta_spec == "silver") return Theta::silver();
    std::vector<Int> terms;
    std::stringstream ss(opts.theta_spec);
    std::string tok;
    while (std::getline(ss, tok, ',')) terms.push_back(Int(tok));
    return Theta(terms);
  }
  if (m) return m->theta();
  return Theta::golden();
}

std::string source_label(const CommonOpts& opts) {
  return opts.fixture.empty() ? "model: " + opts.model_path
                              : "fixture: " + opts.fixture;
}

const SpaceModel& pick_space(const ModelFile& m, const std::string& name) {
  if (!name.empty()) {
    const SpaceModel* s = m.find_space(name);
    if (!s) throw ParseError("no space named '" + name + "'");
    return *s;
  }
  if (m.default_target.kind == "space") {
    const SpaceModel* s = m.find_space(m.default_target.name);
    if (s) return *s;
  }
  if (m.spaces.empty()) throw ParseError("model declares no space");
  return m.spaces.front();
}

// The Elliott invariant pair a model compares, depending on its default
// target: a space model, an orbit-breaking setup, or declared invariants.
EllPair comparison_pair(const ModelFile& m) {
  if (m.default_target.kind == "orbit_break") {
    const OrbitBreakRef* ref = m.find_orbit_break(m.default_target.name);
    if (!ref) throw ParseError("default orbit break not found");
    OrbitBreakComparison cmp = orbit_break_compare(m.orbit_break_input(*ref));
    return EllPair{cmp.k_side, cmp.h_side};
  }
  if (m.invariants.size() >= 2)
    return EllPair{m.invariants[0].invariant, m.invariants[1].invariant};
  return space_elliott_pair(pick_space(m, ""));
}

int run_homology(const CommonOpts& opts, const std::string& space_name,
                 std::optional<int> degree) {
  ModelFile m = load(opts);
  std::ostringstream out;
  Json j;
  j["source"] = source_label(opts);

  GradedInvariant graded;
  std::string title;
  if (m.default_target.kind == "orbit_break" && space_name.empty()) {
    const OrbitBreakRef* ref = m.find_orbit_break(m.default_target.name);
    OrbitBreakInput in = m.orbit_break_input(*ref);
    graded = orbit_break_homology(in);
    title = "orbit-breaking groupoid homology (" + ref->name + ")";
    GradedInvariant ambient = groupoid_homology_from_cohomology(in.x);
    out << "ambient system homology (" << in.x.name << "):\n"
        << graded_str(ambient);
    j["ambient"] = graded_json(ambient);
  } else if (m.default_target.kind == "homology" && space_name.empty()) {
    const DeclaredHomology* dh = m.find_homology(m.default_target.name);
    graded = dh->graded();
    title = "declared groupoid homology (" + dh->name + ")";
  } else {
    const SpaceModel& x = pick_space(m, space_name);
    graded = groupoid_homology_from_cohomology(x);
    title = "groupoid homology of Z x " + x.name;
  }

  out << title << ":\n";
  if (degree) {
    GradedEntry e = graded.at(*degree);
    out << "  H_" << *degree << " \u2245 "
        << (e.resolved ? canonical_str(e.group.canonical())
                       : "extension of " +
                             canonical_str(e.quotient.canonical()) + " by " +
                             canonical_str(e.sub.canonical()))
        << "\n";
  } else {
    out << graded_str(graded);
    if (graded.all_resolved()) {
      auto [even, odd] = z2_grade(graded);
      out << "Z/2-graded: even \u2245 " << group_str(even) << ", odd \u2245 "
          << group_str(odd) << "\n";
      j["even"] = group_str(even);
      j["odd"] = group_str(odd);
    }
  }
  j["homology"] = graded_json(graded);
  std::cout << (opts.json ? j.dump(2) + "\n" : out.str());
  return 0;
}

int run_ktheory(const CommonOpts& opts, const std::string& space_name) {
  ModelFile m = load(opts);
  std::ostringstream out;
  Json j;
  j["source"] = source_label(opts);
  out << source_label(opts) << "\n";
  if (m.default_target.kind == "orbit_break" && space_name.empty()) {
    const OrbitBreakRef* ref = m.find_orbit_break(m.default_target.name);
    OrbitBreakKTheory k = orbit_break_ktheory(m.orbit_break_input(*ref));
    out << "K-theory of the orbit-breaking groupoid (" << ref->name << "):\n";
    out << "  K_0 \u2245 "
        << (k.k0.resolved
                ? canonical_str(k.k0.group.canonical())
                : "extension of " + canonical_str(k.k0.quotient.canonical()) +
                      " by " + canonical_str(k.k0.sub.canonical()))
        << "\n";
    out << "  K_1 \u2245 " << group_str(k.k1.group) << "\n";
    j["k0"] = k.k0.resolved ? canonical_str(k.k0.group.canonical())
                            : "ambiguous";
    j["k1"] = group_str(k.k1.group);
  } else {
    const SpaceModel& x = pick_space(m, space_name);
    PvResult pv = pv_ktheory(x);
    out << "Pimsner-Voiculescu K-theory of C(" << x.name << ") x Z:\n";
    out << "  K_0 \u2245 " << group_str(pv.k0.group) << "\n";
    out << "  K_1 \u2245 " << group_str(pv.k1.group) << "\n";
    if (!pv.unit_canonical.empty()) {
      out << "  [1] = (";
      for (std::size_t i = 0; i < pv.unit_canonical.size(); ++i)
        out << (i ? ", " : "") << pv.unit_canonical[i].get_str();
      out << ") in K_0\n";
    }
    j["k0"] = group_str(pv.k0.group);
    j["k1"] = group_str(pv.k1.group);
  }
  std::cout << (opts.json ? j.dump(2) + "\n" : out.str());
  return 0;
}

int run_mapping_torus(const CommonOpts& opts, const std::string& space_name) {
  ModelFile m = load(opts);
  const SpaceModel& x = pick_space(m, space_name);
  GradedInvariant h = mapping_torus_cohomology(x);
  std::ostringstream out;
  out << "mapping torus cohomology of (" << x.name << ", alpha):\n";
  for (const auto& [n, e] : h.entries())
    out << "  H^" << n << " \u2245 "
        << (e.resolved ? canonical_str(e.group.canonical())
                       : "extension of " + canonical_str(e.quotient.canonical()) +
                             " by " + canonical_str(e.sub.canonical()))
        << "\n";
  Json j;
  j["source"] = source_label(opts);
  j["mapping_torus"] = graded_json(h);
  std::cout << (opts.json ? j.dump(2) + "\n" : out.str());
  return 0;
}

int run_chern(const CommonOpts& opts, const std::string& space_name,
              bool rational) {
  ModelFile m = load(opts);
  const SpaceModel& x = pick_space(m, space_name);
  ChernVerdict v = chern_conditions(x);
  std::ostringstream out;
  out << "Chern conditions for " << x.name << ":\n";
  out << "  condition (i)  [low dimension]: " << (v.condition_i ? "pass" : "fail")
      << "\n";
  out << "  condition (ii) [integral Chern, free K-theory]: "
      << (v.condition_ii ? "pass" : "fail") << "\n";
  for (const std::string& r : v.reasons) out << "  - " << r << "\n";
  out << "HK-good predicted: " << (v.hk_good_predicted ? "yes" : "no") << "\n";

  Json j;
  j["source"] = source_label(opts);
  j["condition_i"] = v.condition_i;
  j["condition_ii"] = v.condition_ii;
  j["hk_good_predicted"] = v.hk_good_predicted;
  j["reasons"] = v.reasons;

  if (v.hk_good_predicted || rational) {
    ChernCorrespondence c = chern_assemble(x, rational);
    out << "assembly (" << (c.integral ? "integral" : "rational") << "):\n";
    out << "  K_0 \u2245 " << group_str(c.k_even.whole) << "  vs  H_ev \u2245 "
        << group_str(c.h_even.whole) << "  ["
        << (c.integral ? (c.even_groups_match ? "match" : "mismatch")
                       : (c.even_ranks_match ? "rank match" : "rank mismatch"))
        << "]\n";
    out << "  K_1 \u2245 " << group_str(c.k_odd.whole) << "  vs  H_od \u2245 "
        << group_str(c.h_odd.whole) << "  ["
        << (c.integral ? (c.odd_groups_match ? "match" : "mismatch")
                       : (c.odd_ranks_match ? "rank match" : "rank mismatch"))
        << "]\n";
    if (!rational)
      out << "  unit: " << (c.unit_matched ? "matched" : "not matched") << "\n";
    if (rational && (!c.even_torsion_match || !c.odd_torsion_match))
      out << "  torsion flagged mismatched\n";
    j["even_match"] = c.integral ? c.even_groups_match : c.even_ranks_match;
    j["odd_match"] = c.integral ? c.odd_groups_match : c.odd_ranks_match;
  }
  std::cout << (opts.json ? j.dump(2) + "\n" : out.str());
  return 0;
}

// Cycle expressions: terms joined by '+'; each term is phi0[:k] or
// phi1[:m][@p/q], e.g. "phi0:2+phi1" or "phi1:3@1/4".
H0Chain parse_cycle(const std::string& expr, const Theta& th) {
  H0Chain total;
  std::stringstream ss(expr);
  std::string term;
  bool first = true;
  while (std::getline(ss, term, '+')) {
    H0Chain part;
    if (term.rfind("phi0", 0) == 0) {
      Int k(1);
      if (term.size() > 4 && term[4] == ':') k = Int(term.substr(5));
      part = phi0(k);
    } else if (term.rfind("phi1", 0) == 0) {
      Int coeff(1);
      Rat at(0);
      std::string rest = term.substr(4);
      auto at_pos = rest.find('@');
      std::string coeff_part =
          at_pos == std::string::npos ? rest : rest.substr(0, at_pos);
      if (!coeff_part.empty() && coeff_part[0] == ':')
        coeff = Int(coeff_part.substr(1));
      if (at_pos != std::string::npos)
        at = parse_rat(rest.substr(at_pos + 1));
      part = phi1(JumpFn::single(CirclePoint::make(at, Int(0), th), coeff, th),
                  th);
    } else {
      throw ParseError("unknown cycle term '" + term + "'");
    }
    total = first ? part : total.plus(part, th);
    first = false;
  }
  if (first) throw ParseError("empty cycle expression");
  return total;
}

int run_circle_pair(const CommonOpts& opts, const std::string& cycle_expr) {
  Theta th = resolve_theta(opts, nullptr);
  H0Chain c = parse_cycle(cycle_expr, th);
  if (!is_cycle(c, th)) throw ParseError("expression is not a cycle");
  NormalizedCycle n = normalize_cycle(c, th);
  RealExpr pairing = pair_lebesgue(c, th);
  RealExpr dhs = lambda_tau(mapping_torus_rep(c, th), th);
  std::ostringstream out;
  out << "cycle: " << cycle_expr << "\n";
  out << "normalized class: n = " << n.n.get_str() << ", m = " << n.m.get_str()
      << " (" << n.trace.size() << " reduction moves)\n";
  out << "pairing with Lebesgue measure: " << realexpr_str(pairing) << "\n";
  out << "mapping torus determinant: " << realexpr_str(dhs) << "\n";
  Json j;
  j["cycle"] = cycle_expr;
  j["n"] = n.n.get_str();
  j["m"] = n.m.get_str();
  j["pairing"] = realexpr_str(pairing);
  std::cout << (opts.json ? j.dump(2) + "\n" : out.str());
  return 0;
}

int run_orbit_break(const CommonOpts& opts, const std::string& name) {
  ModelFile m = load(opts);
  const OrbitBreakRef* ref = nullptr;
  if (!name.empty())
    ref = m.find_orbit_break(name);
  else if (m.default_target.kind == "orbit_break")
    ref = m.find_orbit_break(m.default_target.name);
  else if (!m.orbit_breaks.empty())
    ref = &m.orbit_breaks.front();
  if (!ref) throw ParseError("no orbit-breaking setup in the model");
  OrbitBreakInput in = m.orbit_break_input(*ref);

  OrbitBreakLes les = orbit_break_les(in);
  GradedInvariant h = orbit_break_homology(in);
  OrbitBreakKTheory k = orbit_break_ktheory(in);

  std::ostringstream out;
  out << "orbit break: " << ref->name << " (X = " << ref->x << ", Y = "
      << ref->y << ")\n";
  out << "long exact sequence nodes:\n";
  for (const auto& [nm, g] : les.nodes)
    out << "  " << nm << " \u2245 " << group_str(g) << "\n";
  out << "exactness: " << (les.exactness.exact ? "verified" : "FAILED") << "\n";
  out << "degree-one isomorphism H_1(R_phi) -> H^0(Y): "
      << (les.degree_one_iso ? "recorded" : "not applicable") << "\n";
  out << "homology of R_Y:\n" << graded_str(h);
  out << "K-theory of R_Y:\n";
  out << "  K_0 \u2245 "
      << (k.k0.resolved ? canonical_str(k.k0.group.canonical())
                        : "extension of " +
                              canonical_str(k.k0.quotient.canonical()) +
                              " by " + canonical_str(k.k0.sub.canonical()))
      << "\n";
  out << "  K_1 \u2245 " << group_str(k.k1.group) << "\n";

  Json j;
  j["source"] = source_label(opts);
  j["orbit_break"] = ref->name;
  j["exact"] = les.exactness.exact;
  j["homology"] = graded_json(h);
  std::cout << (opts.json ? j.dump(2) + "\n" : out.str());
  return les.exactness.exact ? 0 : 1;
}

int run_elliott(const CommonOpts& opts) {
  ModelFile m = load(opts);
  EllPair pair = comparison_pair(m);
  std::ostringstream out;
  out << source_label(opts) << "\n";
  out << "K-theory side:\n" << invariant_str(pair.k_side);
  out << "homology side:\n" << invariant_str(pair.h_side);
  Json j;
  j["source"] = source_label(opts);
  j["k_side"] = modeljson::invariant_json(pair.k_side);
  j["h_side"] = modeljson::invariant_json(pair.h_side);
  std::cout << (opts.json ? j.dump(2) + "\n" : out.str());
  return 0;
}

int run_hk_check(const CommonOpts& opts) {
  ModelFile m = load(opts);
  EllPair pair = comparison_pair(m);
  HkSearchBudget budget;
  if (opts.search_budget >= 0) {
    budget.max_free_candidates = opts.search_budget;
    budget.max_torsion_candidates = opts.search_budget;
  }
  HkVerdict v = hk_check(pair.k_side, pair.h_side, budget);
  std::ostringstream out;
  out << source_label(opts) << "\n";
  out << "even: K \u2245 " << group_str(pair.k_side.even) << "  vs  H \u2245 "
      << group_str(pair.h_side.even) << "\n";
  out << "odd:  K \u2245 " << group_str(pair.k_side.odd) << "  vs  H \u2245 "
      << group_str(pair.h_side.odd) << "\n";
  out << "verdict: " << hk_status_str(v);
  if (v.status == HkStatus::NotGood)
    out << " (" << hk_layer_str(v.failing_layer) << " layer)";
  out << "\n";
  if (!v.detail.empty()) out << "  " << v.detail << "\n";
  if (v.witness) {
    out << "witness even isomorphism on canonical generators:\n";
    for (std::size_t i = 0; i < v.witness->even_iso.rows(); ++i) {
      out << "  [";
      for (std::size_t jx = 0; jx < v.witness->even_iso.cols(); ++jx)
        out << (jx ? " " : "") << v.witness->even_iso(i, jx).get_str();
      out << "]\n";
    }
  }
  Json j;
  j["source"] = source_label(opts);
  j["verdict"] = hk_status_str(v);
  j["layer"] = hk_layer_str(v.failing_layer);
  j["detail"] = v.detail;
  std::cout << (opts.json ? j.dump(2) + "\n" : out.str());
  if (v.status == HkStatus::Good) return 0;
  if (v.status == HkStatus::NotGood) return 1;
  return 3;
}

int run_fixtures(bool all, bool json) {
  if (!all) {
    if (json) {
      Json j = Json::array();
      for (const std::string& name : fixture_names()) j.push_back(name);
      std::cout << j.dump(2) << "\n";
    } else {
      for (const std::string& name : fixture_names())
        std::cout << name << "\n";
    }
    return 0;
  }
  Json all_json = Json::array();
  for (const std::string& name : fixture_names()) {
    CommonOpts opts;
    opts.fixture = name;
    ModelFile m = load(opts);
    if (!json) std::cout << "== " << name << " ==\n";
    try {
      EllPair pair = comparison_pair(m);
      HkVerdict v = hk_check(pair.k_side, pair.h_side);
      if (!json) {
        std::cout << "hk-check: " << hk_status_str(v);
        if (v.status == HkStatus::NotGood)
          std::cout << " (" << hk_layer_str(v.failing_layer) << " layer)";
        std::cout << "\n";
      }
      Json j;
      j["fixture"] = name;
      j["verdict"] = hk_status_str(v);
      all_json.push_back(std::move(j));
    } catch (const std::exception& e) {
      if (!json) std::cout << "error: " << e.what() << "\n";
      Json j;
      j["fixture"] = name;
      j["error"] = e.what();
      all_json.push_back(std::move(j));
    }
  }
  if (json) std::cout << all_json.dump(2) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"exact groupoid Elliott invariants for Z-actions"};
  app.require_subcommand(1);

  CommonOpts opts;
  std::string space_name, ob_name, cycle_expr = "phi1";
  std::optional<int> degree;
  bool rational = false, all_fixtures = false;

  auto* homology = app.add_subcommand("homology", "Z-graded groupoid homology");
  add_common(homology, opts);
  homology->add_option("--space", space_name, "space model to use");
  int degree_value = 0;
  auto* degree_opt =
      homology->add_option("--degree", degree_value, "single degree to print");

  auto* ktheory = app.add_subcommand("ktheory", "crossed product K-theory");
  add_common(ktheory, opts);
  ktheory->add_option("--space", space_name, "space model to use");

  auto* torus = app.add_subcommand("mapping-torus", "mapping torus cohomology");
  add_common(torus, opts);
  torus->add_option("--space", space_name, "space model to use");

  auto* chern = app.add_subcommand("chern", "integral Chern conditions");
  add_common(chern, opts);
  chern->add_option("--space", space_name, "space model to use");
  chern->add_flag("--rational", rational, "rank-only rational assembly");

  auto* circle = app.add_subcommand("circle-pair",
                                    "irrational rotation pairing at cycle level");
  add_common(circle, opts);
  circle->add_option("--cycle", cycle_expr,
                     "cycle expression, e.g. phi0:2+phi1:3@1/4");

  auto* orbit = app.add_subcommand("orbit-break",
                                   "orbit-breaking homology, K-theory, LES");
  add_common(orbit, opts);
  orbit->add_option("--name", ob_name, "orbit-break setup to use");

  auto* elliott = app.add_subcommand("elliott", "Elliott invariant records");
  add_common(elliott, opts);

  auto* hk = app.add_subcommand("hk-check", "decide HK-goodness");
  add_common(hk, opts, true);

  auto* fixtures = app.add_subcommand("fixtures", "list built-in fixtures");
  fixtures->add_flag("--all", all_fixtures, "run every fixture");
  fixtures->add_flag("--json", opts.json, "machine-readable report");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*degree_opt) degree = degree_value;
    if (homology->parsed()) return run_homology(opts, space_name, degree);
    if (ktheory->parsed()) return run_ktheory(opts, space_name);
    if (torus->parsed()) return run_mapping_torus(opts, space_name);
    if (chern->parsed()) return run_chern(opts, space_name, rational);
    if (circle->parsed()) return run_circle_pair(opts, cycle_expr);
    if (orbit->parsed()) return run_orbit_break(opts, ob_name);
    if (elliott->parsed()) return run_elliott(opts);
    if (hk->parsed()) return run_hk_check(opts);
    if (fixtures->parsed()) return run_fixtures(all_fixtures, opts.json);
  } catch (const ParseError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 2;
  } catch (const PrecisionExhausted& e) {
    std::cerr << "precision exhausted: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
