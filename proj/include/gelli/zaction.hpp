#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "gelli/complexes.hpp"
#include "gelli/realexpr.hpp"

namespace gelli {

struct NonCommuting : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct AmbiguousExtension : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct HypothesisViolated : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A Z-module: presented group with an automorphism giving the action of
// the generator of Z.  Invertibility is certified at construction.
class ZModule {
 public:
  ZModule(PresentedGroup group, GroupHom alpha)
      : g_(std::move(group)), alpha_(std::move(alpha)) {
    if (!(alpha_.source() == g_) || !(alpha_.target() == g_))
      throw std::invalid_argument("action endomorphism must act on the group");
    auto beta = inverse_hom(alpha_);
    if (!beta)
      throw std::invalid_argument("action is not invertible");
    beta_.emplace(std::move(*beta));
  }

  static ZModule trivial_action(PresentedGroup group) {
    GroupHom id = GroupHom::identity(group);
    return ZModule(std::move(group), std::move(id));
  }

  static ZModule zero() { return trivial_action(PresentedGroup::trivial()); }

  const PresentedGroup& group() const { return g_; }
  const GroupHom& alpha() const { return alpha_; }
  const GroupHom& alpha_inverse() const { return *beta_; }

  GroupHom delta() const {  // id - alpha
    return GroupHom::identity(g_) - alpha_;
  }

  bool action_is_identity() const {
    return alpha_.equals_map(GroupHom::identity(g_));
  }

 private:
  PresentedGroup g_;
  GroupHom alpha_;
  std::optional<GroupHom> beta_;
};

inline PresentedGroup invariants(const ZModule& m) {
  return kernel(m.delta()).group;
}

inline KernelResult invariants_with_inclusion(const ZModule& m) {
  return kernel(m.delta());
}

inline PresentedGroup coinvariants(const ZModule& m) {
  return cokernel(m.delta()).group;
}

// One degree of a graded invariant: either the exact group, or the two
// ends of an unresolved extension 0 -> sub -> ? -> quotient -> 0.
struct GradedEntry {
  bool resolved = true;
  PresentedGroup group;      // meaningful when resolved
  PresentedGroup sub;        // extension ends, kept in both cases
  PresentedGroup quotient;

  static GradedEntry make_resolved(PresentedGroup g, PresentedGroup s,
                                   PresentedGroup q) {
    return GradedEntry{true, std::move(g), std::move(s), std::move(q)};
  }
  static GradedEntry make_ambiguous(PresentedGroup s, PresentedGroup q) {
    return GradedEntry{false, PresentedGroup::trivial(), std::move(s),
                       std::move(q)};
  }
  bool is_zero() const {
    return resolved ? group.is_trivial()
                    : (sub.is_trivial() && quotient.is_trivial());
  }
};

// Z-graded family of presented groups with optional extension ambiguity.
class GradedInvariant {
 public:
  GradedInvariant() = default;

  void set(int degree, GradedEntry e) {
    if (e.is_zero()) return;
    entries_.insert_or_assign(degree, std::move(e));
  }

  void set_resolved(int degree, PresentedGroup g) {
    if (g.is_trivial()) return;
    GradedEntry e = GradedEntry::make_resolved(g, g, PresentedGroup::trivial());
    entries_.insert_or_assign(degree, std::move(e));
  }

  const std::map<int, GradedEntry>& entries() const { return entries_; }

  GradedEntry at(int degree) const {
    auto it = entries_.find(degree);
    if (it != entries_.end()) return it->second;
    return GradedEntry{true, PresentedGroup::trivial(),
                       PresentedGroup::trivial(), PresentedGroup::trivial()};
  }

  PresentedGroup group_at(int degree) const {
    GradedEntry e = at(degree);
    if (!e.resolved)
      throw AmbiguousExtension("degree " + std::to_string(degree) +
                               " is only known up to extension");
    return e.group;
  }

  bool all_resolved() const {
    for (const auto& [n, e] : entries_)
      if (!e.resolved) return false;
    return true;
  }

 private:
  std::map<int, GradedEntry> entries_;
};

// even = sum of H_{2m}, odd = sum of H_{2m+1}; degrees descending so the
// assembled generator order is reproducible.
inline std::pair<PresentedGroup, PresentedGroup> z2_grade(
    const GradedInvariant& g) {
  PresentedGroup even = PresentedGroup::trivial();
  PresentedGroup odd = PresentedGroup::trivial();
  for (auto it = g.entries().rbegin(); it != g.entries().rend(); ++it) {
    if (!it->second.resolved)
      throw AmbiguousExtension("degree " + std::to_string(it->first) +
                               " is only known up to extension");
    auto& side = (it->first % 2 == 0) ? even : odd;
    side = direct_sum(side, it->second.group);
  }
  return {std::move(even), std::move(odd)};
}

// Group hyperhomology of Z with coefficients in a chain complex carrying a
// commuting action: computed from the two-term free resolution of Z as the
// homology of the mapping cone of (id - alpha).
inline GradedInvariant hyperhomology_z(const ChainComplex& c,
                                       const std::map<int, GroupHom>& alphas) {
  std::map<int, GroupHom> delta;
  for (const auto& [n, g] : c.objects()) {
    auto it = alphas.find(n);
    GroupHom a = it != alphas.end() ? it->second : GroupHom::identity(g);
    if (!(a.source() == g) || !(a.target() == g))
      throw NonCommuting("action endpoints mismatch at degree " +
                         std::to_string(n));
    delta.emplace(n, GroupHom::identity(g) - a);
  }
  ChainComplex cone = [&] {
    try {
      ComplexMap f(c, c, delta);  // commuting with differentials checked here
      return mapping_cone(f);
    } catch (const std::invalid_argument& e) {
      throw NonCommuting(e.what());
    }
  }();
  GradedInvariant out;
  for (int n = cone.min_degree(); n <= cone.max_degree(); ++n)
    out.set_resolved(n, homology(cone, n));
  return out;
}

// Per-degree cohomology input for a space with Z-action: either an honest
// module (ends computed), or ends declared directly.  Declared ends cover
// the Cantor-type inputs whose full section module is not finitely
// generated; only the coinvariants / invariants enter the formulas.
struct CohomologyEntry {
  std::optional<ZModule> module;
  PresentedGroup declared_coinvariants = PresentedGroup::trivial();
  PresentedGroup declared_invariants = PresentedGroup::trivial();

  static CohomologyEntry of_module(ZModule m) {
    CohomologyEntry e;
    e.module.emplace(std::move(m));
    return e;
  }
  static CohomologyEntry declared(PresentedGroup coinv, PresentedGroup inv) {
    CohomologyEntry e;
    e.declared_coinvariants = std::move(coinv);
    e.declared_invariants = std::move(inv);
    return e;
  }

  PresentedGroup coinvariants_group() const {
    return module ? coinvariants(*module) : declared_coinvariants;
  }
  PresentedGroup invariants_group() const {
    return module ? invariants(*module) : declared_invariants;
  }
  bool trivial_action() const {
    return module ? module->action_is_identity() : false;
  }
  bool is_zero() const {
    return module ? module->group().is_trivial()
                  : (declared_coinvariants.is_trivial() &&
                     declared_invariants.is_trivial());
  }
};

// Exact value of a trace against a group: rational row vector over the
// group generators, with coefficients in Q + Q*theta.
struct LinearFunctional {
  std::vector<RealExpr> values;  // one per presentation generator

  RealExpr eval(const std::vector<Int>& coords) const {
    RealExpr out;
    for (std::size_t i = 0; i < values.size(); ++i)
      out = out + values[i].scaled(Rat(coords[i]));
    return out;
  }

  // Well-defined on the group iff it kills the relation lattice.
  bool kills(const IntMatrix& relations) const {
    for (std::size_t j = 0; j < relations.cols(); ++j)
      if (!eval(relations.col(j)).is_zero()) return false;
    return true;
  }
};

// Trace declaration on a space model: functionals on the cohomology and
// K-theory generator coordinates.  Invariance (functional kills id - alpha)
// is validated where the data is used.
struct TraceSpec {
  std::string name;
  LinearFunctional h0;
  LinearFunctional h1;
  LinearFunctional k0;
  LinearFunctional k1;
};

// A space with Z-action, at the level the formulas consume: cohomology and
// K-theory modules with the induced automorphisms, unit classes, traces,
// and the declared topological flags.
struct SpaceModel {
  std::string name;
  std::map<int, CohomologyEntry> cohomology;  // degree q -> H^q data
  CohomologyEntry k0;
  CohomologyEntry k1;
  std::vector<Int> unit_h0;  // class of 1 in H^0 generator coords
  std::vector<Int> unit_k0;  // class of 1 in K^0 generator coords
  std::vector<TraceSpec> traces;

  bool connected = true;
  int dimension_bound = -1;        // -1: not declared
  bool cup_trivial_declared = false;
  bool chern_integral_declared = false;
  bool spheres_product = false;    // finite product of spheres (incl. tori)
  bool free_action = false;
  bool minimal_action = false;
  bool compact = true;

  const CohomologyEntry& cohomology_at(int q) const {
    static const CohomologyEntry zero{};
    auto it = cohomology.find(q);
    return it == cohomology.end() ? zero : it->second;
  }

  int max_cohomology_degree() const {
    int m = -1;
    for (const auto& [q, e] : cohomology)
      if (!e.is_zero() && q > m) m = q;
    return m;
  }

  bool action_trivial_everywhere() const {
    for (const auto& [q, e] : cohomology) {
      (void)q;
      if (!e.is_zero() && !e.trivial_action()) return false;
    }
    if (!k0.is_zero() && !k0.trivial_action()) return false;
    if (!k1.is_zero() && !k1.trivial_action()) return false;
    return true;
  }

  // Effective integral-Chern flag: declared, or derived from the Appendix
  // cases (dimension at most three; products of spheres).
  bool chern_integral_effective() const {
    return chern_integral_declared || spheres_product ||
           (dimension_bound >= 0 && dimension_bound <= 3);
  }

  bool cup_trivial_effective() const {
    if (cup_trivial_declared || spheres_product) return true;
    // Positive even cup products land above the top nonzero degree.
    return max_cohomology_degree() <= 3;
  }
};

// Resolution policy for the extension 0 -> sub -> ? -> quotient -> 0:
// split when the quotient is free, or when the action is trivial in every
// degree (mapping torus is then a product with the circle).
inline GradedEntry resolve_extension(PresentedGroup sub, PresentedGroup quot,
                                     bool trivial_action) {
  if (quot.canonical().is_free() || trivial_action) {
    PresentedGroup whole = direct_sum(sub, quot);
    return GradedEntry::make_resolved(std::move(whole), std::move(sub),
                                      std::move(quot));
  }
  return GradedEntry::make_ambiguous(std::move(sub), std::move(quot));
}

// Groupoid homology of Z acting on X from the short exact sequences
//   0 -> H^{-n}(X)_Z -> H_n(Z x X) -> H^{1-n}(X)^Z -> 0;
// degree 1 degenerates to the invariants of H^0, degrees above 1 vanish.
inline GradedInvariant groupoid_homology_from_cohomology(const SpaceModel& x) {
  GradedInvariant out;
  bool trivial = x.action_trivial_everywhere();
  int top = x.max_cohomology_degree();
  for (int n = 1; n >= -top; --n) {
    PresentedGroup sub = x.cohomology_at(-n).coinvariants_group();
    PresentedGroup quot = x.cohomology_at(1 - n).invariants_group();
    out.set(n, resolve_extension(std::move(sub), std::move(quot), trivial));
  }
  return out;
}

}  // namespace gelli
