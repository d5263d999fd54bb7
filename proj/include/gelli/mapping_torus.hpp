#pragma once

#include <string>
#include <utility>
#include <vector>

#include "gelli/zaction.hpp"

namespace gelli {

struct NotIntegral : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// K-theory of the crossed product by Z via the Pimsner-Voiculescu ends
//   0 -> K^i(X)_Z -> K_i -> K^{i+1}(X)^Z -> 0,
// with the same extension policy as groupoid homology.
struct PvResult {
  GradedEntry k0;
  GradedEntry k1;
  // Class of the unit in K_0: coordinates in the sub summand (which has
  // the K^0(X) generators), and canonical coordinates when resolved.
  std::vector<Int> unit_sub_coords;
  std::vector<Int> unit_canonical;
};

inline PvResult pv_ktheory(const SpaceModel& x) {
  bool trivial = x.action_trivial_everywhere();
  PresentedGroup sub0 = x.k0.coinvariants_group();
  PresentedGroup quot0 = x.k1.invariants_group();
  PresentedGroup sub1 = x.k1.coinvariants_group();
  PresentedGroup quot1 = x.k0.invariants_group();

  PvResult out;
  out.k0 = resolve_extension(sub0, std::move(quot0), trivial);
  out.k1 = resolve_extension(std::move(sub1), std::move(quot1), trivial);

  // The coinvariants presentation keeps the K^0(X) generators, so the unit
  // class has the same coordinates there.
  out.unit_sub_coords = x.unit_k0;
  if (out.k0.resolved && !x.unit_k0.empty()) {
    std::vector<Int> whole(out.k0.group.generator_count(), Int(0));
    for (std::size_t i = 0; i < x.unit_k0.size(); ++i) whole[i] = x.unit_k0[i];
    out.unit_canonical = out.k0.group.canonical_coords(whole);
  }
  return out;
}

// Cohomology of the mapping torus from the short exact sequences
//   0 -> H^{i-1}(X)_Z -> H^i(M_alpha) -> H^i(X)^Z -> 0
// (H^i_c(SX) is identified with H^{i-1}(X) by suspension).
inline GradedInvariant mapping_torus_cohomology(const SpaceModel& x) {
  GradedInvariant out;
  bool trivial = x.action_trivial_everywhere();
  int top = x.max_cohomology_degree();
  for (int i = 0; i <= top + 1; ++i) {
    PresentedGroup sub = i >= 1 ? x.cohomology_at(i - 1).coinvariants_group()
                                : PresentedGroup::trivial();
    PresentedGroup quot = x.cohomology_at(i).invariants_group();
    out.set(i, resolve_extension(std::move(sub), std::move(quot), trivial));
  }
  return out;
}

// Decision data for the two HK-goodness conditions: (i) cohomology vanishes
// above dimension three and the Chern class map is an isomorphism; (ii) an
// integral Chern isomorphism exists and the K^i(X) are free.
struct ChernVerdict {
  bool condition_i = false;
  bool condition_ii = false;
  bool hk_good_predicted = false;
  std::vector<std::string> reasons;
};

namespace detail {
inline bool entry_group_free(const CohomologyEntry& e) {
  if (e.module) return e.module->group().canonical().is_free();
  return e.declared_coinvariants.canonical().is_free() &&
         e.declared_invariants.canonical().is_free();
}
}  // namespace detail

inline ChernVerdict chern_conditions(const SpaceModel& x) {
  ChernVerdict v;
  int top = x.max_cohomology_degree();
  bool vanish_above_3 = top <= 3;
  bool chern = x.chern_integral_effective();
  bool k_free = detail::entry_group_free(x.k0) && detail::entry_group_free(x.k1);

  v.condition_i = vanish_above_3 && chern;
  v.condition_ii = chern && k_free;
  v.hk_good_predicted = v.condition_i || v.condition_ii;

  v.reasons.push_back(vanish_above_3
                          ? "cohomology vanishes above degree 3 (top nonzero degree " +
                                std::to_string(top) + ")"
                          : "cohomology does not vanish above degree 3 (top nonzero degree " +
                                std::to_string(top) + ")");
  if (x.chern_integral_declared)
    v.reasons.push_back("integral Chern isomorphism declared");
  else if (x.spheres_product)
    v.reasons.push_back("integral Chern isomorphism derived: product of spheres");
  else if (x.dimension_bound >= 0 && x.dimension_bound <= 3)
    v.reasons.push_back("integral Chern isomorphism derived: covering dimension " +
                        std::to_string(x.dimension_bound) + " <= 3");
  else
    v.reasons.push_back("no integral Chern isomorphism declared or derivable");
  v.reasons.push_back(k_free ? "K^0(X) and K^1(X) are free"
                             : "K^i(X) has torsion");
  return v;
}

// Z/2-graded ends of the groupoid homology: the even part collects the
// coinvariants in even cohomological degrees and invariants in odd ones.
struct GradedEnds {
  PresentedGroup sub;   // direct sum of coinvariant ends
  PresentedGroup quot;  // direct sum of invariant ends
  PresentedGroup whole;
  std::vector<Int> unit_canonical;  // set on the even part when available
};

// Degreewise identification of the Pimsner-Voiculescu ends with the
// groupoid homology ends, assembled through the mapping torus; integral
// when the Chern conditions pass, otherwise rank-only.
struct ChernCorrespondence {
  bool integral = false;
  GradedEnds k_even, k_odd;
  GradedEnds h_even, h_odd;
  bool even_groups_match = false;
  bool odd_groups_match = false;
  bool even_ranks_match = false;
  bool odd_ranks_match = false;
  bool even_torsion_match = false;
  bool odd_torsion_match = false;
  bool unit_matched = false;
  bool empty = false;
};

namespace detail {
inline GradedEnds z2_ends_of_homology(const SpaceModel& x, int parity) {
  bool trivial = x.action_trivial_everywhere();
  GradedEnds e{PresentedGroup::trivial(), PresentedGroup::trivial(),
               PresentedGroup::trivial(), {}};
  int top = x.max_cohomology_degree();
  for (int n = 1; n >= -top; --n) {
    if (((n % 2) + 2) % 2 != parity) continue;
    GradedEntry entry =
        resolve_extension(x.cohomology_at(-n).coinvariants_group(),
                          x.cohomology_at(1 - n).invariants_group(), trivial);
    if (!entry.resolved)
      throw AmbiguousExtension("homology degree " + std::to_string(n) +
                               " is only known up to extension");
    e.sub = direct_sum(e.sub, entry.sub);
    e.quot = direct_sum(e.quot, entry.quotient);
    e.whole = direct_sum(e.whole, entry.group);
  }
  return e;
}
}  // namespace detail

inline ChernCorrespondence chern_assemble(const SpaceModel& x,
                                          bool rational_mode = false) {
  ChernVerdict verdict = chern_conditions(x);
  if (!rational_mode && !verdict.hk_good_predicted)
    throw NotIntegral("integral mode requested but Chern conditions fail");

  ChernCorrespondence c;
  c.integral = !rational_mode;

  PvResult pv = pv_ktheory(x);
  auto fill_k = [](const GradedEntry& e) {
    if (!e.resolved)
      throw AmbiguousExtension("K-theory parity is only known up to extension");
    return GradedEnds{e.sub, e.quotient, e.group, {}};
  };
  c.k_even = fill_k(pv.k0);
  c.k_odd = fill_k(pv.k1);
  c.k_even.unit_canonical = pv.unit_canonical;

  c.h_even = detail::z2_ends_of_homology(x, 0);
  c.h_odd = detail::z2_ends_of_homology(x, 1);
  if (!x.unit_h0.empty()) {
    // The class of 1 lives in the degree-0 coinvariants of H^0, which is the
    // first block of the even sub summand (degrees descend from 1; degree 1
    // contributes no sub end in parity 0).
    std::vector<Int> whole(c.h_even.whole.generator_count(), Int(0));
    for (std::size_t i = 0; i < x.unit_h0.size(); ++i) whole[i] = x.unit_h0[i];
    c.h_even.unit_canonical = c.h_even.whole.canonical_coords(whole);
  }

  bool all_zero = c.k_even.whole.is_trivial() && c.k_odd.whole.is_trivial() &&
                  c.h_even.whole.is_trivial() && c.h_odd.whole.is_trivial();
  c.empty = all_zero;

  c.even_groups_match = is_isomorphic(c.k_even.whole, c.h_even.whole);
  c.odd_groups_match = is_isomorphic(c.k_odd.whole, c.h_odd.whole);
  c.even_ranks_match = c.k_even.whole.rank() == c.h_even.whole.rank();
  c.odd_ranks_match = c.k_odd.whole.rank() == c.h_odd.whole.rank();
  c.even_torsion_match = c.k_even.whole.canonical().invariant_factors ==
                         c.h_even.whole.canonical().invariant_factors;
  c.odd_torsion_match = c.k_odd.whole.canonical().invariant_factors ==
                        c.h_odd.whole.canonical().invariant_factors;
  c.unit_matched = c.k_even.unit_canonical == c.h_even.unit_canonical;
  return c;
}

}  // namespace gelli
