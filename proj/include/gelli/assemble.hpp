#pragma once

#include <string>
#include <utility>
#include <vector>

#include "gelli/elliott.hpp"
#include "gelli/mapping_torus.hpp"
#include "gelli/zaction.hpp"

namespace gelli {

// Accumulates direct-sum blocks together with a linear functional given on
// the presentation generators of each block; used to assemble the even and
// odd groups of an Elliott invariant with their pairings.
class BlockBuilder {
 public:
  void add(const PresentedGroup& g, const std::vector<RealExpr>& values) {
    if (values.size() != g.generator_count())
      throw std::invalid_argument("block values do not match generators");
    group_ = first_ ? g : direct_sum(group_, g);
    first_ = false;
    values_.insert(values_.end(), values.begin(), values.end());
  }

  void add_zero(const PresentedGroup& g) {
    add(g, std::vector<RealExpr>(g.generator_count()));
  }

  const PresentedGroup& group() const { return group_; }
  const std::vector<RealExpr>& values() const { return values_; }

  // Functional values transported to the canonical generators; throws when
  // the supplied values are not well-defined on the assembled group.
  std::vector<RealExpr> canonical_values() const {
    LinearFunctional f{values_};
    if (!f.kills(group_.relations()))
      throw std::invalid_argument(
          "trace values are not invariant on the assembled group");
    std::vector<RealExpr> out;
    std::size_t n = group_.canonical().generator_count();
    for (std::size_t k = 0; k < n; ++k) {
      std::vector<Int> c(n, Int(0));
      c[k] = 1;
      out.push_back(f.eval(group_.from_canonical(c)));
    }
    return out;
  }

 private:
  bool first_ = true;
  PresentedGroup group_ = PresentedGroup::trivial();
  std::vector<RealExpr> values_;
};

namespace detail {

// Trace values carried onto the invariants subgroup: the declared values on
// the ambient generators composed with the kernel inclusion.  Empty value
// lists mean the zero functional; a nonempty list of the wrong length is an
// input error.
inline std::vector<RealExpr> values_on_invariants(
    const CohomologyEntry& entry, const LinearFunctional& ambient) {
  if (entry.module) {
    KernelResult inv = invariants_with_inclusion(*entry.module);
    if (ambient.values.empty())
      return std::vector<RealExpr>(inv.group.generator_count());
    if (ambient.values.size() != entry.module->group().generator_count())
      throw std::invalid_argument("trace values do not match the module generators");
    const IntMatrix& incl = inv.inclusion.matrix();
    std::vector<RealExpr> out;
    for (std::size_t g = 0; g < inv.group.generator_count(); ++g) {
      RealExpr v;
      for (std::size_t i = 0; i < incl.rows(); ++i)
        v = v + ambient.values[i].scaled(Rat(incl(i, g)));
      out.push_back(v);
    }
    return out;
  }
  // Declared ends: values indexed by the declared invariants generators.
  std::size_t n = entry.declared_invariants.generator_count();
  if (ambient.values.empty()) return std::vector<RealExpr>(n);
  if (ambient.values.size() != n)
    throw std::invalid_argument("trace values do not match the declared invariants");
  return ambient.values;
}

inline std::vector<RealExpr> values_on_coinvariants(
    const CohomologyEntry& entry, const LinearFunctional& ambient) {
  // The cokernel presentation keeps the ambient generators; invariance of
  // the functional is checked when the blocks are assembled.
  std::size_t n = entry.coinvariants_group().generator_count();
  if (ambient.values.empty()) return std::vector<RealExpr>(n);
  if (ambient.values.size() != n)
    throw std::invalid_argument("trace values do not match the generators");
  return ambient.values;
}

}  // namespace detail

// Both sides of the HK comparison for a space with Z-action: the K-theory
// side from the Pimsner-Voiculescu ends, the homology side from the graded
// groups, each with the unit class and the trace pairing (zero outside the
// degree-zero homology).
struct EllPair {
  EllInvariant k_side;
  EllInvariant h_side;
};

inline EllPair space_elliott_pair(const SpaceModel& x) {
  if (x.traces.empty())
    throw std::invalid_argument("space '" + x.name + "' declares no trace");
  const TraceSpec& ts = x.traces.front();
  bool trivial = x.action_trivial_everywhere();

  EllPair out;

  // K side: K_0 = coinv(K^0) + inv(K^1), K_1 = coinv(K^1) + inv(K^0).
  {
    GradedEntry k0 = resolve_extension(x.k0.coinvariants_group(),
                                       x.k1.invariants_group(), trivial);
    GradedEntry k1 = resolve_extension(x.k1.coinvariants_group(),
                                       x.k0.invariants_group(), trivial);
    if (!k0.resolved || !k1.resolved)
      throw AmbiguousExtension("K-theory is only known up to extension");
    BlockBuilder even;
    even.add(k0.sub, detail::values_on_coinvariants(x.k0, ts.k0));
    even.add(k0.quotient, detail::values_on_invariants(x.k1, ts.k1));
    out.k_side.even = even.group();
    out.k_side.odd = k1.group;
    std::vector<Int> unit(even.group().generator_count(), Int(0));
    for (std::size_t i = 0; i < x.unit_k0.size(); ++i) unit[i] = x.unit_k0[i];
    out.k_side.unit = even.group().canonical_coords(unit);
    TraceFunctional f;
    f.name = ts.name;
    f.values = even.canonical_values();
    out.k_side.traces = {std::move(f)};
    out.k_side.simplex = SimplexDescriptor{0, true};
    out.k_side.validate();
  }

  // H side: Z/2-graded homology; the pairing lives on the degree-zero
  // blocks only.
  {
    BlockBuilder even, odd;
    std::vector<Int> unit;
    int top = x.max_cohomology_degree();
    for (int n = 1; n >= -top - 1; --n) {
      GradedEntry e =
          resolve_extension(x.cohomology_at(-n).coinvariants_group(),
                            x.cohomology_at(1 - n).invariants_group(), trivial);
      if (e.is_zero()) continue;
      if (!e.resolved)
        throw AmbiguousExtension("homology degree " + std::to_string(n) +
                                 " is only known up to extension");
      BlockBuilder& side = (((n % 2) + 2) % 2 == 0) ? even : odd;
      if (n == 0) {
        if (unit.empty()) {
          unit.assign(even.group().generator_count(), Int(0));
          for (const Int& c : x.unit_h0) unit.push_back(c);
        }
        side.add(e.sub,
                 detail::values_on_coinvariants(x.cohomology_at(0), ts.h0));
        side.add(e.quotient,
                 detail::values_on_invariants(x.cohomology_at(1), ts.h1));
      } else {
        side.add_zero(e.sub);
        side.add_zero(e.quotient);
      }
    }
    unit.resize(even.group().generator_count(), Int(0));
    out.h_side.even = even.group();
    out.h_side.odd = odd.group();
    out.h_side.unit = even.group().canonical_coords(unit);
    TraceFunctional f;
    f.name = ts.name;
    f.values = even.canonical_values();
    out.h_side.traces = {std::move(f)};
    out.h_side.simplex = SimplexDescriptor{0, true};
    out.h_side.validate();
  }
  return out;
}

}  // namespace gelli
