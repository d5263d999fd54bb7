#pragma once

#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <utility>
#include <vector>

#include "gelli/abelian.hpp"

namespace gelli {

struct LiftFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Chain complex of presented groups with finite degree support.
// Missing degrees are the zero group; differentials go degree n -> n-1
// and must compose to zero (checked at construction).
class ChainComplex {
 public:
  ChainComplex() = default;

  ChainComplex(std::map<int, PresentedGroup> objects,
               std::map<int, GroupHom> differentials)
      : obj_(std::move(objects)), diff_(std::move(differentials)) {
    for (const auto& [n, d] : diff_) {
      if (!(d.source() == object(n)) || !(d.target() == object(n - 1)))
        throw std::invalid_argument("differential endpoints mismatch at degree " +
                                    std::to_string(n));
    }
    for (const auto& [n, d] : diff_) {
      auto above = diff_.find(n + 1);
      if (above == diff_.end()) continue;
      if (!d.compose_after(above->second).is_zero_map())
        throw std::invalid_argument("d^2 != 0 at degree " + std::to_string(n + 1));
    }
  }

  // Complex concentrated in one degree.
  static ChainComplex concentrated(int degree, PresentedGroup g) {
    std::map<int, PresentedGroup> obj;
    obj[degree] = std::move(g);
    return ChainComplex(std::move(obj), {});
  }

  const PresentedGroup& object(int n) const {
    auto it = obj_.find(n);
    return it == obj_.end() ? zero_group() : it->second;
  }

  GroupHom differential(int n) const {
    auto it = diff_.find(n);
    if (it != diff_.end()) return it->second;
    return GroupHom::zero(object(n), object(n - 1));
  }

  const std::map<int, PresentedGroup>& objects() const { return obj_; }

  int min_degree() const { return obj_.empty() ? 0 : obj_.begin()->first; }
  int max_degree() const { return obj_.empty() ? 0 : obj_.rbegin()->first; }

  ChainComplex shift(int k) const {
    std::map<int, PresentedGroup> obj;
    std::map<int, GroupHom> diff;
    for (const auto& [n, g] : obj_) obj[n + k] = g;
    for (const auto& [n, d] : diff_) diff.emplace(n + k, d);
    return ChainComplex(std::move(obj), std::move(diff));
  }

 private:
  static const PresentedGroup& zero_group() {
    static const PresentedGroup z = PresentedGroup::trivial();
    return z;
  }

  std::map<int, PresentedGroup> obj_;
  std::map<int, GroupHom> diff_;
};

// Homology at a fixed degree, carrying explicit cycle representatives:
// the columns of `cycle_basis` are cycles in C_n generating H_n, one per
// generator of the presented homology group.
struct HomologyData {
  PresentedGroup group;
  IntMatrix cycle_basis;

  // Coordinates of a cycle (element of C_n with boundary zero in C_{n-1})
  // on the homology presentation generators.
  std::vector<Int> express(const std::vector<Int>& cycle) const {
    auto c = solve(cycle_basis, cycle);
    if (!c) throw std::invalid_argument("element is not a cycle");
    return *c;
  }
};

inline HomologyData homology_data(const ChainComplex& c, int n) {
  GroupHom dn = c.differential(n);
  GroupHom dnext = c.differential(n + 1);
  IntMatrix basis = cycle_lattice(dn.matrix(), dn.target().relations());
  IntMatrix killers =
      c.object(n).relations().hcat(dnext.matrix());
  IntMatrix rel = coords_in_basis(basis, killers);
  return HomologyData{PresentedGroup(basis.cols(), rel), basis};
}

inline PresentedGroup homology(const ChainComplex& c, int n) {
  return homology_data(c, n).group;
}

// Map of chain complexes; commutes with differentials (checked).
class ComplexMap {
 public:
  ComplexMap(ChainComplex source, ChainComplex target,
             std::map<int, GroupHom> components)
      : src_(std::move(source)),
        tgt_(std::move(target)),
        comp_(std::move(components)) {
    int lo = std::min(src_.min_degree(), tgt_.min_degree());
    int hi = std::max(src_.max_degree(), tgt_.max_degree());
    for (const auto& [n, f] : comp_) {
      if (!(f.source() == src_.object(n)) || !(f.target() == tgt_.object(n)))
        throw std::invalid_argument("component endpoints mismatch at degree " +
                                    std::to_string(n));
    }
    for (int n = lo; n <= hi; ++n) {
      GroupHom lhs = tgt_.differential(n).compose_after(component(n));
      GroupHom rhs = component(n - 1).compose_after(src_.differential(n));
      if (!lhs.equals_map(rhs))
        throw std::invalid_argument("map does not commute with differentials at degree " +
                                    std::to_string(n));
    }
  }

  static ComplexMap identity(const ChainComplex& c) {
    std::map<int, GroupHom> comp;
    for (const auto& [n, g] : c.objects()) comp.emplace(n, GroupHom::identity(g));
    return ComplexMap(c, c, std::move(comp));
  }

  static ComplexMap zero(const ChainComplex& s, const ChainComplex& t) {
    return ComplexMap(s, t, {});
  }

  const ChainComplex& source() const { return src_; }
  const ChainComplex& target() const { return tgt_; }

  GroupHom component(int n) const {
    auto it = comp_.find(n);
    if (it != comp_.end()) return it->second;
    return GroupHom::zero(src_.object(n), tgt_.object(n));
  }

 private:
  ChainComplex src_, tgt_;
  std::map<int, GroupHom> comp_;
};

// cone(f)_n = target_n + source_{n-1}, d(x, y) = (d x + f y, -d y).
inline ChainComplex mapping_cone(const ComplexMap& f) {
  const ChainComplex& s = f.source();
  const ChainComplex& t = f.target();
  int lo = std::min(s.min_degree() + 1, t.min_degree());
  int hi = std::max(s.max_degree() + 1, t.max_degree());

  std::map<int, PresentedGroup> obj;
  for (int n = lo; n <= hi; ++n) {
    PresentedGroup g = direct_sum(t.object(n), s.object(n - 1));
    if (g.generator_count() > 0 || !g.is_trivial()) obj[n] = std::move(g);
  }
  std::map<int, GroupHom> diff;
  for (int n = lo; n <= hi + 1; ++n) {
    auto here = obj.find(n);
    if (here == obj.end()) continue;
    PresentedGroup below = n - 1 >= lo && obj.count(n - 1)
                               ? obj.at(n - 1)
                               : direct_sum(t.object(n - 1), s.object(n - 2));
    std::size_t tn = t.object(n).generator_count();
    std::size_t sn1 = s.object(n - 1).generator_count();
    std::size_t tn1 = t.object(n - 1).generator_count();
    std::size_t sn2 = s.object(n - 2).generator_count();
    IntMatrix m(tn1 + sn2, tn + sn1);
    IntMatrix dt = t.differential(n).matrix();
    IntMatrix fm = f.component(n - 1).matrix();
    IntMatrix ds = s.differential(n - 1).matrix();
    for (std::size_t i = 0; i < tn1; ++i) {
      for (std::size_t j = 0; j < tn; ++j) m(i, j) = dt(i, j);
      for (std::size_t j = 0; j < sn1; ++j) m(i, tn + j) = fm(i, j);
    }
    for (std::size_t i = 0; i < sn2; ++i)
      for (std::size_t j = 0; j < sn1; ++j) m(tn1 + i, tn + j) = -ds(i, j);
    diff.emplace(n, GroupHom(here->second, below, std::move(m)));
  }
  return ChainComplex(std::move(obj), std::move(diff));
}

// Short exact sequence of chain complexes 0 -> A -> B -> C -> 0.
struct ComplexSES {
  ComplexMap inclusion;   // A -> B
  ComplexMap projection;  // B -> C
};

// The canonical SES 0 -> target -> cone(f) -> source[-1] -> 0.
inline ComplexSES cone_ses(const ComplexMap& f) {
  ChainComplex cone = mapping_cone(f);
  const ChainComplex& s = f.source();
  const ChainComplex& t = f.target();
  ChainComplex shifted = s.shift(1);
  // The shifted copy appears in the cone with negated differential.
  {
    std::map<int, PresentedGroup> obj = shifted.objects();
    std::map<int, GroupHom> diff;
    for (const auto& [n, g] : obj) {
      GroupHom d = shifted.differential(n);
      diff.emplace(n, GroupHom(d.source(), d.target(), -d.matrix()));
    }
    shifted = ChainComplex(std::move(obj), std::move(diff));
  }

  std::map<int, GroupHom> incl, proj;
  for (const auto& [n, g] : cone.objects()) {
    std::size_t tn = t.object(n).generator_count();
    std::size_t sn1 = s.object(n - 1).generator_count();
    IntMatrix mi(tn + sn1, tn);
    for (std::size_t i = 0; i < tn; ++i) mi(i, i) = 1;
    incl.emplace(n, GroupHom(t.object(n), g, std::move(mi)));
    IntMatrix mp(sn1, tn + sn1);
    for (std::size_t i = 0; i < sn1; ++i) mp(i, tn + i) = 1;
    proj.emplace(n, GroupHom(g, shifted.object(n), std::move(mp)));
  }
  return ComplexSES{ComplexMap(t, cone, std::move(incl)),
                    ComplexMap(cone, shifted, std::move(proj))};
}

// Degreewise exactness of the SES; throws if violated.
inline void check_ses(const ComplexSES& ses) {
  const ChainComplex& a = ses.inclusion.source();
  const ChainComplex& b = ses.inclusion.target();
  const ChainComplex& c = ses.projection.target();
  if (!(ses.projection.source().objects() == b.objects()))
    throw std::invalid_argument("SES middle complexes disagree");
  int lo = std::min(a.min_degree(), std::min(b.min_degree(), c.min_degree()));
  int hi = std::max(a.max_degree(), std::max(b.max_degree(), c.max_degree()));
  for (int n = lo; n <= hi; ++n) {
    GroupHom i = ses.inclusion.component(n);
    GroupHom p = ses.projection.component(n);
    if (!kernel(i).group.is_trivial())
      throw std::invalid_argument("SES inclusion not injective at degree " +
                                  std::to_string(n));
    if (!cokernel(p).group.is_trivial())
      throw std::invalid_argument("SES projection not surjective at degree " +
                                  std::to_string(n));
    IntMatrix image = i.matrix().hcat(b.object(n).relations());
    IntMatrix ker = cycle_lattice(p.matrix(), c.object(n).relations());
    if (!same_column_span(image, ker))
      throw std::invalid_argument("SES not exact in the middle at degree " +
                                  std::to_string(n));
  }
}

// Snake-lemma connecting map H_n(C) -> H_{n-1}(A), computed constructively
// by preimage lifting.  Signs follow the fixed cone convention.
inline GroupHom connecting_map(const ComplexSES& ses, int n) {
  const ChainComplex& a = ses.inclusion.source();
  const ChainComplex& b = ses.inclusion.target();
  const ChainComplex& c = ses.projection.target();

  HomologyData hc = homology_data(c, n);
  HomologyData ha = homology_data(a, n - 1);

  GroupHom p = ses.projection.component(n);
  GroupHom i = ses.inclusion.component(n - 1);
  GroupHom db = b.differential(n);

  IntMatrix m(ha.group.generator_count(), hc.group.generator_count());
  for (std::size_t j = 0; j < hc.group.generator_count(); ++j) {
    std::vector<Int> z = hc.cycle_basis.col(j);
    auto lift = preimage(p, z);
    if (!lift) throw LiftFailure("projection lift failed; SES is invalid");
    std::vector<Int> boundary = db.apply(*lift);
    auto back = preimage(i, boundary);
    if (!back) throw LiftFailure("inclusion lift failed; SES is invalid");
    m.set_col(j, ha.express(*back));
  }
  return GroupHom(hc.group, ha.group, std::move(m));
}

// Map induced on homology by a map of complexes.
inline GroupHom induced_on_homology(const ComplexMap& f, int n) {
  HomologyData hs = homology_data(f.source(), n);
  HomologyData ht = homology_data(f.target(), n);
  GroupHom fn = f.component(n);
  IntMatrix m(ht.group.generator_count(), hs.group.generator_count());
  for (std::size_t j = 0; j < hs.group.generator_count(); ++j)
    m.set_col(j, ht.express(fn.apply(hs.cycle_basis.col(j))));
  return GroupHom(hs.group, ht.group, std::move(m));
}

struct ExactnessReport {
  bool exact = true;
  std::size_t failed_node = 0;  // index of the middle hom's source in seq

  explicit operator bool() const { return exact; }
};

// im = ker at every interior node of a composable sequence of homs.
inline ExactnessReport verify_exact(const std::vector<GroupHom>& seq) {
  for (std::size_t k = 0; k + 1 < seq.size(); ++k) {
    const GroupHom& f = seq[k];
    const GroupHom& g = seq[k + 1];
    if (!(f.target() == g.source()))
      throw std::invalid_argument("sequence not composable at node " +
                                  std::to_string(k + 1));
    if (!g.compose_after(f).is_zero_map()) return {false, k + 1};
    IntMatrix image = f.matrix().hcat(f.target().relations());
    IntMatrix ker = cycle_lattice(g.matrix(), g.target().relations());
    if (!same_column_span(image, ker)) return {false, k + 1};
  }
  return {};
}

// Full long exact sequence of a SES of complexes over the supported range,
// ordered from top degree down:
//   ... -> H_n(A) -> H_n(B) -> H_n(C) -> H_{n-1}(A) -> ...
inline std::vector<GroupHom> long_exact_sequence(const ComplexSES& ses) {
  check_ses(ses);
  const ChainComplex& a = ses.inclusion.source();
  const ChainComplex& b = ses.inclusion.target();
  const ChainComplex& c = ses.projection.target();
  int lo = std::min(a.min_degree(), std::min(b.min_degree(), c.min_degree())) - 1;
  int hi = std::max(a.max_degree(), std::max(b.max_degree(), c.max_degree())) + 1;

  std::vector<GroupHom> les;
  for (int n = hi; n >= lo; --n) {
    les.push_back(induced_on_homology(ses.inclusion, n));
    les.push_back(induced_on_homology(ses.projection, n));
    les.push_back(connecting_map(ses, n));
  }
  // Stitch: consecutive homs share homology presentations by construction
  // (homology_data is deterministic), so the list is composable as is.
  return les;
}

}  // namespace gelli
