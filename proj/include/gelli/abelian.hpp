#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "gelli/matrix.hpp"

namespace gelli {

struct InvalidHom : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Canonical form of a finitely generated abelian group:
// Z^free_rank + Z/d_1 + ... + Z/d_k with 2 <= d_1 | d_2 | ... | d_k.
struct CanonicalForm {
  std::size_t free_rank = 0;
  std::vector<Int> invariant_factors;

  bool operator==(const CanonicalForm& o) const {
    return free_rank == o.free_rank &&
           invariant_factors == o.invariant_factors;
  }
  bool operator!=(const CanonicalForm& o) const { return !(*this == o); }

  bool is_trivial() const {
    return free_rank == 0 && invariant_factors.empty();
  }
  bool is_free() const { return invariant_factors.empty(); }
  Int torsion_order() const {
    Int t(1);
    for (const Int& d : invariant_factors) t *= d;
    return t;
  }
  std::size_t generator_count() const {
    return free_rank + invariant_factors.size();
  }
};

// Finitely generated abelian group presented as Z^n / (column span of
// relations).  Elements are integer coordinate vectors on the n generators,
// compared modulo the relation lattice.
class PresentedGroup {
 public:
  PresentedGroup() : gens_(0), rels_(0, 0) { finish(); }

  PresentedGroup(std::size_t generator_count, IntMatrix relations)
      : gens_(generator_count), rels_(std::move(relations)) {
    if (rels_.rows() != gens_) {
      if (rels_.rows() == 0 && rels_.cols() == 0)
        rels_ = IntMatrix(gens_, 0);
      else
        throw std::invalid_argument("relation rows must equal generators");
    }
    finish();
  }

  static PresentedGroup free(std::size_t rank) {
    return PresentedGroup(rank, IntMatrix(rank, 0));
  }

  static PresentedGroup cyclic(const Int& order) {
    IntMatrix r(1, 1);
    r(0, 0) = order;
    return PresentedGroup(1, r);
  }

  static PresentedGroup trivial() { return PresentedGroup(0, IntMatrix(0, 0)); }

  // Z^rank + Z/d_1 + ... built on the obvious generators.
  static PresentedGroup of_form(std::size_t rank,
                                const std::vector<Int>& factors) {
    std::size_t n = rank + factors.size();
    IntMatrix r(n, factors.size());
    for (std::size_t j = 0; j < factors.size(); ++j)
      r(rank + j, j) = factors[j];
    return PresentedGroup(n, r);
  }

  std::size_t generator_count() const { return gens_; }
  const IntMatrix& relations() const { return rels_; }
  const CanonicalForm& canonical() const { return canon_; }
  std::size_t rank() const { return canon_.free_rank; }
  bool is_trivial() const { return canon_.is_trivial(); }

  // Smith data for the relation matrix, cached; u_ maps generator
  // coordinates to the diagonalized coordinates.
  const SmithDecomposition& smith() const { return snf_; }

  bool contains_zero(const std::vector<Int>& x) const {
    if (x.size() != gens_) throw std::invalid_argument("bad element length");
    std::vector<Int> ux = snf_.u.apply(x);
    std::size_t nmin =
        rels_.rows() < rels_.cols() ? rels_.rows() : rels_.cols();
    for (std::size_t i = 0; i < gens_; ++i) {
      Int di = i < nmin ? snf_.d(i, i) : Int(0);
      if (di == 0) {
        if (ux[i] != 0) return false;
      } else if (!divides(di, ux[i])) {
        return false;
      }
    }
    return true;
  }

  bool elements_equal(const std::vector<Int>& x,
                      const std::vector<Int>& y) const {
    std::vector<Int> d(gens_);
    for (std::size_t i = 0; i < gens_; ++i) d[i] = x[i] - y[i];
    return contains_zero(d);
  }

  // Coordinates of x on the canonical generators: free coordinates first
  // (exact integers), then torsion coordinates reduced mod the invariant
  // factors, in the same order as CanonicalForm prints them.
  std::vector<Int> canonical_coords(const std::vector<Int>& x) const {
    if (x.size() != gens_) throw std::invalid_argument("bad element length");
    std::vector<Int> ux = snf_.u.apply(x);
    std::vector<Int> out;
    out.reserve(canon_.generator_count());
    for (std::size_t i : free_idx_) out.push_back(ux[i]);
    for (std::size_t k = 0; k < tors_idx_.size(); ++k)
      out.push_back(fmod(ux[tors_idx_[k]], canon_.invariant_factors[k]));
    return out;
  }

  // Inverse of canonical_coords up to group equality.
  std::vector<Int> from_canonical(const std::vector<Int>& c) const {
    if (c.size() != canon_.generator_count())
      throw std::invalid_argument("bad canonical coordinate length");
    // u is unimodular, so generator coords = u^-1 * (diagon coords).
    std::vector<Int> ux(gens_, Int(0));
    for (std::size_t k = 0; k < free_idx_.size(); ++k) ux[free_idx_[k]] = c[k];
    for (std::size_t k = 0; k < tors_idx_.size(); ++k)
      ux[tors_idx_[k]] = c[free_idx_.size() + k];
    auto x = solve(snf_.u, ux);
    if (!x) throw std::logic_error("unimodular solve failed");
    return *x;
  }

  // Generator-coordinate representatives of the canonical generators.
  std::vector<std::vector<Int>> canonical_generators() const {
    std::vector<std::vector<Int>> gens;
    std::size_t n = canon_.generator_count();
    for (std::size_t k = 0; k < n; ++k) {
      std::vector<Int> c(n, Int(0));
      c[k] = 1;
      gens.push_back(from_canonical(c));
    }
    return gens;
  }

  bool operator==(const PresentedGroup& o) const {
    return gens_ == o.gens_ && rels_ == o.rels_;
  }

 private:
  void finish() {
    snf_ = smith_normal_form(rels_);
    std::size_t nmin =
        rels_.rows() < rels_.cols() ? rels_.rows() : rels_.cols();
    canon_ = CanonicalForm{};
    for (std::size_t i = 0; i < gens_; ++i) {
      Int di = i < nmin ? snf_.d(i, i) : Int(0);
      if (di == 0) {
        ++canon_.free_rank;
        free_idx_.push_back(i);
      } else if (di != 1) {
        canon_.invariant_factors.push_back(di);
        tors_idx_.push_back(i);
      }
    }
  }

  std::size_t gens_;
  IntMatrix rels_;
  SmithDecomposition snf_;
  CanonicalForm canon_;
  std::vector<std::size_t> free_idx_;
  std::vector<std::size_t> tors_idx_;
};

inline CanonicalForm canonicalize(const PresentedGroup& g) {
  return g.canonical();
}

inline bool is_isomorphic(const PresentedGroup& a, const PresentedGroup& b) {
  return a.canonical() == b.canonical();
}

// Homomorphism between presented groups, stored as an integer matrix on
// generators.  Construction verifies well-definedness: the matrix must map
// source relations into the span of target relations.
class GroupHom {
 public:
  GroupHom(PresentedGroup source, PresentedGroup target, IntMatrix matrix)
      : src_(std::move(source)), tgt_(std::move(target)), m_(std::move(matrix)) {
    if (m_.rows() != tgt_.generator_count() ||
        m_.cols() != src_.generator_count())
      throw InvalidHom("hom matrix dimensions do not match presentations");
    IntMatrix mapped = m_ * src_.relations();
    for (std::size_t j = 0; j < mapped.cols(); ++j)
      if (!tgt_.contains_zero(mapped.col(j)))
        throw InvalidHom("matrix does not map relations into relations (column " +
                         std::to_string(j) + ")");
  }

  static GroupHom zero(const PresentedGroup& source,
                       const PresentedGroup& target) {
    return GroupHom(source, target,
                    IntMatrix(target.generator_count(),
                              source.generator_count()));
  }

  static GroupHom identity(const PresentedGroup& g) {
    return GroupHom(g, g, IntMatrix::identity(g.generator_count()));
  }

  const PresentedGroup& source() const { return src_; }
  const PresentedGroup& target() const { return tgt_; }
  const IntMatrix& matrix() const { return m_; }

  std::vector<Int> apply(const std::vector<Int>& x) const {
    return m_.apply(x);
  }

  bool is_zero_map() const {
    // Zero as a map, i.e. every generator image is a relation.
    for (std::size_t j = 0; j < m_.cols(); ++j)
      if (!tgt_.contains_zero(m_.col(j))) return false;
    return true;
  }

  GroupHom compose_after(const GroupHom& first) const {
    // (*this) o first
    return GroupHom(first.source(), tgt_, m_ * first.matrix());
  }

  GroupHom operator+(const GroupHom& o) const {
    return GroupHom(src_, tgt_, m_ + o.m_);
  }
  GroupHom operator-(const GroupHom& o) const {
    return GroupHom(src_, tgt_, m_ - o.m_);
  }

  bool equals_map(const GroupHom& o) const {
    if (m_.rows() != o.m_.rows() || m_.cols() != o.m_.cols()) return false;
    return (*this - o).is_zero_map();
  }

 private:
  PresentedGroup src_, tgt_;
  IntMatrix m_;
};

struct KernelResult {
  PresentedGroup group;
  GroupHom inclusion;  // group -> source of h
};

struct CokernelResult {
  PresentedGroup group;
  GroupHom projection;  // target of h -> group
};

// The sublattice {x in Z^n : h(x) lies in the relation span of the target},
// returned as a lattice basis in matrix columns.  Contains the source
// relation lattice whenever h is well-defined.
inline IntMatrix cycle_lattice(const IntMatrix& hom_matrix,
                               const IntMatrix& target_relations) {
  // Solve M x = R y, i.e. [M | -R] (x, y) = 0, and project onto x.
  IntMatrix stacked = hom_matrix.hcat(-target_relations);
  IntMatrix ker = kernel_lattice(stacked);
  IntMatrix gen(hom_matrix.cols(), ker.cols());
  for (std::size_t j = 0; j < ker.cols(); ++j)
    for (std::size_t i = 0; i < hom_matrix.cols(); ++i) gen(i, j) = ker(i, j);
  return column_span_basis(gen);
}

// Coordinates of each column of `cols` in the lattice basis `basis`
// (columns independent); exact, throws if a column is outside the lattice.
inline IntMatrix coords_in_basis(const IntMatrix& basis,
                                 const IntMatrix& cols) {
  IntMatrix out(basis.cols(), cols.cols());
  for (std::size_t j = 0; j < cols.cols(); ++j) {
    auto c = solve(basis, cols.col(j));
    if (!c) throw std::logic_error("vector outside lattice in coords_in_basis");
    out.set_col(j, *c);
  }
  return out;
}

inline KernelResult kernel(const GroupHom& h) {
  IntMatrix basis = cycle_lattice(h.matrix(), h.target().relations());
  // Relations of the kernel group: source relations expressed in the basis.
  IntMatrix rel = coords_in_basis(basis, h.source().relations());
  PresentedGroup k(basis.cols(), rel);
  GroupHom incl(k, h.source(), basis);
  return KernelResult{std::move(k), std::move(incl)};
}

inline CokernelResult cokernel(const GroupHom& h) {
  IntMatrix rel = h.matrix().hcat(h.target().relations());
  PresentedGroup c(h.target().generator_count(), rel);
  GroupHom proj(h.target(), c,
                IntMatrix::identity(h.target().generator_count()));
  return CokernelResult{std::move(c), std::move(proj)};
}

// Some x with h(x) = y modulo target relations, or nullopt if y is not in
// the image of h.
inline std::optional<std::vector<Int>> preimage(const GroupHom& h,
                                                const std::vector<Int>& y) {
  if (y.size() != h.target().generator_count())
    throw std::invalid_argument("bad element length");
  IntMatrix aug = h.matrix().hcat(h.target().relations());
  auto sol = solve(aug, y);
  if (!sol) return std::nullopt;
  std::vector<Int> x(h.source().generator_count());
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = (*sol)[i];
  return x;
}

// Whether there exists beta with h o beta = id = beta o h; returns beta.
inline std::optional<GroupHom> inverse_hom(const GroupHom& h) {
  if (!is_isomorphic(h.source(), h.target())) return std::nullopt;
  std::size_t n = h.target().generator_count();
  IntMatrix b(h.source().generator_count(), n);
  for (std::size_t j = 0; j < n; ++j) {
    std::vector<Int> e(n, Int(0));
    e[j] = 1;
    auto x = preimage(h, e);
    if (!x) return std::nullopt;
    b.set_col(j, *x);
  }
  try {
    GroupHom beta(h.target(), h.source(), b);
    if (!beta.compose_after(h).equals_map(GroupHom::identity(h.source())))
      return std::nullopt;
    if (!h.compose_after(beta).equals_map(GroupHom::identity(h.target())))
      return std::nullopt;
    return beta;
  } catch (const InvalidHom&) {
    return std::nullopt;
  }
}

// Direct sum of groups with the obvious generator ordering.
inline PresentedGroup direct_sum(const PresentedGroup& a,
                                 const PresentedGroup& b) {
  return PresentedGroup(a.generator_count() + b.generator_count(),
                        a.relations().dsum(b.relations()));
}

// An explicit isomorphism between two groups with equal canonical form,
// routed through canonical coordinates.
inline GroupHom canonical_iso(const PresentedGroup& a,
                              const PresentedGroup& b) {
  if (!is_isomorphic(a, b))
    throw std::invalid_argument("groups are not isomorphic");
  IntMatrix m(b.generator_count(), a.generator_count());
  for (std::size_t j = 0; j < a.generator_count(); ++j) {
    std::vector<Int> e(a.generator_count(), Int(0));
    e[j] = 1;
    m.set_col(j, b.from_canonical(a.canonical_coords(e)));
  }
  return GroupHom(a, b, std::move(m));
}

inline std::string canonical_str(const CanonicalForm& c) {
  if (c.is_trivial()) return "0";
  std::string s;
  if (c.free_rank == 1) s = "ℤ";
  else if (c.free_rank > 1)
    s = "ℤ^" + std::to_string(c.free_rank);
  for (const Int& d : c.invariant_factors) {
    if (!s.empty()) s += " ⊕ ";
    s += "ℤ/" + d.get_str();
  }
  return s;
}

inline std::string group_str(const PresentedGroup& g) {
  return canonical_str(g.canonical());
}

}  // namespace gelli
