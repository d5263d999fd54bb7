#pragma once

#include <algorithm>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "gelli/abelian.hpp"
#include "gelli/realexpr.hpp"

namespace gelli {

// Trace functional: exact values in Q + Q*theta on the canonical
// generators of the even group.  Well-definedness forces the value zero on
// every torsion generator.
struct TraceFunctional {
  std::string name;
  std::vector<RealExpr> values;
};

struct SimplexDescriptor {
  int dimension = 0;         // -1 when only the trace marker is known
  bool unique_trace = true;

  bool matches(const SimplexDescriptor& o) const {
    return dimension == o.dimension && unique_trace == o.unique_trace;
  }
};

// Elliott invariant quadruple: Z/2-graded group, class of the unit in the
// even part, trace simplex, and the pairing of traces with the even part.
// The unit and trace values are recorded in canonical coordinates.
struct EllInvariant {
  PresentedGroup even;
  PresentedGroup odd;
  std::vector<Int> unit;
  SimplexDescriptor simplex;
  std::vector<TraceFunctional> traces;

  void validate() const {
    const CanonicalForm& c = even.canonical();
    std::size_t n = c.generator_count();
    if (unit.size() != n)
      throw std::invalid_argument("unit length does not match even group");
    if (simplex.unique_trace && traces.size() != 1)
      throw std::invalid_argument("unique-trace simplex needs exactly one trace");
    for (const TraceFunctional& t : traces) {
      if (t.values.size() != n)
        throw std::invalid_argument("trace '" + t.name +
                                    "' has wrong value count");
      for (std::size_t i = c.free_rank; i < n; ++i)
        if (!t.values[i].is_zero())
          throw std::invalid_argument("trace '" + t.name +
                                      "' is nonzero on a torsion generator");
    }
  }
};

// Linear extension of the generator values; zero on the odd part by
// definition of the pairing.
inline std::vector<RealExpr> pairing_eval(const EllInvariant& inv,
                                          const std::vector<Int>& coords) {
  if (coords.size() != inv.even.canonical().generator_count())
    throw std::invalid_argument("element length does not match even group");
  std::vector<RealExpr> out;
  for (const TraceFunctional& t : inv.traces) {
    RealExpr v;
    for (std::size_t i = 0; i < coords.size(); ++i)
      v = v + t.values[i].scaled(Rat(coords[i]));
    out.push_back(v);
  }
  return out;
}

enum class HkStatus { Good, NotGood, Undecided };
enum class HkLayer { None, Group, Unit, Pairing };

// Witness isomorphisms on canonical generators (lower block triangular on
// the free/torsion split for the even part).
struct HkWitness {
  IntMatrix even_iso;
  IntMatrix odd_iso;
};

struct HkVerdict {
  HkStatus status = HkStatus::Undecided;
  HkLayer failing_layer = HkLayer::None;
  std::optional<HkWitness> witness;
  std::string detail;

  bool good() const { return status == HkStatus::Good; }
};

struct HkSearchBudget {
  Int max_torsion_order{10000};
  long max_torsion_candidates = 200000;
  long free_coeff_bound = 12;
  long max_free_candidates = 200000;
};

namespace detail {

inline Int content(const std::vector<Int>& v) {
  Int g(0);
  for (const Int& x : v) g = gcd(g, x);
  return g;
}

// All valid endomorphism matrices of T = Z/d_1 + ... + Z/d_k have
// t_ij constrained mod d_i / gcd(d_i, d_j); enumerate those and keep the
// bijective ones.  Count capped by the budget.
class TorsionAutEnumerator {
 public:
  explicit TorsionAutEnumerator(const std::vector<Int>& factors)
      : d_(factors), t_(PresentedGroup::of_form(0, factors)) {
    k_ = d_.size();
    for (std::size_t i = 0; i < k_; ++i)
      for (std::size_t j = 0; j < k_; ++j)
        strides_.push_back(gcd(d_[i], d_[j]));
  }

  // Number of candidate matrices.
  Int candidate_count() const {
    Int n(1);
    for (const Int& s : strides_) n *= s;
    return n;
  }

  // Visit all automorphisms; f returns true to stop early.
  template <typename F>
  bool for_each(F&& f) const {
    std::vector<Int> idx(strides_.size(), Int(0));
    for (;;) {
      IntMatrix m(k_, k_);
      for (std::size_t i = 0; i < k_; ++i)
        for (std::size_t j = 0; j < k_; ++j) {
          Int step = d_[i] / strides_[i * k_ + j];
          m(i, j) = step * idx[i * k_ + j];
        }
      if (is_automorphism(m) && f(m)) return true;
      std::size_t pos = 0;
      for (; pos < idx.size(); ++pos) {
        idx[pos] += 1;
        if (idx[pos] < strides_[pos]) break;
        idx[pos] = 0;
      }
      if (pos == idx.size()) return false;
    }
  }

  bool is_automorphism(const IntMatrix& m) const {
    try {
      GroupHom h(t_, t_, m);
      return kernel(h).group.is_trivial() && cokernel(h).group.is_trivial();
    } catch (const InvalidHom&) {
      return false;
    }
  }

  const PresentedGroup& group() const { return t_; }

 private:
  std::vector<Int> d_;
  PresentedGroup t_;
  std::size_t k_ = 0;
  std::vector<Int> strides_;
};

// Is y in g*T, i.e. does each coordinate vanish mod gcd(g, d_i)?
// With g = 0 this degenerates to y = 0 in T.
inline bool in_content_multiple(const std::vector<Int>& y,
                                const std::vector<Int>& factors,
                                const Int& g) {
  for (std::size_t i = 0; i < y.size(); ++i)
    if (fmod(y[i], gcd(g, factors[i])) != 0) return false;
  return true;
}

// Solve v * uf = target mod d row-wise for an integer k x r matrix v.
inline std::optional<IntMatrix> solve_torsion_column(
    const std::vector<Int>& uf, const std::vector<Int>& factors,
    const std::vector<Int>& target) {
  std::size_t r = uf.size(), k = factors.size();
  IntMatrix v(k, r);
  for (std::size_t i = 0; i < k; ++i) {
    IntMatrix row(1, r + 1);
    for (std::size_t j = 0; j < r; ++j) row(0, j) = uf[j];
    row(0, r) = factors[i];
    auto sol = solve(row, {target[i]});
    if (!sol) return std::nullopt;
    for (std::size_t j = 0; j < r; ++j) v(i, j) = (*sol)[j];
  }
  return v;
}

struct EvenSplit {
  std::size_t free_rank;
  std::vector<Int> factors;
  std::vector<Int> unit_free;
  std::vector<Int> unit_torsion;
  // trace values restricted to free generators, per trace
  std::vector<std::vector<RealExpr>> trace_free;
};

inline EvenSplit split_even(const EllInvariant& inv) {
  const CanonicalForm& c = inv.even.canonical();
  EvenSplit s;
  s.free_rank = c.free_rank;
  s.factors = c.invariant_factors;
  s.unit_free.assign(inv.unit.begin(), inv.unit.begin() + c.free_rank);
  s.unit_torsion.assign(inv.unit.begin() + c.free_rank, inv.unit.end());
  for (const TraceFunctional& t : inv.traces)
    s.trace_free.emplace_back(t.values.begin(),
                              t.values.begin() + c.free_rank);
  return s;
}

// Integer solutions U of the unit and pairing constraints, searched as
// particular solution + kernel lattice of the linearized system.
struct FreeSearchOutcome {
  bool system_consistent = false;
  bool exhausted = true;  // search space fully covered
  std::optional<IntMatrix> found;
};

inline FreeSearchOutcome search_free_block(const EvenSplit& a,
                                           const EvenSplit& b,
                                           bool use_pairing,
                                           const HkSearchBudget& budget) {
  std::size_t r = a.free_rank;
  FreeSearchOutcome out;
  if (r == 0) {
    out.system_consistent = true;
    out.found = IntMatrix(0, 0);
    return out;
  }

  // Unknowns: U as vec by columns, u_ij at index j*r + i.
  std::vector<std::vector<Rat>> rows;
  std::vector<Rat> rhs;
  // Unit rows: sum_j U_ij * ufA_j = ufB_i.
  for (std::size_t i = 0; i < r; ++i) {
    std::vector<Rat> row(r * r, Rat(0));
    for (std::size_t j = 0; j < r; ++j) row[j * r + i] = Rat(a.unit_free[j]);
    rows.push_back(std::move(row));
    rhs.push_back(Rat(b.unit_free[i]));
  }
  if (use_pairing) {
    // Pairing rows: sum_i rhoB_i * U_ij = rhoA_j, split into the rational
    // and theta components.
    for (std::size_t k = 0; k < a.trace_free.size(); ++k)
      for (std::size_t j = 0; j < r; ++j) {
        std::vector<Rat> rowa(r * r, Rat(0)), rowb(r * r, Rat(0));
        for (std::size_t i = 0; i < r; ++i) {
          rowa[j * r + i] = b.trace_free[k][i].a;
          rowb[j * r + i] = b.trace_free[k][i].b;
        }
        rows.push_back(std::move(rowa));
        rhs.push_back(a.trace_free[k][j].a);
        rows.push_back(std::move(rowb));
        rhs.push_back(a.trace_free[k][j].b);
      }
  }

  // Clear denominators row by row.
  IntMatrix sys(rows.size(), r * r);
  std::vector<Int> target(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    Int lcd(1);
    for (const Rat& q : rows[i]) lcd = lcm(lcd, q.get_den());
    lcd = lcm(lcd, rhs[i].get_den());
    for (std::size_t j = 0; j < r * r; ++j) {
      Rat scaled = rows[i][j] * Rat(lcd);
      sys(i, j) = scaled.get_num();
    }
    Rat scaled = rhs[i] * Rat(lcd);
    target[i] = scaled.get_num();
  }

  auto particular = solve(sys, target);
  if (!particular) return out;  // provably no solution at all
  out.system_consistent = true;

  IntMatrix null_basis = kernel_lattice(sys);
  std::size_t dim = null_basis.cols();

  auto to_matrix = [&](const std::vector<Int>& vec) {
    IntMatrix u(r, r);
    for (std::size_t j = 0; j < r; ++j)
      for (std::size_t i = 0; i < r; ++i) u(i, j) = vec[j * r + i];
    return u;
  };
  auto satisfies = [&](const IntMatrix& u) {
    std::vector<Int> vec(r * r);
    for (std::size_t j = 0; j < r; ++j)
      for (std::size_t i = 0; i < r; ++i) vec[j * r + i] = u(i, j);
    return sys.apply(vec) == target;
  };

  if (dim == 0) {
    IntMatrix u = to_matrix(*particular);
    if (is_unimodular(u)) out.found = std::move(u);
    return out;  // exhaustive either way
  }

  out.exhausted = false;  // from here on the search is bounded

  // Signed permutation matrices are unimodular by construction and cover
  // the reorderings produced by independent canonicalizations.
  if (r <= 5) {
    std::vector<std::size_t> perm(r);
    for (std::size_t i = 0; i < r; ++i) perm[i] = i;
    do {
      for (unsigned long mask = 0; mask < (1ul << r); ++mask) {
        IntMatrix u(r, r);
        for (std::size_t j = 0; j < r; ++j)
          u(perm[j], j) = (mask >> j) & 1 ? Int(-1) : Int(1);
        if (satisfies(u)) {
          out.found = std::move(u);
          return out;
        }
      }
    } while (std::next_permutation(perm.begin(), perm.end()));
  }

  // Lattice coefficients enumerated in shells of growing max-norm so small
  // corrections of the particular solution are tried first; deterministic
  // order makes the first hit reproducible.
  long counted = 0;
  for (long shell = 0; shell <= budget.free_coeff_bound; ++shell) {
    std::vector<long> c(dim, -shell);
    for (;;) {
      bool on_shell = false;
      for (long v : c)
        if (v == shell || v == -shell) {
          on_shell = true;
          break;
        }
      if (on_shell || shell == 0) {
        if (++counted > budget.max_free_candidates) return out;
        std::vector<Int> vec = *particular;
        for (std::size_t t = 0; t < dim; ++t)
          for (std::size_t idx = 0; idx < r * r; ++idx)
            vec[idx] += Int(c[t]) * null_basis(idx, t);
        IntMatrix u = to_matrix(vec);
        if (is_unimodular(u)) {
          out.found = std::move(u);
          return out;
        }
      }
      std::size_t pos = 0;
      for (; pos < dim; ++pos) {
        if (++c[pos] <= shell) break;
        c[pos] = -shell;
      }
      if (pos == dim) break;
    }
  }
  return out;
}

}  // namespace detail

// Decides whether two Elliott invariants are isomorphic: group layer,
// unit layer, then pairing layer; GOOD comes with an explicit verified
// witness, NOT_GOOD with the first failing layer, and searches past the
// budget report UNDECIDED.
inline HkVerdict hk_check(const EllInvariant& k_side,
                          const EllInvariant& h_side,
                          const HkSearchBudget& budget = {}) {
  k_side.validate();
  h_side.validate();
  if (!k_side.simplex.matches(h_side.simplex))
    throw std::invalid_argument("simplex descriptors do not match structurally");
  if (k_side.traces.size() != h_side.traces.size())
    throw std::invalid_argument("trace lists have different lengths");

  HkVerdict v;

  // Layer 1: graded groups.
  if (!is_isomorphic(k_side.even, h_side.even) ||
      !is_isomorphic(k_side.odd, h_side.odd)) {
    v.status = HkStatus::NotGood;
    v.failing_layer = HkLayer::Group;
    v.detail = "graded groups are not isomorphic: even " +
               group_str(k_side.even) + " vs " + group_str(h_side.even) +
               ", odd " + group_str(k_side.odd) + " vs " +
               group_str(h_side.odd);
    return v;
  }

  detail::EvenSplit a = detail::split_even(k_side);
  detail::EvenSplit b = detail::split_even(h_side);

  // Layer 2: unit.  Free parts match under some GL(r, Z) iff the contents
  // agree; the torsion defect must be reachable through the off-diagonal
  // block, i.e. lie in content * T after some torsion automorphism.
  Int ga = detail::content(a.unit_free);
  Int gb = detail::content(b.unit_free);
  if (ga != gb) {
    v.status = HkStatus::NotGood;
    v.failing_layer = HkLayer::Unit;
    v.detail = "unit free parts have different content: " + ga.get_str() +
               " vs " + gb.get_str();
    return v;
  }

  detail::TorsionAutEnumerator auts(a.factors);
  std::optional<IntMatrix> torsion_part;
  bool torsion_exhausted = true;
  {
    // Identity first: covers the common case cheaply.
    IntMatrix id = IntMatrix::identity(a.factors.size());
    auto defect = [&](const IntMatrix& t) {
      std::vector<Int> d = t.apply(a.unit_torsion);
      for (std::size_t i = 0; i < d.size(); ++i)
        d[i] = fmod(b.unit_torsion[i] - d[i], a.factors[i]);
      return d;
    };
    Int torsion_order(1);
    for (const Int& d : a.factors) torsion_order *= d;
    if (detail::in_content_multiple(defect(id), a.factors, ga)) {
      torsion_part = id;
    } else if (torsion_order > budget.max_torsion_order ||
               auts.candidate_count() > Int(budget.max_torsion_candidates)) {
      torsion_exhausted = false;
    } else {
      auts.for_each([&](const IntMatrix& t) {
        if (detail::in_content_multiple(defect(t), a.factors, ga)) {
          torsion_part = t;
          return true;
        }
        return false;
      });
    }
  }
  if (!torsion_part) {
    if (!torsion_exhausted) {
      v.status = HkStatus::Undecided;
      v.detail = "torsion automorphism search exceeded the budget";
      return v;
    }
    v.status = HkStatus::NotGood;
    v.failing_layer = HkLayer::Unit;
    v.detail = "no torsion automorphism aligns the unit classes";
    return v;
  }

  // Unit layer feasibility on the free side (without pairing): contents
  // already match, so only the pairing layer can fail from here.
  detail::FreeSearchOutcome free_out =
      detail::search_free_block(a, b, /*use_pairing=*/true, budget);
  if (!free_out.found) {
    if (!free_out.system_consistent || free_out.exhausted) {
      v.status = HkStatus::NotGood;
      v.failing_layer = HkLayer::Pairing;
      v.detail = free_out.system_consistent
                     ? "pairing system admits no unimodular solution"
                     : "pairing and unit constraints have no integer solution";
      return v;
    }
    v.status = HkStatus::Undecided;
    v.detail = "free-part lattice search exceeded the budget";
    return v;
  }

  // Assemble and verify the witness.
  std::size_t r = a.free_rank, k = a.factors.size();
  IntMatrix even_iso(r + k, r + k);
  const IntMatrix& u = *free_out.found;
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < r; ++j) even_iso(i, j) = u(i, j);
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j)
      even_iso(r + i, r + j) = (*torsion_part)(i, j);
  if (k > 0) {
    std::vector<Int> defect(k);
    std::vector<Int> tu = torsion_part->apply(a.unit_torsion);
    for (std::size_t i = 0; i < k; ++i)
      defect[i] = fmod(b.unit_torsion[i] - tu[i], a.factors[i]);
    auto vblock = detail::solve_torsion_column(a.unit_free, a.factors, defect);
    if (!vblock) throw std::logic_error("torsion defect became unsolvable");
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = 0; j < r; ++j) even_iso(r + i, j) = (*vblock)(i, j);
  }

  v.status = HkStatus::Good;
  v.witness = HkWitness{even_iso,
                        IntMatrix::identity(
                            k_side.odd.canonical().generator_count())};
  return v;
}

// Re-evaluates a witness against the data; used by tests and reports.
inline bool verify_hk_witness(const EllInvariant& k_side,
                              const EllInvariant& h_side,
                              const HkWitness& w) {
  const CanonicalForm& ce = k_side.even.canonical();
  std::size_t n = ce.generator_count();
  PresentedGroup even_a = PresentedGroup::of_form(ce.free_rank,
                                                  ce.invariant_factors);
  const CanonicalForm& cb = h_side.even.canonical();
  PresentedGroup even_b = PresentedGroup::of_form(cb.free_rank,
                                                  cb.invariant_factors);
  try {
    GroupHom phi(even_a, even_b, w.even_iso);
    if (!kernel(phi).group.is_trivial() || !cokernel(phi).group.is_trivial())
      return false;
  } catch (const InvalidHom&) {
    return false;
  }
  // Unit.
  std::vector<Int> img = w.even_iso.apply(k_side.unit);
  if (!even_b.elements_equal(img, h_side.unit)) return false;
  // Pairing on every generator.
  for (std::size_t j = 0; j < n; ++j) {
    std::vector<Int> e(n, Int(0));
    e[j] = 1;
    std::vector<Int> fe = w.even_iso.apply(e);
    std::vector<RealExpr> lhs = pairing_eval(h_side, even_b.canonical_coords(fe));
    std::vector<RealExpr> rhs = pairing_eval(k_side, e);
    if (lhs != rhs) return false;
  }
  return true;
}

}  // namespace gelli
