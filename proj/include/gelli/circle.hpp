#pragma once

#include <algorithm>
#include <stdexcept>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "gelli/realexpr.hpp"

namespace gelli {

struct NotACycle : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Point p + q*theta on the circle [0,1) with p rational and q an integer.
// This set is closed under the rotation and contains every point the
// normalization algorithm produces from such inputs.
struct CirclePoint {
  Rat p;
  Int q;

  static CirclePoint make(Rat p, Int q, const Theta& th) {
    CirclePoint c{std::move(p), std::move(q)};
    Int n = floor_expr(RealExpr(c.p, Rat(c.q)), th);
    c.p -= Rat(n);
    return c;
  }

  static CirclePoint zero() { return CirclePoint{Rat(0), Int(0)}; }

  RealExpr position() const { return RealExpr(p, Rat(q)); }

  CirclePoint rotated(const Int& steps, const Theta& th) const {
    return make(p, q + steps, th);
  }

  bool operator==(const CirclePoint& o) const { return p == o.p && q == o.q; }
  bool operator!=(const CirclePoint& o) const { return !(*this == o); }
};

inline bool point_less(const CirclePoint& a, const CirclePoint& b,
                       const Theta& th) {
  return less(a.position(), b.position(), th);
}

// Finitely supported integer function on the circle (sections of the jump
// sheaf); zero coefficients are never stored.
class JumpFn {
 public:
  JumpFn() = default;

  static JumpFn single(CirclePoint x, Int coeff, const Theta& th) {
    JumpFn j;
    j.add(std::move(x), std::move(coeff), th);
    return j;
  }

  void add(CirclePoint x, Int coeff, const Theta& th) {
    if (coeff == 0) return;
    auto it = std::lower_bound(
        entries_.begin(), entries_.end(), x,
        [&](const auto& e, const CirclePoint& v) { return point_less(e.first, v, th); });
    if (it != entries_.end() && it->first == x) {
      it->second += coeff;
      if (it->second == 0) entries_.erase(it);
    } else {
      entries_.insert(it, {std::move(x), std::move(coeff)});
    }
  }

  Int at(const CirclePoint& x) const {
    for (const auto& [pt, c] : entries_)
      if (pt == x) return c;
    return 0;
  }

  const std::vector<std::pair<CirclePoint, Int>>& entries() const {
    return entries_;
  }
  bool empty() const { return entries_.empty(); }

  Int total() const {
    Int t(0);
    for (const auto& [pt, c] : entries_) t += c;
    return t;
  }

  JumpFn plus(const JumpFn& o, const Theta& th) const {
    JumpFn out = *this;
    for (const auto& [pt, c] : o.entries_) out.add(pt, c, th);
    return out;
  }

  JumpFn negated() const {
    JumpFn out = *this;
    for (auto& [pt, c] : out.entries_) c = -c;
    return out;
  }

  JumpFn rotated(const Int& steps, const Theta& th) const {
    JumpFn out;
    for (const auto& [pt, c] : entries_) out.add(pt.rotated(steps, th), c, th);
    return out;
  }

  bool operator==(const JumpFn& o) const { return entries_ == o.entries_; }

 private:
  std::vector<std::pair<CirclePoint, Int>> entries_;
};

// Integer step function on the circle with the right-continuity convention:
// value values_[i] on the right-open arc [cuts_[i], cuts_[i+1}) (cyclic).
// Canonical form merges adjacent equal-valued arcs, so equality is
// syntactic.
class StepFn {
 public:
  StepFn() : values_{Int(0)} {}

  static StepFn constant(Int c) {
    StepFn s;
    s.values_ = {std::move(c)};
    return s;
  }

  // value * indicator of [from, to); empty when from == to.
  static StepFn arc_indicator(const CirclePoint& from, const CirclePoint& to,
                              Int value, const Theta& th) {
    if (from == to || value == 0) return constant(Int(0));
    StepFn s;
    if (point_less(from, to, th)) {
      s.cuts_ = {from, to};
      s.values_ = {std::move(value), Int(0)};
    } else {
      s.cuts_ = {to, from};
      s.values_ = {Int(0), std::move(value)};
    }
    return s;
  }

  bool is_constant() const { return cuts_.empty(); }
  const Int& constant_value() const { return values_[0]; }
  const std::vector<CirclePoint>& cuts() const { return cuts_; }
  const std::vector<Int>& values() const { return values_; }

  Int eval(const CirclePoint& x, const Theta& th) const {
    if (cuts_.empty()) return values_[0];
    // Arc owning x starts at the greatest cut <= x, wrapping around.
    std::size_t lo = 0, hi = cuts_.size();
    // First cut strictly greater than x:
    while (lo < hi) {
      std::size_t mid = (lo + hi) / 2;
      if (point_less(x, cuts_[mid], th)) hi = mid;
      else lo = mid + 1;
    }
    return lo == 0 ? values_.back() : values_[lo - 1];
  }

  StepFn plus(const StepFn& o, const Theta& th) const {
    std::vector<CirclePoint> cuts = cuts_;
    for (const auto& c : o.cuts_) cuts.push_back(c);
    std::sort(cuts.begin(), cuts.end(),
              [&](const CirclePoint& a, const CirclePoint& b) {
                return point_less(a, b, th);
              });
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    if (cuts.empty())
      return constant(values_[0] + o.values_[0]);
    StepFn s;
    s.cuts_ = cuts;
    s.values_.clear();
    s.values_.reserve(cuts.size());
    for (const auto& c : cuts) s.values_.push_back(eval(c, th) + o.eval(c, th));
    s.canonicalize();
    return s;
  }

  StepFn negated() const {
    StepFn s = *this;
    for (auto& v : s.values_) v = -v;
    return s;
  }

  StepFn minus(const StepFn& o, const Theta& th) const {
    return plus(o.negated(), th);
  }

  StepFn scaled(const Int& k) const {
    if (k == 0) return constant(Int(0));
    StepFn s = *this;
    for (auto& v : s.values_) v *= k;
    return s;
  }

  StepFn plus_constant(const Int& k) const {
    StepFn s = *this;
    for (auto& v : s.values_) v += k;
    return s;
  }

  // Pushforward under rotation by steps * theta.
  StepFn rotated(const Int& steps, const Theta& th) const {
    if (cuts_.empty()) return *this;
    StepFn s;
    s.values_.clear();
    std::vector<std::pair<CirclePoint, Int>> arcs;
    for (std::size_t i = 0; i < cuts_.size(); ++i)
      arcs.push_back({cuts_[i].rotated(steps, th), values_[i]});
    std::sort(arcs.begin(), arcs.end(),
              [&](const auto& a, const auto& b) {
                return point_less(a.first, b.first, th);
              });
    for (auto& [c, v] : arcs) {
      s.cuts_.push_back(c);
      s.values_.push_back(v);
    }
    s.canonicalize();
    return s;
  }

  // Jump at each cut: value after minus value before; total is zero.
  JumpFn boundary(const Theta& th) const {
    JumpFn j;
    for (std::size_t i = 0; i < cuts_.size(); ++i) {
      const Int& before = i == 0 ? values_.back() : values_[i - 1];
      j.add(cuts_[i], values_[i] - before, th);
    }
    return j;
  }

  // Lebesgue integral, exact in Q + Q*theta.
  RealExpr integral(const Theta& th) const {
    if (cuts_.empty()) return RealExpr(Rat(values_[0]), Rat(0));
    (void)th;
    RealExpr total;
    for (std::size_t i = 0; i < cuts_.size(); ++i) {
      RealExpr len;
      if (i + 1 < cuts_.size())
        len = cuts_[i + 1].position() - cuts_[i].position();
      else
        len = RealExpr(Rat(1), Rat(0)) + cuts_[0].position() -
              cuts_.back().position();
      total = total + len.scaled(Rat(values_[i]));
    }
    return total;
  }

  bool operator==(const StepFn& o) const {
    return cuts_ == o.cuts_ && values_ == o.values_;
  }

  // Unique integer step function with the given jumps (which must sum to
  // zero), pinned by its value on the arc starting at the first jump point.
  static StepFn from_jumps(const JumpFn& jumps, const Theta&) {
    if (jumps.empty()) return constant(Int(0));
    if (jumps.total() != 0)
      throw std::invalid_argument("jumps do not sum to zero");
    StepFn s;
    s.values_.clear();
    Int acc(0);
    for (const auto& [pt, c] : jumps.entries()) {
      acc += c;
      s.cuts_.push_back(pt);
      s.values_.push_back(acc);
    }
    // Starting accumulator at jumps[0] means values are offset so that the
    // wrap-around is consistent automatically (total zero).
    return s;
  }

 private:
  // A cut is redundant when the value does not jump there; merging is
  // repeated to a fixpoint, collapsing to constant form when one arc is
  // left.
  void canonicalize() {
    bool changed = true;
    while (changed && !cuts_.empty()) {
      changed = false;
      std::size_t k = cuts_.size();
      for (std::size_t i = 0; i < k; ++i) {
        const Int& before = values_[(i + k - 1) % k];
        if (values_[i] == before && k > 1) {
          cuts_.erase(cuts_.begin() + static_cast<long>(i));
          values_.erase(values_.begin() + static_cast<long>(i));
          changed = true;
          break;
        }
      }
      if (cuts_.size() == 1) {
        Int v = values_[0];
        cuts_.clear();
        values_ = {std::move(v)};
      }
    }
  }

  std::vector<CirclePoint> cuts_;
  std::vector<Int> values_;
};

// Finitely supported function on Z x S^1: the degree-one part of an
// H_0 chain.  Entry (level, point) -> coefficient.
class LevelChain {
 public:
  LevelChain() = default;

  void add(const Int& level, const CirclePoint& x, const Int& coeff,
           const Theta& th) {
    if (coeff == 0) return;
    auto it = std::lower_bound(
        entries_.begin(), entries_.end(), std::make_pair(level, x),
        [&](const auto& e, const auto& v) {
          if (std::get<0>(e) != v.first) return std::get<0>(e) < v.first;
          return point_less(std::get<1>(e), v.second, th);
        });
    if (it != entries_.end() && std::get<0>(*it) == level &&
        std::get<1>(*it) == x) {
      std::get<2>(*it) += coeff;
      if (std::get<2>(*it) == 0) entries_.erase(it);
    } else {
      entries_.insert(it, {level, x, coeff});
    }
  }

  static LevelChain single(const Int& level, const CirclePoint& x,
                           const Int& coeff, const Theta& th) {
    LevelChain b;
    b.add(level, x, coeff, th);
    return b;
  }

  const std::vector<std::tuple<Int, CirclePoint, Int>>& entries() const {
    return entries_;
  }
  bool empty() const { return entries_.empty(); }

  LevelChain plus(const LevelChain& o, const Theta& th) const {
    LevelChain out = *this;
    for (const auto& [l, x, c] : o.entries_) out.add(l, x, c, th);
    return out;
  }

  // Entries at one level as a jump function on the circle.
  JumpFn level_slice(const Int& level, const Theta& th) const {
    JumpFn j;
    for (const auto& [l, x, c] : entries_)
      if (l == level) j.add(x, c, th);
    return j;
  }

  std::vector<Int> levels() const {
    std::vector<Int> out;
    for (const auto& [l, x, c] : entries_)
      if (out.empty() || out.back() != l) out.push_back(l);
    return out;
  }

  bool operator==(const LevelChain& o) const { return entries_ == o.entries_; }

 private:
  std::vector<std::tuple<Int, CirclePoint, Int>> entries_;  // sorted
};

// Horizontal boundary of the degree-one part: the entry m at (n, x)
// contributes -m at x (source) and +m at x + n*theta (range).
inline JumpFn delta_b(const LevelChain& b, const Theta& th) {
  JumpFn j;
  for (const auto& [level, x, coeff] : b.entries()) {
    j.add(x, -coeff, th);
    j.add(x.rotated(level, th), coeff, th);
  }
  return j;
}

inline JumpFn boundary_partial(const StepFn& s, const Theta& th) {
  return s.boundary(th);
}

// H_0 chain (a, b): a step function on the base together with a finitely
// supported function on Z x S^1.
struct H0Chain {
  StepFn a;
  LevelChain b;

  H0Chain() = default;
  H0Chain(StepFn a_, LevelChain b_) : a(std::move(a_)), b(std::move(b_)) {}

  H0Chain plus(const H0Chain& o, const Theta& th) const {
    return H0Chain(a.plus(o.a, th), b.plus(o.b, th));
  }
};

inline bool is_cycle(const H0Chain& c, const Theta& th) {
  return boundary_partial(c.a, th).plus(delta_b(c.b, th), th).empty();
}

// a |-> (a, 0): image of H^0(S^1) in H_0.
inline H0Chain phi0(const Int& k) {
  return H0Chain(StepFn::constant(k), LevelChain());
}

// Degree-two chain entry: coefficient at the composable pair with inner
// arrow (level2, x) followed by outer arrow level1; its boundary under the
// three face maps is +1 at (level2, x), -1 at (level1+level2, x), and
// +1 at (level1, x + level2*theta).
struct TwoChainEntry {
  Int level1;
  Int level2;
  CirclePoint x;
  Int coeff;
};

inline LevelChain delta_two_chain(const std::vector<TwoChainEntry>& c,
                                  const Theta& th) {
  LevelChain out;
  for (const auto& e : c) {
    out.add(e.level2, e.x, e.coeff, th);
    out.add(e.level1 + e.level2, e.x, -e.coeff, th);
    out.add(e.level1, e.x.rotated(e.level2, th), e.coeff, th);
  }
  return out;
}

// One recorded normalization move.  A c-move subtracts the boundary of a
// degree-two chain (changes b only); an e-move subtracts the total boundary
// of a degree-one step-function chain at level one (changes a and b).
struct ReductionMove {
  enum class Kind { CMove, EMove } kind;
  std::vector<TwoChainEntry> c;  // for CMove
  StepFn e;                      // for EMove, living on level one
};

inline H0Chain apply_move(const H0Chain& chain, const ReductionMove& mv,
                          const Theta& th) {
  if (mv.kind == ReductionMove::Kind::CMove) {
    LevelChain dc = delta_two_chain(mv.c, th);
    LevelChain nb = chain.b;
    for (const auto& [l, x, c] : dc.entries()) nb.add(l, x, -c, th);
    return H0Chain(chain.a, std::move(nb));
  }
  // e-move: a <- a - delta(e), b <- b + partial(e) at level one, where
  // delta(e) = rotate(e) - e for a level-one chain.
  StepFn de = mv.e.rotated(Int(1), th).minus(mv.e, th);
  StepFn na = chain.a.minus(de, th);
  JumpFn pe = mv.e.boundary(th);
  LevelChain nb = chain.b;
  for (const auto& [pt, c] : pe.entries()) nb.add(Int(1), pt, c, th);
  return H0Chain(std::move(na), std::move(nb));
}

struct NormalizedCycle {
  Int n;  // coefficient of the constant-one class
  Int m;  // coefficient of the rotation class
  std::vector<ReductionMove> trace;
  H0Chain canonical;  // (n + m*chi_[0,theta), m*delta_(1,0))
};

// Cycle normalization following the explicit moves in the homology
// computation: push the b-support into level one, consolidate it at the
// single point (1, 0), and read off the unique (n, m) with
// a = n + m*chi_[0,theta).
inline NormalizedCycle normalize_cycle(const H0Chain& input, const Theta& th) {
  if (!is_cycle(input, th)) throw NotACycle("normalize_cycle: not a cycle");

  NormalizedCycle out;
  H0Chain cur = input;
  auto push_cmove = [&](std::vector<TwoChainEntry> entries) {
    ReductionMove mv{ReductionMove::Kind::CMove, std::move(entries), StepFn()};
    cur = apply_move(cur, mv, th);
    out.trace.push_back(std::move(mv));
  };

  // Push levels >= 1 down until the support lies in levels <= 0.
  for (;;) {
    auto lv = cur.b.levels();
    if (lv.empty() || lv.back() < 1) break;
    Int top = lv.back();
    JumpFn slice = cur.b.level_slice(top, th);
    std::vector<TwoChainEntry> c;
    for (const auto& [pt, coeff] : slice.entries())
      c.push_back({Int(-1), top, pt, coeff});
    push_cmove(std::move(c));
  }
  // Raise levels <= -1 until the support lies in levels {0, 1}.
  for (;;) {
    auto lv = cur.b.levels();
    if (lv.empty() || lv.front() > -1) break;
    Int bottom = lv.front();
    JumpFn slice = cur.b.level_slice(bottom, th);
    std::vector<TwoChainEntry> c;
    for (const auto& [pt, coeff] : slice.entries())
      c.push_back({Int(1), bottom, pt, coeff});
    push_cmove(std::move(c));
  }
  // Remove the level-zero part (it is exactly a boundary).
  {
    JumpFn zero_level = cur.b.level_slice(Int(0), th);
    if (!zero_level.empty()) {
      std::vector<TwoChainEntry> c;
      for (const auto& [pt, coeff] : zero_level.entries())
        c.push_back({Int(0), Int(0), pt, coeff});
      push_cmove(std::move(c));
    }
  }

  // Consolidate the level-one support at the single point (1, 0).
  JumpFn level1 = cur.b.level_slice(Int(1), th);
  if (!level1.empty()) {
    StepFn e = StepFn::constant(Int(0));
    CirclePoint origin = CirclePoint::zero();
    for (const auto& [pt, coeff] : level1.entries())
      e = e.plus(StepFn::arc_indicator(origin, pt, coeff, th), th);
    if (!(e == StepFn::constant(Int(0)))) {
      ReductionMove mv{ReductionMove::Kind::EMove, {}, std::move(e)};
      cur = apply_move(cur, mv, th);
      out.trace.push_back(std::move(mv));
    }
  }

  if (!is_cycle(cur, th))
    throw std::logic_error("normalization broke the cycle condition");

  // Read off m from b = m * delta_(1,0) and n from a = n + m*chi_[0,theta).
  CirclePoint origin = CirclePoint::zero();
  CirclePoint theta_pt = CirclePoint::make(Rat(0), Int(1), th);
  Int m(0);
  for (const auto& [l, x, c] : cur.b.entries()) {
    if (l != 1 || x != origin)
      throw std::logic_error("normalization left stray b-support");
    m = c;
  }
  StepFn expected_shape = StepFn::arc_indicator(origin, theta_pt, m, th);
  StepFn rest = cur.a.minus(expected_shape, th);
  if (!rest.is_constant())
    throw std::logic_error("normalized a-part is not n + m*chi_[0,theta)");
  out.n = rest.constant_value();
  out.m = m;
  out.canonical = cur;
  return out;
}

// b |-> (a_b, b placed on level one), with alpha(b) - b = -partial(a_b)
// and the normalization a_b(0) = b(0).
inline H0Chain phi1(const JumpFn& b, const Theta& th) {
  CirclePoint origin = CirclePoint::zero();
  JumpFn jumps = b.plus(b.rotated(Int(1), th).negated(), th);  // b - alpha(b)
  StepFn a = StepFn::from_jumps(jumps, th);
  Int shift = b.at(origin) - a.eval(origin, th);
  a = a.plus_constant(shift);
  LevelChain lc;
  for (const auto& [pt, c] : b.entries()) lc.add(Int(1), pt, c, th);
  return H0Chain(std::move(a), std::move(lc));
}

// Pairing with the invariant Lebesgue measure: the integral of the base
// part, exact in Q + Q*theta.
inline RealExpr pair_lebesgue(const H0Chain& c, const Theta& th) {
  if (!is_cycle(c, th)) throw NotACycle("pair_lebesgue: not a cycle");
  return c.a.integral(th);
}

// Mapping torus representative of a cycle: the loop u(t,x) =
// exp(2 pi i t f(x)) v(x), recorded as the slope data f together with the
// winding data of v.
struct MappingTorusRep {
  StepFn f;                                          // slope in the t-direction
  std::vector<std::tuple<Int, CirclePoint, Int>> v;  // winding data from b
};

inline MappingTorusRep mapping_torus_rep(const H0Chain& c, const Theta& th) {
  if (!is_cycle(c, th)) throw NotACycle("mapping_torus_rep: not a cycle");
  return MappingTorusRep{c.a, c.b.entries()};
}

// de la Harpe-Skandalis determinant of the mapping torus loop against the
// invariant trace; equals the integral of the slope function.
inline RealExpr lambda_tau(const MappingTorusRep& rep, const Theta& th) {
  return rep.f.integral(th);
}

}  // namespace gelli
