#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "gelli/intmath.hpp"

namespace gelli {

struct PrecisionExhausted : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// An irrational theta in (0,1) given by a finite continued fraction prefix
// [0; a_1, a_2, ...].  Convergents are precomputed at construction, so
// values are immutable and freely shareable between threads.  Comparisons
// that would need terms beyond the prefix raise PrecisionExhausted instead
// of guessing.
class Theta {
 public:
  explicit Theta(std::vector<Int> cf_terms) : terms_(std::move(cf_terms)) {
    if (terms_.size() < 2 || terms_[0] != 0)
      throw std::invalid_argument("theta needs CF terms [0; a1, a2, ...]");
    for (std::size_t i = 1; i < terms_.size(); ++i)
      if (terms_[i] <= 0)
        throw std::invalid_argument("CF terms after the first must be positive");
    Int h0(1), h1(terms_[0]), k0(0), k1(1);
    convergents_.push_back(make_rat(h1, k1));
    for (std::size_t i = 1; i < terms_.size(); ++i) {
      Int h2 = terms_[i] * h1 + h0;
      Int k2 = terms_[i] * k1 + k0;
      convergents_.push_back(make_rat(h2, k2));
      h0 = h1; h1 = h2; k0 = k1; k1 = k2;
    }
  }

  // Golden ratio conjugate (sqrt(5)-1)/2 = [0; 1, 1, 1, ...].
  static Theta golden(std::size_t depth = 64) {
    std::vector<Int> t(depth + 1, Int(1));
    t[0] = 0;
    return Theta(std::move(t));
  }

  // sqrt(2) - 1 = [0; 2, 2, 2, ...].
  static Theta silver(std::size_t depth = 48) {
    std::vector<Int> t(depth + 1, Int(2));
    t[0] = 0;
    return Theta(std::move(t));
  }

  const std::vector<Int>& terms() const { return terms_; }

  std::size_t depth() const { return convergents_.size() - 1; }

  // Open interval around theta at refinement level k, from consecutive
  // convergents; strictly shrinking in k.
  std::pair<Rat, Rat> interval(std::size_t k) const {
    const Rat& a = convergents_[k];
    const Rat& b = convergents_[k + 1];
    return a < b ? std::make_pair(a, b) : std::make_pair(b, a);
  }

  // Sign of (theta - r): +1 or -1; never 0 since theta is irrational.
  int compare(const Rat& r) const {
    // Even-indexed convergents increase to theta, odd-indexed decrease;
    // theta lies strictly between any two consecutive convergents.
    for (std::size_t i = 0; i + 1 < convergents_.size(); ++i) {
      const Rat& lo = i % 2 == 0 ? convergents_[i] : convergents_[i + 1];
      const Rat& hi = i % 2 == 0 ? convergents_[i + 1] : convergents_[i];
      if (r <= lo) return 1;
      if (r >= hi) return -1;
    }
    throw PrecisionExhausted(
        "continued fraction prefix too short to separate theta from " +
        rat_str(r));
  }

  bool less_than(const Rat& r) const { return compare(r) < 0; }
  bool greater_than(const Rat& r) const { return compare(r) > 0; }

 private:
  std::vector<Int> terms_;
  std::vector<Rat> convergents_;
};

// Exact element a + b*theta of Q + Q*theta.  Since theta is irrational,
// equality is componentwise; order is decided against theta's interval.
struct RealExpr {
  Rat a;
  Rat b;

  RealExpr() : a(0), b(0) {}
  RealExpr(Rat a_, Rat b_) : a(std::move(a_)), b(std::move(b_)) {}
  static RealExpr of_int(const Int& n) { return RealExpr(Rat(n), Rat(0)); }
  static RealExpr theta() { return RealExpr(Rat(0), Rat(1)); }

  bool operator==(const RealExpr& o) const { return a == o.a && b == o.b; }
  bool operator!=(const RealExpr& o) const { return !(*this == o); }

  RealExpr operator+(const RealExpr& o) const {
    return RealExpr(a + o.a, b + o.b);
  }
  RealExpr operator-(const RealExpr& o) const {
    return RealExpr(a - o.a, b - o.b);
  }
  RealExpr operator-() const { return RealExpr(-a, -b); }

  RealExpr scaled(const Rat& c) const { return RealExpr(a * c, b * c); }

  bool is_zero() const { return a == 0 && b == 0; }
};

// Sign of x, deciding b*theta + a against 0 via theta's interval.
inline int sign(const RealExpr& x, const Theta& th) {
  if (x.b == 0) return x.a < 0 ? -1 : (x.a > 0 ? 1 : 0);
  // a + b*theta <> 0  <=>  theta <> -a/b, flipped when b < 0.
  Rat threshold = -x.a / x.b;
  int c = th.compare(threshold);
  return x.b > 0 ? c : -c;
}

inline bool less(const RealExpr& x, const RealExpr& y, const Theta& th) {
  return sign(x - y, th) < 0;
}

// Exact floor of a + b*theta.  With b = 0 this is rational floor; otherwise
// the value is irrational and the floor is found by comparing theta with
// the rational cutoffs (n - a) / b.
inline Int floor_expr(const RealExpr& x, const Theta& th) {
  if (x.b == 0) return floor_rat(x.a);
  for (std::size_t k = 0; k < th.depth(); ++k) {
    auto [lo, hi] = th.interval(k);
    Rat vlo = x.a + x.b * (x.b > 0 ? lo : hi);
    Rat vhi = x.a + x.b * (x.b > 0 ? hi : lo);
    Int flo = floor_rat(vlo);
    // The value is irrational, so it is never an integer; an endpoint
    // landing exactly on an integer still pins the floor once both
    // open-interval ends agree.
    Int fhi = (vhi.get_den() == 1) ? Int(vhi.get_num() - 1) : floor_rat(vhi);
    if (flo == fhi) return flo;
  }
  throw PrecisionExhausted("continued fraction prefix too short for floor");
}

inline std::string realexpr_str(const RealExpr& x) {
  return rat_str(x.a) + " + " + rat_str(x.b) + "·θ";
}

}  // namespace gelli
