#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "gelli/elliott.hpp"

using namespace gelli;

namespace {

EllInvariant rotation_invariant() {
  EllInvariant inv;
  inv.even = PresentedGroup::free(2);
  inv.odd = PresentedGroup::free(2);
  inv.unit = {Int(1), Int(0)};
  inv.simplex = SimplexDescriptor{0, true};
  inv.traces = {TraceFunctional{
      "lebesgue", {RealExpr::of_int(Int(1)), RealExpr::theta()}}};
  return inv;
}

EllInvariant cross_not_good_k() {
  EllInvariant inv;
  inv.even = PresentedGroup::of_form(2, {Int(4), Int(4)});
  inv.odd = PresentedGroup::of_form(2, {Int(4), Int(4)});
  inv.unit = {Int(1), Int(0), Int(0), Int(0)};
  inv.simplex = SimplexDescriptor{0, true};
  inv.traces = {TraceFunctional{
      "tau",
      {RealExpr::of_int(Int(1)), RealExpr(), RealExpr(), RealExpr()}}};
  return inv;
}

EllInvariant cross_not_good_h() {
  EllInvariant inv;
  std::vector<Int> twos{Int(2), Int(2), Int(2), Int(2)};
  inv.even = PresentedGroup::of_form(2, twos);
  inv.odd = PresentedGroup::of_form(2, twos);
  inv.unit = {Int(1), Int(0), Int(0), Int(0), Int(0), Int(0)};
  inv.simplex = SimplexDescriptor{0, true};
  inv.traces = {TraceFunctional{
      "tau",
      {RealExpr::of_int(Int(1)), RealExpr(), RealExpr(), RealExpr(),
       RealExpr(), RealExpr()}}};
  return inv;
}

}  // namespace

TEST_CASE("hk_check is reflexive with the identity witness") {
  EllInvariant inv = rotation_invariant();
  HkVerdict v = hk_check(inv, inv);
  REQUIRE(v.good());
  REQUIRE(v.witness.has_value());
  CHECK(v.witness->even_iso == IntMatrix::identity(2));
  CHECK(verify_hk_witness(inv, inv, *v.witness));
}

TEST_CASE("hk_check fails at the group layer for the cross example") {
  HkVerdict v = hk_check(cross_not_good_k(), cross_not_good_h());
  CHECK(v.status == HkStatus::NotGood);
  CHECK(v.failing_layer == HkLayer::Group);
}

TEST_CASE("the three irrational rotation models agree pairwise") {
  // All three Z/2-graded profiles collapse to (Z^2, Z^2) with unit (1,0)
  // and pairing (1, theta); models differ only upstream.
  EllInvariant a = rotation_invariant();
  EllInvariant b = rotation_invariant();
  EllInvariant c = rotation_invariant();
  for (const auto* x : {&a, &b, &c})
    for (const auto* y : {&a, &b, &c}) {
      HkVerdict v = hk_check(*x, *y);
      CHECK(v.good());
      CHECK(verify_hk_witness(*x, *y, *v.witness));
    }
}

TEST_CASE("pairing evaluation") {
  EllInvariant inv = rotation_invariant();
  CHECK(pairing_eval(inv, {Int(1), Int(0)}) ==
        std::vector<RealExpr>{RealExpr::of_int(Int(1))});
  CHECK(pairing_eval(inv, {Int(2), Int(3)}) ==
        std::vector<RealExpr>{RealExpr(Rat(2), Rat(3))});

  EllInvariant with_torsion;
  with_torsion.even = PresentedGroup::of_form(1, {Int(3)});
  with_torsion.odd = PresentedGroup::trivial();
  with_torsion.unit = {Int(1), Int(0)};
  with_torsion.simplex = SimplexDescriptor{0, true};
  with_torsion.traces = {
      TraceFunctional{"tau", {RealExpr::of_int(Int(1)), RealExpr()}}};
  CHECK(pairing_eval(with_torsion, {Int(0), Int(2)}) ==
        std::vector<RealExpr>{RealExpr()});
}

TEST_CASE("nonzero trace values on torsion are rejected") {
  EllInvariant bad;
  bad.even = PresentedGroup::of_form(0, {Int(2)});
  bad.odd = PresentedGroup::trivial();
  bad.unit = {Int(1)};
  bad.simplex = SimplexDescriptor{0, true};
  bad.traces = {TraceFunctional{"tau", {RealExpr::of_int(Int(1))}}};
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("unit layer obstruction: contents differ") {
  EllInvariant a = rotation_invariant();
  EllInvariant b = rotation_invariant();
  b.unit = {Int(2), Int(0)};
  HkVerdict v = hk_check(a, b);
  CHECK(v.status == HkStatus::NotGood);
  CHECK(v.failing_layer == HkLayer::Unit);
}

TEST_CASE("unit layer obstruction: unreachable torsion defect") {
  auto make = [](long tor) {
    EllInvariant inv;
    inv.even = PresentedGroup::of_form(1, {Int(4)});
    inv.odd = PresentedGroup::trivial();
    inv.unit = {Int(2), Int(tor)};
    inv.simplex = SimplexDescriptor{0, true};
    inv.traces = {TraceFunctional{"tau", {RealExpr(), RealExpr()}}};
    return inv;
  };
  // (2,1) ~ (2,3) via the torsion automorphism, but never ~ (2,0):
  // 2v + t*1 is odd mod 4 for t in {1,3}.
  HkVerdict good = hk_check(make(1), make(3));
  CHECK(good.good());
  CHECK(verify_hk_witness(make(1), make(3), *good.witness));
  HkVerdict bad = hk_check(make(1), make(0));
  CHECK(bad.status == HkStatus::NotGood);
  CHECK(bad.failing_layer == HkLayer::Unit);
}

TEST_CASE("pairing layer obstruction") {
  EllInvariant a = rotation_invariant();
  EllInvariant b = rotation_invariant();
  b.traces = {TraceFunctional{
      "lebesgue", {RealExpr::of_int(Int(1)), RealExpr(Rat(0), Rat(2))}}};
  HkVerdict v = hk_check(a, b);
  CHECK(v.status == HkStatus::NotGood);
  CHECK(v.failing_layer == HkLayer::Pairing);
  // Symmetric direction: from b's side the candidate is 2theta -> theta,
  // again with no integer solution.
  HkVerdict w = hk_check(b, a);
  CHECK(w.status == HkStatus::NotGood);
  CHECK(w.failing_layer == HkLayer::Pairing);
}

TEST_CASE("budget exhaustion reports UNDECIDED, never a verdict") {
  // rho_B o U = rho_A with rho_A = (1, 0), rho_B = (1, 1) has unimodular
  // solutions (e.g. a shear) but no signed-permutation solution, so the
  // verdict needs the lattice search.
  EllInvariant a;
  a.even = PresentedGroup::free(2);
  a.odd = PresentedGroup::trivial();
  a.unit = {Int(0), Int(0)};
  a.simplex = SimplexDescriptor{0, true};
  a.traces = {TraceFunctional{"tau", {RealExpr::of_int(Int(1)), RealExpr()}}};
  EllInvariant b = a;
  b.traces = {TraceFunctional{
      "tau", {RealExpr::of_int(Int(1)), RealExpr::of_int(Int(1))}}};
  HkSearchBudget tiny;
  tiny.max_free_candidates = 0;
  HkVerdict v = hk_check(a, b, tiny);
  CHECK(v.status == HkStatus::Undecided);
  // With the default budget the same comparison is decided.
  HkVerdict full = hk_check(a, b);
  CHECK(full.good());
  CHECK(verify_hk_witness(a, b, *full.witness));
}

TEST_CASE("simplex mismatch is a structural precondition") {
  EllInvariant a = rotation_invariant();
  EllInvariant b = rotation_invariant();
  b.simplex = SimplexDescriptor{2, false};
  b.traces.push_back(TraceFunctional{
      "second", {RealExpr::of_int(Int(1)), RealExpr::theta()}});
  CHECK_THROWS_AS(hk_check(a, b), std::invalid_argument);
}

TEST_CASE("hk_check is symmetric on randomized invariants") {
  std::mt19937 rng(555);
  std::uniform_int_distribution<long> val(-2, 2), tor(0, 3), unit(-2, 2);
  for (int trial = 0; trial < 40; ++trial) {
    auto make_inv = [&](bool flip) {
      EllInvariant inv;
      inv.even = PresentedGroup::of_form(2, {Int(4)});
      inv.odd = PresentedGroup::cyclic(Int(2));
      inv.unit = {Int(unit(rng)), Int(unit(rng)), Int(tor(rng))};
      inv.simplex = SimplexDescriptor{0, true};
      RealExpr v1(Rat(val(rng)), Rat(flip ? 1 : val(rng)));
      RealExpr v2(Rat(val(rng)), Rat(val(rng)));
      inv.traces = {TraceFunctional{"tau", {v1, v2, RealExpr()}}};
      return inv;
    };
    EllInvariant a = make_inv(true);
    EllInvariant b = make_inv(false);
    HkVerdict ab = hk_check(a, b);
    HkVerdict ba = hk_check(b, a);
    if (ab.status != HkStatus::Undecided && ba.status != HkStatus::Undecided)
      CHECK((ab.status == HkStatus::Good) == (ba.status == HkStatus::Good));
    if (ab.good()) CHECK(verify_hk_witness(a, b, *ab.witness));
    CHECK(hk_check(a, a).good());
    CHECK(hk_check(b, b).good());
  }
}
