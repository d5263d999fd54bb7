#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "gelli/complexes.hpp"

using namespace gelli;

namespace {

std::mt19937 rng(771);

// Two-term complex free(M.cols) -> free(M.rows) placed in degrees
// (top, top-1).
ChainComplex two_term(int top, const IntMatrix& m) {
  PresentedGroup src = PresentedGroup::free(m.cols());
  PresentedGroup dst = PresentedGroup::free(m.rows());
  std::map<int, PresentedGroup> obj{{top, src}, {top - 1, dst}};
  std::map<int, GroupHom> diff;
  diff.emplace(top, GroupHom(src, dst, m));
  return ChainComplex(std::move(obj), std::move(diff));
}

IntMatrix random_matrix(std::size_t rmax, long amax) {
  std::uniform_int_distribution<std::size_t> dim(1, rmax);
  std::uniform_int_distribution<long> entry(-amax, amax);
  IntMatrix m(dim(rng), dim(rng));
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) m(i, j) = entry(rng);
  return m;
}

// A complex with several degrees and honest composite differentials,
// built as the cone of a scalar self-map of a random two-term complex.
ChainComplex random_complex() {
  std::uniform_int_distribution<int> deg(-1, 2);
  std::uniform_int_distribution<long> scal(-2, 2);
  ChainComplex base = two_term(deg(rng), random_matrix(3, 4));
  std::map<int, GroupHom> comp;
  Int k(scal(rng));
  for (const auto& [n, g] : base.objects()) {
    IntMatrix m = IntMatrix::identity(g.generator_count());
    for (std::size_t i = 0; i < m.rows(); ++i) m(i, i) = k;
    comp.emplace(n, GroupHom(g, g, std::move(m)));
  }
  return mapping_cone(ComplexMap(base, base, std::move(comp)));
}

std::size_t rank_of(const PresentedGroup& g) { return g.rank(); }

}  // namespace

TEST_CASE("homology of the zero-differential two-term complex") {
  IntMatrix zero(1, 1);
  ChainComplex c = two_term(1, zero);
  CHECK(homology(c, 0).canonical() == CanonicalForm{1, {}});
  CHECK(homology(c, 1).canonical() == CanonicalForm{1, {}});
  CHECK(homology(c, 2).is_trivial());
}

TEST_CASE("homology of the wedge-matrix complex") {
  ChainComplex c = two_term(1, IntMatrix::of({{1, 1}, {-1, 2}}));
  PresentedGroup h0 = homology(c, 0);
  CHECK(h0.canonical().free_rank == 0);
  REQUIRE(h0.canonical().invariant_factors.size() == 1);
  CHECK(h0.canonical().invariant_factors[0] == 3);
  CHECK(homology(c, 1).is_trivial());
}

TEST_CASE("cone of the identity is acyclic") {
  for (int trial = 0; trial < 30; ++trial) {
    ChainComplex c = random_complex();
    ChainComplex cone = mapping_cone(ComplexMap::identity(c));
    for (int n = cone.min_degree() - 1; n <= cone.max_degree() + 1; ++n)
      CHECK(homology(cone, n).is_trivial());
  }
}

TEST_CASE("cone of id - alpha on Z^2 recovers the wedge answer") {
  PresentedGroup z2 = PresentedGroup::free(2);
  ChainComplex c = ChainComplex::concentrated(0, z2);
  IntMatrix a = IntMatrix::of({{0, -1}, {1, -1}});
  std::map<int, GroupHom> comp;
  comp.emplace(0, GroupHom(z2, z2, IntMatrix::identity(2) - a));
  ChainComplex cone = mapping_cone(ComplexMap(c, c, std::move(comp)));
  PresentedGroup h0 = homology(cone, 0);
  CHECK(h0.canonical().free_rank == 0);
  REQUIRE(h0.canonical().invariant_factors.size() == 1);
  CHECK(h0.canonical().invariant_factors[0] == 3);
  CHECK(homology(cone, 1).is_trivial());
}

TEST_CASE("cone of the zero map splits as a direct sum") {
  for (int trial = 0; trial < 20; ++trial) {
    ChainComplex c = two_term(1, random_matrix(3, 4));
    ChainComplex cone = mapping_cone(ComplexMap::zero(c, c));
    for (int n = -1; n <= 3; ++n) {
      PresentedGroup expected =
          direct_sum(homology(c, n), homology(c, n - 1));
      CHECK(is_isomorphic(homology(cone, n), expected));
    }
  }
}

TEST_CASE("connecting map of the cone SES recovers id - alpha") {
  PresentedGroup z2 = PresentedGroup::free(2);
  ChainComplex m = ChainComplex::concentrated(0, z2);
  IntMatrix a = IntMatrix::of({{0, -1}, {1, -1}});
  IntMatrix b = IntMatrix::identity(2) - a;
  std::map<int, GroupHom> comp;
  comp.emplace(0, GroupHom(z2, z2, b));
  ComplexSES ses = cone_ses(ComplexMap(m, m, std::move(comp)));
  check_ses(ses);
  // Quotient is M shifted up by one; its H_1 = Z^2 maps to H_0(M) = Z^2 by
  // the connecting map, which must have the kernel and cokernel of B.
  GroupHom conn = connecting_map(ses, 1);
  CHECK(kernel(conn).group.is_trivial());
  PresentedGroup ck = cokernel(conn).group;
  CHECK(ck.canonical().free_rank == 0);
  REQUIRE(ck.canonical().invariant_factors.size() == 1);
  CHECK(ck.canonical().invariant_factors[0] == 3);
}

TEST_CASE("split SES has zero connecting maps") {
  ChainComplex c = two_term(1, random_matrix(3, 3));
  ChainComplex d = two_term(0, random_matrix(3, 3));
  // B = C (+) D with the obvious inclusion of C and projection onto D.
  std::map<int, PresentedGroup> obj;
  std::map<int, GroupHom> diff;
  for (int n = -1; n <= 1; ++n)
    obj[n] = direct_sum(c.object(n), d.object(n));
  for (int n = -1; n <= 2; ++n) {
    IntMatrix m = c.differential(n).matrix().dsum(d.differential(n).matrix());
    GroupHom h(direct_sum(c.object(n), d.object(n)),
               direct_sum(c.object(n - 1), d.object(n - 1)), m);
    diff.emplace(n, h);
  }
  ChainComplex b(obj, diff);
  std::map<int, GroupHom> incl, proj;
  for (int n = -1; n <= 1; ++n) {
    std::size_t cn = c.object(n).generator_count();
    std::size_t dn = d.object(n).generator_count();
    IntMatrix mi(cn + dn, cn);
    for (std::size_t i = 0; i < cn; ++i) mi(i, i) = 1;
    incl.emplace(n, GroupHom(c.object(n), b.object(n), mi));
    IntMatrix mp(dn, cn + dn);
    for (std::size_t i = 0; i < dn; ++i) mp(i, cn + i) = 1;
    proj.emplace(n, GroupHom(b.object(n), d.object(n), mp));
  }
  ComplexSES ses{ComplexMap(c, b, incl), ComplexMap(b, d, proj)};
  check_ses(ses);
  for (int n = -1; n <= 2; ++n) CHECK(connecting_map(ses, n).is_zero_map());
}

TEST_CASE("long exact sequence of x2 concentrated in one degree") {
  PresentedGroup z = PresentedGroup::free(1);
  PresentedGroup z_mod_2 = PresentedGroup::cyclic(Int(2));
  ChainComplex a = ChainComplex::concentrated(0, z);
  ChainComplex b = ChainComplex::concentrated(0, z);
  ChainComplex q = ChainComplex::concentrated(0, z_mod_2);
  IntMatrix two(1, 1);
  two(0, 0) = 2;
  std::map<int, GroupHom> mi, mp;
  mi.emplace(0, GroupHom(z, z, two));
  mp.emplace(0, GroupHom(z, z_mod_2, IntMatrix::identity(1)));
  ComplexSES ses{ComplexMap(a, b, mi), ComplexMap(b, q, mp)};
  check_ses(ses);
  std::vector<GroupHom> les = long_exact_sequence(ses);
  auto report = verify_exact(les);
  CHECK(report.exact);
  // The boundary out of H_0(quotient) = Z/2 lands in H_{-1}(A) = 0.
  GroupHom conn = connecting_map(ses, 0);
  CHECK(conn.target().is_trivial());
  CHECK(conn.is_zero_map());
}

TEST_CASE("long exact sequences from cone SES are exact") {
  for (int trial = 0; trial < 10; ++trial) {
    ChainComplex c = two_term(1, random_matrix(2, 3));
    std::map<int, GroupHom> comp;
    std::uniform_int_distribution<long> scal(-2, 2);
    Int k(scal(rng));
    for (const auto& [n, g] : c.objects()) {
      IntMatrix m = IntMatrix::identity(g.generator_count());
      for (std::size_t i = 0; i < m.rows(); ++i) m(i, i) = k;
      comp.emplace(n, GroupHom(g, g, std::move(m)));
    }
    ComplexSES ses = cone_ses(ComplexMap(c, c, std::move(comp)));
    std::vector<GroupHom> les = long_exact_sequence(ses);
    CHECK(verify_exact(les).exact);
  }
}

TEST_CASE("verify_exact flags a failure location") {
  PresentedGroup z = PresentedGroup::free(1);
  IntMatrix two(1, 1);
  two(0, 0) = 2;
  GroupHom dbl(z, z, two);
  auto report = verify_exact({dbl, dbl});
  CHECK_FALSE(report.exact);
  CHECK(report.failed_node == 1);
}

TEST_CASE("euler characteristic is homology-invariant") {
  for (int trial = 0; trial < 20; ++trial) {
    ChainComplex c = random_complex();
    long chain_sum = 0, hom_sum = 0;
    for (int n = c.min_degree(); n <= c.max_degree(); ++n) {
      long sign = (n % 2 == 0) ? 1 : -1;
      chain_sum += sign * static_cast<long>(rank_of(c.object(n)));
      hom_sum += sign * static_cast<long>(rank_of(homology(c, n)));
    }
    CHECK(chain_sum == hom_sum);
  }
}

TEST_CASE("degree shift law") {
  for (int trial = 0; trial < 15; ++trial) {
    ChainComplex c = random_complex();
    for (int k : {-2, 1, 3}) {
      ChainComplex s = c.shift(k);
      for (int n = s.min_degree(); n <= s.max_degree(); ++n)
        CHECK(is_isomorphic(homology(s, n), homology(c, n - k)));
    }
  }
}

TEST_CASE("connecting map lifts fail loudly on invalid sequences") {
  // The middle map x2 is not surjective, so the generator of the quotient
  // cannot be lifted.
  PresentedGroup z = PresentedGroup::free(1);
  ChainComplex a = ChainComplex::concentrated(1, PresentedGroup::trivial());
  ChainComplex b = ChainComplex::concentrated(0, z);
  ChainComplex c = ChainComplex::concentrated(0, z);
  IntMatrix two(1, 1);
  two(0, 0) = 2;
  std::map<int, GroupHom> mp;
  mp.emplace(0, GroupHom(z, z, two));
  ComplexSES bogus{ComplexMap::zero(a, b), ComplexMap(b, c, mp)};
  CHECK_THROWS_AS(connecting_map(bogus, 0), LiftFailure);
}

TEST_CASE("complexes with inconsistent differentials are rejected") {
  PresentedGroup z = PresentedGroup::free(1);
  std::map<int, PresentedGroup> obj{{0, z}, {1, z}, {2, z}};
  std::map<int, GroupHom> diff;
  diff.emplace(1, GroupHom(z, z, IntMatrix::identity(1)));
  diff.emplace(2, GroupHom(z, z, IntMatrix::identity(1)));
  CHECK_THROWS_AS(ChainComplex(obj, diff), std::invalid_argument);
}
