#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <map>

#include "opforms/field.hpp"
#include "opforms/graded.hpp"
#include "opforms/operads.hpp"
#include "opforms/perm.hpp"

using namespace opforms;

namespace {

template <typename K>
CochainComplex<K> component_complex(const Operad& O, int n, int depth) {
  CochainComplex<K> C;
  C.lo = -depth;
  C.hi = 0;
  for (int dg = -depth; dg <= 0; ++dg) C.dims[dg] = O.dim(n, dg);
  for (int dg = -depth; dg < 0; ++dg) {
    SparseMatrix<K> m(C.dim(dg + 1), C.dim(dg));
    for (int i = 0; i < C.dim(dg); ++i)
      for (const auto& t : O.diff(n, dg, i)) m.add(t.idx, i, K::from_int(t.c));
    C.set_diff(dg, std::move(m));
  }
  return C;
}

// integer-exact d.d on a component, no field reduction
bool d_squares_to_zero(const Operad& O, int n, int depth) {
  for (int dg = -depth; dg <= -2; ++dg) {
    for (int i = 0; i < O.dim(n, dg); ++i) {
      std::map<int, long long> acc;
      for (const auto& t : O.diff(n, dg, i))
        for (const auto& u : O.diff(n, dg + 1, t.idx)) acc[u.idx] += t.c * u.c;
      for (const auto& [ix, c] : acc)
        if (c != 0) return false;
    }
  }
  return true;
}

int basis_index_of_weight(const FreeAlgebraTruncation& A, int deg, int weight) {
  for (int i = 0; i < A.dim(deg); ++i)
    if (A.basis(deg, i).weight == weight) return i;
  return -1;
}

}  // namespace

TEST_CASE("permutation calculus") {
  for (int n = 0; n <= 5; ++n) {
    const long long f = factorial(n);
    for (long long r = 0; r < f; ++r) {
      const Perm p = perm_unrank(n, r);
      CHECK(perm_rank(p) == r);
      CHECK(perm_mul(p, perm_inv(p)) == perm_id(n));
    }
  }
  CHECK(perm_rank(perm_id(4)) == 0);
  CHECK(perm_sign(perm_id(3)) == 1);
  CHECK(perm_sign(Perm{1, 0, 2}) == -1);
  CHECK(perm_sign(Perm{1, 2, 0}) == 1);
  // signs multiply
  for (long long a = 0; a < 6; ++a)
    for (long long b = 0; b < 6; ++b) {
      const Perm pa = perm_unrank(3, a), pb = perm_unrank(3, b);
      CHECK(perm_sign(perm_mul(pa, pb)) == perm_sign(pa) * perm_sign(pb));
    }
  // block composition: swap two blocks of sizes 2 and 3
  const Perm sw{1, 0};
  const Perm got = perm_comp(sw, {perm_id(2), perm_id(3)});
  CHECK(got == Perm{3, 4, 0, 1, 2});
  // identity outer permutation gives the direct sum
  const Perm t2{1, 0};
  CHECK(perm_comp(perm_id(2), {t2, perm_id(2)}) == Perm{1, 0, 2, 3});
  CHECK(perm_comp(perm_id(2), {perm_id(2), t2}) == Perm{0, 1, 3, 2});
  // unit laws of the permutation operad
  const Perm c3{2, 0, 1};
  CHECK(perm_comp(c3, {perm_id(1), perm_id(1), perm_id(1)}) == c3);
  CHECK(perm_comp(perm_id(1), {c3}) == c3);
}

TEST_CASE("bar operad component dimensions") {
  BarOperad B(4, 2);
  for (int n = 0; n <= 4; ++n) CHECK(B.dim(n, 0) == factorial(n));
  CHECK(B.dim(0, -1) == 0);
  CHECK(B.dim(1, -1) == 0);  // arities 0 and 1 are just R
  CHECK(B.dim(2, -1) == 2);
  CHECK(B.dim(2, -2) == 2);
  CHECK(B.dim(3, -1) == 30);
  CHECK(B.dim(3, -2) == 150);
  CHECK(B.dim(4, -1) == 24 * 23);
  CHECK(B.augment(2, 0, B.section_index(2)) == 1);
  CHECK(B.augment(2, -1, 0) == 0);
  CHECK_THROWS_AS(B.dim(5, 0), std::out_of_range);
  CHECK_THROWS_AS((void)B.compose(-2, 0, {{2, -1, 0}}), std::out_of_range);
}

TEST_CASE("bar differential squares to zero") {
  BarOperad B(3, 3);
  CHECK(d_squares_to_zero(B, 2, 3));
  CHECK(d_squares_to_zero(B, 3, 3));
  component_complex<F5>(B, 3, 3).validate();
  component_complex<Rat>(B, 2, 3).validate();
}

TEST_CASE("bar components resolve the trivial representation") {
  // the augmentation to Com is a quasi-isomorphism within the window
  BarOperad B(3, 3);
  auto check_acyclic = [](const auto& C, int depth) {
    CHECK(C.betti(0) == 1);
    for (int dg = -depth + 1; dg < 0; ++dg) CHECK(C.betti(dg) == 0);
  };
  check_acyclic(component_complex<F2>(B, 2, 3), 3);
  check_acyclic(component_complex<Rat>(B, 2, 3), 3);
  check_acyclic(component_complex<F2>(B, 3, 3), 3);
  check_acyclic(component_complex<F3>(B, 3, 3), 3);
  check_acyclic(component_complex<Rat>(B, 3, 3), 3);
  // the surviving degree-0 class augments to 1, so the augmentation induces
  // the isomorphism
  CHECK(B.augment(2, 0, B.section_index(2)) == 1);
}

TEST_CASE("operad axioms hold for Com, I, and the bar operad") {
  {
    auto rep = operad_axiom_check(com_operad(6), 4, 0);
    INFO(rep.message);
    CHECK(rep.ok);
  }
  {
    UnitOperad I;
    auto rep = operad_axiom_check(I, 3, 0);
    INFO(rep.message);
    CHECK(rep.ok);
  }
  {
    BarOperad B(3, 2);
    auto rep = operad_axiom_check(B, 3, 2);
    INFO(rep.message);
    CHECK(rep.ok);
  }
  {
    BarOperad B(4, 1);
    auto rep = operad_axiom_check(B, 4, 1);
    INFO(rep.message);
    CHECK(rep.ok);
  }
}

namespace {

// deliberately wrong composition: flips every coefficient landing in total
// degree -1
class CorruptedBar : public BarOperad {
 public:
  using BarOperad::BarOperad;
  std::vector<OpTerm> compose(int deg0, int idx0, const std::vector<OpKey>& args) const override {
    auto v = BarOperad::compose(deg0, idx0, args);
    int d = deg0;
    for (const auto& a : args) d += a.deg;
    if (d == -1)
      for (auto& t : v) t.c = -t.c;
    return v;
  }
};

}  // namespace

TEST_CASE("corrupted composition is rejected with a witness") {
  CorruptedBar B(3, 2);
  auto rep = operad_axiom_check(B, 3, 2);
  CHECK(!rep.ok);
  CHECK(rep.message.find("fails") != std::string::npos);
}

TEST_CASE("free commutative algebra truncations") {
  ComOperad com(6);
  SUBCASE("one degree-1 generator over characteristic 2: divided powers") {
    FreeAlgebraTruncation A(com, {1}, {}, 3, 0, 3, 2);
    CHECK(A.dim(0) == 1);
    CHECK(A.dim(1) == 1);
    CHECK(A.dim(2) == 1);
    CHECK(A.dim(3) == 1);
  }
  SUBCASE("one degree-2 generator over the rationals: polynomial") {
    FreeAlgebraTruncation A(com, {2}, {}, 3, 0, 6, 0);
    CHECK(A.dim(0) == 1);
    CHECK(A.dim(2) == 1);
    CHECK(A.dim(4) == 1);
    CHECK(A.dim(6) == 1);
    CHECK(A.dim(1) == 0);
    CHECK(A.dim(3) == 0);
  }
  SUBCASE("one degree-1 generator over the rationals: exterior") {
    FreeAlgebraTruncation A(com, {1}, {}, 3, 0, 3, 0);
    CHECK(A.dim(1) == 1);
    CHECK(A.dim(2) == 0);
    CHECK(A.dim(3) == 0);
  }
  SUBCASE("two generators mix by graded commutativity") {
    // u odd, v odd: uv survives, u^2 = v^2 = 0 away from characteristic 2
    FreeAlgebraTruncation A(com, {1, 1}, {}, 2, 0, 2, 0);
    CHECK(A.dim(1) == 2);
    CHECK(A.dim(2) == 1);
    FreeAlgebraTruncation B(com, {1, 1}, {}, 2, 0, 2, 2);
    CHECK(B.dim(2) == 3);
  }
}

TEST_CASE("free algebra over the unit operad is R plus the module") {
  UnitOperad I;
  FreeAlgebraTruncation A(I, {1, 2}, {}, 3, 0, 6, 0);
  CHECK(A.dim(0) == 1);
  CHECK(A.dim(1) == 1);
  CHECK(A.dim(2) == 1);
  CHECK(A.dim(3) == 0);
  CHECK(A.dim(4) == 0);
}

TEST_CASE("free algebra differential and window escapes") {
  ComOperad com(6);
  SUBCASE("d squares to zero inside the window") {
    // x in degree 0 with dx = y
    FreeAlgebraTruncation A(com, {0, 1}, {{{1, 1}}, {}}, 3, 0, 4, 0);
    for (int deg = 0; deg <= 3; ++deg) {
      for (int i = 0; i < A.dim(deg); ++i) {
        auto d1 = A.differential(deg, i);
        REQUIRE(d1.in_window);
        std::map<int, long long> acc;
        bool ok_window = true;
        for (const auto& [ix, c] : d1.terms) {
          auto d2 = A.differential(d1.deg, ix);
          if (!d2.in_window) ok_window = false;
          for (const auto& [jx, c2] : d2.terms) acc[jx] += c * c2;
        }
        if (!ok_window) continue;
        for (const auto& [jx, c] : acc) CHECK(c == 0);
      }
    }
    // Leibniz spot check: d(x^2) = 2 x y
    const int x2 = basis_index_of_weight(A, 0, 2);
    REQUIRE(x2 >= 0);
    auto d = A.differential(0, x2);
    bool two_xy = false;
    for (const auto& [ix, c] : d.terms) {
      const auto& m = A.basis(1, ix);
      if (m.weight == 2 && c == 2) two_xy = true;
    }
    CHECK(two_xy);
  }
  SUBCASE("escapes are flagged, not dropped") {
    FreeAlgebraTruncation A(com, {0, 1}, {{{1, 1}}, {}}, 2, 0, 0, 0);
    const int x = basis_index_of_weight(A, 0, 1);
    REQUIRE(x >= 0);
    auto d = A.differential(0, x);
    CHECK(!d.in_window);
    CHECK(d.terms.empty());
  }
}

TEST_CASE("unit section products") {
  SUBCASE("over the bar operad") {
    BarOperad B(3, 2);
    FreeAlgebraTruncation A(B, {1}, {}, 2, -2, 4, 2);
    // theta_2(1_2 (x) 1 (x) a) = a
    const int unit_mono = basis_index_of_weight(A, 0, 0);
    const int a_mono = basis_index_of_weight(A, 1, 1);
    REQUIRE(unit_mono >= 0);
    REQUIRE(a_mono >= 0);
    auto r = A.theta(0, B.section_index(2), {{0, unit_mono}, {1, a_mono}});
    CHECK(r.in_window);
    CHECK(r.deg == 1);
    REQUIRE(r.terms.size() == 1);
    CHECK(r.terms[0].first == a_mono);
    CHECK(r.terms[0].second == 1);
    // and on the other side
    auto l = A.theta(0, B.section_index(2), {{1, a_mono}, {0, unit_mono}});
    REQUIRE(l.terms.size() == 1);
    CHECK(l.terms[0].first == a_mono);
    CHECK(l.terms[0].second == 1);
  }
  SUBCASE("graded commutativity through the section") {
    ComOperad com(6);
    FreeAlgebraTruncation A(com, {1, 3}, {}, 2, 0, 6, 0);
    const int u = basis_index_of_weight(A, 1, 1);
    const int v = basis_index_of_weight(A, 3, 1);
    REQUIRE(u >= 0);
    REQUIRE(v >= 0);
    auto uv = A.theta(0, 0, {{1, u}, {3, v}});
    auto vu = A.theta(0, 0, {{3, v}, {1, u}});
    REQUIRE(uv.terms.size() == 1);
    REQUIRE(vu.terms.size() == 1);
    CHECK(uv.terms[0].first == vu.terms[0].first);
    CHECK(uv.terms[0].second == -vu.terms[0].second);
  }
  SUBCASE("squares through the section") {
    ComOperad com(6);
    FreeAlgebraTruncation A(com, {2}, {}, 3, 0, 6, 0);
    const int x = basis_index_of_weight(A, 2, 1);
    const int x2 = basis_index_of_weight(A, 4, 2);
    REQUIRE(x >= 0);
    REQUIRE(x2 >= 0);
    auto r = A.theta(0, 0, {{2, x}, {2, x}});
    REQUIRE(r.terms.size() == 1);
    CHECK(r.terms[0].first == x2);
    CHECK(r.terms[0].second == 1);
  }
}
