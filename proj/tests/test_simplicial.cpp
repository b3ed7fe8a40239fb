#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "opforms/constructions.hpp"
#include "opforms/field.hpp"
#include "opforms/simplicial.hpp"
#include "support/dense_oracle.hpp"
#include "support/simplicial_checks.hpp"

using namespace opforms;

namespace {

const std::vector<std::vector<int>> kRP2Facets = {
    {1, 2, 4}, {1, 2, 5}, {1, 3, 4}, {1, 3, 6}, {1, 5, 6},
    {2, 3, 5}, {2, 3, 6}, {2, 4, 6}, {3, 4, 5}, {4, 5, 6}};

}  // namespace

TEST_CASE("standard simplex combinatorics") {
  StandardSimplex d3(3);
  CHECK(d3.count(0) == 4);
  CHECK(d3.count(1) == 6);
  CHECK(d3.count(2) == 4);
  CHECK(d3.count(3) == 1);
  CHECK(d3.count(4) == 0);
  // face of the top cell drops the indexed vertex
  for (int i = 0; i <= 3; ++i) {
    SimplexRef f = d3.face(3, 0, i);
    CHECK_FALSE(f.degenerate());
    auto vs = d3.vertices(2, f.idx);
    for (int v : vs) CHECK(v != i);
  }
  check_all_identities(d3, 4);
}

TEST_CASE("word calculus canonical forms") {
  SimplexRef v = nondeg(0, 0);
  SimplexRef s00 = apply_degeneracy(apply_degeneracy(v, 0), 0);
  SimplexRef s10 = apply_degeneracy(apply_degeneracy(v, 0), 1);
  CHECK(s00 == s10);  // s_0 s_0 = s_1 s_0
  CHECK(s00.word == std::vector<int>{1, 0});
  CHECK(degenerate_point(v, 3).word == std::vector<int>{2, 1, 0});
  StandardSimplex d2(2);
  // degenerate simplices recognize exactly their own degeneracy images
  SimplexRef e = nondeg(1, 0);
  SimplexRef s0e = apply_degeneracy(e, 0);
  CHECK(in_degeneracy_image(d2, s0e, 0));
  CHECK_FALSE(in_degeneracy_image(d2, s0e, 1));
  CHECK_FALSE(in_degeneracy_image(d2, e, 0));
}

TEST_CASE("restriction to vertex subsets") {
  StandardSimplex d3(3);
  SimplexRef top = nondeg(3, 0);
  SimplexRef e = restrict_to_vertices(d3, top, {0, 2});
  CHECK_FALSE(e.degenerate());
  CHECK(d3.vertices(1, e.idx) == std::vector<int>{0, 2});
  SimplexRef vtx = restrict_to_vertices(d3, top, {3});
  CHECK(d3.vertices(0, vtx.idx) == std::vector<int>{3});
  // full subset is the identity
  CHECK(restrict_to_vertices(d3, top, {0, 1, 2, 3}) == top);
}

TEST_CASE("tabulated complexes from facets") {
  TableSet rp2 = TableSet::from_facets(kRP2Facets);
  CHECK(rp2.count(0) == 6);
  CHECK(rp2.count(1) == 15);
  CHECK(rp2.count(2) == 10);
  rp2.check_faces();
  check_all_identities(rp2, 3);
  CHECK(betti_list<F2>(rp2, 2) == std::vector<int>{1, 1, 1});
  CHECK(betti_list<F3>(rp2, 2) == std::vector<int>{1, 0, 0});
  CHECK(betti_list<Rat>(rp2, 2) == std::vector<int>{1, 0, 0});
}

TEST_CASE("boundary spheres") {
  BoundarySimplex s2(3);
  CHECK(betti_list<Rat>(s2, 3) == std::vector<int>{1, 0, 1, 0});
  CHECK(betti_list<F2>(s2, 3) == std::vector<int>{1, 0, 1, 0});
  BoundarySimplex s1(2);
  CHECK(betti_list<Rat>(s1, 2) == std::vector<int>{1, 1, 0});
  StandardSimplex d4(4);
  CHECK(betti_list<Rat>(d4, 3) == std::vector<int>{1, 0, 0, 0});
}

TEST_CASE("cyclic graphs are circles") {
  for (int m = 1; m <= 3; ++m) {
    TableSet c = cyclic_graph(m);
    c.check_faces();
    check_all_identities(c, 3);
    CHECK(betti_list<Rat>(c, 2) == std::vector<int>{1, 1, 0});
    CHECK(betti_list<F2>(c, 2) == std::vector<int>{1, 1, 0});
  }
}

TEST_CASE("product cell counts") {
  StandardSimplex d1(1);
  ProductSet sq(d1, d1);
  CHECK(sq.count(0) == 4);
  CHECK(sq.count(1) == 5);
  CHECK(sq.count(2) == 2);
  CHECK(sq.count(3) == 0);
  check_all_identities(sq, 3);

  TableSet c2 = cyclic_graph(2);
  ProductSet torus(c2, c2);
  CHECK(torus.count(0) == 4);
  CHECK(torus.count(1) == 12);
  CHECK(torus.count(2) == 8);
  CHECK(torus.count(3) == 0);
  check_all_identities(torus, 3);
  CHECK(betti_list<Rat>(torus, 2) == std::vector<int>{1, 2, 1});
  CHECK(betti_list<F2>(torus, 2) == std::vector<int>{1, 2, 1});

  TableSet c1 = cyclic_graph(1);
  ProductSet small_torus(c1, c1);
  CHECK(small_torus.count(0) == 1);
  CHECK(small_torus.count(1) == 3);
  CHECK(small_torus.count(2) == 2);
  CHECK(betti_list<Rat>(small_torus, 2) == std::vector<int>{1, 2, 1});
  CHECK(betti_list<F3>(small_torus, 2) == std::vector<int>{1, 2, 1});
}

TEST_CASE("pair canonicalization strips common degeneracies") {
  StandardSimplex d1(1);
  ProductSet sq(d1, d1);
  SimplexRef v00 = sq.pair_ref(nondeg(0, 0), nondeg(0, 0));
  SimplexRef s = sq.pair_ref(apply_degeneracy(nondeg(0, 0), 0),
                             apply_degeneracy(nondeg(0, 0), 0));
  CHECK(s == apply_degeneracy(v00, 0));
  // mixed pair stays nondegenerate (the diagonal of the square)
  SimplexRef diag = sq.pair_ref(nondeg(1, 0), nondeg(1, 0));
  CHECK_FALSE(diag.degenerate());
  CHECK(diag.total_dim() == 1);
}

TEST_CASE("product faces commute with projections") {
  TableSet c2 = cyclic_graph(2);
  StandardSimplex d1(1);
  ProductSet pr(c2, d1);
  for (int n = 1; n <= 2; ++n)
    for (int idx = 0; idx < pr.count(n); ++idx)
      for (int i = 0; i <= n; ++i) {
        SimplexRef f = pr.face(n, idx, i);
        // first coordinate of the face = face of the first coordinate
        const auto& c = pr.cell(n, idx);
        SimplexRef fa = apply_face(c2, c.a, i);
        SimplexRef got = f.degenerate()
                             ? [&] {
                                 SimplexRef g = pr.cell(f.dim, f.idx).a;
                                 for (auto it = f.word.rbegin();
                                      it != f.word.rend(); ++it)
                                   g = apply_degeneracy(g, *it);
                                 return g;
                               }()
                             : pr.cell(f.dim, f.idx).a;
        CHECK(got == fa);
      }
}

TEST_CASE("disjoint union bookkeeping") {
  TableSet a = cyclic_graph(1), b = cyclic_graph(2);
  DisjointUnion u({&a, &b});
  CHECK(u.count(0) == 3);
  CHECK(u.count(1) == 3);
  CHECK(u.locate(0, 1) == std::pair<int, int>{1, 0});
  SimplexRef f = u.face(1, 2, 0);  // second edge of b: v1 -> v0
  CHECK(f.idx == u.offset(1, 0) + 0);
  CHECK(betti_list<Rat>(u, 1) == std::vector<int>{2, 2});
}

TEST_CASE("quotient: interval mod endpoints is the minimal circle") {
  StandardSimplex d1(1);
  Quotient q = quotient_by(d1, 3, {{nondeg(0, 0), nondeg(0, 1)}});
  CHECK(q.set.count(0) == 1);
  CHECK(q.set.count(1) == 1);
  CHECK(q.set.count(2) == 0);
  SimplicialMap proj = q.projection(d1);
  proj.check();
  CHECK(betti_list<F2>(q.set, 2) == std::vector<int>{1, 1, 0});
}

TEST_CASE("quotient: suspension of a circle is the 2-sphere") {
  TableSet c2 = cyclic_graph(2);
  StandardSimplex d1(1);
  ProductSet cyl(c2, d1);
  Quotient q = quotient_by(cyl, 4, suspension_gens(cyl, c2, 4));
  CHECK(q.set.count(0) == 2);  // two poles
  CHECK(q.set.count(1) == 4);  // two spanning edges, two diagonals
  CHECK(q.set.count(2) == 4);
  CHECK(q.set.count(3) == 0);
  q.projection(cyl).check();
  CHECK(betti_list<Rat>(q.set, 3) == std::vector<int>{1, 0, 1, 0});
  CHECK(betti_list<F2>(q.set, 3) == std::vector<int>{1, 0, 1, 0});
  CHECK(betti_list<F3>(q.set, 3) == std::vector<int>{1, 0, 1, 0});
}

TEST_CASE("quotient: collapsing a contractible subcomplex preserves type") {
  // Delta[2] with an edge collapsed is still contractible
  StandardSimplex d2(2);
  std::vector<std::pair<SimplexRef, SimplexRef>> gens;
  append_collapse_gens(gens, {nondeg(0, 0), nondeg(0, 1), nondeg(1, 0)},
                       nondeg(0, 0));
  Quotient q = quotient_by(d2, 3, gens);
  q.projection(d2).check();
  CHECK(betti_list<Rat>(q.set, 2) == std::vector<int>{1, 0, 0});
  CHECK(q.set.count(0) == 2);
  CHECK(q.set.count(1) == 2);
  CHECK(q.set.count(2) == 1);
}

TEST_CASE("suspension of the 2-sphere is the 3-sphere") {
  BoundarySimplex s2(3);
  StandardSimplex d1(1);
  ProductSet cyl(s2, d1);
  Quotient q = quotient_by(cyl, 4, suspension_gens(cyl, s2, 4));
  q.projection(cyl).check();
  CHECK(betti_list<Rat>(q.set, 3) == std::vector<int>{1, 0, 0, 1});
  CHECK(betti_list<F2>(q.set, 3) == std::vector<int>{1, 0, 0, 1});
}
