#pragma once

#include "opforms/constructions.hpp"
#include "opforms/groups.hpp"
#include "opforms/simplicial.hpp"

namespace opforms {

// The 6-vertex triangulation of the real projective plane (antipodal
// quotient of the icosahedron boundary): 15 edges, 10 triangles, chi = 1.
inline TableSet rp2() {
  return TableSet::from_facets({{1, 2, 3},
                                {1, 2, 4},
                                {1, 3, 5},
                                {1, 4, 6},
                                {1, 5, 6},
                                {2, 3, 6},
                                {2, 4, 5},
                                {2, 5, 6},
                                {3, 4, 5},
                                {3, 4, 6}});
}

// Torus as the product of two triangulated circles: 9 vertices, 27
// nondegenerate 1-cells, 18 triangles.
struct TorusSet {
  TableSet a = cyclic_graph(3);
  TableSet b = cyclic_graph(3);
  ProductSet x{a, b};
};

// Classifying space of Z/m (the reduced bar construction on the constant
// group), truncated at dimension N; one nondegenerate simplex per dimension
// when m = 2.
struct KZmod {
  FiniteGroup g;
  ConstantGroup cg;
  WBarGroup wb;
  ElementSet set;
  KZmod(int m, int N) : g(FiniteGroup::cyclic(m)), cg(g), wb(cg), set(wb, N) {}
};

// Unreduced suspension of the 2-sphere (boundary of the 3-simplex), built
// as a collapsed cylinder; a 3-sphere model through dimension 4.
struct SuspBd3 {
  BoundarySimplex bd{3};
  StandardSimplex seg{1};
  ProductSet cyl{bd, seg};
  Quotient q;
  SuspBd3() : q(quotient_by(cyl, 4, suspension_gens(cyl, bd, 4))) {}
};

}  // namespace opforms
