#pragma once

#include <utility>

#include "opforms/simplicial.hpp"

namespace opforms {

inline std::string ref_label(const SimplicialSet& X, const SimplexRef& r) {
  std::string s;
  for (int j : r.word) s += "s" + std::to_string(j);
  if (!s.empty()) s += ".";
  return s + X.label(r.dim, r.idx);
}

// Product of simplicial sets.  Nondegenerate n-cells are coordinate pairs
// (s_U x, s_V y) with x, y nondegenerate and U, V disjoint; cells are
// enumerated per dimension in a fixed deterministic order and cached.
class ProductSet : public SimplicialSet {
 public:
  struct PCell {
    SimplexRef a, b;
  };

  ProductSet(const SimplicialSet& x, const SimplicialSet& y)
      : x_(&x), y_(&y) {}

  const SimplicialSet& left() const { return *x_; }
  const SimplicialSet& right() const { return *y_; }

  int count(int n) const override;
  SimplexRef face(int n, int idx, int i) const override;
  std::string label(int n, int idx) const override;

  const PCell& cell(int n, int idx) const;
  // Canonical simplex of the product from a coordinate pair of equal total
  // dimension: strips common degeneracies (largest index first).
  SimplexRef pair_ref(SimplexRef a, SimplexRef b) const;

 private:
  void build(int n) const;

  const SimplicialSet *x_, *y_;
  mutable std::vector<std::vector<PCell>> cells_;
  using Key = std::tuple<std::vector<int>, int, int, std::vector<int>, int, int>;
  mutable std::vector<std::map<Key, int>> index_;
};

class DisjointUnion : public SimplicialSet {
 public:
  explicit DisjointUnion(std::vector<const SimplicialSet*> pieces)
      : ps_(std::move(pieces)) {}

  int count(int n) const override;
  SimplexRef face(int n, int idx, int i) const override;
  std::string label(int n, int idx) const override;

  int offset(int piece, int dim) const;
  SimplexRef to_global(int piece, SimplexRef r) const;
  std::pair<int, int> locate(int n, int idx) const;  // (piece, local idx)

 private:
  std::vector<const SimplicialSet*> ps_;
};

// Quotient of a simplicial set by the operator-closure of generating
// identifications, tabulated through dimension N.  proj_img holds the images
// of the domain's nondegenerate cells.
struct Quotient {
  TableSet set;
  std::vector<std::vector<SimplexRef>> proj_img;

  SimplicialMap projection(const SimplicialSet& dom) const {
    return SimplicialMap{&dom, &set, proj_img};
  }
};

Quotient quotient_by(const SimplicialSet& X, int N,
                     const std::vector<std::pair<SimplexRef, SimplexRef>>& gens);

// Identifications collapsing the listed simplices to (degeneracies of) the
// given vertex.
void append_collapse_gens(std::vector<std::pair<SimplexRef, SimplexRef>>& gens,
                          const std::vector<SimplexRef>& cells,
                          const SimplexRef& vertex);

// The fully degenerate n-simplex over a vertex.
inline SimplexRef degenerate_point(const SimplexRef& vertex, int n) {
  SimplexRef r = vertex;
  r.word.resize(n);
  for (int i = 0; i < n; ++i) r.word[i] = n - 1 - i;
  return r;
}

// Identifications collapsing both ends of the cylinder X x Delta[1] to
// points (unreduced suspension), through dimension N.
std::vector<std::pair<SimplexRef, SimplexRef>> suspension_gens(
    const ProductSet& cyl, const SimplicialSet& X, int N);

}  // namespace opforms
