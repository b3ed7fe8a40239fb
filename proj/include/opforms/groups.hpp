#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "opforms/simplicial.hpp"

namespace opforms {

// Multiplication-table group.
struct FiniteGroup {
  int n = 1;
  std::vector<std::vector<int>> mul;
  std::vector<int> inv;
  int id = 0;

  static FiniteGroup cyclic(int m);
  bool abelian() const;
  void check() const;  // associativity, unit, inverses
};

using El = std::int64_t;

// view any simplicial group through the base interface (used to iterate
// constructions: WBarGroup g2(as_group(g1)))
inline const class SimplicialGroup& as_group(const class SimplicialGroup& g) {
  return g;
}

// Simplicial group with finite (possibly large) element sets per dimension.
// Elements are indices; every q-simplex is an element, degenerate ones
// included.
class SimplicialGroup {
 public:
  virtual ~SimplicialGroup() = default;
  virtual El order(int q) const = 0;
  virtual El mul(int q, El a, El b) const = 0;
  virtual El inverse(int q, El a) const = 0;
  virtual El identity(int q) const = 0;
  virtual El face_el(int q, int i, El a) const = 0;    // G_q -> G_{q-1}
  virtual El degen_el(int q, int i, El a) const = 0;   // G_q -> G_{q+1}
  virtual std::string el_name(int q, El a) const;
};

// Constant simplicial group on a finite group.
class ConstantGroup : public SimplicialGroup {
 public:
  explicit ConstantGroup(FiniteGroup g) : g_(std::move(g)) {}
  El order(int) const override { return g_.n; }
  El mul(int, El a, El b) const override { return g_.mul[a][b]; }
  El inverse(int, El a) const override { return g_.inv[a]; }
  El identity(int) const override { return g_.id; }
  El face_el(int, int, El a) const override { return a; }
  El degen_el(int, int, El a) const override { return a; }
  std::string el_name(int, El a) const override { return std::to_string(a); }

 private:
  FiniteGroup g_;
};

// Classifying-space construction: WBar(G)_q = G_{q-1} x ... x G_0, with the
// standard bar faces (the 0th face drops the leading coordinate, middle faces
// merge via the group law, the last face drops the tail coordinate).  For
// abelian G the componentwise product makes it a simplicial group again, so
// the construction iterates.
class WBarGroup : public SimplicialGroup {
 public:
  explicit WBarGroup(const SimplicialGroup& g);
  // no silent copies: WBarGroup(wbar) must mean iteration, via as_group
  WBarGroup(const WBarGroup&) = delete;
  WBarGroup& operator=(const WBarGroup&) = delete;

  El order(int q) const override;
  El mul(int q, El a, El b) const override;
  El inverse(int q, El a) const override;
  El identity(int q) const override;
  El face_el(int q, int i, El a) const override;
  El degen_el(int q, int i, El a) const override;
  std::string el_name(int q, El a) const override;

  // coordinates (g_{q-1}, ..., g_0), stored with g_0 as the last entry
  std::vector<El> coords(int q, El a) const;
  El from_coords(const std::vector<El>& c) const;
  // the universal twisting: the leading coordinate, in G_{q-1}
  El twist(int q, El a) const { return coords(q, a).front(); }

 private:
  const SimplicialGroup* g_;
};

// Total space of the universal bundle: W(G)_q = G_q x WBar(G)_q with the
// 0th face twisted by the leading coordinate of the base.  Requires abelian
// G for the componentwise group structure used here.
class WGroup : public SimplicialGroup {
 public:
  explicit WGroup(const SimplicialGroup& g) : g_(&g), wbar_(g) {}
  WGroup(const WGroup&) = delete;
  WGroup& operator=(const WGroup&) = delete;

  const WBarGroup& base() const { return wbar_; }
  El pair(int q, El g, El b) const { return g * wbar_.order(q) + b; }
  El fiber_part(int q, El a) const { return a / wbar_.order(q); }
  El base_part(int q, El a) const { return a % wbar_.order(q); }

  El order(int q) const override { return g_->order(q) * wbar_.order(q); }
  El mul(int q, El a, El b) const override;
  El inverse(int q, El a) const override;
  El identity(int q) const override;
  El face_el(int q, int i, El a) const override;
  El degen_el(int q, int i, El a) const override;
  std::string el_name(int q, El a) const override;

 private:
  const SimplicialGroup* g_;
  WBarGroup wbar_;
};

// Normalization of an element-level simplicial object into a SimplicialSet:
// enumerates nondegenerate elements per dimension and presents faces in
// canonical degeneracy-word form.  Dimensions are materialized lazily up to
// the construction bound.
class ElementSet : public SimplicialSet {
 public:
  ElementSet(const SimplicialGroup& g, int N) : g_(&g), maxdim_(N) {}

  int count(int n) const override;
  SimplexRef face(int n, int idx, int i) const override;
  std::string label(int n, int idx) const override;

  El element_of(int n, int idx) const;
  int index_of_element(int n, El a) const;  // -1 when a is degenerate
  SimplexRef ref_of(int q, El a) const;     // canonical form of any element
  int max_dim() const { return maxdim_; }

 private:
  void build(int n) const;

  const SimplicialGroup* g_;
  int maxdim_;
  mutable std::vector<std::vector<El>> nondeg_;
  mutable std::vector<std::map<El, int>> index_;
};

// The four twisting-function identities for the universal twisting on
// WBar(G), checked elementwise through dimension N (throws on failure).
void check_universal_twisting(const SimplicialGroup& g, int N);

}  // namespace opforms
