#pragma once

#include <algorithm>
#include <cassert>
#include <map>
#include <string>
#include <tuple>
#include <vector>

#include "opforms/graded.hpp"

namespace opforms {

// A (possibly degenerate) simplex: a degeneracy word applied to nondegenerate
// simplex #idx of dimension dim.  The word is strictly decreasing, which is
// the canonical form under the simplicial identities; total dimension is
// dim + word.size().
struct SimplexRef {
  std::vector<int> word;
  int dim = 0;
  int idx = 0;

  bool degenerate() const { return !word.empty(); }
  int total_dim() const { return dim + static_cast<int>(word.size()); }

  friend bool operator==(const SimplexRef& a, const SimplexRef& b) {
    return a.dim == b.dim && a.idx == b.idx && a.word == b.word;
  }
  friend bool operator<(const SimplexRef& a, const SimplexRef& b) {
    return std::tie(a.dim, a.idx, a.word) < std::tie(b.dim, b.idx, b.word);
  }
};

inline SimplexRef nondeg(int dim, int idx) { return {{}, dim, idx}; }

// Simplicial set presented by its nondegenerate simplices; faces of
// nondegenerate simplices may be degenerate and are returned as refs.
class SimplicialSet {
 public:
  virtual ~SimplicialSet() = default;
  virtual int count(int n) const = 0;
  virtual SimplexRef face(int n, int idx, int i) const = 0;
  virtual std::string label(int n, int idx) const {
    return "c" + std::to_string(n) + "_" + std::to_string(idx);
  }
};

// s_j applied to a canonical ref stays canonical via s_i s_j = s_{j+1} s_i
// for i <= j.
inline SimplexRef apply_degeneracy(SimplexRef r, int j) {
  assert(0 <= j && j <= r.total_dim());
  std::size_t pos = 0;
  while (pos < r.word.size() && j <= r.word[pos]) {
    r.word[pos] += 1;
    ++pos;
  }
  r.word.insert(r.word.begin() + pos, j);
  return r;
}

// d_i applied to a canonical ref: commute the face through the word
// (d_i s_j = s_{j-1} d_i for i < j, identity for i in {j, j+1}, s_j d_{i-1}
// for i > j+1), then apply the core face and restore the collected letters.
inline SimplexRef apply_face(const SimplicialSet& X, SimplexRef r, int i) {
  assert(0 <= i && i <= r.total_dim());
  std::vector<int> outer;
  for (std::size_t t = 0; t < r.word.size(); ++t) {
    int j = r.word[t];
    if (i == j || i == j + 1) {
      SimplexRef out{std::vector<int>(r.word.begin() + t + 1, r.word.end()),
                     r.dim, r.idx};
      for (auto it = outer.rbegin(); it != outer.rend(); ++it)
        out = apply_degeneracy(out, *it);
      return out;
    }
    if (i < j) {
      outer.push_back(j - 1);
    } else {
      outer.push_back(j);
      i -= 1;
    }
  }
  SimplexRef out = X.face(r.dim, r.idx, i);
  for (auto it = outer.rbegin(); it != outer.rend(); ++it)
    out = apply_degeneracy(out, *it);
  return out;
}

// z in im(s_i)  <=>  z = s_i d_{i+1} z.
inline bool in_degeneracy_image(const SimplicialSet& X, const SimplexRef& r,
                                int i) {
  if (r.word.empty()) return false;
  return apply_degeneracy(apply_face(X, r, i + 1), i) == r;
}

// The face of r spanned by the given vertex set (sorted, as positions
// 0..total_dim): iterated faces on the complement, largest index first.
inline SimplexRef restrict_to_vertices(const SimplicialSet& X, SimplexRef r,
                                       const std::vector<int>& vertices) {
  int n = r.total_dim();
  std::vector<bool> keep(n + 1, false);
  for (int v : vertices) {
    assert(0 <= v && v <= n);
    keep[v] = true;
  }
  for (int v = n; v >= 0; --v)
    if (!keep[v]) r = apply_face(X, r, v);
  return r;
}

// Standard simplex Delta[n]: nondegenerate k-simplices are the (k+1)-subsets
// of {0..n}, indexed in lexicographic order.
class StandardSimplex : public SimplicialSet {
 public:
  explicit StandardSimplex(int n) : n_(n) {
    combos_.resize(n + 2);
    index_.resize(n + 2);
    for (int k = 0; k <= n; ++k) {
      std::vector<int> c(k + 1);
      for (int i = 0; i <= k; ++i) c[i] = i;
      while (true) {
        index_[k][c] = static_cast<int>(combos_[k].size());
        combos_[k].push_back(c);
        int pos = k;
        while (pos >= 0 && c[pos] == n - (k - pos)) --pos;
        if (pos < 0) break;
        ++c[pos];
        for (int i = pos + 1; i <= k; ++i) c[i] = c[i - 1] + 1;
      }
    }
  }

  int n() const { return n_; }
  int count(int k) const override {
    if (k < 0 || k > n_) return 0;
    return static_cast<int>(combos_[k].size());
  }
  SimplexRef face(int k, int idx, int i) const override {
    std::vector<int> c = combos_[k][idx];
    c.erase(c.begin() + i);
    return nondeg(k - 1, index_[k - 1].at(c));
  }
  std::string label(int k, int idx) const override {
    std::string s = "[";
    for (int v : combos_[k][idx]) s += std::to_string(v) + ",";
    s.back() = ']';
    return s;
  }

  const std::vector<int>& vertices(int k, int idx) const {
    return combos_[k][idx];
  }
  int index_of(const std::vector<int>& vs) const {
    return index_[static_cast<int>(vs.size()) - 1].at(vs);
  }

 private:
  int n_;
  std::vector<std::vector<std::vector<int>>> combos_;
  std::vector<std::map<std::vector<int>, int>> index_;
};

// Boundary of Delta[n]: drop the top cell.
class BoundarySimplex : public SimplicialSet {
 public:
  explicit BoundarySimplex(int n) : full_(n), n_(n) {}
  int count(int k) const override { return k >= n_ ? 0 : full_.count(k); }
  SimplexRef face(int k, int idx, int i) const override {
    return full_.face(k, idx, i);
  }
  std::string label(int k, int idx) const override { return full_.label(k, idx); }

 private:
  StandardSimplex full_;
  int n_;
};

// Explicitly tabulated simplicial set (the workhorse for loaded fixtures and
// quotients).  Finite and truncated: cells above the stored range are absent.
class TableSet : public SimplicialSet {
 public:
  int add_cell(int n, std::string name) {
    if (static_cast<int>(cells_.size()) <= n) cells_.resize(n + 1);
    cells_[n].push_back(Cell{std::move(name),
                             std::vector<SimplexRef>(n >= 1 ? n + 1 : 0)});
    return static_cast<int>(cells_[n].size()) - 1;
  }
  void set_face(int n, int idx, int i, SimplexRef r) {
    assert(r.total_dim() == n - 1);
    cells_[n][idx].faces[i] = r;
  }

  int count(int n) const override {
    if (n < 0 || n >= static_cast<int>(cells_.size())) return 0;
    return static_cast<int>(cells_[n].size());
  }
  SimplexRef face(int n, int idx, int i) const override {
    return cells_[n][idx].faces[i];
  }
  std::string label(int n, int idx) const override {
    return cells_[n][idx].name;
  }
  int top_dim() const { return static_cast<int>(cells_.size()) - 1; }

  int index_of(int n, const std::string& name) const {
    for (int i = 0; i < count(n); ++i)
      if (cells_[n][i].name == name) return i;
    return -1;
  }

  // d_i d_j = d_{j-1} d_i for i < j, on every stored cell.
  void check_faces() const {
    for (int n = 2; n <= top_dim(); ++n)
      for (int idx = 0; idx < count(n); ++idx)
        for (int j = 1; j <= n; ++j)
          for (int i = 0; i < j; ++i) {
            SimplexRef a = apply_face(*this, face(n, idx, j), i);
            SimplexRef b = apply_face(*this, face(n, idx, i), j - 1);
            if (!(a == b))
              throw std::runtime_error("face identity fails on " +
                                       label(n, idx));
          }
  }

  // Ordered simplicial complex from maximal faces (vertex lists, sorted).
  static TableSet from_facets(const std::vector<std::vector<int>>& facets) {
    std::map<std::vector<int>, int> idx;
    std::vector<std::vector<std::vector<int>>> by_dim;
    // collect all subsets
    for (auto f : facets) {
      std::sort(f.begin(), f.end());
      int k = static_cast<int>(f.size());
      for (unsigned m = 1; m < (1u << k); ++m) {
        std::vector<int> sub;
        for (int b = 0; b < k; ++b)
          if (m & (1u << b)) sub.push_back(f[b]);
        if (!idx.count(sub)) {
          idx[sub] = 0;
          int d = static_cast<int>(sub.size()) - 1;
          if (static_cast<int>(by_dim.size()) <= d) by_dim.resize(d + 1);
          by_dim[d].push_back(sub);
        }
      }
    }
    TableSet t;
    for (int d = 0; d < static_cast<int>(by_dim.size()); ++d) {
      std::sort(by_dim[d].begin(), by_dim[d].end());
      for (auto& s : by_dim[d]) {
        std::string name;
        for (int v : s) name += (name.empty() ? "" : ".") + std::to_string(v);
        idx[s] = t.add_cell(d, name);
      }
    }
    for (int d = 1; d < static_cast<int>(by_dim.size()); ++d)
      for (int c = 0; c < static_cast<int>(by_dim[d].size()); ++c)
        for (int i = 0; i <= d; ++i) {
          std::vector<int> sub = by_dim[d][c];
          sub.erase(sub.begin() + i);
          t.set_face(d, c, i, nondeg(d - 1, idx.at(sub)));
        }
    return t;
  }

 private:
  struct Cell {
    std::string name;
    std::vector<SimplexRef> faces;
  };
  std::vector<std::vector<Cell>> cells_;
};

// Cyclic graph C_m: vertices v_0..v_{m-1}, edges e_i: v_i -> v_{i+1 mod m}.
// C_1 is the minimal circle (one vertex, one loop).
inline TableSet cyclic_graph(int m) {
  TableSet t;
  for (int i = 0; i < m; ++i) t.add_cell(0, "v" + std::to_string(i));
  for (int i = 0; i < m; ++i) {
    int e = t.add_cell(1, "e" + std::to_string(i));
    t.set_face(1, e, 0, nondeg(0, (i + 1) % m));
    t.set_face(1, e, 1, nondeg(0, i));
  }
  return t;
}

// Map of simplicial sets, tabulated on nondegenerate cells up to a dimension;
// extends to refs by f(s_W x) = s_W f(x).
struct SimplicialMap {
  const SimplicialSet* dom = nullptr;
  const SimplicialSet* cod = nullptr;
  std::vector<std::vector<SimplexRef>> img;  // [dim][idx]

  SimplexRef apply(const SimplexRef& r) const {
    assert(r.dim < static_cast<int>(img.size()));
    SimplexRef out = img[r.dim][r.idx];
    for (auto it = r.word.rbegin(); it != r.word.rend(); ++it)
      out = apply_degeneracy(out, *it);
    return out;
  }

  // f(d_i x) = d_i f(x) on all tabulated cells.
  void check() const {
    for (int n = 1; n < static_cast<int>(img.size()); ++n)
      for (int idx = 0; idx < dom->count(n); ++idx)
        for (int i = 0; i <= n; ++i) {
          SimplexRef a = apply(dom->face(n, idx, i));
          SimplexRef b = apply_face(*cod, img[n][idx], i);
          if (!(a == b))
            throw std::runtime_error("map not simplicial on " +
                                     dom->label(n, idx));
        }
  }
};

// Normalized cochain complex with degrees 0..nmax (plus the (nmax+1)-th
// module so the top differential is available).  Coefficients in K.
template <typename K>
CochainComplex<K> normalized_cochains(const SimplicialSet& X, int nmax) {
  CochainComplex<K> c;
  c.lo = 0;
  c.hi = nmax + 1;
  for (int n = 0; n <= nmax + 1; ++n) c.dims[n] = X.count(n);
  for (int n = 0; n <= nmax; ++n) {
    SparseMatrix<K> d(X.count(n + 1), X.count(n));
    for (int idx = 0; idx < X.count(n + 1); ++idx)
      for (int i = 0; i <= n + 1; ++i) {
        SimplexRef f = X.face(n + 1, idx, i);
        if (!f.degenerate()) d.add(idx, f.idx, K::from_int(i % 2 ? -1 : 1));
      }
    c.set_diff(n, std::move(d));
  }
  return c;
}

}  // namespace opforms
