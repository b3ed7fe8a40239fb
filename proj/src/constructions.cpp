#include "opforms/constructions.hpp"

#include <functional>
#include <numeric>
#include <stdexcept>

namespace opforms {

namespace {

std::vector<int> mask_to_word(unsigned mask, int nbits) {
  std::vector<int> w;
  for (int b = nbits - 1; b >= 0; --b)
    if (mask & (1u << b)) w.push_back(b);
  return w;
}

}  // namespace

void ProductSet::build(int n) const {
  if (static_cast<int>(cells_.size()) <= n) {
    cells_.resize(n + 1);
    index_.resize(n + 1);
  }
  if (!cells_[n].empty() || !index_[n].empty()) return;
  const unsigned full = n > 0 ? (1u << n) : 1u;
  for (unsigned mu = 0; mu < full; ++mu) {
    int p = n - __builtin_popcount(mu);
    if (p < 0 || x_->count(p) == 0) continue;
    std::vector<int> uw = mask_to_word(mu, n);
    for (int xi = 0; xi < x_->count(p); ++xi) {
      for (unsigned mv = 0; mv < full; ++mv) {
        if (mu & mv) continue;
        int q = n - __builtin_popcount(mv);
        if (q < 0 || y_->count(q) == 0) continue;
        std::vector<int> vw = mask_to_word(mv, n);
        for (int yi = 0; yi < y_->count(q); ++yi) {
          PCell c{SimplexRef{uw, p, xi}, SimplexRef{vw, q, yi}};
          Key k{uw, p, xi, vw, q, yi};
          index_[n][k] = static_cast<int>(cells_[n].size());
          cells_[n].push_back(std::move(c));
        }
      }
    }
  }
}

int ProductSet::count(int n) const {
  if (n < 0) return 0;
  build(n);
  return static_cast<int>(cells_[n].size());
}

const ProductSet::PCell& ProductSet::cell(int n, int idx) const {
  build(n);
  return cells_[n][idx];
}

SimplexRef ProductSet::pair_ref(SimplexRef a, SimplexRef b) const {
  int m = a.total_dim();
  if (m != b.total_dim()) throw std::runtime_error("pair dimension mismatch");
  std::vector<int> word;
  for (int i = m - 1; i >= 0; --i) {
    if (!a.word.empty() && !b.word.empty()) {
      SimplexRef fa = apply_face(*x_, a, i + 1);
      SimplexRef fb = apply_face(*y_, b, i + 1);
      if (apply_degeneracy(fa, i) == a && apply_degeneracy(fb, i) == b) {
        a = fa;
        b = fb;
        word.push_back(i);
        --m;
      }
    }
  }
  build(m);
  Key k{a.word, a.dim, a.idx, b.word, b.dim, b.idx};
  auto it = index_[m].find(k);
  if (it == index_[m].end())
    throw std::runtime_error("product cell lookup failed");
  return SimplexRef{std::move(word), m, it->second};
}

SimplexRef ProductSet::face(int n, int idx, int i) const {
  const PCell& c = cell(n, idx);
  return pair_ref(apply_face(*x_, c.a, i), apply_face(*y_, c.b, i));
}

std::string ProductSet::label(int n, int idx) const {
  const PCell& c = cell(n, idx);
  return "(" + ref_label(*x_, c.a) + "|" + ref_label(*y_, c.b) + ")";
}

int DisjointUnion::count(int n) const {
  int s = 0;
  for (auto* p : ps_) s += p->count(n);
  return s;
}

int DisjointUnion::offset(int piece, int dim) const {
  int s = 0;
  for (int t = 0; t < piece; ++t) s += ps_[t]->count(dim);
  return s;
}

std::pair<int, int> DisjointUnion::locate(int n, int idx) const {
  for (int t = 0; t < static_cast<int>(ps_.size()); ++t) {
    if (idx < ps_[t]->count(n)) return {t, idx};
    idx -= ps_[t]->count(n);
  }
  throw std::runtime_error("disjoint union index out of range");
}

SimplexRef DisjointUnion::to_global(int piece, SimplexRef r) const {
  r.idx += offset(piece, r.dim);
  return r;
}

SimplexRef DisjointUnion::face(int n, int idx, int i) const {
  auto [piece, local] = locate(n, idx);
  return to_global(piece, ps_[piece]->face(n, local, i));
}

std::string DisjointUnion::label(int n, int idx) const {
  auto [piece, local] = locate(n, idx);
  return "p" + std::to_string(piece) + ":" + ps_[piece]->label(n, local);
}

namespace {

struct UnionFind {
  std::vector<int> p;
  explicit UnionFind(int n) : p(n) { std::iota(p.begin(), p.end(), 0); }
  int find(int x) {
    while (p[x] != x) {
      p[x] = p[p[x]];
      x = p[x];
    }
    return x;
  }
  // smallest id stays the root, keeping class order deterministic
  bool unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    if (b < a) std::swap(a, b);
    p[b] = a;
    return true;
  }
};

}  // namespace

Quotient quotient_by(
    const SimplicialSet& X, int N,
    const std::vector<std::pair<SimplexRef, SimplexRef>>& gens) {
  // intern every simplex (degenerate included) of total dimension <= N
  std::map<SimplexRef, int> id;
  std::vector<SimplexRef> refs;
  std::vector<std::vector<int>> by_dim(N + 1);
  auto intern = [&](const SimplexRef& r) {
    auto [it, fresh] = id.emplace(r, static_cast<int>(refs.size()));
    if (fresh) {
      refs.push_back(r);
      by_dim[r.total_dim()].push_back(it->second);
    }
    return it->second;
  };
  for (int m = 0; m <= N; ++m) {
    for (int idx = 0; idx < X.count(m); ++idx) intern(nondeg(m, idx));
    if (m > 0) {
      std::vector<int> below = by_dim[m - 1];
      for (int rid : below)
        for (int j = 0; j <= m - 1; ++j)
          intern(apply_degeneracy(refs[rid], j));
    }
  }

  UnionFind uf(static_cast<int>(refs.size()));
  for (auto& [a, b] : gens) {
    if (a.total_dim() != b.total_dim())
      throw std::runtime_error("identification dimension mismatch");
    uf.unite(id.at(a), id.at(b));
  }

  // closure: identified simplices have identified faces and degeneracies
  bool changed = true;
  while (changed) {
    changed = false;
    std::map<int, std::vector<int>> cls;
    for (int i = 0; i < static_cast<int>(refs.size()); ++i)
      cls[uf.find(i)].push_back(i);
    for (auto& [root, mem] : cls) {
      if (mem.size() < 2) continue;
      const SimplexRef r0 = refs[mem[0]];
      int m = r0.total_dim();
      for (std::size_t t = 1; t < mem.size(); ++t) {
        const SimplexRef rt = refs[mem[t]];
        if (m > 0)
          for (int i = 0; i <= m; ++i)
            changed |= uf.unite(id.at(apply_face(X, r0, i)),
                                id.at(apply_face(X, rt, i)));
        if (m < N)
          for (int j = 0; j <= m; ++j)
            changed |= uf.unite(id.at(apply_degeneracy(r0, j)),
                                id.at(apply_degeneracy(rt, j)));
      }
    }
  }

  std::vector<bool> has_degen(refs.size(), false);
  for (int i = 0; i < static_cast<int>(refs.size()); ++i)
    if (refs[i].degenerate()) has_degen[uf.find(i)] = true;

  Quotient out;
  std::map<int, int> ycell;
  for (int m = 0; m <= N; ++m)
    for (int rid : by_dim[m]) {
      if (uf.find(rid) != rid || has_degen[rid]) continue;
      ycell[rid] = out.set.add_cell(m, X.label(refs[rid].dim, refs[rid].idx));
    }

  // normal form of a class: nondegenerate cell, or s_i of a lower class
  // (largest strippable index first)
  std::map<int, SimplexRef> memo;
  std::function<SimplexRef(int)> nf = [&](int root) -> SimplexRef {
    auto it = memo.find(root);
    if (it != memo.end()) return it->second;
    const SimplexRef& r0 = refs[root];
    int m = r0.total_dim();
    SimplexRef res;
    if (!has_degen[root]) {
      res = nondeg(m, ycell.at(root));
    } else {
      bool found = false;
      for (int i = m - 1; i >= 0 && !found; --i) {
        SimplexRef f = apply_face(X, r0, i + 1);
        if (uf.find(id.at(apply_degeneracy(f, i))) == root) {
          res = apply_degeneracy(nf(uf.find(id.at(f))), i);
          found = true;
        }
      }
      if (!found) throw std::logic_error("no normal form for quotient class");
    }
    memo[root] = res;
    return res;
  };

  for (int m = 1; m <= N; ++m)
    for (int rid : by_dim[m]) {
      if (uf.find(rid) != rid || has_degen[rid]) continue;
      for (int i = 0; i <= m; ++i)
        out.set.set_face(m, ycell[rid], i,
                         nf(uf.find(id.at(apply_face(X, refs[rid], i)))));
    }

  out.proj_img.resize(N + 1);
  for (int m = 0; m <= N; ++m) {
    out.proj_img[m].resize(X.count(m));
    for (int idx = 0; idx < X.count(m); ++idx)
      out.proj_img[m][idx] = nf(uf.find(id.at(nondeg(m, idx))));
  }

  out.set.check_faces();
  return out;
}

void append_collapse_gens(std::vector<std::pair<SimplexRef, SimplexRef>>& gens,
                          const std::vector<SimplexRef>& cells,
                          const SimplexRef& vertex) {
  for (const auto& r : cells)
    gens.emplace_back(r, degenerate_point(vertex, r.total_dim()));
}

std::vector<std::pair<SimplexRef, SimplexRef>> suspension_gens(
    const ProductSet& cyl, const SimplicialSet& X, int N) {
  std::vector<std::pair<SimplexRef, SimplexRef>> gens;
  for (int end = 0; end <= 1; ++end) {
    std::vector<SimplexRef> cells;
    for (int k = 0; k <= N; ++k)
      for (int xi = 0; xi < X.count(k); ++xi)
        cells.push_back(
            cyl.pair_ref(nondeg(k, xi), degenerate_point(nondeg(0, end), k)));
    SimplexRef pole = cyl.pair_ref(nondeg(0, 0), nondeg(0, end));
    append_collapse_gens(gens, cells, pole);
  }
  return gens;
}

}  // namespace opforms
