#pragma once

#include <algorithm>
#include <cassert>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "opforms/cdga.hpp"
#include "opforms/einfty.hpp"
#include "opforms/graded.hpp"
#include "opforms/operads.hpp"
#include "opforms/simplicial.hpp"
#include "opforms/sparse.hpp"

namespace opforms {

// ---------------------------------------------------------------------------
// Polynomial differential forms as a simplicial algebra: level n is the free
// graded-commutative algebra on x_1..x_n (degree 0) and dx_1..dx_n (degree 1)
// with d(x_i) = dx_i.  The omitted barycentric coordinate is eliminated:
// x_0 = 1 - sum x_i and dx_0 = -sum dx_i.  Faces delete a coordinate and
// degeneracies merge two, the pullbacks of the cofaces and codegeneracies of
// the standard simplices.
// ---------------------------------------------------------------------------

template <typename K>
class PolyForms {
 public:
  using Alg = FreeCDGA<K>;
  using Elt = typename Alg::Elt;

  PolyForms(int nmax, int wcap) : nmax_(nmax), wcap_(wcap) {
    for (int n = 0; n <= nmax; ++n) {
      std::vector<int> degs;
      std::vector<std::string> names;
      for (int i = 1; i <= n; ++i) {
        degs.push_back(0);
        names.push_back("x" + std::to_string(i));
      }
      for (int i = 1; i <= n; ++i) {
        degs.push_back(1);
        names.push_back("dx" + std::to_string(i));
      }
      lvl_.emplace_back(degs, names);
    }
    for (int n = 0; n <= nmax; ++n)
      for (int i = 1; i <= n; ++i) lvl_[n].set_diff(i - 1, lvl_[n].gen(n + i - 1));
  }

  int nmax() const { return nmax_; }
  int wcap() const { return wcap_; }
  const Alg& level(int n) const { return lvl_[n]; }

  Elt x(int n, int i) const { return lvl_[n].gen(i - 1); }
  Elt dx(int n, int i) const { return lvl_[n].gen(n + i - 1); }
  Elt x0(int n) const {
    Elt r = lvl_[n].one();
    for (int i = 1; i <= n; ++i) Alg::axpy(r, -K::one(), x(n, i));
    return r;
  }
  Elt dx0(int n) const {
    Elt r;
    for (int i = 1; i <= n; ++i) Alg::axpy(r, -K::one(), dx(n, i));
    return r;
  }

  // delta_j: level n -> n-1, the pullback of the j-th coface
  Elt face(int n, int j, const Elt& a) const {
    assert(1 <= n && n <= nmax_ && 0 <= j && j <= n);
    std::vector<Elt> im(2 * n);
    for (int i = 1; i <= n; ++i) {
      if (j == 0) {
        im[i - 1] = (i == 1) ? x0(n - 1) : x(n - 1, i - 1);
        im[n + i - 1] = (i == 1) ? dx0(n - 1) : dx(n - 1, i - 1);
      } else if (i < j) {
        im[i - 1] = x(n - 1, i);
        im[n + i - 1] = dx(n - 1, i);
      } else if (i == j) {
        im[i - 1] = lvl_[n - 1].zero();
        im[n + i - 1] = lvl_[n - 1].zero();
      } else {
        im[i - 1] = x(n - 1, i - 1);
        im[n + i - 1] = dx(n - 1, i - 1);
      }
    }
    return lvl_[n].substitute(a, lvl_[n - 1], im);
  }

  // sigma_j: level n -> n+1, the pullback of the j-th codegeneracy
  Elt degen(int n, int j, const Elt& a) const {
    assert(0 <= n && n + 1 <= nmax_ && 0 <= j && j <= n);
    std::vector<Elt> im(2 * n);
    for (int i = 1; i <= n; ++i) {
      if (j == 0 || i > j) {
        im[i - 1] = x(n + 1, i + 1);
        im[n + i - 1] = dx(n + 1, i + 1);
      } else if (i < j) {
        im[i - 1] = x(n + 1, i);
        im[n + i - 1] = dx(n + 1, i);
      } else {  // i == j >= 1: the merged coordinate
        Elt s = x(n + 1, j);
        Alg::add_in(s, x(n + 1, j + 1));
        Elt ds = dx(n + 1, j);
        Alg::add_in(ds, dx(n + 1, j + 1));
        im[i - 1] = s;
        im[n + i - 1] = ds;
      }
    }
    return lvl_[n].substitute(a, lvl_[n + 1], im);
  }

  // value transported along a canonical degeneracy word (innermost letter
  // first, matching the SimplexRef composition order)
  Elt transport(int core_dim, const std::vector<int>& word, Elt v) const {
    int cur = core_dim;
    for (auto it = word.rbegin(); it != word.rend(); ++it) {
      v = degen(cur, *it, v);
      ++cur;
    }
    return v;
  }

  K vertex0(int n, const Elt& a) const {
    auto it = a.find(lvl_[n].unit_mono());
    return it == a.end() ? K::zero() : it->second;
  }

  // Moore filler: w at level s-1 with all faces zero; returns theta at level
  // s with delta_0 theta = w and delta_j theta = 0 for j > 0.  theta is the
  // sum over i of x_i times w re-expressed with x_{i-1} eliminated and all
  // coordinate names shifted up by one.
  Elt moore_filler(int s, const Elt& w) const {
    assert(1 <= s && s <= nmax_);
    int m = s - 1;
    Elt theta;
    for (int i = 1; i <= s; ++i) {
      int k = i - 1;  // coordinate of level s-1 eliminated before shifting
      std::vector<Elt> im(2 * m);
      for (int l = 1; l <= m; ++l) {
        if (l != k) {
          im[l - 1] = x(s, l + 1);
          im[m + l - 1] = dx(s, l + 1);
        } else {
          Elt e = lvl_[s].one();
          for (int t = 1; t <= s; ++t)
            if (t != k + 1) Alg::axpy(e, -K::one(), x(s, t));
          im[l - 1] = e;
          im[m + l - 1] = lvl_[s].d(e);
        }
      }
      Elt li = lvl_[m].substitute(w, lvl_[s], im);
      Alg::add_in(theta, lvl_[s].mul(x(s, i), li));
    }
    return theta;
  }

  // mirror filler: w at level n-1 with all faces zero; returns theta at
  // level n with delta_n theta = w and delta_j theta = 0 for j < n.
  Elt last_face_filler(int n, const Elt& w) const {
    assert(1 <= n && n <= nmax_);
    int m = n - 1;
    Elt theta;
    for (int i = 0; i <= m; ++i) {
      std::vector<Elt> im(2 * m);
      for (int l = 1; l <= m; ++l) {
        if (l != i) {
          im[l - 1] = x(n, l);
          im[m + l - 1] = dx(n, l);
        } else {  // eliminating x_i re-enters as x_i + x_n at level n
          Elt s = x(n, i);
          Alg::add_in(s, x(n, n));
          Elt ds = dx(n, i);
          Alg::add_in(ds, dx(n, n));
          im[l - 1] = s;
          im[m + l - 1] = ds;
        }
      }
      Elt bi = lvl_[m].substitute(w, lvl_[n], im);
      Elt factor = (i == 0) ? x0(n) : x(n, i);
      Alg::add_in(theta, lvl_[n].mul(factor, bi));
    }
    return theta;
  }

  // theta at level n with the prescribed simplicially compatible faces:
  // faces 0..n-1 are matched with degeneracy corrections, the last one with
  // the mirror filler; the postcondition is verified exactly.
  Elt boundary_filler(int n, const std::vector<Elt>& faces) const {
    assert(static_cast<int>(faces.size()) == n + 1 && n >= 1);
    Elt theta;
    for (int j = 0; j < n; ++j) {
      Elt r = Alg::sub(faces[j], face(n, j, theta));
      Alg::add_in(theta, degen(n - 1, j, r));
    }
    Elt rn = Alg::sub(faces[n], face(n, n, theta));
    Alg::add_in(theta, last_face_filler(n, rn));
    for (int j = 0; j <= n; ++j)
      if (!Alg::eq(face(n, j, theta), faces[j]))
        throw std::logic_error("boundary filler failed at face " +
                               std::to_string(j));
    return theta;
  }

  // integration contraction at level n: dH + Hd = id - (evaluation at the
  // vertex x = 0), from the coordinatewise integrations; it raises the
  // polynomial weight by exactly one.
  Elt contraction(int n, const Elt& a) const {
    if (K::characteristic() != 0)
      throw std::invalid_argument("contraction requires characteristic 0");
    Elt r;
    for (const auto& [mo, v] : a) {
      for (int i = 1; i <= n; ++i) {
        bool clear = true;  // factors before i must be killed by evaluation
        for (int j = 1; j < i && clear; ++j)
          if (mo.e[j - 1] > 0 || mo.e[n + j - 1] > 0) clear = false;
        if (!clear) break;
        if (mo.e[n + i - 1] == 0) continue;
        GcMono m2 = mo;
        m2.e[n + i - 1] = 0;
        m2.e[i - 1] += 1;
        Elt term;
        term[m2] = v / K::from_int(m2.e[i - 1]);
        Alg::add_in(r, term);
      }
    }
    return r;
  }

 private:
  int nmax_, wcap_;
  std::vector<Alg> lvl_;
};

// The Moore filler as the public contraction witness: validates the face
// hypothesis and reports the violating face.
template <typename K>
typename PolyForms<K>::Elt contract_model(const PolyForms<K>& L, int s,
                                          const typename PolyForms<K>::Elt& w) {
  if (s < 1 || s > L.nmax()) throw std::invalid_argument("level out of range");
  if (s >= 2)
    for (int j = 0; j <= s - 1; ++j)
      if (!PolyForms<K>::Alg::is_zero(L.face(s - 1, j, w)))
        throw std::invalid_argument("face " + std::to_string(j) +
                                    " of the input is nonzero");
  return L.moore_filler(s, w);
}

// Simplicial identities, chain compatibility, and d^2 = 0 on all monomials
// of the levels up to nmax within the weight cap.  Needs nmax + 2 levels.
template <typename K>
std::optional<std::string> poly_forms_identities(const PolyForms<K>& L,
                                                 int nmax, int wcap) {
  using Alg = FreeCDGA<K>;
  assert(nmax + 2 <= L.nmax());
  for (int n = 0; n <= nmax; ++n) {
    const Alg& A = L.level(n);
    std::vector<typename Alg::Elt> monos;
    for (int deg = 0; deg <= wcap; ++deg)
      for (const auto& m : A.basis(deg, wcap)) {
        typename Alg::Elt e;
        e[m] = K::one();
        monos.push_back(e);
      }
    auto tag = [&](const std::string& id, const typename Alg::Elt& m) {
      return id + " fails at level " + std::to_string(n) + " on " + A.show(m);
    };
    for (const auto& e : monos) {
      if (!Alg::is_zero(A.d(A.d(e)))) return tag("d^2 = 0", e);
      if (n >= 1)
        for (int j = 0; j <= n; ++j) {
          if (!Alg::eq(L.face(n, j, A.d(e)), L.level(n - 1).d(L.face(n, j, e))))
            return tag("d delta_" + std::to_string(j), e);
          for (int i = 0; i < j && n >= 2; ++i)
            if (!Alg::eq(L.face(n - 1, i, L.face(n, j, e)),
                         L.face(n - 1, j - 1, L.face(n, i, e))))
              return tag("delta_" + std::to_string(i) + " delta_" +
                             std::to_string(j),
                         e);
        }
      for (int j = 0; j <= n; ++j) {
        if (!Alg::eq(L.degen(n, j, A.d(e)), L.level(n + 1).d(L.degen(n, j, e))))
          return tag("d sigma_" + std::to_string(j), e);
        for (int i = 0; i <= j; ++i)
          if (!Alg::eq(L.degen(n + 1, i, L.degen(n, j, e)),
                       L.degen(n + 1, j + 1, L.degen(n, i, e))))
            return tag("sigma_" + std::to_string(i) + " sigma_" +
                           std::to_string(j),
                       e);
        for (int i = 0; i <= n + 1; ++i) {
          typename Alg::Elt lhs = L.face(n + 1, i, L.degen(n, j, e));
          typename Alg::Elt rhs;
          if (i < j)
            rhs = L.degen(n - 1, j - 1, L.face(n, i, e));
          else if (i == j || i == j + 1)
            rhs = e;
          else
            rhs = L.degen(n - 1, j, L.face(n, i - 1, e));
          if (!Alg::eq(lhs, rhs))
            return tag("delta_" + std::to_string(i) + " sigma_" +
                           std::to_string(j),
                       e);
        }
      }
    }
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Forms on a finite simplicial set: values on nondegenerate simplices with
// the face-compatibility condition.  Degenerate simplices carry the
// transported core value.
// ---------------------------------------------------------------------------

template <typename K>
struct FormOn {
  const SimplicialSet* X = nullptr;
  const PolyForms<K>* L = nullptr;
  int k = 0;
  std::vector<std::vector<typename FreeCDGA<K>::Elt>> val;  // [dim][idx]
};

template <typename K>
FormOn<K> form_zero(const SimplicialSet& X, const PolyForms<K>& L, int k) {
  if (X.count(L.nmax() + 1) > 0)
    throw std::runtime_error("space exceeds the level cap");
  FormOn<K> F{&X, &L, k, {}};
  F.val.resize(L.nmax() + 1);
  for (int n = 0; n <= L.nmax(); ++n)
    F.val[n].assign(X.count(n), typename FreeCDGA<K>::Elt{});
  return F;
}

// value on a possibly degenerate simplex
template <typename K>
typename FreeCDGA<K>::Elt form_value(const FormOn<K>& F, const SimplexRef& r) {
  return F.L->transport(r.dim, r.word, F.val[r.dim][r.idx]);
}

// nullopt when compatible; otherwise the violating operator
template <typename K>
std::optional<std::string> form_validate(const FormOn<K>& F) {
  const SimplicialSet& X = *F.X;
  const PolyForms<K>& L = *F.L;
  for (int n = 1; n <= L.nmax(); ++n)
    for (int idx = 0; idx < X.count(n); ++idx)
      for (int j = 0; j <= n; ++j) {
        auto lhs = L.face(n, j, F.val[n][idx]);
        auto rhs = form_value(F, X.face(n, idx, j));
        if (!FreeCDGA<K>::eq(lhs, rhs))
          return "face " + std::to_string(j) + " of " + X.label(n, idx);
      }
  return std::nullopt;
}

template <typename K>
FormOn<K> form_d(const FormOn<K>& F) {
  FormOn<K> G = F;
  G.k = F.k + 1;
  for (int n = 0; n < static_cast<int>(F.val.size()); ++n)
    for (std::size_t i = 0; i < F.val[n].size(); ++i)
      G.val[n][i] = F.L->level(n).d(F.val[n][i]);
  return G;
}

template <typename K>
FormOn<K> form_mul(const FormOn<K>& F, const FormOn<K>& G) {
  FormOn<K> H = F;
  H.k = F.k + G.k;
  for (int n = 0; n < static_cast<int>(F.val.size()); ++n)
    for (std::size_t i = 0; i < F.val[n].size(); ++i)
      H.val[n][i] = F.L->level(n).mul(F.val[n][i], G.val[n][i]);
  return H;
}

template <typename K>
FormOn<K> form_add(const FormOn<K>& F, const FormOn<K>& G) {
  FormOn<K> H = F;
  for (int n = 0; n < static_cast<int>(F.val.size()); ++n)
    for (std::size_t i = 0; i < F.val[n].size(); ++i)
      FreeCDGA<K>::add_in(H.val[n][i], G.val[n][i]);
  return H;
}

template <typename K>
FormOn<K> form_scale(const K& c, const FormOn<K>& F) {
  FormOn<K> H = F;
  for (auto& row : H.val)
    for (auto& e : row) e = FreeCDGA<K>::scale(c, e);
  return H;
}

template <typename K>
FormOn<K> form_unit(const SimplicialSet& X, const PolyForms<K>& L) {
  FormOn<K> F = form_zero(X, L, 0);
  for (int n = 0; n <= L.nmax(); ++n)
    for (int idx = 0; idx < X.count(n); ++idx) F.val[n][idx] = L.level(n).one();
  return F;
}

template <typename K>
int form_weight(const FormOn<K>& F) {
  int w = 0;
  for (int n = 0; n < static_cast<int>(F.val.size()); ++n)
    for (const auto& e : F.val[n]) w = std::max(w, F.L->level(n).weight(e));
  return w;
}

// ---------------------------------------------------------------------------
// The comparison chain map to normalized cochains: integrate the monomials
// with a full dx-part over the standard simplex,
//   int x^a dx_1..dx_k = (prod a_i!) / (k + sum a_i)!.
// ---------------------------------------------------------------------------

inline long long small_factorial(int n) {
  assert(0 <= n && n <= 20);
  long long r = 1;
  for (int i = 2; i <= n; ++i) r *= i;
  return r;
}

template <typename K>
Cochain<K> phi(const FormOn<K>& F) {
  if (K::characteristic() != 0)
    throw std::invalid_argument("phi requires characteristic 0");
  const SimplicialSet& X = *F.X;
  int k = F.k;
  Cochain<K> c = zero_cochain<K>(X, k);
  for (int idx = 0; idx < X.count(k); ++idx) {
    K total = K::zero();
    for (const auto& [m, v] : F.val[k][idx]) {
      bool top = true;
      for (int i = 1; i <= k && top; ++i)
        if (m.e[k + i - 1] != 1) top = false;
      if (!top) continue;
      K num = K::one();
      int asum = 0;
      for (int i = 1; i <= k; ++i) {
        num *= K::from_int(small_factorial(m.e[i - 1]));
        asum += m.e[i - 1];
      }
      total += v * num / K::from_int(small_factorial(k + asum));
    }
    c.c[idx] = total;
  }
  return c;
}

// ---------------------------------------------------------------------------
// The Whitney section of phi: the elementary form of the face with vertices
// {i_0 < .. < i_k} is  k! sum_j (-1)^j x_{i_j} dx_{i_0}..^j..dx_{i_k}, with
// x_0, dx_0 the eliminated combinations; phi(whitney(c)) = c.
// ---------------------------------------------------------------------------

template <typename K>
typename FreeCDGA<K>::Elt whitney_elementary(const PolyForms<K>& L, int n,
                                             const std::vector<int>& S) {
  using Alg = FreeCDGA<K>;
  int k = static_cast<int>(S.size()) - 1;
  auto coord = [&](int i) { return i == 0 ? L.x0(n) : L.x(n, i); };
  auto dcoord = [&](int i) { return i == 0 ? L.dx0(n) : L.dx(n, i); };
  typename Alg::Elt r;
  for (int j = 0; j <= k; ++j) {
    typename Alg::Elt term = coord(S[j]);
    for (int l = 0; l <= k; ++l) {
      if (l == j) continue;
      term = L.level(n).mul(term, dcoord(S[l]));
    }
    if (j % 2 != 0) term = Alg::neg(term);
    Alg::add_in(r, term);
  }
  return Alg::scale(K::from_int(small_factorial(k)), r);
}

template <typename K>
FormOn<K> whitney(const SimplicialSet& X, const PolyForms<K>& L,
                  const Cochain<K>& c) {
  if (K::characteristic() != 0)
    throw std::invalid_argument("whitney requires characteristic 0");
  int k = c.deg;
  FormOn<K> F = form_zero(X, L, k);
  for (int n = k; n <= L.nmax(); ++n)
    for (int idx = 0; idx < X.count(n); ++idx) {
      std::vector<int> S(k + 1);
      for (int i = 0; i <= k; ++i) S[i] = i;
      while (true) {
        SimplexRef r = restrict_to_vertices(X, nondeg(n, idx), S);
        if (!r.degenerate() && !c.c[r.idx].is_zero())
          FreeCDGA<K>::axpy(F.val[n][idx], c.c[r.idx],
                            whitney_elementary(L, n, S));
        int p = k;
        while (p >= 0 && S[p] == n - k + p) --p;
        if (p < 0) break;
        ++S[p];
        for (int q = p + 1; q <= k; ++q) S[q] = S[q - 1] + 1;
      }
    }
  return F;
}

// ---------------------------------------------------------------------------
// The module of degree-k forms within the weight cap, solved from the
// face-compatibility constraints as the kernel of a sparse system.
// ---------------------------------------------------------------------------

template <typename K>
struct FormSpace {
  const SimplicialSet* X = nullptr;
  const PolyForms<K>* L = nullptr;
  int k = 0;
  std::vector<std::vector<GcMono>> monos;  // level mono basis per dimension
  std::vector<int> off;                    // ambient offset per dimension
  int ambient = 0;
  std::vector<FormOn<K>> basis;
  std::vector<SparseVec<K>> vecs;
  QuotientBasis<K> span;

  int dim() const { return static_cast<int>(basis.size()); }

  SparseVec<K> pack(const FormOn<K>& F) const {
    SparseVec<K> v;
    for (int n = 0; n < static_cast<int>(F.val.size()); ++n) {
      int cols = static_cast<int>(monos[n].size());
      for (std::size_t i = 0; i < F.val[n].size(); ++i)
        for (const auto& [m, c] : F.val[n][i]) {
          auto it = std::lower_bound(monos[n].begin(), monos[n].end(), m);
          if (it == monos[n].end() || !(*it == m))
            throw std::runtime_error("form exceeds the weight cap");
          int mi = static_cast<int>(it - monos[n].begin());
          v.emplace_back(off[n] + static_cast<int>(i) * cols + mi, c);
        }
    }
    return vec_canon(std::move(v));
  }

  FormOn<K> unpack(const SparseVec<K>& v) const {
    FormOn<K> F = form_zero(*X, *L, k);
    for (const auto& [pos, c] : v) {
      int n = 0;
      while (n + 2 < static_cast<int>(off.size()) && off[n + 1] <= pos) ++n;
      int rel = pos - off[n];
      int cols = static_cast<int>(monos[n].size());
      F.val[n][rel / cols][monos[n][rel % cols]] = c;
    }
    return F;
  }

  std::optional<std::vector<K>> coords(const FormOn<K>& F) const {
    return span.coords(pack(F));
  }
};

template <typename K>
FormSpace<K> forms_on(const SimplicialSet& X, const PolyForms<K>& L, int k) {
  FormSpace<K> S;
  S.X = &X;
  S.L = &L;
  S.k = k;
  if (X.count(L.nmax() + 1) > 0)
    throw std::runtime_error("space exceeds the level cap");
  S.monos.resize(L.nmax() + 1);
  S.off.assign(L.nmax() + 2, 0);
  for (int n = 0; n <= L.nmax(); ++n) {
    S.monos[n] = L.level(n).basis(k, L.wcap());
    S.off[n + 1] = S.off[n] + X.count(n) * static_cast<int>(S.monos[n].size());
  }
  S.ambient = S.off[L.nmax() + 1];

  auto expand = [&](int n, const typename FreeCDGA<K>::Elt& e,
                    std::vector<std::pair<int, K>>& out) {
    for (const auto& [m, c] : e) {
      auto it = std::lower_bound(S.monos[n].begin(), S.monos[n].end(), m);
      assert(it != S.monos[n].end() && *it == m);
      out.emplace_back(static_cast<int>(it - S.monos[n].begin()), c);
    }
  };

  std::vector<std::tuple<int, int, K>> trip;
  int rows = 0;
  for (int n = 1; n <= L.nmax(); ++n) {
    int cols_n = static_cast<int>(S.monos[n].size());
    for (int idx = 0; idx < X.count(n); ++idx)
      for (int j = 0; j <= n; ++j) {
        SimplexRef r = X.face(n, idx, j);
        int cols_c = static_cast<int>(S.monos[r.dim].size());
        int block = rows;
        rows += static_cast<int>(S.monos[n - 1].size());
        for (int mi = 0; mi < cols_n; ++mi) {
          typename FreeCDGA<K>::Elt e;
          e[S.monos[n][mi]] = K::one();
          std::vector<std::pair<int, K>> img;
          expand(n - 1, L.face(n, j, e), img);
          for (auto& [row, c] : img)
            trip.emplace_back(block + row, S.off[n] + idx * cols_n + mi, c);
        }
        for (int mi = 0; mi < cols_c; ++mi) {
          typename FreeCDGA<K>::Elt e;
          e[S.monos[r.dim][mi]] = K::one();
          std::vector<std::pair<int, K>> img;
          expand(n - 1, L.transport(r.dim, r.word, e), img);
          for (auto& [row, c] : img)
            trip.emplace_back(block + row, S.off[r.dim] + r.idx * cols_c + mi,
                              -c);
        }
      }
  }
  SparseMatrix<K> A(rows, S.ambient);
  for (auto& [r, c, v] : trip) A.add(r, c, v);
  // reduce so that coords are expressed in the stored basis itself
  S.span = QuotientBasis<K>({}, Echelon<K>(A).kernel_basis());
  S.vecs = S.span.reps();
  for (const auto& v : S.vecs) S.basis.push_back(S.unpack(v));
  return S;
}

// form spaces in degrees 0..kmax+1 assembled into a cochain complex
template <typename K>
struct FormTheory {
  const SimplicialSet* X = nullptr;
  const PolyForms<K>* L = nullptr;
  std::vector<FormSpace<K>> sp;  // degrees 0..kmax+1
  CochainComplex<K> cx;
};

template <typename K>
FormTheory<K> form_theory(const SimplicialSet& X, const PolyForms<K>& L,
                          int kmax) {
  FormTheory<K> T;
  T.X = &X;
  T.L = &L;
  for (int k = 0; k <= kmax + 1; ++k) T.sp.push_back(forms_on(X, L, k));
  T.cx.lo = 0;
  T.cx.hi = kmax + 1;
  for (int k = 0; k <= kmax + 1; ++k) T.cx.dims[k] = T.sp[k].dim();
  for (int k = 0; k <= kmax; ++k) {
    SparseMatrix<K> d(T.sp[k + 1].dim(), T.sp[k].dim());
    for (int c = 0; c < T.sp[k].dim(); ++c) {
      auto co = T.sp[k + 1].coords(form_d(T.sp[k].basis[c]));
      if (!co) throw std::logic_error("d leaves the solved form space");
      for (int r = 0; r < T.sp[k + 1].dim(); ++r)
        if (!(*co)[r].is_zero()) d.add(r, c, (*co)[r]);
    }
    T.cx.set_diff(k, std::move(d));
  }
  return T;
}

// matrix of phi on the solved basis: cochain coordinates in the rows
template <typename K>
SparseMatrix<K> phi_matrix(const FormSpace<K>& S) {
  SparseMatrix<K> M(S.X->count(S.k), S.dim());
  for (int c = 0; c < S.dim(); ++c) {
    Cochain<K> ph = phi(S.basis[c]);
    for (int r = 0; r < S.X->count(S.k); ++r)
      if (!ph.c[r].is_zero()) M.add(r, c, ph.c[r]);
  }
  return M;
}

// d-primitive of a cocycle inside the given (usually cap-enlarged) theory;
// nullopt when no primitive exists within the caps
template <typename K>
std::optional<FormOn<K>> form_primitive(const FormTheory<K>& T,
                                        const FormOn<K>& z) {
  int k = z.k;
  assert(k >= 1);
  auto co = T.sp[k].coords(z);
  if (!co) return std::nullopt;
  SparseVec<K> b;
  for (std::size_t i = 0; i < co->size(); ++i)
    if (!(*co)[i].is_zero()) b.emplace_back(static_cast<int>(i), (*co)[i]);
  auto sol = Echelon<K>(T.cx.diff(k - 1)).solve(b);
  if (!sol) return std::nullopt;
  FormOn<K> w = form_zero(*z.X, *T.L, k - 1);
  for (const auto& [i, c] : *sol)
    w = form_add(w, form_scale(c, T.sp[k - 1].basis[i]));
  return w;
}

// ---------------------------------------------------------------------------
// Extension along an inclusion: fills the missing nondegenerate simplices in
// (dimension, label) order with boundary fillers; new vertices receive zero.
// ---------------------------------------------------------------------------

template <typename K>
FormOn<K> extend_form(const SimplicialSet& X, const PolyForms<K>& L,
                      const std::vector<std::vector<char>>& in_sub,
                      const FormOn<K>& F) {
  FormOn<K> G = form_zero(X, L, F.k);
  for (int n = 0; n <= L.nmax(); ++n)
    for (int idx = 0; idx < X.count(n); ++idx)
      if (in_sub[n][idx]) {
        G.val[n][idx] = F.val[n][idx];
        if (n >= 1)
          for (int j = 0; j <= n; ++j) {
            SimplexRef r = X.face(n, idx, j);
            if (!in_sub[r.dim][r.idx])
              throw std::invalid_argument(
                  "subset is not a simplicial subset: face of " +
                  X.label(n, idx));
          }
      }
  for (int n = 1; n <= L.nmax(); ++n) {
    std::vector<int> order;
    for (int idx = 0; idx < X.count(n); ++idx)
      if (!in_sub[n][idx]) order.push_back(idx);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
      return X.label(n, a) < X.label(n, b);
    });
    for (int idx : order) {
      std::vector<typename FreeCDGA<K>::Elt> faces;
      for (int j = 0; j <= n; ++j)
        faces.push_back(form_value(G, X.face(n, idx, j)));
      G.val[n][idx] = L.boundary_filler(n, faces);
      if (L.level(n).weight(G.val[n][idx]) > L.wcap())
        throw std::runtime_error("extension exceeds the weight cap at " +
                                 X.label(n, idx));
    }
  }
  return G;
}

// ---------------------------------------------------------------------------
// Local-coefficient forms: a presheaf of cochain complexes over the space,
// sections per nondegenerate simplex twisted by the restriction maps, and
// the two anticommuting differentials.
// ---------------------------------------------------------------------------

template <typename K>
struct PresheafOn {
  const SimplicialSet* X = nullptr;
  // complex attached to each nondegenerate simplex
  std::vector<std::vector<CochainComplex<K>>> F;
  // rmap[n][idx][j][s]: the coefficient restriction from the core of face j
  // into the simplex (n, idx) in degree s; degenerate faces restrict through
  // their core by the same matrices
  std::vector<std::vector<std::vector<std::map<int, SparseMatrix<K>>>>> rmap;
};

template <typename K>
PresheafOn<K> constant_presheaf(const SimplicialSet& X, int nmax,
                                const CochainComplex<K>& M) {
  PresheafOn<K> P;
  P.X = &X;
  P.F.resize(nmax + 1);
  P.rmap.resize(nmax + 1);
  for (int n = 0; n <= nmax; ++n) {
    P.F[n].assign(X.count(n), M);
    P.rmap[n].resize(X.count(n));
    for (int idx = 0; idx < X.count(n); ++idx) {
      P.rmap[n][idx].resize(n >= 1 ? n + 1 : 0);
      if (n >= 1)
        for (int j = 0; j <= n; ++j)
          for (int s = M.lo; s <= M.hi; ++s)
            P.rmap[n][idx][j][s] = SparseMatrix<K>::identity(M.dim(s));
    }
  }
  return P;
}

// shape, chain-map, and path-independence checks; nullopt when functorial
template <typename K>
std::optional<std::string> presheaf_check(const PresheafOn<K>& P, int nmax) {
  const SimplicialSet& X = *P.X;
  auto mat = [&](int n, int idx, int j, int s) -> SparseMatrix<K> {
    auto it = P.rmap[n][idx][j].find(s);
    if (it != P.rmap[n][idx][j].end()) return it->second;
    SimplexRef r = X.face(n, idx, j);
    return SparseMatrix<K>(P.F[n][idx].dim(s), P.F[r.dim][r.idx].dim(s));
  };
  for (int n = 1; n <= nmax; ++n)
    for (int idx = 0; idx < X.count(n); ++idx)
      for (int j = 0; j <= n; ++j) {
        SimplexRef r = X.face(n, idx, j);
        const auto& src = P.F[r.dim][r.idx];
        const auto& dst = P.F[n][idx];
        for (int s = src.lo; s <= src.hi; ++s) {
          SparseMatrix<K> m = mat(n, idx, j, s);
          if (m.rows() != dst.dim(s) || m.cols() != src.dim(s))
            return "restriction shape at face " + std::to_string(j) + " of " +
                   X.label(n, idx);
          if (s < src.hi) {
            SparseMatrix<K> lhs = dst.diff(s) * m;
            SparseMatrix<K> rhs = mat(n, idx, j, s + 1) * src.diff(s);
            if (!(lhs + (-K::one()) * rhs).is_zero())
              return "restriction is not a chain map at face " +
                     std::to_string(j) + " of " + X.label(n, idx);
          }
        }
      }
  for (int n = 2; n <= nmax; ++n)
    for (int idx = 0; idx < X.count(n); ++idx)
      for (int j = 1; j <= n; ++j)
        for (int i = 0; i < j; ++i) {
          SimplexRef fj = X.face(n, idx, j);
          SimplexRef fi = X.face(n, idx, i);
          if (fj.degenerate() || fi.degenerate()) continue;
          SimplexRef a = X.face(n - 1, fj.idx, i);
          SimplexRef b = X.face(n - 1, fi.idx, j - 1);
          if (a.degenerate() || b.degenerate()) continue;
          const auto& src = P.F[a.dim][a.idx];
          for (int s = src.lo; s <= src.hi; ++s) {
            SparseMatrix<K> lhs = mat(n, idx, j, s) * mat(n - 1, fj.idx, i, s);
            SparseMatrix<K> rhs =
                mat(n, idx, i, s) * mat(n - 1, fi.idx, j - 1, s);
            if (!(lhs + (-K::one()) * rhs).is_zero())
              return "restrictions do not commute on " + X.label(n, idx);
          }
        }
  return std::nullopt;
}

// sections of bidegree (r, s): ambient index = (simplex, level monomial,
// coefficient basis vector), solved from the twisted compatibility system
template <typename K>
struct LocalSpace {
  const SimplicialSet* X = nullptr;
  const PolyForms<K>* L = nullptr;
  const PresheafOn<K>* P = nullptr;
  int r = 0, s = 0;
  std::vector<std::vector<GcMono>> monos;
  std::vector<int> off;  // per dim; within: (idx * monos + mono) * fdim + f
  int ambient = 0;
  std::vector<SparseVec<K>> basis;

  int dim() const { return static_cast<int>(basis.size()); }
};

template <typename K>
LocalSpace<K> local_sections(const SimplicialSet& X, const PolyForms<K>& L,
                             const PresheafOn<K>& P, int r, int s) {
  LocalSpace<K> S;
  S.X = &X;
  S.L = &L;
  S.P = &P;
  S.r = r;
  S.s = s;
  S.monos.resize(L.nmax() + 1);
  S.off.assign(L.nmax() + 2, 0);
  for (int n = 0; n <= L.nmax(); ++n) {
    S.monos[n] = L.level(n).basis(r, L.wcap());
    int fdim = X.count(n) > 0 ? P.F[n][0].dim(s) : 0;
    for (int idx = 0; idx < X.count(n); ++idx)
      assert(P.F[n][idx].dim(s) == fdim);
    S.off[n + 1] =
        S.off[n] + X.count(n) * static_cast<int>(S.monos[n].size()) * fdim;
  }
  S.ambient = S.off[L.nmax() + 1];

  std::vector<std::tuple<int, int, K>> trip;
  int rows = 0;
  for (int n = 1; n <= L.nmax(); ++n) {
    int cols_n = static_cast<int>(S.monos[n].size());
    int fd_n = X.count(n) > 0 ? P.F[n][0].dim(s) : 0;
    for (int idx = 0; idx < X.count(n); ++idx)
      for (int j = 0; j <= n; ++j) {
        SimplexRef rf = X.face(n, idx, j);
        int cols_c = static_cast<int>(S.monos[rf.dim].size());
        int fd_c = P.F[rf.dim][rf.idx].dim(s);
        std::vector<SparseVec<K>> rcols;
        auto it = P.rmap[n][idx][j].find(s);
        if (it != P.rmap[n][idx][j].end()) rcols = it->second.columns();
        int block = rows;
        rows += static_cast<int>(S.monos[n - 1].size()) * fd_n;
        // delta_j of the value on (n, idx)
        for (int mi = 0; mi < cols_n; ++mi) {
          typename FreeCDGA<K>::Elt e;
          e[S.monos[n][mi]] = K::one();
          for (const auto& [m, c] : L.face(n, j, e)) {
            auto pos = std::lower_bound(S.monos[n - 1].begin(),
                                        S.monos[n - 1].end(), m);
            int row_m = static_cast<int>(pos - S.monos[n - 1].begin());
            for (int f = 0; f < fd_n; ++f)
              trip.emplace_back(block + row_m * fd_n + f,
                                S.off[n] + (idx * cols_n + mi) * fd_n + f, c);
          }
        }
        // minus the transported, coefficient-restricted core value
        for (int mi = 0; mi < cols_c; ++mi) {
          typename FreeCDGA<K>::Elt e;
          e[S.monos[rf.dim][mi]] = K::one();
          for (const auto& [m, c] : L.transport(rf.dim, rf.word, e)) {
            auto pos = std::lower_bound(S.monos[n - 1].begin(),
                                        S.monos[n - 1].end(), m);
            int row_m = static_cast<int>(pos - S.monos[n - 1].begin());
            for (int fc = 0; fc < static_cast<int>(rcols.size()) && fc < fd_c;
                 ++fc)
              for (const auto& [fr, v] : rcols[fc])
                trip.emplace_back(
                    block + row_m * fd_n + fr,
                    S.off[rf.dim] + (rf.idx * cols_c + mi) * fd_c + fc,
                    -(c * v));
          }
        }
      }
  }
  SparseMatrix<K> A(rows, S.ambient);
  for (auto& [rr, cc, v] : trip) A.add(rr, cc, v);
  // reduce so that downstream coords are expressed in the stored basis itself
  S.basis = QuotientBasis<K>({}, Echelon<K>(A).kernel_basis()).reps();
  return S;
}

// the two differentials as matrices in the solved bases; the coefficient
// direction carries the sign (-1)^r so the two anticommute
template <typename K>
SparseMatrix<K> local_d_matrix(const LocalSpace<K>& from,
                               const LocalSpace<K>& to, bool form_direction) {
  const PolyForms<K>& L = *from.L;
  const PresheafOn<K>& P = *from.P;
  auto apply = [&](const SparseVec<K>& v) {
    SparseVec<K> out;
    for (const auto& [pos, c] : v) {
      int n = 0;
      while (n + 2 < static_cast<int>(from.off.size()) &&
             from.off[n + 1] <= pos)
        ++n;
      int fd = P.F[n][0].dim(from.s);
      int rel = pos - from.off[n];
      int cols = static_cast<int>(from.monos[n].size());
      int idx = rel / (cols * fd);
      int mi = (rel / fd) % cols;
      int f = rel % fd;
      int cols_to = static_cast<int>(to.monos[n].size());
      if (form_direction) {
        typename FreeCDGA<K>::Elt e;
        e[from.monos[n][mi]] = K::one();
        for (const auto& [m, cm] : L.level(n).d(e)) {
          auto posm =
              std::lower_bound(to.monos[n].begin(), to.monos[n].end(), m);
          assert(posm != to.monos[n].end() && *posm == m);
          int tmi = static_cast<int>(posm - to.monos[n].begin());
          out.emplace_back(to.off[n] + (idx * cols_to + tmi) * fd + f, c * cm);
        }
      } else {
        int fd_to = P.F[n][idx].dim(to.s);
        auto dcols = P.F[n][idx].diff(from.s).columns();
        int mdeg = L.level(n).mono_degree(from.monos[n][mi]);
        K sgn = (mdeg % 2 == 0) ? K::one() : -K::one();
        auto posm = std::lower_bound(to.monos[n].begin(), to.monos[n].end(),
                                     from.monos[n][mi]);
        assert(posm != to.monos[n].end());
        int tmi = static_cast<int>(posm - to.monos[n].begin());
        for (const auto& [fr, v2] : dcols[f])
          out.emplace_back(to.off[n] + (idx * cols_to + tmi) * fd_to + fr,
                           c * v2 * sgn);
      }
    }
    return vec_canon(std::move(out));
  };
  QuotientBasis<K> span({}, to.basis);
  SparseMatrix<K> M(to.dim(), from.dim());
  for (int c = 0; c < from.dim(); ++c) {
    auto co = span.coords(apply(from.basis[c]));
    if (!co) throw std::logic_error("differential leaves the section space");
    for (int r = 0; r < to.dim(); ++r)
      if (!(*co)[r].is_zero()) M.add(r, c, (*co)[r]);
  }
  return M;
}

// a per-simplex coefficient map applied to sections, in the solved bases;
// maps[n][idx][s] sends the coefficients of from.P to those of to.P
template <typename K>
SparseMatrix<K> local_map_matrix(
    const LocalSpace<K>& from, const LocalSpace<K>& to,
    const std::vector<std::vector<std::map<int, SparseMatrix<K>>>>& maps) {
  const PresheafOn<K>& P = *from.P;
  auto apply = [&](const SparseVec<K>& v) {
    SparseVec<K> out;
    for (const auto& [pos, c] : v) {
      int n = 0;
      while (n + 2 < static_cast<int>(from.off.size()) &&
             from.off[n + 1] <= pos)
        ++n;
      int fd = P.F[n][0].dim(from.s);
      int rel = pos - from.off[n];
      int cols = static_cast<int>(from.monos[n].size());
      int idx = rel / (cols * fd);
      int mi = (rel / fd) % cols;
      int f = rel % fd;
      const auto& mp = maps[n][idx].at(from.s);
      auto mcols = mp.columns();
      int fd_to = mp.rows();
      int cols_to = static_cast<int>(to.monos[n].size());
      auto posm = std::lower_bound(to.monos[n].begin(), to.monos[n].end(),
                                   from.monos[n][mi]);
      assert(posm != to.monos[n].end());
      int tmi = static_cast<int>(posm - to.monos[n].begin());
      for (const auto& [fr, v2] : mcols[f])
        out.emplace_back(to.off[n] + (idx * cols_to + tmi) * fd_to + fr,
                         c * v2);
    }
    return vec_canon(std::move(out));
  };
  QuotientBasis<K> span({}, to.basis);
  SparseMatrix<K> M(to.dim(), from.dim());
  for (int c = 0; c < from.dim(); ++c) {
    auto co = span.coords(apply(from.basis[c]));
    if (!co) throw std::logic_error("coefficient map leaves the section space");
    for (int r = 0; r < to.dim(); ++r)
      if (!(*co)[r].is_zero()) M.add(r, c, (*co)[r]);
  }
  return M;
}

// ---------------------------------------------------------------------------
// Path object A (x) (t, dt) of a free graded-commutative algebra, with the
// two evaluations and the t-integration contraction witnessing that the
// inclusion is a quasi-isomorphism.
// ---------------------------------------------------------------------------

template <typename K>
class PathObject {
 public:
  using Elt = typename FreeCDGA<K>::Elt;

  explicit PathObject(const FreeCDGA<K>& A) : A_(&A), alg_(build(A)) {
    for (int g = 0; g < A.gens(); ++g) alg_.set_diff(g, push(A.gen_diff(g)));
    alg_.set_diff(A.gens(), alg_.gen(A.gens() + 1));  // d t = dt
  }

  const FreeCDGA<K>& base() const { return *A_; }
  const FreeCDGA<K>& algebra() const { return alg_; }
  int t_index() const { return A_->gens(); }
  int dt_index() const { return A_->gens() + 1; }

  Elt t() const { return alg_.gen(t_index()); }
  Elt dt() const { return alg_.gen(dt_index()); }

  // the inclusion p: A -> A (x) (t, dt)
  Elt p(const Elt& a) const { return push(a); }

  // the evaluation at t = i, dt = 0
  Elt ev(int i, const Elt& b) const {
    std::vector<Elt> im(alg_.gens());
    for (int g = 0; g < A_->gens(); ++g) im[g] = A_->gen(g);
    im[t_index()] = A_->scalar(K::from_int(i));
    im[dt_index()] = A_->zero();
    return alg_.substitute(b, *A_, im);
  }

  // H with dH + Hd = id - p.ev_0: integrate the dt-part in t
  Elt contraction(const Elt& b) const {
    if (K::characteristic() != 0)
      throw std::invalid_argument("contraction requires characteristic 0");
    Elt r;
    int ti = t_index(), di = dt_index();
    for (const auto& [m, v] : b) {
      if (m.e[di] == 0) continue;
      GcMono m2 = m;
      m2.e[di] = 0;
      m2.e[ti] += 1;
      K c = v / K::from_int(m2.e[ti]);
      // Koszul sign of moving the integration past the part left of dt
      if ((alg_.mono_degree(m) - 1) % 2 != 0) c = -c;
      Elt term;
      term[m2] = c;
      FreeCDGA<K>::add_in(r, term);
    }
    return r;
  }

 private:
  const FreeCDGA<K>* A_;
  FreeCDGA<K> alg_;

  static FreeCDGA<K> build(const FreeCDGA<K>& A) {
    std::vector<int> degs;
    std::vector<std::string> names;
    for (int g = 0; g < A.gens(); ++g) {
      degs.push_back(A.gen_degree(g));
      names.push_back(A.gen_name(g));
    }
    degs.push_back(0);
    names.push_back("t");
    degs.push_back(1);
    names.push_back("dt");
    return FreeCDGA<K>(degs, names);
  }

  Elt push(const Elt& a) const {
    Elt r;
    for (const auto& [m, v] : a) {
      GcMono m2 = m;
      m2.e.push_back(0);
      m2.e.push_back(0);
      r[m2] = v;
    }
    return r;
  }
};

// ---------------------------------------------------------------------------
// Cohomology of a connected free algebra (all generators in positive degree)
// in one degree: the weight there is bounded by the degree, so the monomial
// truncation is complete.
// ---------------------------------------------------------------------------

template <typename K>
struct CdgaCohomologyData {
  std::vector<GcMono> monos;  // degree-n monomials
  QuotientBasis<K> classes;
  int betti = 0;
};

template <typename K>
SparseVec<K> cdga_coords(const std::vector<GcMono>& monos,
                         const typename FreeCDGA<K>::Elt& e) {
  SparseVec<K> v;
  for (const auto& [m, c] : e) {
    auto it = std::lower_bound(monos.begin(), monos.end(), m);
    assert(it != monos.end() && *it == m);
    v.emplace_back(static_cast<int>(it - monos.begin()), c);
  }
  return v;
}

template <typename K>
typename FreeCDGA<K>::Elt cdga_element(const std::vector<GcMono>& monos,
                                       const SparseVec<K>& v) {
  typename FreeCDGA<K>::Elt e;
  for (const auto& [i, c] : v) e[monos[i]] = c;
  return e;
}

template <typename K>
SparseMatrix<K> cdga_d_matrix(const FreeCDGA<K>& A, int n) {
  auto src = A.basis(n, n);
  auto dst = A.basis(n + 1, n + 1);
  SparseMatrix<K> M(static_cast<int>(dst.size()), static_cast<int>(src.size()));
  for (std::size_t c = 0; c < src.size(); ++c) {
    typename FreeCDGA<K>::Elt e;
    e[src[c]] = K::one();
    for (const auto& [m, v] : A.d(e)) {
      auto it = std::lower_bound(dst.begin(), dst.end(), m);
      assert(it != dst.end() && *it == m);
      M.add(static_cast<int>(it - dst.begin()), static_cast<int>(c), v);
    }
  }
  return M;
}

template <typename K>
CdgaCohomologyData<K> cdga_cohomology(const FreeCDGA<K>& A, int n) {
  for (int g = 0; g < A.gens(); ++g) assert(A.gen_degree(g) >= 1);
  CdgaCohomologyData<K> out;
  out.monos = A.basis(n, n);
  std::vector<SparseVec<K>> bdry;
  if (n >= 1) bdry = Echelon<K>(cdga_d_matrix(A, n - 1)).image_basis();
  out.classes =
      QuotientBasis<K>(bdry, Echelon<K>(cdga_d_matrix(A, n)).kernel_basis());
  out.betti = out.classes.dim();
  return out;
}

// ---------------------------------------------------------------------------
// Simplicial homotopy between algebra maps f, g: A -> B through the path
// object of B, solved generator by generator as linear systems.
// ---------------------------------------------------------------------------

template <typename K>
struct HomotopyResult {
  bool found = false;
  std::string reason;                         // empty when found
  std::vector<typename FreeCDGA<K>::Elt> im;  // H(gen) in path(B) when found
};

template <typename K>
HomotopyResult<K> simplicially_homotopic(
    const FreeCDGA<K>& A, const PathObject<K>& PB,
    const std::vector<typename FreeCDGA<K>::Elt>& f_im,
    const std::vector<typename FreeCDGA<K>::Elt>& g_im, int wcap) {
  using Alg = FreeCDGA<K>;
  using Elt = typename Alg::Elt;
  const Alg& B = PB.base();
  const Alg& P = PB.algebra();
  HomotopyResult<K> res;
  res.im.assign(A.gens(), Elt{});
  std::vector<int> order(A.gens());
  for (int g = 0; g < A.gens(); ++g) order[g] = g;
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return A.gen_degree(a) < A.gen_degree(b);
  });
  std::vector<char> assigned(A.gens(), 0);
  auto obstruction = [&]() -> std::string {
    for (int h = 0; h < A.gens(); ++h)
      if (A.gen_degree(h) <= 0) return "";
    for (int h = 0; h < B.gens(); ++h)
      if (B.gen_degree(h) <= 0) return "";
    int top = 0;
    for (int h = 0; h < A.gens(); ++h) top = std::max(top, A.gen_degree(h));
    for (int nd = 1; nd <= top; ++nd) {
      auto HA = cdga_cohomology(A, nd);
      auto HB = cdga_cohomology(B, nd);
      for (int cl = 0; cl < HA.betti; ++cl) {
        Elt z = cdga_element<K>(HA.monos, HA.classes.reps()[cl]);
        auto clf = HB.classes.coords(
            cdga_coords<K>(HB.monos, A.substitute(z, B, f_im)));
        auto clg = HB.classes.coords(
            cdga_coords<K>(HB.monos, A.substitute(z, B, g_im)));
        if (clf && clg && !(*clf == *clg))
          return "maps differ on cohomology in degree " + std::to_string(nd);
      }
    }
    return "";
  };
  for (int g : order) {
    const Elt& dg = A.gen_diff(g);
    for (const auto& [m, c] : dg)
      for (int h = 0; h < A.gens(); ++h)
        if (m.e[h] > 0 && !assigned[h]) {
          res.reason = "none found (caps)";
          return res;
        }
    Elt rhs = A.substitute(dg, P, res.im);
    int mdeg = A.gen_degree(g);
    auto monos = P.basis(mdeg, wcap);
    std::map<std::pair<int, GcMono>, int> rowix;
    auto row_of = [&](int blk, const GcMono& m) {
      auto it = rowix.find({blk, m});
      if (it != rowix.end()) return it->second;
      int r = static_cast<int>(rowix.size());
      rowix.emplace(std::make_pair(blk, m), r);
      return r;
    };
    std::vector<std::tuple<int, int, K>> trip;
    for (std::size_t c = 0; c < monos.size(); ++c) {
      Elt e;
      e[monos[c]] = K::one();
      for (const auto& [m, v] : P.d(e))
        trip.emplace_back(row_of(0, m), static_cast<int>(c), v);
      for (const auto& [m, v] : PB.ev(0, e))
        trip.emplace_back(row_of(1, m), static_cast<int>(c), v);
      for (const auto& [m, v] : PB.ev(1, e))
        trip.emplace_back(row_of(2, m), static_cast<int>(c), v);
    }
    SparseVec<K> b;
    bool feasible = true;
    auto put_rhs = [&](int blk, const Elt& e) {
      for (const auto& [m, v] : e) {
        auto it = rowix.find({blk, m});
        if (it == rowix.end()) {
          if (!v.is_zero()) feasible = false;
          continue;
        }
        b.emplace_back(it->second, v);
      }
    };
    put_rhs(0, rhs);
    put_rhs(1, f_im[g]);
    put_rhs(2, g_im[g]);
    std::optional<SparseVec<K>> sol;
    if (feasible) {
      SparseMatrix<K> M(static_cast<int>(rowix.size()),
                        static_cast<int>(monos.size()));
      for (auto& [r, c, v] : trip) M.add(r, c, v);
      sol = Echelon<K>(M).solve(vec_canon(std::move(b)));
    }
    if (!sol) {
      std::string ob = obstruction();
      res.reason = ob.empty() ? "none found (caps)" : ob;
      return res;
    }
    Elt h;
    for (const auto& [c, v] : *sol)
      if (!v.is_zero()) h[monos[c]] = v;
    res.im[g] = h;
    assigned[g] = 1;
  }
  res.found = true;
  return res;
}

// ---------------------------------------------------------------------------
// Levels over a general truncated operad, at the structural level: normal
// forms in the free-algebra truncation, the face/degeneracy substitutions,
// the differential, and the theta_2 products.
// ---------------------------------------------------------------------------

class OmegaOp {
 public:
  OmegaOp(const Operad& O, int n, int weight_cap, int deg_max, int field_char);

  int n() const { return n_; }
  const FreeAlgebraTruncation& alg() const { return *alg_; }

  struct Elt {
    std::map<std::pair<int, int>, long long> c;  // (degree, basis index)
    friend bool operator==(const Elt& a, const Elt& b) { return a.c == b.c; }
    friend bool operator!=(const Elt& a, const Elt& b) { return !(a == b); }
  };

  Elt zero() const { return {}; }
  Elt unit() const;
  Elt x(int i) const;  // 1 <= i <= n
  Elt dx(int i) const;
  Elt d(const Elt&) const;
  Elt theta2(const Elt&, const Elt&) const;

  static Elt face(const OmegaOp& from, const OmegaOp& to, int j, const Elt&);
  static Elt degen(const OmegaOp& from, const OmegaOp& to, int j, const Elt&);

 private:
  const Operad* O_;
  int n_, wcap_, dmax_, char_;
  std::unique_ptr<FreeAlgebraTruncation> alg_;

  struct GenImage {
    long long unit = 0;                          // coefficient of 1
    std::vector<std::pair<int, long long>> lin;  // (generator, coefficient)
  };
  static Elt substitute(const OmegaOp& from, const OmegaOp& to,
                        const std::vector<GenImage>& im, const Elt& a);
  void accumulate(Elt& out, int p, int odeg, int oidx,
                  const std::vector<int>& word, long long coeff) const;
};

// simplicial identities, chain compatibility, and d^2 = 0 on all basis
// monomials of the levels up to nmax within the weight cap
std::optional<std::string> omega_op_identities(const Operad& O, int nmax,
                                               int wcap, int field_char);

// theta_2(operad unit; 1, a) = a on every basis monomial within the caps
std::optional<std::string> omega_op_unit_law(const Operad& O, int n, int wcap,
                                             int field_char);

}  // namespace opforms
