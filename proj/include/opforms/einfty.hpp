#pragma once

#include <algorithm>
#include <cassert>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "opforms/graded.hpp"
#include "opforms/simplicial.hpp"
#include "opforms/sparse.hpp"

namespace opforms {

// ---------------------------------------------------------------------------
// Normalized cochains on a simplicial set: one coefficient per nondegenerate
// simplex of the given degree; the value on any degenerate simplex is zero.
// ---------------------------------------------------------------------------

template <typename K>
struct Cochain {
  const SimplicialSet* X = nullptr;
  int deg = 0;
  std::vector<K> c;

  bool is_zero() const {
    for (const auto& v : c)
      if (!v.is_zero()) return false;
    return true;
  }
};

template <typename K>
Cochain<K> zero_cochain(const SimplicialSet& X, int deg) {
  return {&X, deg, std::vector<K>(deg >= 0 ? X.count(deg) : 0, K::zero())};
}

template <typename K>
Cochain<K> basis_cochain(const SimplicialSet& X, int deg, int idx) {
  Cochain<K> a = zero_cochain<K>(X, deg);
  a.c.at(idx) = K::one();
  return a;
}

// The multiplicative unit: value 1 on every vertex.
template <typename K>
Cochain<K> unit_cochain(const SimplicialSet& X) {
  Cochain<K> a = zero_cochain<K>(X, 0);
  for (auto& v : a.c) v = K::one();
  return a;
}

template <typename K>
K cochain_value(const Cochain<K>& a, const SimplexRef& r) {
  if (r.degenerate() || r.total_dim() != a.deg) return K::zero();
  return a.c[r.idx];
}

template <typename K>
Cochain<K> cochain_add(const Cochain<K>& a, const Cochain<K>& b) {
  assert(a.X == b.X && a.deg == b.deg);
  Cochain<K> out = a;
  for (std::size_t i = 0; i < out.c.size(); ++i) out.c[i] += b.c[i];
  return out;
}

template <typename K>
Cochain<K> cochain_sub(const Cochain<K>& a, const Cochain<K>& b) {
  assert(a.X == b.X && a.deg == b.deg);
  Cochain<K> out = a;
  for (std::size_t i = 0; i < out.c.size(); ++i) out.c[i] -= b.c[i];
  return out;
}

template <typename K>
Cochain<K> cochain_scale(const K& s, const Cochain<K>& a) {
  Cochain<K> out = a;
  for (auto& v : out.c) v *= s;
  return out;
}

// (da)(x) = sum_i (-1)^i a(d_i x), the degenerate faces contributing zero.
template <typename K>
Cochain<K> coboundary(const Cochain<K>& a) {
  const SimplicialSet& X = *a.X;
  Cochain<K> out = zero_cochain<K>(X, a.deg + 1);
  for (int idx = 0; idx < X.count(a.deg + 1); ++idx) {
    K v = K::zero();
    for (int i = 0; i <= a.deg + 1; ++i) {
      K t = cochain_value(a, X.face(a.deg + 1, idx, i));
      v += (i % 2) ? -t : t;
    }
    out.c[idx] = v;
  }
  return out;
}

// Deterministic pseudo-random cochain (fixed-seed sampling in tests).
inline std::uint64_t lcg_next(std::uint64_t& s) {
  s = s * 6364136223846793005ull + 1442695040888963407ull;
  return s >> 33;
}

template <typename K>
Cochain<K> random_cochain(const SimplicialSet& X, int deg, std::uint64_t seed) {
  Cochain<K> a = zero_cochain<K>(X, deg);
  std::uint64_t s = seed ^ (0x9e3779b97f4a7c15ull * (deg + 1));
  unsigned m = K::characteristic() ? K::characteristic() : 7;
  for (auto& v : a.c) v = K::from_int(static_cast<long long>(lcg_next(s) % m));
  return a;
}

// ---------------------------------------------------------------------------
// Cup products.  The front-back formula
//   (a cup b)(v_0..v_n) = a(v_0..v_p) * b(v_p..v_n)
// and the higher products: for i >= 0 and n = p + q - i,
//   (a cup_i b)(v_0..v_n) = sum over cuts 0 <= c_1 < ... < c_{i+1} <= n of
//       a(union of odd blocks) * b(union of even blocks),
// where the cuts split [0..n] into i+2 consecutive closed intervals
// overlapping at the cut points, the blocks alternate between the two
// factors, and a term contributes only when the unions have the right
// sizes.  Distinct cut tuples give distinct vertex-set pairs (the cut
// points are exactly the shared vertices), so no term is counted twice.
// The coboundary identity pinned in the tests is a characteristic-2
// identity; over other fields only cup itself is used.
// ---------------------------------------------------------------------------

template <typename K>
Cochain<K> cup(const Cochain<K>& a, const Cochain<K>& b) {
  assert(a.X == b.X);
  const SimplicialSet& X = *a.X;
  const int p = a.deg, q = b.deg, n = p + q;
  Cochain<K> out = zero_cochain<K>(X, n);
  std::vector<int> front(p + 1), back(q + 1);
  for (int i = 0; i <= p; ++i) front[i] = i;
  for (int i = 0; i <= q; ++i) back[i] = p + i;
  for (int idx = 0; idx < X.count(n); ++idx) {
    SimplexRef r = nondeg(n, idx);
    K va = cochain_value(a, restrict_to_vertices(X, r, front));
    if (va.is_zero()) continue;
    K vb = cochain_value(b, restrict_to_vertices(X, r, back));
    out.c[idx] = va * vb;
  }
  return out;
}

// Walks all strict cut tuples for (i, n) and hands each (A, B) vertex-mask
// pair over {0..n} to the sink.
template <typename F>
void for_each_cut(int i, int n, F&& sink) {
  if (n < 0) return;
  std::vector<int> cuts(i + 1);
  std::function<void(int, int)> rec = [&](int pos, int lo) {
    if (pos == i + 1) {
      unsigned A = 0, B = 0;
      int prev = 0;
      for (int t = 0; t <= i + 1; ++t) {
        int hi = (t == i + 1) ? n : cuts[t];
        unsigned block = 0;
        for (int v = prev; v <= hi; ++v) block |= 1u << v;
        if (t % 2 == 0)
          A |= block;
        else
          B |= block;
        prev = hi;
      }
      sink(A, B);
      return;
    }
    for (int c = lo; c <= n; ++c) {
      cuts[pos] = c;
      rec(pos + 1, c + 1);
    }
  };
  rec(0, 0);
}

template <typename K>
Cochain<K> cup_i(int i, const Cochain<K>& a, const Cochain<K>& b) {
  if (i < 0) throw std::invalid_argument("cup_i: negative i");
  assert(a.X == b.X);
  const SimplicialSet& X = *a.X;
  const int p = a.deg, q = b.deg, n = p + q - i;
  if (n < 0) throw std::invalid_argument("cup_i: i exceeds total degree");
  if (i == 0) return cup(a, b);
  Cochain<K> out = zero_cochain<K>(X, n);
  std::vector<std::pair<std::vector<int>, std::vector<int>>> splits;
  for_each_cut(i, n, [&](unsigned A, unsigned B) {
    std::vector<int> va, vb;
    for (int v = 0; v <= n; ++v) {
      if (A & (1u << v)) va.push_back(v);
      if (B & (1u << v)) vb.push_back(v);
    }
    if (static_cast<int>(va.size()) == p + 1 &&
        static_cast<int>(vb.size()) == q + 1)
      splits.emplace_back(std::move(va), std::move(vb));
  });
  for (int idx = 0; idx < X.count(n); ++idx) {
    SimplexRef r = nondeg(n, idx);
    K v = K::zero();
    for (const auto& [va, vb] : splits) {
      K x = cochain_value(a, restrict_to_vertices(X, r, va));
      if (x.is_zero()) continue;
      v += x * cochain_value(b, restrict_to_vertices(X, r, vb));
    }
    out.c[idx] = v;
  }
  return out;
}

// Steenrod square of a mod-2 cocycle: Sq^s x = [x cup_{q-s} x] in degree
// q + s; zero for s > q, the cup square for s = q.
template <typename K>
Cochain<K> sq(int s, const Cochain<K>& x) {
  if (s < 0) throw std::invalid_argument("sq: negative s");
  if (s > x.deg) return zero_cochain<K>(*x.X, x.deg + s);
  return cup_i(x.deg - s, x, x);
}

// ---------------------------------------------------------------------------
// Model combinatorics: a q-face of Delta[n] is the bitmask of its q+1
// vertices; face bases are ordered by increasing mask value.
// ---------------------------------------------------------------------------

std::vector<unsigned> model_faces(int n, int q);
int face_index(const std::vector<unsigned>& faces, unsigned mask);
// All (q_1..q_k) with 0 <= q_t <= qmax and sum = total.
std::vector<std::vector<int>> multidegrees(int k, int total, int qmax);
// All monotone maps [pdim] -> [qdim], as value vectors.
std::vector<std::vector<int>> monotone_maps(int pdim, int qdim);
long long binom_mod(long long n, long long k, int p);  // via base-p digits

// Per-slot face bases for one (model, multidegree) block, with row-major
// flattening of face tuples.
struct SlotBases {
  std::vector<std::vector<unsigned>> faces;
  std::size_t total = 1;
};

inline SlotBases slot_bases(int n, const std::vector<int>& qs) {
  SlotBases sb;
  for (int q : qs) {
    sb.faces.push_back(model_faces(n, q));
    sb.total *= sb.faces.back().size();
  }
  return sb;
}

inline std::size_t flat_of(const SlotBases& sb,
                           const std::vector<unsigned>& masks) {
  std::size_t f = 0;
  for (std::size_t t = 0; t < sb.faces.size(); ++t) {
    int j = face_index(sb.faces[t], masks[t]);
    assert(j >= 0);
    f = f * sb.faces[t].size() + static_cast<std::size_t>(j);
  }
  return f;
}

inline std::vector<unsigned> masks_of(const SlotBases& sb, std::size_t flat) {
  std::vector<unsigned> m(sb.faces.size());
  for (std::size_t t = sb.faces.size(); t-- > 0;) {
    m[t] = sb.faces[t][flat % sb.faces[t].size()];
    flat /= sb.faces[t].size();
  }
  return m;
}

// ---------------------------------------------------------------------------
// Natural multilinear cochain operations.  An operation of arity k and
// degree shift m sends cochains of degrees q_1..q_k to a cochain of degree
// q_1+..+q_k+m on every space, compatibly with all simplicial maps.  It is
// determined by its top-simplex functionals on the standard models:
//   T(a_1,..,a_k)(x) = lam_n(x^*a_1 tensor .. tensor x^*a_k),  n = dim x,
// and conversely any lam family that kills every degeneracy pullback defines
// such an operation.  lam is stored per (model dimension, input multidegree)
// as a dense functional on the face-tuple basis.
// ---------------------------------------------------------------------------

template <typename K>
struct NaturalOperation {
  int arity = 2;
  int shift = 0;  // output degree minus total input degree
  int cap = 4;    // models Delta[0..cap] carry the data
  std::map<std::pair<int, std::vector<int>>, std::vector<K>> lam;
};

template <typename K>
NaturalOperation<K> init_natural(int arity, int shift, int cap) {
  NaturalOperation<K> T{arity, shift, cap, {}};
  for (int n = 0; n <= cap; ++n)
    for (const auto& qs : multidegrees(arity, n - shift, n)) {
      SlotBases sb = slot_bases(n, qs);
      T.lam[{n, qs}] = std::vector<K>(sb.total, K::zero());
    }
  return T;
}

template <typename K>
const std::vector<K>* lam_get(const NaturalOperation<K>& T, int n,
                              const std::vector<int>& qs) {
  auto it = T.lam.find({n, qs});
  return it == T.lam.end() ? nullptr : &it->second;
}

// The iterated front-back product of arity p as a natural operation: one
// coefficient per multidegree, on the tuple of consecutive closed blocks.
template <typename K>
NaturalOperation<K> iterated_cup_natural(int p, int cap) {
  NaturalOperation<K> T = init_natural<K>(p, 0, cap);
  for (auto& [key, vec] : T.lam) {
    const std::vector<int>& qs = key.second;
    SlotBases sb = slot_bases(key.first, qs);
    std::vector<unsigned> masks(qs.size());
    int at = 0;
    for (std::size_t t = 0; t < qs.size(); ++t) {
      unsigned m = 0;
      for (int v = at; v <= at + qs[t]; ++v) m |= 1u << v;
      masks[t] = m;
      at += qs[t];
    }
    vec[flat_of(sb, masks)] = K::one();
  }
  return T;
}

template <typename K>
NaturalOperation<K> cup_natural(int cap) {
  return iterated_cup_natural<K>(2, cap);
}

// The explicit cup_i as a natural operation (same cut enumeration as the
// space-level product).
template <typename K>
NaturalOperation<K> cupi_natural(int i, int cap) {
  if (i < 0) throw std::invalid_argument("cupi_natural: negative i");
  NaturalOperation<K> T = init_natural<K>(2, -i, cap);
  for (int n = 0; n <= cap; ++n)
    for_each_cut(i, n, [&](unsigned A, unsigned B) {
      int pa = __builtin_popcount(A) - 1, pb = __builtin_popcount(B) - 1;
      std::vector<int> qs{pa, pb};
      auto it = T.lam.find({n, qs});
      if (it == T.lam.end()) return;
      it->second[flat_of(slot_bases(n, qs), {A, B})] += K::one();
    });
  return T;
}

// Applies a natural operation on any simplicial set; all inputs must live
// on the same space.  Output degrees beyond the model cap are reachable
// only when the space has no simplices there.
template <typename K>
Cochain<K> apply_natural(const NaturalOperation<K>& T,
                         const std::vector<Cochain<K>>& args) {
  assert(static_cast<int>(args.size()) == T.arity);
  const SimplicialSet& X = *args[0].X;
  std::vector<int> qs;
  int m = T.shift;
  for (const auto& a : args) {
    assert(a.X == &X);
    qs.push_back(a.deg);
    m += a.deg;
  }
  if (m < 0)
    throw std::invalid_argument("apply_natural: negative output degree");
  Cochain<K> out = zero_cochain<K>(X, m);
  if (X.count(m) == 0) return out;
  if (m > T.cap)
    throw std::runtime_error("apply_natural: output degree beyond model cap");
  for (int q : qs)
    if (q > m) return out;  // a pullback to the m-model vanishes identically
  const std::vector<K>* lam = lam_get(T, m, qs);
  assert(lam != nullptr);
  SlotBases sb = slot_bases(m, qs);
  std::vector<std::vector<K>> pv(qs.size());
  for (int idx = 0; idx < X.count(m); ++idx) {
    SimplexRef r = nondeg(m, idx);
    for (std::size_t t = 0; t < qs.size(); ++t) {
      pv[t].clear();
      for (unsigned mask : sb.faces[t]) {
        std::vector<int> verts;
        for (int v = 0; v <= m; ++v)
          if (mask & (1u << v)) verts.push_back(v);
        pv[t].push_back(
            cochain_value(args[t], restrict_to_vertices(X, r, verts)));
      }
    }
    K acc = K::zero();
    for (std::size_t f = 0; f < lam->size(); ++f) {
      if ((*lam)[f].is_zero()) continue;
      std::size_t rest = f;
      K prod = (*lam)[f];
      for (std::size_t t = sb.faces.size(); t-- > 0;) {
        prod *= pv[t][rest % sb.faces[t].size()];
        rest /= sb.faces[t].size();
        if (prod.is_zero()) break;
      }
      acc += prod;
    }
    out.c[idx] = acc;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Functional calculus on lam families, shared by the homotopy checker and
// the acyclic-models solver.
// ---------------------------------------------------------------------------

// delta_j^* on a dual-basis face: vanishes if j is a vertex, otherwise the
// higher bits shift down.
inline int mask_face_pullback(unsigned F, int j) {
  if (F & (1u << j)) return -1;
  unsigned low = F & ((1u << j) - 1);
  unsigned high = F >> (j + 1);
  return static_cast<int>(low | (high << j));
}

// Value of (d h)(e_1 tensor .. tensor e_k) at the top of Delta[n]:
// sum_j (-1)^j lam^h_{n-1} on the j-th face pullback of the tuple.
template <typename K>
K dh_value(const NaturalOperation<K>& h, int n, const std::vector<int>& qs,
           const std::vector<unsigned>& masks) {
  K acc = K::zero();
  if (n == 0) return acc;
  const std::vector<K>* lam = lam_get(h, n - 1, qs);
  if (lam == nullptr) return acc;
  SlotBases sb = slot_bases(n - 1, qs);
  std::vector<unsigned> pulled(masks.size());
  for (int j = 0; j <= n; ++j) {
    bool dead = false;
    for (std::size_t t = 0; t < masks.size(); ++t) {
      int pm = mask_face_pullback(masks[t], j);
      if (pm < 0) {
        dead = true;
        break;
      }
      pulled[t] = static_cast<unsigned>(pm);
    }
    if (dead) continue;
    K v = (*lam)[flat_of(sb, pulled)];
    acc += (j % 2) ? -v : v;
  }
  return acc;
}

// Expands the tensor differential of a dual-basis tuple on Delta[n]:
// emit(qs', masks', sign) for each term of d(e_1 tensor .. tensor e_k),
// with the Koszul prefix sign and the position sign of the added vertex.
template <typename F>
void hd_expand(int n, const std::vector<int>& qs,
               const std::vector<unsigned>& masks, F&& emit) {
  int prefix = 0;
  for (std::size_t t = 0; t < qs.size(); ++t) {
    for (int v = 0; v <= n; ++v) {
      if (masks[t] & (1u << v)) continue;
      int below = __builtin_popcount(masks[t] & ((1u << v) - 1));
      int sign = ((prefix + below) % 2) ? -1 : 1;
      std::vector<int> qs2 = qs;
      qs2[t] += 1;
      std::vector<unsigned> m2 = masks;
      m2[t] |= 1u << v;
      emit(qs2, m2, sign);
    }
    prefix += qs[t];
  }
}

template <typename K>
K hd_value(const NaturalOperation<K>& h, int n, const std::vector<int>& qs,
           const std::vector<unsigned>& masks) {
  K acc = K::zero();
  hd_expand(n, qs, masks,
            [&](const std::vector<int>& qs2, const std::vector<unsigned>& m2,
                int sign) {
              const std::vector<K>* lam = lam_get(h, n, qs2);
              if (lam == nullptr) return;
              K v = (*lam)[flat_of(slot_bases(n, qs2), m2)];
              acc += (sign < 0) ? -v : v;
            });
  return acc;
}

// Cyclic symmetrizers on the tensor input.  alpha rotates the last factor
// to the front with the Koszul sign; tau = 1 - alpha, sigma = 1 + alpha +
// ... + alpha^{k-1}.  Id leaves the operation unchanged (used to lift an
// already-assembled difference of operations).
enum class Killer { Tau, Sigma, Id };

template <typename K>
NaturalOperation<K> compose_killer(const NaturalOperation<K>& T, Killer kill) {
  if (kill == Killer::Id) return T;
  const int k = T.arity;
  NaturalOperation<K> R = init_natural<K>(k, T.shift, T.cap);
  for (auto& [key, vec] : R.lam) {
    const int n = key.first;
    const std::vector<int>& qs = key.second;
    SlotBases sb = slot_bases(n, qs);
    for (std::size_t f = 0; f < vec.size(); ++f) {
      std::vector<unsigned> masks = masks_of(sb, f);
      std::vector<int> cq = qs;
      std::vector<unsigned> cm = masks;
      int csign = 1;
      K acc = K::zero();
      const int rounds = (kill == Killer::Tau) ? 2 : k;
      for (int j = 0; j < rounds; ++j) {
        const std::vector<K>* lam = lam_get(T, n, cq);
        K v = lam ? (*lam)[flat_of(slot_bases(n, cq), cm)] : K::zero();
        if (csign < 0) v = -v;
        if (j == 0)
          acc += v;
        else if (kill == Killer::Tau)
          acc -= v;
        else
          acc += v;
        // rotate: alpha(e_1 x .. x e_k) = +- e_k x e_1 x .. x e_{k-1}
        int qlast = cq.back(), qrest = 0;
        for (std::size_t t = 0; t + 1 < cq.size(); ++t) qrest += cq[t];
        if ((qlast * qrest) % 2) csign = -csign;
        std::rotate(cq.rbegin(), cq.rbegin() + 1, cq.rend());
        std::rotate(cm.rbegin(), cm.rbegin() + 1, cm.rend());
      }
      vec[f] = acc;
    }
  }
  return R;
}

// Verifies T = d h + hd_sign * h d on every model functional through the
// cap; returns a located witness on failure.
template <typename K>
std::optional<std::string> check_homotopy(const NaturalOperation<K>& T,
                                          const NaturalOperation<K>& h,
                                          int hd_sign = 1) {
  for (int n = 0; n <= h.cap; ++n)
    for (const auto& qs : multidegrees(T.arity, n - T.shift, n)) {
      SlotBases sb = slot_bases(n, qs);
      const std::vector<K>* lam = lam_get(T, n, qs);
      for (std::size_t f = 0; f < sb.total; ++f) {
        std::vector<unsigned> masks = masks_of(sb, f);
        K lhs = lam ? (*lam)[f] : K::zero();
        K rhs = dh_value(h, n, qs, masks);
        K hv = hd_value(h, n, qs, masks);
        rhs += (hd_sign < 0) ? -hv : hv;
        if (!(lhs - rhs).is_zero()) {
          std::string msg = "homotopy identity fails on Delta[" +
                            std::to_string(n) + "] multidegree (";
          for (int q : qs) msg += std::to_string(q) + ",";
          msg.back() = ')';
          return msg;
        }
      }
    }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Naturality checker.  A lam family defines one operation on all spaces
// exactly when it commutes with every monotone map between models; it is
// enough to verify the elementary cofaces and codegeneracies through the
// cap, since their composites give all monotone maps and the compatibility
// squares paste.  The codegeneracy checks subsume degeneracy annihilation.
// ---------------------------------------------------------------------------

template <typename K>
std::optional<std::string> check_natural_map(const NaturalOperation<K>& T,
                                             int pdim, int qdim,
                                             const std::vector<int>& al) {
  const int k = T.arity;
  for (int tot = 0; tot <= k * qdim; ++tot)
    for (const auto& rs : multidegrees(k, tot, qdim)) {
      const int m = tot + T.shift;
      if (m < 0 || m > pdim) continue;
      const std::vector<K>* lam_m = lam_get(T, m, rs);
      SlotBases src = slot_bases(qdim, rs);
      SlotBases mb = slot_bases(m, rs);
      std::vector<unsigned> Hs = model_faces(pdim, m);
      for (std::size_t f = 0; f < src.total; ++f) {
        std::vector<unsigned> F = masks_of(src, f);
        for (unsigned H : Hs) {
          std::vector<int> hv;
          for (int v = 0; v <= pdim; ++v)
            if (H & (1u << v)) hv.push_back(al[v]);
          // left side: T(dual F) pulled back, i.e. evaluated on alpha(H)
          K lhs = K::zero();
          bool inj = true;
          unsigned img = 0;
          for (std::size_t t = 0; t < hv.size(); ++t) {
            if (t > 0 && hv[t] == hv[t - 1]) inj = false;
            img |= 1u << hv[t];
          }
          if (inj && lam_m != nullptr) {
            bool all_in = true;
            std::vector<unsigned> rel(F.size());
            for (std::size_t t = 0; t < F.size(); ++t) {
              if ((F[t] & img) != F[t]) {
                all_in = false;
                break;
              }
              unsigned r = 0;
              int pos = 0;
              for (int v = 0; v <= qdim; ++v) {
                if (!(img & (1u << v))) continue;
                if (F[t] & (1u << v)) r |= 1u << pos;
                ++pos;
              }
              rel[t] = r;
            }
            if (all_in) lhs = (*lam_m)[flat_of(mb, rel)];
          }
          // right side: T(alpha^* dual F) evaluated on H: sum over face
          // tuples of H mapping onto F injectively
          K rhs = K::zero();
          if (lam_m != nullptr) {
            std::vector<std::vector<unsigned>> cand(F.size());
            bool any = true;
            for (std::size_t t = 0; t < F.size(); ++t) {
              for (unsigned S : model_faces(m, rs[t])) {
                bool sinj = true;
                unsigned simg = 0;
                int prev = -1;
                for (std::size_t u = 0; u < hv.size(); ++u) {
                  if (!(S & (1u << u))) continue;
                  if (hv[u] == prev) sinj = false;
                  prev = hv[u];
                  simg |= 1u << hv[u];
                }
                if (sinj && simg == F[t]) cand[t].push_back(S);
              }
              if (cand[t].empty()) any = false;
            }
            if (any && !F.empty()) {
              std::vector<std::size_t> pick(F.size(), 0);
              while (true) {
                std::vector<unsigned> tup(F.size());
                for (std::size_t t = 0; t < F.size(); ++t)
                  tup[t] = cand[t][pick[t]];
                rhs += (*lam_m)[flat_of(mb, tup)];
                std::size_t t = F.size();
                bool done = true;
                while (t-- > 0) {
                  if (++pick[t] < cand[t].size()) {
                    done = false;
                    break;
                  }
                  pick[t] = 0;
                }
                if (done) break;
              }
            }
          }
          if (!(lhs - rhs).is_zero())
            return "naturality fails against a monotone map [" +
                   std::to_string(pdim) + "]->[" + std::to_string(qdim) +
                   "] at output face mask " + std::to_string(H);
        }
      }
    }
  return std::nullopt;
}

template <typename K>
std::optional<std::string> check_natural(const NaturalOperation<K>& T) {
  for (int n = 1; n <= T.cap; ++n)
    for (int j = 0; j <= n; ++j) {
      std::vector<int> delta;  // [n-1] -> [n] skipping j
      for (int v = 0; v < n; ++v) delta.push_back(v < j ? v : v + 1);
      if (auto w = check_natural_map(T, n - 1, n, delta)) return w;
    }
  for (int n = 0; n + 1 <= T.cap; ++n)
    for (int j = 0; j <= n; ++j) {
      std::vector<int> sig;  // [n+1] -> [n] repeating j
      for (int v = 0; v <= n + 1; ++v) sig.push_back(v <= j ? v : v - 1);
      if (auto w = check_natural_map(T, n + 1, n, sig)) return w;
    }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Acyclic-models lifting.  Given a natural operation "start" and a cyclic
// killer, finds h with
//     start o killer = d h + hd_sign * h d,
// solving model by model in increasing dimension.  Each model's linear
// system consists of the degeneracy-annihilation rows (h must again be a
// natural operation) and the top-simplex homotopy identities; the lower
// faces are already determined by the previous models, via the explicit
// contraction of each model to its leading vertex.  Solvability is exactly
// the acyclicity of the models; an inconsistent system throws.
// ---------------------------------------------------------------------------

template <typename K>
NaturalOperation<K> acyclic_models_lift(const NaturalOperation<K>& start,
                                        Killer kill, int cap,
                                        int hd_sign = 1) {
  assert(cap <= start.cap);
  NaturalOperation<K> T = compose_killer(start, kill);
  NaturalOperation<K> h = init_natural<K>(start.arity, start.shift - 1, cap);
  for (int n = 0; n <= cap; ++n) {
    // unknown layout: consecutive blocks per multidegree
    std::vector<std::pair<std::vector<int>, std::size_t>> blocks;
    std::size_t nunk = 0;
    for (const auto& qs : multidegrees(h.arity, n - h.shift, n)) {
      blocks.emplace_back(qs, nunk);
      nunk += slot_bases(n, qs).total;
    }
    auto block_start = [&](const std::vector<int>& qs) -> std::size_t {
      for (const auto& [bqs, at] : blocks)
        if (bqs == qs) return at;
      throw std::logic_error("unknown multidegree block");
    };
    std::vector<SparseVec<K>> rows;
    SparseVec<K> rhs;
    // (a) degeneracy annihilation: lam_n kills sigma_j^* tuples
    for (int j = 0; j + 1 <= n; ++j)
      for (const auto& qs : multidegrees(h.arity, n - h.shift, n - 1)) {
        SlotBases sb = slot_bases(n - 1, qs);
        SlotBases tb = slot_bases(n, qs);
        const std::size_t at = block_start(qs);
        for (std::size_t f = 0; f < sb.total; ++f) {
          std::vector<unsigned> F = masks_of(sb, f);
          std::vector<std::vector<unsigned>> pre(F.size());
          for (std::size_t t = 0; t < F.size(); ++t) {
            unsigned low = F[t] & ((1u << j) - 1);
            unsigned high = (F[t] >> (j + 1)) << (j + 2);
            if (F[t] & (1u << j)) {
              pre[t].push_back(low | high | (1u << j));
              pre[t].push_back(low | high | (1u << (j + 1)));
            } else {
              pre[t].push_back(low | high);
            }
          }
          SparseVec<K> row;
          std::vector<std::size_t> pick(F.size(), 0);
          while (true) {
            std::vector<unsigned> tup(F.size());
            for (std::size_t t = 0; t < F.size(); ++t)
              tup[t] = pre[t][pick[t]];
            row = vec_add(
                row, vec_unit<K>(static_cast<int>(at + flat_of(tb, tup))));
            std::size_t t = F.size();
            bool done = true;
            while (t-- > 0) {
              if (++pick[t] < pre[t].size()) {
                done = false;
                break;
              }
              pick[t] = 0;
            }
            if (done) break;
          }
          rows.push_back(std::move(row));
        }
      }
    // (b) top-simplex homotopy identities
    for (const auto& rs : multidegrees(T.arity, n - T.shift, n)) {
      const std::vector<K>* lamT = lam_get(T, n, rs);
      SlotBases sb = slot_bases(n, rs);
      for (std::size_t f = 0; f < sb.total; ++f) {
        std::vector<unsigned> masks = masks_of(sb, f);
        K want = (lamT ? (*lamT)[f] : K::zero()) - dh_value(h, n, rs, masks);
        SparseVec<K> row;
        hd_expand(n, rs, masks,
                  [&](const std::vector<int>& qs2,
                      const std::vector<unsigned>& m2, int sign) {
                    SlotBases tb = slot_bases(n, qs2);
                    K coeff = K::from_int(sign * hd_sign);
                    row = vec_axpy(
                        row, coeff,
                        vec_unit<K>(static_cast<int>(block_start(qs2) +
                                                     flat_of(tb, m2))));
                  });
        if (!want.is_zero())
          rhs.emplace_back(static_cast<int>(rows.size()), want);
        rows.push_back(std::move(row));
      }
    }
    SparseMatrix<K> A(static_cast<int>(rows.size()), static_cast<int>(nunk));
    for (std::size_t r = 0; r < rows.size(); ++r)
      for (const auto& [cidx, v] : rows[r])
        A.add(static_cast<int>(r), cidx, v);
    Echelon<K> E(A);
    auto x = E.solve(rhs);
    if (!x.has_value())
      throw std::runtime_error(
          "acyclic-models lift: no natural solution at model dimension " +
          std::to_string(n));
    for (const auto& [uidx, v] : *x) {
      const std::size_t u = static_cast<std::size_t>(uidx);
      for (std::size_t b = 0; b < blocks.size(); ++b) {
        std::size_t lo = blocks[b].second;
        std::size_t hi = (b + 1 < blocks.size()) ? blocks[b + 1].second : nunk;
        if (u >= lo && u < hi) {
          h.lam[{n, blocks[b].first}][u - lo] = v;
          break;
        }
      }
    }
  }
  return h;
}

// ---------------------------------------------------------------------------
// The mu-family of a prime: mu_0 is the iterated front-back product of
// arity p; each later term is the acyclic-models lift against the
// alternating killer (tau for even steps, sigma for odd), satisfying
//   mu_i o killer_i = d mu_{i+1} + (-1)^i mu_{i+1} d.
// ---------------------------------------------------------------------------

template <typename K>
struct MuFamily {
  int p = 2;
  int cap = 4;
  std::vector<NaturalOperation<K>> mu;  // mu[i] has shift -i
};

template <typename K>
MuFamily<K> mu_family(int p, int imax, int cap) {
  MuFamily<K> F{p, cap, {}};
  F.mu.push_back(iterated_cup_natural<K>(p, cap));
  for (int i = 0; i < imax; ++i) {
    Killer kill = (i % 2 == 0) ? Killer::Tau : Killer::Sigma;
    int sign = (i % 2 == 0) ? 1 : -1;
    F.mu.push_back(acyclic_models_lift(F.mu[i], kill, cap, sign));
  }
  return F;
}

// ---------------------------------------------------------------------------
// Cohomology-level helpers and the Cartan check.
// ---------------------------------------------------------------------------

template <typename K>
SparseVec<K> to_sparsevec(const std::vector<K>& dense) {
  SparseVec<K> out;
  for (std::size_t i = 0; i < dense.size(); ++i)
    if (!dense[i].is_zero()) out.emplace_back(static_cast<int>(i), dense[i]);
  return out;
}

// Class coordinates of a cocycle; throws when the input is not a cocycle
// modulo coboundaries in its degree.
template <typename K>
std::vector<K> class_of(const typename CochainComplex<K>::Cohomology& H,
                        const Cochain<K>& z) {
  auto c = H.classes.coords(to_sparsevec(z.c));
  if (!c.has_value())
    throw std::runtime_error("class_of: input is not a cocycle");
  return *c;
}

// Sq^s(x cup y) = sum_t Sq^t x cup Sq^{s-t} y on classes of the common
// space (characteristic 2); x and y must be cocycles.
template <typename K>
bool cartan_check(int s, const Cochain<K>& x, const Cochain<K>& y,
                  std::string* witness = nullptr) {
  assert(x.X == y.X);
  const SimplicialSet& X = *x.X;
  const int tdeg = x.deg + y.deg + s;
  Cochain<K> lhs = sq(s, cup(x, y));
  Cochain<K> rhs = zero_cochain<K>(X, tdeg);
  for (int t = 0; t <= s; ++t)
    rhs = cochain_add(rhs, cup(sq(t, x), sq(s - t, y)));
  CochainComplex<K> C = normalized_cochains<K>(X, tdeg);
  auto H = C.cohomology(tdeg);
  std::vector<K> diff = class_of<K>(H, cochain_sub(lhs, rhs));
  for (std::size_t i = 0; i < diff.size(); ++i)
    if (!diff[i].is_zero()) {
      if (witness)
        *witness = "Cartan defect in degree " + std::to_string(tdeg) +
                   ", class coordinate " + std::to_string(i);
      return false;
    }
  return true;
}

// ---------------------------------------------------------------------------
// Composition relations of the power operations: the expansion of P^t P^s
// for t > p s into the standard basis, with exact mod-p binomials.
// ---------------------------------------------------------------------------

struct AdemTerm {
  int a = 0, b = 0;  // P^a P^b
  int coeff = 0;     // in [1, p)
};

std::vector<AdemTerm> adem_expand(int t, int s, int p);

}  // namespace opforms
