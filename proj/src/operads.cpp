#include "opforms/operads.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

namespace opforms {

std::string Operad::label(int arity, int deg, int idx) const {
  std::ostringstream os;
  os << name() << "(" << arity << "," << deg << ",#" << idx << ")";
  return os.str();
}

// ---------------------------------------------------------------- ComOperad

int ComOperad::dim(int arity, int deg) const {
  if (arity < 0 || arity > cap_) throw std::out_of_range("Com: arity cap exceeded");
  return deg == 0 ? 1 : 0;
}

std::vector<OpTerm> ComOperad::act(int arity, int deg, int idx, const Perm&) const {
  if (dim(arity, deg) == 0 || idx != 0) throw std::out_of_range("Com: bad element");
  return {{0, 1}};
}

std::vector<OpTerm> ComOperad::compose(int deg0, int idx0, const std::vector<OpKey>& args) const {
  const int k = static_cast<int>(args.size());
  if (dim(k, deg0) == 0 || idx0 != 0) throw std::out_of_range("Com: bad element");
  int n = 0;
  for (const auto& a : args) {
    if (dim(a.arity, a.deg) == 0 || a.idx != 0) throw std::out_of_range("Com: bad argument");
    n += a.arity;
  }
  if (n > cap_) throw std::out_of_range("Com: arity cap exceeded");
  return {{0, 1}};
}

long long ComOperad::augment(int arity, int deg, int idx) const {
  if (dim(arity, deg) == 0 || idx != 0) throw std::out_of_range("Com: bad element");
  return 1;
}

// --------------------------------------------------------------- UnitOperad

int UnitOperad::dim(int arity, int deg) const {
  if (arity < 0) throw std::out_of_range("I: negative arity");
  return (deg == 0 && (arity == 0 || arity == 1)) ? 1 : 0;
}

std::vector<OpTerm> UnitOperad::act(int arity, int deg, int idx, const Perm&) const {
  if (dim(arity, deg) == 0 || idx != 0) throw std::out_of_range("I: bad element");
  return {{0, 1}};
}

std::vector<OpTerm> UnitOperad::compose(int deg0, int idx0, const std::vector<OpKey>& args) const {
  const int k = static_cast<int>(args.size());
  if (dim(k, deg0) == 0 || idx0 != 0) throw std::out_of_range("I: bad element");
  int n = 0, d = deg0;
  for (const auto& a : args) {
    if (dim(a.arity, a.deg) == 0 || a.idx != 0) throw std::out_of_range("I: bad argument");
    n += a.arity;
    d += a.deg;
  }
  if (dim(n, d) == 0) return {};
  return {{0, 1}};
}

long long UnitOperad::augment(int arity, int deg, int idx) const {
  if (dim(arity, deg) == 0 || idx != 0) throw std::out_of_range("I: bad element");
  return 1;
}

int UnitOperad::section_index(int arity) const {
  if (arity > 1) throw std::out_of_range("I: no section above arity 1");
  return 0;
}

// ---------------------------------------------------------------- BarOperad

BarOperad::BarOperad(int arity_cap, int depth_cap) : acap_(arity_cap), dcap_(depth_cap) {
  if (arity_cap < 1 || depth_cap < 0) throw std::invalid_argument("BarOperad: bad caps");
  perms_.resize(acap_ + 1);
  mul_.resize(acap_ + 1);
  inv_.resize(acap_ + 1);
  for (int n = 0; n <= acap_; ++n) {
    Perm p = perm_id(n);
    do {
      perms_[n].push_back(p);
    } while (std::next_permutation(p.begin(), p.end()));
    const int g = static_cast<int>(perms_[n].size());
    mul_[n].assign(g, std::vector<int>(g, 0));
    inv_[n].assign(g, 0);
    for (int a = 0; a < g; ++a) {
      inv_[n][a] = static_cast<int>(perm_rank(perm_inv(perms_[n][a])));
      for (int b = 0; b < g; ++b)
        mul_[n][a][b] = static_cast<int>(perm_rank(perm_mul(perms_[n][a], perms_[n][b])));
    }
  }
}

void BarOperad::require(int arity, int deg) const {
  if (arity < 0 || arity > acap_) throw std::out_of_range("BarOperad: arity cap exceeded");
  if (deg > 0 || -deg > dcap_) throw std::out_of_range("BarOperad: depth cap exceeded");
}

int BarOperad::dim(int arity, int deg) const {
  if (arity < 0 || arity > acap_) throw std::out_of_range("BarOperad: arity cap exceeded");
  if (deg > 0 || -deg > dcap_) return 0;
  const long long g = group_order(arity);
  long long d = g;
  for (int t = 0; t < -deg; ++t) d *= (g - 1);
  return static_cast<int>(d);
}

BarOperad::Word BarOperad::decode(int arity, int deg, int idx) const {
  require(arity, deg);
  const int g = group_order(arity);
  const int k = -deg;
  Word w;
  w.letters.resize(k);
  for (int t = 0; t < k; ++t) {
    w.letters[t] = idx % (g - 1) + 1;
    idx /= (g - 1);
  }
  w.carrier = idx;
  return w;
}

int BarOperad::encode(int arity, const Word& w) const {
  const int g = group_order(arity);
  int idx = w.carrier;
  for (int t = static_cast<int>(w.letters.size()) - 1; t >= 0; --t)
    idx = idx * (g - 1) + (w.letters[t] - 1);
  return idx;
}

std::vector<OpTerm> BarOperad::diff(int arity, int deg, int idx) const {
  const Word w = decode(arity, deg, idx);
  const int k = static_cast<int>(w.letters.size());
  if (k == 0) return {};
  std::map<int, long long> acc;
  // face 0 drops the leading letter
  {
    Word r;
    r.letters.assign(w.letters.begin() + 1, w.letters.end());
    r.carrier = w.carrier;
    acc[encode(arity, r)] += 1;
  }
  // inner faces merge adjacent letters; identity products vanish (normalized)
  for (int i = 1; i <= k - 1; ++i) {
    const int m = mul_[arity][w.letters[i - 1]][w.letters[i]];
    if (m == 0) continue;
    Word r;
    r.letters.reserve(k - 1);
    for (int t = 0; t < i - 1; ++t) r.letters.push_back(w.letters[t]);
    r.letters.push_back(m);
    for (int t = i + 1; t < k; ++t) r.letters.push_back(w.letters[t]);
    r.carrier = w.carrier;
    acc[encode(arity, r)] += (i % 2) ? -1 : 1;
  }
  // last face folds the trailing letter into the carrier
  {
    Word r;
    r.letters.assign(w.letters.begin(), w.letters.end() - 1);
    r.carrier = mul_[arity][w.letters[k - 1]][w.carrier];
    acc[encode(arity, r)] += (k % 2) ? -1 : 1;
  }
  std::vector<OpTerm> out;
  for (const auto& [i, c] : acc)
    if (c) out.push_back({i, c});
  return out;
}

std::vector<OpTerm> BarOperad::act(int arity, int deg, int idx, const Perm& s) const {
  Word w = decode(arity, deg, idx);
  const int sr = static_cast<int>(perm_rank(s));
  w.carrier = mul_[arity][w.carrier][sr];
  return {{encode(arity, w), 1}};
}

long long BarOperad::augment(int arity, int deg, int idx) const {
  if (idx < 0 || idx >= dim(arity, deg)) throw std::out_of_range("BarOperad: bad element");
  return deg == 0 ? 1 : 0;
}

std::string BarOperad::label(int arity, int deg, int idx) const {
  const Word w = decode(arity, deg, idx);
  std::string s = "[";
  for (size_t t = 0; t < w.letters.size(); ++t) {
    if (t) s += "|";
    s += perm_str(perms_[arity][w.letters[t]]);
  }
  s += "].";
  s += perm_str(perms_[arity][w.carrier]);
  return name() + "(" + std::to_string(arity) + ")" + s;
}

// gamma: shuffle product of bar words evaluated levelwise through the
// permutation operad in homogeneous coordinates
std::vector<OpTerm> BarOperad::compose(int deg0, int idx0, const std::vector<OpKey>& args) const {
  const int k = static_cast<int>(args.size());
  require(k, deg0);
  if (idx0 < 0 || idx0 >= dim(k, deg0)) throw std::out_of_range("BarOperad: bad element");
  int n = 0, D = -deg0;
  for (const auto& a : args) {
    require(a.arity, a.deg);
    if (a.idx < 0 || a.idx >= dim(a.arity, a.deg))
      throw std::out_of_range("BarOperad: bad argument");
    n += a.arity;
    D += -a.deg;
  }
  if (n > acap_) throw std::out_of_range("BarOperad: compose exceeds arity cap");
  if (D > dcap_) throw std::out_of_range("BarOperad: compose exceeds depth cap");

  // homogeneous coordinates per factor: X[j-1] = letter_j * X[j], X[last] = carrier
  const int F = k + 1;
  std::vector<std::vector<Perm>> homog(F);
  std::vector<int> len(F);
  auto build = [&](int f, int arity, int deg, int idx) {
    const Word w = decode(arity, deg, idx);
    const int d = static_cast<int>(w.letters.size());
    std::vector<Perm> X(d + 1);
    X[d] = perms_[arity][w.carrier];
    for (int j = d; j >= 1; --j) X[j - 1] = perm_mul(perms_[arity][w.letters[j - 1]], X[j]);
    homog[f] = std::move(X);
    len[f] = d;
  };
  build(0, k, deg0, idx0);
  for (int i = 0; i < k; ++i) build(i + 1, args[i].arity, args[i].deg, args[i].idx);

  std::map<int, long long> acc;
  std::vector<int> A(D), placed(F, 0);
  // enumerate interleavings of the F letter sequences with shuffle signs
  auto emit = [&](int sign) {
    std::vector<int> c(F, 0);
    std::vector<Perm> Z(D + 1);
    std::vector<Perm> parts(k);
    for (int j = 0; j <= D; ++j) {
      if (j > 0) c[A[j - 1]] += 1;
      for (int i = 0; i < k; ++i) parts[i] = homog[i + 1][c[i + 1]];
      Z[j] = perm_comp(homog[0][c[0]], parts);
    }
    Word w;
    w.letters.resize(D);
    for (int t = 1; t <= D; ++t) {
      const int r = static_cast<int>(perm_rank(perm_mul(Z[t - 1], perm_inv(Z[t]))));
      if (r == 0) return;  // degenerate simplex, dies in normalized chains
      w.letters[t - 1] = r;
    }
    w.carrier = static_cast<int>(perm_rank(Z[D]));
    acc[encode(n, w)] += sign;
  };
  std::function<void(int, int)> rec = [&](int t, int sign) {
    if (t == D) {
      emit(sign);
      return;
    }
    for (int f = 0; f < F; ++f) {
      if (placed[f] >= len[f]) continue;
      int inv = 0;
      for (int g = f + 1; g < F; ++g) inv += placed[g];
      A[t] = f;
      placed[f] += 1;
      rec(t + 1, (inv % 2) ? -sign : sign);
      placed[f] -= 1;
    }
  };
  rec(0, 1);

  std::vector<OpTerm> out;
  for (const auto& [i, c] : acc)
    if (c) out.push_back({i, c});
  return out;
}

// --------------------------------------------------------- operad_axiom_check

namespace {

using Vec = std::map<int, long long>;

struct BudgetExhausted {};

struct Ctx {
  const Operad* O;
  long long budget;
  void tick() {
    if (--budget < 0) throw BudgetExhausted{};
  }
};

void add_terms(Vec& v, const std::vector<OpTerm>& ts, long long scale) {
  for (const auto& t : ts) {
    v[t.idx] += t.c * scale;
    if (v[t.idx] == 0) v.erase(t.idx);
  }
}

Vec compose_v(Ctx& c, int deg0, int idx0, const std::vector<OpKey>& args, long long scale = 1) {
  c.tick();
  Vec v;
  add_terms(v, c.O->compose(deg0, idx0, args), scale);
  return v;
}

Vec diff_v(Ctx& c, int arity, int deg, const Vec& v) {
  Vec r;
  for (const auto& [i, co] : v) add_terms(r, c.O->diff(arity, deg, i), co);
  return r;
}

Vec act_v(Ctx& c, int arity, int deg, const Vec& v, const Perm& s) {
  Vec r;
  for (const auto& [i, co] : v) add_terms(r, c.O->act(arity, deg, i, s), co);
  return r;
}

void add_vec(Vec& a, const Vec& b, long long scale) {
  for (const auto& [i, co] : b) {
    a[i] += co * scale;
    if (a[i] == 0) a.erase(i);
  }
}

std::string vec_str(const Operad& O, int arity, int deg, const Vec& v) {
  if (v.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [i, c] : v) {
    if (!first) os << " + ";
    os << c << "*" << O.label(arity, deg, i);
    first = false;
  }
  return os.str();
}

// deterministic sample of basis indices
std::vector<int> pick(int dim, int cap) {
  std::vector<int> r;
  if (dim <= 0) return r;
  if (dim <= cap) {
    for (int i = 0; i < dim; ++i) r.push_back(i);
    return r;
  }
  const int stride = dim / cap;
  for (int i = 0; i < dim; i += stride) r.push_back(i);
  if (r.back() != dim - 1) r.push_back(dim - 1);
  return r;
}

std::vector<Perm> pick_perms(int n, int cap) {
  std::vector<Perm> all;
  Perm p = perm_id(n);
  do {
    all.push_back(p);
  } while (std::next_permutation(p.begin(), p.end()));
  if (static_cast<int>(all.size()) <= cap) return all;
  std::vector<Perm> r;
  const int stride = static_cast<int>(all.size()) / cap;
  for (size_t i = 0; i < all.size(); i += stride) r.push_back(all[i]);
  return r;
}

// all ways to write total as an ordered sum of k nonnegative parts
void compositions(int total, int k, std::vector<int>& cur, std::vector<std::vector<int>>& out) {
  if (k == 1) {
    cur.push_back(total);
    out.push_back(cur);
    cur.pop_back();
    return;
  }
  for (int h = 0; h <= total; ++h) {
    cur.push_back(h);
    compositions(total - h, k - 1, cur, out);
    cur.pop_back();
  }
}

std::vector<std::vector<int>> arity_splits(int k, int max_total) {
  if (k == 0) return {{}};
  std::vector<std::vector<int>> out;
  std::vector<int> cur;
  for (int tot = 0; tot <= max_total; ++tot) compositions(tot, k, cur, out);
  return out;
}

// Koszul sign of reordering graded factors (b_0..b_{k-1}) into
// (b_{s(0)}..b_{s(k-1)})
int koszul_reorder_sign(const Perm& s, const std::vector<int>& degs) {
  int sign = 1;
  for (size_t t = 0; t < s.size(); ++t)
    for (size_t u = t + 1; u < s.size(); ++u)
      if (s[t] > s[u] && (degs[s[t]] % 2) && (degs[s[u]] % 2)) sign = -sign;
  return sign;
}

}  // namespace

AxiomReport operad_axiom_check(const Operad& O, int max_arity, int max_depth, long long budget) {
  Ctx C{&O, budget};
  AxiomReport rep;
  auto fail = [&](const std::string& m) {
    rep.ok = false;
    rep.message = m;
  };
  const int sample_idx = 5;
  const int sample_perm = 8;

  try {
    // 0. right action group law, d/act commute, augmentation is a chain map
    for (int n = 0; n <= max_arity && rep.ok; ++n) {
      for (int dg = 0; dg >= -max_depth && rep.ok; --dg) {
        const int dm = O.dim(n, dg);
        const auto idxs = pick(dm, sample_idx);
        const auto ss = pick_perms(n, sample_perm);
        for (int i : idxs) {
          Vec e{{i, 1}};
          for (const auto& s : ss) {
            for (const auto& t : ss) {
              C.tick();
              Vec lhs = act_v(C, n, dg, act_v(C, n, dg, e, s), t);
              Vec rhs = act_v(C, n, dg, e, perm_mul(s, t));
              if (lhs != rhs) {
                fail("action group law fails at " + O.label(n, dg, i) + " with s=" +
                     perm_str(s) + " t=" + perm_str(t));
                break;
              }
            }
            if (!rep.ok) break;
            C.tick();
            Vec lhs = diff_v(C, n, dg, act_v(C, n, dg, e, s));
            Vec rhs = act_v(C, n, dg + 1, diff_v(C, n, dg, e), s);
            if (lhs != rhs) {
              fail("action does not commute with d at " + O.label(n, dg, i));
              break;
            }
          }
          if (!rep.ok) break;
          if (dg == -1) {
            long long a = 0;
            for (const auto& t : O.diff(n, dg, i)) a += t.c * O.augment(n, dg + 1, t.idx);
            if (a != 0) {
              fail("augmentation not a chain map at " + O.label(n, dg, i));
              break;
            }
          }
          // d^2 = 0
          Vec dd = diff_v(C, n, dg + 1, diff_v(C, n, dg, e));
          if (!dd.empty()) {
            fail("d^2 != 0 at " + O.label(n, dg, i));
            break;
          }
        }
      }
    }

    const int u1 = O.section_index(1);

    // 1. unit laws
    for (int n = 0; n <= max_arity && rep.ok; ++n) {
      for (int dg = 0; dg >= -max_depth && rep.ok; --dg) {
        for (int i : pick(O.dim(n, dg), sample_idx)) {
          Vec e{{i, 1}};
          Vec left = compose_v(C, 0, u1, {{n, dg, i}});
          if (left != e) {
            fail("left unit law fails at " + O.label(n, dg, i) + ": got " +
                 vec_str(O, n, dg, left));
            break;
          }
          std::vector<OpKey> units(n, OpKey{1, 0, u1});
          Vec right = compose_v(C, dg, i, units);
          if (right != e) {
            fail("right unit law fails at " + O.label(n, dg, i) + ": got " +
                 vec_str(O, n, dg, right));
            break;
          }
        }
      }
    }

    // shapes (k; n_1..n_k) with sum <= max_arity
    std::vector<std::pair<int, std::vector<int>>> shapes;
    for (int k = 0; k <= max_arity; ++k)
      for (const auto& sp : arity_splits(k, max_arity)) shapes.push_back({k, sp});

    // degree tuples for a shape: entries <= 0, total depth <= cap
    auto degree_tuples = [&](int k, int cap) {
      std::vector<std::vector<int>> neg;
      std::vector<int> cur;
      compositions(cap, k + 1, cur, neg);
      std::set<std::vector<int>> uniq;
      for (auto& v : neg) {
        for (auto& x : v) x = -x;
        uniq.insert(v);
      }
      // include shallower tuples as well
      std::vector<std::vector<int>> out(uniq.begin(), uniq.end());
      for (int c = 0; c < cap; ++c) {
        std::vector<std::vector<int>> more;
        std::vector<int> cur2;
        compositions(c, k + 1, cur2, more);
        for (auto& v : more) {
          for (auto& x : v) x = -x;
          if (uniq.insert(v).second) out.push_back(v);
        }
      }
      return out;
    };

    // 2. gamma is a chain map
    for (const auto& [k, sp] : shapes) {
      if (!rep.ok) break;
      for (const auto& dgs : degree_tuples(k, std::max(0, max_depth - 1))) {
        if (!rep.ok) break;
        if (O.dim(k, dgs[0]) == 0) continue;
        bool live = true;
        for (int i = 0; i < k; ++i)
          if (O.dim(sp[i], dgs[i + 1]) == 0) live = false;
        if (!live) continue;
        int nres = 0, dres = dgs[0];
        for (int i = 0; i < k; ++i) {
          nres += sp[i];
          dres += dgs[i + 1];
        }
        for (int i0 : pick(O.dim(k, dgs[0]), 3)) {
          if (!rep.ok) break;
          std::vector<std::vector<int>> argidx;
          for (int i = 0; i < k; ++i) argidx.push_back(pick(O.dim(sp[i], dgs[i + 1]), 3));
          std::vector<int> sel(k, 0);
          std::function<void(int)> go = [&](int slot) {
            if (!rep.ok) return;
            if (slot == k) {
              std::vector<OpKey> args(k);
              for (int i = 0; i < k; ++i) args[i] = {sp[i], dgs[i + 1], argidx[i][sel[i]]};
              Vec g = compose_v(C, dgs[0], i0, args);
              Vec lhs = diff_v(C, nres, dres, g);
              Vec rhs;
              for (const auto& t : O.diff(k, dgs[0], i0))
                add_vec(rhs, compose_v(C, dgs[0] + 1, t.idx, args), t.c);
              int par = dgs[0];
              for (int i = 0; i < k; ++i) {
                const int sgn = (par % 2) ? -1 : 1;
                for (const auto& t : O.diff(args[i].arity, args[i].deg, args[i].idx)) {
                  auto args2 = args;
                  args2[i].deg += 1;
                  args2[i].idx = t.idx;
                  add_vec(rhs, compose_v(C, dgs[0], i0, args2), sgn * t.c);
                }
                par += args[i].deg;
              }
              if (lhs != rhs)
                fail("gamma chain map fails at " + O.label(k, dgs[0], i0) +
                     "; lhs=" + vec_str(O, nres, dres + 1, lhs) +
                     " rhs=" + vec_str(O, nres, dres + 1, rhs));
              return;
            }
            for (size_t c = 0; c < argidx[slot].size(); ++c) {
              sel[slot] = static_cast<int>(c);
              go(slot + 1);
              if (!rep.ok) return;
            }
          };
          go(0);
        }
      }
    }

    // 3. associativity with Koszul signs
    for (const auto& [k, sp] : shapes) {
      if (!rep.ok) break;
      if (k == 0) continue;
      int M = 0;
      for (int x : sp) M += x;
      for (const auto& lsp : arity_splits(M, max_arity)) {
        if (!rep.ok) break;
        if (M == 0 && !lsp.empty()) continue;
        for (const auto& dgs : degree_tuples(k + M, max_depth)) {
          if (!rep.ok) break;
          // degrees: a, b_1..b_k, c_1..c_M
          if (O.dim(k, dgs[0]) == 0) continue;
          bool live = true;
          for (int i = 0; i < k && live; ++i)
            if (O.dim(sp[i], dgs[1 + i]) == 0) live = false;
          for (int t = 0; t < M && live; ++t)
            if (O.dim(lsp[t], dgs[1 + k + t]) == 0) live = false;
          if (!live) continue;
          const int ia = pick(O.dim(k, dgs[0]), 2).back();
          std::vector<OpKey> bs(k), cs(M);
          for (int i = 0; i < k; ++i) {
            auto s = pick(O.dim(sp[i], dgs[1 + i]), 2);
            bs[i] = {sp[i], dgs[1 + i], s[(i + 1) % s.size()]};
          }
          for (int t = 0; t < M; ++t) {
            auto s = pick(O.dim(lsp[t], dgs[1 + k + t]), 2);
            cs[t] = {lsp[t], dgs[1 + k + t], s[t % s.size()]};
          }
          // LHS: gamma(gamma(a;b);c)
          Vec inner = compose_v(C, dgs[0], ia, bs);
          int db = dgs[0];
          for (int i = 0; i < k; ++i) db += bs[i].deg;
          Vec lhs;
          for (const auto& [ii, cc] : inner) add_vec(lhs, compose_v(C, db, ii, cs), cc);
          // RHS: gamma(a; gamma(b_i; c-block_i)) with the interchange sign
          long long sgn = 1;
          {
            // move c-block i past b_{i+1..k-1}
            std::vector<int> cblockdeg(k, 0), boff(k + 1, 0);
            for (int i = 0; i < k; ++i) boff[i + 1] = boff[i] + sp[i];
            for (int i = 0; i < k; ++i)
              for (int t = boff[i]; t < boff[i + 1]; ++t) cblockdeg[i] += cs[t].deg;
            for (int i = 0; i < k; ++i)
              for (int j = i + 1; j < k; ++j)
                if ((cblockdeg[i] % 2) && (bs[j].deg % 2)) sgn = -sgn;
          }
          std::vector<Vec> inner2(k);
          std::vector<int> in_ar(k), in_dg(k);
          {
            int off = 0;
            for (int i = 0; i < k; ++i) {
              std::vector<OpKey> blk(cs.begin() + off, cs.begin() + off + sp[i]);
              inner2[i] = compose_v(C, bs[i].deg, bs[i].idx, blk);
              in_ar[i] = 0;
              in_dg[i] = bs[i].deg;
              for (const auto& kk : blk) {
                in_ar[i] += kk.arity;
                in_dg[i] += kk.deg;
              }
              off += sp[i];
            }
          }
          Vec rhs;
          std::vector<int> selv(k, 0);
          std::function<void(int, long long, std::vector<OpKey>&)> go2 =
              [&](int slot, long long coeff, std::vector<OpKey>& acc2) {
                if (coeff == 0) return;
                if (slot == k) {
                  add_vec(rhs, compose_v(C, dgs[0], ia, acc2), coeff);
                  return;
                }
                for (const auto& [ii, cc] : inner2[slot]) {
                  acc2[slot] = {in_ar[slot], in_dg[slot], ii};
                  go2(slot + 1, coeff * cc, acc2);
                }
              };
          std::vector<OpKey> acc2(k);
          go2(0, sgn, acc2);
          if (lhs != rhs) {
            int nr = 0, dr = dgs[0];
            for (const auto& kk : bs) dr += kk.deg;
            for (const auto& kk : cs) {
              nr += kk.arity;
              dr += kk.deg;
            }
            fail("associativity fails at a=" + O.label(k, dgs[0], ia) +
                 "; lhs=" + vec_str(O, nr, dr, lhs) + " rhs=" + vec_str(O, nr, dr, rhs));
          }
        }
      }
    }

    // 4. equivariance in the outer slot
    for (const auto& [k, sp] : shapes) {
      if (!rep.ok) break;
      if (k < 2) continue;
      for (const auto& dgs : degree_tuples(k, max_depth)) {
        if (!rep.ok) break;
        if (O.dim(k, dgs[0]) == 0) continue;
        bool live = true;
        for (int i = 0; i < k; ++i)
          if (O.dim(sp[i], dgs[1 + i]) == 0) live = false;
        if (!live) continue;
        std::vector<OpKey> bs(k);
        std::vector<int> bdeg(k);
        for (int i = 0; i < k; ++i) {
          auto s = pick(O.dim(sp[i], dgs[1 + i]), 2);
          bs[i] = {sp[i], dgs[1 + i], s[i % s.size()]};
          bdeg[i] = bs[i].deg;
        }
        for (int ia : pick(O.dim(k, dgs[0]), 2)) {
          if (!rep.ok) break;
          for (const auto& s : pick_perms(k, 6)) {
            C.tick();
            std::vector<OpKey> pb(k);
            for (int i = 0; i < k; ++i) pb[i] = bs[s[i]];
            Vec lhs;
            for (const auto& t : O.act(k, dgs[0], ia, s))
              add_vec(lhs, compose_v(C, dgs[0], t.idx, pb), t.c);
            std::vector<Perm> idparts(k);
            for (int i = 0; i < k; ++i) idparts[i] = perm_id(bs[s[i]].arity);
            const Perm tau = perm_comp(s, idparts);
            int nres = 0, dres = dgs[0];
            for (int i = 0; i < k; ++i) {
              nres += sp[i];
              dres += bs[i].deg;
            }
            Vec rhs = act_v(C, nres, dres, compose_v(C, dgs[0], ia, bs), tau);
            const int ks = koszul_reorder_sign(s, bdeg);
            if (ks < 0)
              for (auto& [ii, cc] : rhs) cc = -cc;
            if (lhs != rhs) {
              fail("outer equivariance fails at a=" + O.label(k, dgs[0], ia) + " s=" +
                   perm_str(s) + "; lhs=" + vec_str(O, nres, dres, lhs) +
                   " rhs=" + vec_str(O, nres, dres, rhs));
              break;
            }
          }
        }
      }
    }

    // 5. equivariance in the inner slots
    for (const auto& [k, sp] : shapes) {
      if (!rep.ok) break;
      if (k == 0) continue;
      for (const auto& dgs : degree_tuples(k, max_depth)) {
        if (!rep.ok) break;
        if (O.dim(k, dgs[0]) == 0) continue;
        bool live = true;
        for (int i = 0; i < k; ++i)
          if (O.dim(sp[i], dgs[1 + i]) == 0) live = false;
        if (!live) continue;
        std::vector<OpKey> bs(k);
        for (int i = 0; i < k; ++i) {
          auto s = pick(O.dim(sp[i], dgs[1 + i]), 2);
          bs[i] = {sp[i], dgs[1 + i], s.front()};
        }
        int nres = 0, dres = dgs[0];
        for (int i = 0; i < k; ++i) {
          nres += sp[i];
          dres += bs[i].deg;
        }
        for (int ia : pick(O.dim(k, dgs[0]), 2)) {
          if (!rep.ok) break;
          for (int slot = 0; slot < k && rep.ok; ++slot) {
            for (const auto& tau : pick_perms(sp[slot], 4)) {
              C.tick();
              std::vector<OpKey> bt = bs;
              Vec lhs;
              for (const auto& t : O.act(sp[slot], bs[slot].deg, bs[slot].idx, tau)) {
                bt[slot].idx = t.idx;
                add_vec(lhs, compose_v(C, dgs[0], ia, bt), t.c);
              }
              std::vector<Perm> parts(k);
              for (int i = 0; i < k; ++i) parts[i] = perm_id(sp[i]);
              parts[slot] = tau;
              const Perm big = perm_comp(perm_id(k), parts);
              Vec rhs = act_v(C, nres, dres, compose_v(C, dgs[0], ia, bs), big);
              if (lhs != rhs) {
                fail("inner equivariance fails at a=" + O.label(k, dgs[0], ia) +
                     " slot=" + std::to_string(slot) + " tau=" + perm_str(tau));
                break;
              }
            }
          }
        }
      }
    }

    // 6. augmentation is multiplicative on degree-0 parts
    for (const auto& [k, sp] : shapes) {
      if (!rep.ok) break;
      if (O.dim(k, 0) == 0) continue;
      bool live = true;
      for (int i = 0; i < k; ++i)
        if (O.dim(sp[i], 0) == 0) live = false;
      if (!live) continue;
      std::vector<OpKey> bs(k);
      long long prod = 1;
      for (int i = 0; i < k; ++i) {
        auto s = pick(O.dim(sp[i], 0), 2);
        bs[i] = {sp[i], 0, s[i % s.size()]};
        prod *= O.augment(sp[i], 0, bs[i].idx);
      }
      int nres = 0;
      for (int x : sp) nres += x;
      for (int ia : pick(O.dim(k, 0), 3)) {
        Vec g = compose_v(C, 0, ia, bs);
        long long got = 0;
        for (const auto& [ii, cc] : g) got += cc * O.augment(nres, 0, ii);
        if (got != O.augment(k, 0, ia) * prod) {
          fail("augmentation not multiplicative at " + O.label(k, 0, ia));
          break;
        }
      }
    }
  } catch (const BudgetExhausted&) {
    rep.ok = false;
    rep.message = "axiom check budget exhausted; raise the budget or shrink the caps";
  }

  if (rep.ok) rep.message = "all sampled operad axioms hold";
  return rep;
}

// ---------------------------------------------------- FreeAlgebraTruncation

namespace {

// reorder word by q: new[t] = word[q[t]]; Koszul sign over inverted odd pairs
template <typename T>
std::pair<std::vector<T>, int> reorder_with_sign(const std::vector<T>& word, const Perm& q,
                                                 const std::vector<int>& degs) {
  std::vector<T> nw(word.size());
  int sign = 1;
  for (size_t t = 0; t < word.size(); ++t) nw[t] = word[q[t]];
  for (size_t t = 0; t < q.size(); ++t)
    for (size_t u = t + 1; u < q.size(); ++u)
      if (q[t] > q[u] && (degs[q[t]] % 2) && (degs[q[u]] % 2)) sign = -sign;
  return {nw, sign};
}

}  // namespace

FreeAlgebraTruncation::FreeAlgebraTruncation(
    const Operad& O, std::vector<int> gen_degrees,
    std::vector<std::vector<std::pair<int, long long>>> gen_diff, int weight_cap, int deg_min,
    int deg_max, int field_char)
    : O_(O),
      gdeg_(std::move(gen_degrees)),
      gdiff_(std::move(gen_diff)),
      wcap_(weight_cap),
      dmin_(deg_min),
      dmax_(deg_max),
      char_(field_char) {
  if (gdiff_.empty()) gdiff_.resize(gdeg_.size());
  if (gdiff_.size() != gdeg_.size())
    throw std::invalid_argument("free algebra: generator differential size mismatch");
  if (wcap_ > O_.arity_cap())
    throw std::invalid_argument("free algebra: weight cap exceeds operad arity cap");
  const int G = static_cast<int>(gdeg_.size());
  for (int p = 0; p <= wcap_; ++p) {
    if (p > 0 && G == 0) continue;  // no words over an empty alphabet
    std::vector<int> word(p, 0);
    bool done = false;
    while (!done) {
      for (int odeg = -O_.depth_cap(); odeg <= 0; ++odeg) {
        const int dm = O_.dim(p, odeg);
        for (int oidx = 0; oidx < dm; ++oidx) {
          const int deg = mono_degree(odeg, word);
          if (deg < dmin_ || deg > dmax_) continue;
          int ci = oidx;
          std::vector<int> cw = word;
          long long sign = 1;
          canonicalize(p, odeg, ci, cw, sign);
          if (sign == 0) continue;
          if (ci != oidx || cw != word) continue;  // not the canonical rep
          FreeAlgebraMono m{p, odeg, oidx, word, deg};
          index_[deg][{{odeg, oidx}, word}] = static_cast<int>(basis_[deg].size());
          basis_[deg].push_back(std::move(m));
        }
      }
      // next word in lexicographic order
      done = true;
      for (int t = p - 1; t >= 0; --t) {
        if (word[t] + 1 < G) {
          word[t] += 1;
          for (int u = t + 1; u < p; ++u) word[u] = 0;
          done = false;
          break;
        }
      }
      if (p == 0) done = true;
    }
  }
}

int FreeAlgebraTruncation::mono_degree(int odeg, const std::vector<int>& word) const {
  int d = odeg;
  for (int g : word) d += gdeg_[g];
  return d;
}

void FreeAlgebraTruncation::canonicalize(int p, int odeg, int& oidx, std::vector<int>& word,
                                         long long& sign) const {
  if (sign == 0 || p <= 1) return;
  std::vector<int> degs(p);
  for (int t = 0; t < p; ++t) degs[t] = gdeg_[word[t]];
  Perm q = perm_id(p);
  bool have_best = false, killed = false;
  int best_idx = 0;
  std::vector<int> best_word;
  long long best_sign = 1;
  std::map<std::pair<int, std::vector<int>>, long long> seen;
  do {
    auto terms = O_.act(p, odeg, oidx, q);
    if (terms.size() != 1 || (terms[0].c != 1 && terms[0].c != -1))
      throw std::runtime_error("free algebra requires a monomial symmetric action");
    auto [nw, ks] = reorder_with_sign(word, q, degs);
    const long long s = terms[0].c * ks;
    auto key = std::make_pair(terms[0].idx, nw);
    auto it = seen.find(key);
    if (it == seen.end())
      seen.emplace(key, s);
    else if (it->second != s && char_ != 2)
      killed = true;  // orbit is sign-trivialized: 2-torsion, zero over this field
    if (!have_best || key < std::make_pair(best_idx, best_word)) {
      have_best = true;
      best_idx = key.first;
      best_word = key.second;
      best_sign = s;
    }
  } while (std::next_permutation(q.begin(), q.end()));
  if (killed) {
    sign = 0;
    return;
  }
  oidx = best_idx;
  word = best_word;
  sign *= best_sign;
}

int FreeAlgebraTruncation::dim(int deg) const {
  auto it = basis_.find(deg);
  return it == basis_.end() ? 0 : static_cast<int>(it->second.size());
}

const FreeAlgebraMono& FreeAlgebraTruncation::basis(int deg, int i) const {
  return basis_.at(deg).at(i);
}

std::string FreeAlgebraTruncation::label(int deg, int i) const {
  const auto& m = basis(deg, i);
  std::ostringstream os;
  os << O_.label(m.weight, m.odeg, m.oidx) << "<";
  for (size_t t = 0; t < m.word.size(); ++t) {
    if (t) os << ",";
    os << "g" << m.word[t];
  }
  os << ">";
  return os.str();
}

FreeAlgebraTruncation::Reduced FreeAlgebraTruncation::reduce(int p, int odeg, int oidx,
                                                             const std::vector<int>& word,
                                                             long long coeff) const {
  Reduced r;
  r.deg = mono_degree(odeg, word);
  if (p > wcap_ || r.deg < dmin_ || r.deg > dmax_) {
    r.in_window = false;
    return r;
  }
  if (coeff == 0) return r;
  int ci = oidx;
  std::vector<int> cw = word;
  long long sign = 1;
  canonicalize(p, odeg, ci, cw, sign);
  if (sign == 0) return r;
  auto dit = index_.find(r.deg);
  if (dit == index_.end()) throw std::logic_error("free algebra: missing degree");
  auto it = dit->second.find({{odeg, ci}, cw});
  if (it == dit->second.end()) throw std::logic_error("free algebra: missing canonical rep");
  r.terms.push_back({it->second, coeff * sign});
  return r;
}

FreeAlgebraTruncation::Reduced FreeAlgebraTruncation::differential(int deg, int i) const {
  const auto& m = basis(deg, i);
  Reduced out;
  out.deg = deg + 1;
  std::map<int, long long> acc;
  bool window = true;
  auto fold = [&](const Reduced& r) {
    if (!r.in_window) window = false;
    for (const auto& [ix, c] : r.terms) acc[ix] += c;
  };
  for (const auto& t : O_.diff(m.weight, m.odeg, m.oidx))
    fold(reduce(m.weight, m.odeg + 1, t.idx, m.word, t.c));
  int par = m.odeg;
  for (int j = 0; j < m.weight; ++j) {
    const int g = m.word[j];
    const long long sgn = (par % 2) ? -1 : 1;
    for (const auto& [g2, c] : gdiff_[g]) {
      std::vector<int> w2 = m.word;
      w2[j] = g2;
      fold(reduce(m.weight, m.odeg, m.oidx, w2, sgn * c));
    }
    par += gdeg_[g];
  }
  out.in_window = window;
  for (const auto& [ix, c] : acc) {
    const long long cc = char_ ? ((c % char_) + char_) % char_ : c;
    if (cc) out.terms.push_back({ix, cc});
  }
  return out;
}

FreeAlgebraTruncation::Reduced FreeAlgebraTruncation::theta(
    int deg0, int oidx0, const std::vector<std::pair<int, int>>& factors) const {
  const int k = static_cast<int>(factors.size());
  std::vector<const FreeAlgebraMono*> ms(k);
  for (int i = 0; i < k; ++i) ms[i] = &basis(factors[i].first, factors[i].second);
  std::vector<OpKey> args(k);
  int p = 0;
  for (int i = 0; i < k; ++i) {
    args[i] = {ms[i]->weight, ms[i]->odeg, ms[i]->oidx};
    p += ms[i]->weight;
  }
  // Koszul interchange: move each operad part left past earlier letter words
  long long sign = 1;
  {
    int wsum = 0;
    for (int i = 0; i < k; ++i) {
      int wdeg = 0;
      for (int g : ms[i]->word) wdeg += gdeg_[g];
      if ((ms[i]->odeg % 2) && (wsum % 2)) sign = -sign;
      wsum += wdeg;
    }
  }
  std::vector<int> word;
  for (int i = 0; i < k; ++i) word.insert(word.end(), ms[i]->word.begin(), ms[i]->word.end());
  int odeg = deg0;
  for (int i = 0; i < k; ++i) odeg += ms[i]->odeg;
  Reduced out;
  out.deg = mono_degree(odeg, word);
  std::map<int, long long> acc;
  bool window = true;
  for (const auto& t : O_.compose(deg0, oidx0, args)) {
    auto r = reduce(p, odeg, t.idx, word, sign * t.c);
    if (!r.in_window) window = false;
    for (const auto& [ix, c] : r.terms) acc[ix] += c;
  }
  out.in_window = window;
  for (const auto& [ix, c] : acc) {
    long long cc = char_ ? ((c % char_) + char_) % char_ : c;
    if (cc) out.terms.push_back({ix, cc});
  }
  return out;
}

}  // namespace opforms
