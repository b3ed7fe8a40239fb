#pragma once

#include <algorithm>
#include <cassert>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace opforms {

// ---------------------------------------------------------------------------
// Free graded-commutative algebra on finitely many generators: polynomial on
// even-degree generators, exterior on odd-degree ones (strict squares-zero
// convention, the right notion over Q; documented caveat for char 2 where
// "odd" loses meaning).  A monomial is an exponent vector in generator order;
// its canonical form is the ascending product, and products carry the Koszul
// sign of interleaving odd generators.
// ---------------------------------------------------------------------------

struct GcMono {
  std::vector<int> e;

  friend bool operator==(const GcMono& a, const GcMono& b) { return a.e == b.e; }
  friend bool operator!=(const GcMono& a, const GcMono& b) { return !(a == b); }
  friend bool operator<(const GcMono& a, const GcMono& b) { return a.e < b.e; }
};

template <typename K>
class FreeCDGA {
 public:
  using Elt = std::map<GcMono, K>;

  FreeCDGA(std::vector<int> degrees, std::vector<std::string> names)
      : gdeg_(std::move(degrees)), gname_(std::move(names)) {
    if (gname_.empty())
      for (std::size_t g = 0; g < gdeg_.size(); ++g)
        gname_.push_back("g" + std::to_string(g));
    if (gname_.size() != gdeg_.size())
      throw std::invalid_argument("generator name/degree count mismatch");
    gdiff_.assign(gdeg_.size(), Elt{});
  }

  int gens() const { return static_cast<int>(gdeg_.size()); }
  int gen_degree(int g) const { return gdeg_[g]; }
  const std::string& gen_name(int g) const { return gname_[g]; }
  bool odd(int g) const { return gdeg_[g] % 2 != 0; }

  void set_diff(int g, Elt dg) {
    if (!is_zero(dg) && degree(dg) != gdeg_[g] + 1)
      throw std::invalid_argument("differential of " + gname_[g] +
                                  " is not homogeneous of degree " +
                                  std::to_string(gdeg_[g] + 1));
    gdiff_[g] = std::move(dg);
  }
  const Elt& gen_diff(int g) const { return gdiff_[g]; }

  GcMono unit_mono() const { return GcMono{std::vector<int>(gdeg_.size(), 0)}; }
  Elt zero() const { return {}; }
  Elt one() const { return scalar(K::one()); }
  Elt scalar(const K& c) const {
    Elt r;
    if (!c.is_zero()) r[unit_mono()] = c;
    return r;
  }
  Elt gen(int g) const {
    GcMono m = unit_mono();
    m.e[g] = 1;
    Elt r;
    r[m] = K::one();
    return r;
  }

  static bool is_zero(const Elt& a) { return a.empty(); }
  static bool eq(const Elt& a, const Elt& b) { return a == b; }

  static void axpy(Elt& a, const K& c, const Elt& b) {
    if (c.is_zero()) return;
    for (const auto& [m, v] : b) {
      auto it = a.find(m);
      if (it == a.end()) {
        a.emplace(m, c * v);
      } else {
        it->second += c * v;
        if (it->second.is_zero()) a.erase(it);
      }
    }
  }
  static void add_in(Elt& a, const Elt& b) { axpy(a, K::one(), b); }
  static Elt neg(const Elt& a) {
    Elt r;
    for (const auto& [m, v] : a) r[m] = -v;
    return r;
  }
  static Elt sub(Elt a, const Elt& b) {
    axpy(a, -K::one(), b);
    return a;
  }
  static Elt scale(const K& c, const Elt& a) {
    Elt r;
    axpy(r, c, a);
    return r;
  }

  int mono_degree(const GcMono& m) const {
    int d = 0;
    for (int g = 0; g < gens(); ++g) d += m.e[g] * gdeg_[g];
    return d;
  }
  int mono_weight(const GcMono& m) const {
    int w = 0;
    for (int g = 0; g < gens(); ++g) w += m.e[g];
    return w;
  }

  // degree of a homogeneous element; -1 for zero
  int degree(const Elt& a) const {
    if (a.empty()) return -1;
    int d = mono_degree(a.begin()->first);
    for (const auto& [m, v] : a)
      if (mono_degree(m) != d)
        throw std::invalid_argument("inhomogeneous element");
    return d;
  }
  int weight(const Elt& a) const {
    int w = 0;
    for (const auto& [m, v] : a) w = std::max(w, mono_weight(m));
    return w;
  }

  // product of monomials; false when an odd generator squares to zero.
  // sign = (-1)^{number of odd-generator transpositions in the merge}
  bool mono_mul(const GcMono& a, const GcMono& b, GcMono& out, int& sign) const {
    out.e.assign(gens(), 0);
    int crossings = 0;
    int odd_above = 0;  // odd generators of a with index > current g
    for (int g = 0; g < gens(); ++g)
      if (odd(g)) odd_above += a.e[g];
    for (int g = 0; g < gens(); ++g) {
      if (odd(g)) {
        odd_above -= a.e[g];
        if (a.e[g] + b.e[g] > 1) return false;
        if (b.e[g] == 1) crossings += odd_above;
      }
      out.e[g] = a.e[g] + b.e[g];
    }
    sign = (crossings % 2 == 0) ? 1 : -1;
    return true;
  }

  Elt mul(const Elt& a, const Elt& b) const {
    Elt r;
    GcMono m;
    int sign;
    for (const auto& [ma, va] : a)
      for (const auto& [mb, vb] : b) {
        if (!mono_mul(ma, mb, m, sign)) continue;
        K c = va * vb;
        if (sign < 0) c = -c;
        auto it = r.find(m);
        if (it == r.end()) {
          if (!c.is_zero()) r.emplace(m, c);
        } else {
          it->second += c;
          if (it->second.is_zero()) r.erase(it);
        }
      }
    return r;
  }

  Elt pow(const Elt& a, int k) const {
    Elt r = one();
    for (int i = 0; i < k; ++i) r = mul(r, a);
    return r;
  }

  // Leibniz differential from the generator images: for m = prod g^{e_g}
  // ascending, d(m) = sum_g (-1)^{deg prefix} prefix * d(g^{e_g}) * suffix.
  Elt d(const Elt& a) const {
    Elt r;
    for (const auto& [m, v] : a) {
      int prefix_par = 0;
      for (int g = 0; g < gens(); ++g) {
        if (m.e[g] > 0 && !is_zero(gdiff_[g])) {
          GcMono pre = unit_mono(), suf = unit_mono();
          for (int h = 0; h < g; ++h) pre.e[h] = m.e[h];
          for (int h = g + 1; h < gens(); ++h) suf.e[h] = m.e[h];
          Elt block;  // d(g^e) = e g^{e-1} dg (even g), dg (odd g)
          if (odd(g)) {
            block = gdiff_[g];
          } else {
            GcMono gm = unit_mono();
            gm.e[g] = m.e[g] - 1;
            Elt gp;
            gp[gm] = K::from_int(m.e[g]);
            block = mul(gp, gdiff_[g]);
          }
          Elt pre_e, suf_e;
          pre_e[pre] = K::one();
          suf_e[suf] = K::one();
          Elt term = mul(mul(pre_e, block), suf_e);
          K c = v;
          if (prefix_par % 2 != 0) c = -c;
          axpy(r, c, term);
        }
        prefix_par += m.e[g] * gdeg_[g];
      }
    }
    return r;
  }

  // algebra map determined by generator images in `target`; the canonical
  // ascending product makes this well defined on monomials
  typename FreeCDGA<K>::Elt substitute(const Elt& a, const FreeCDGA<K>& target,
                                       const std::vector<Elt>& images) const {
    assert(static_cast<int>(images.size()) == gens());
    Elt r;
    for (const auto& [m, v] : a) {
      Elt term = target.one();
      for (int g = 0; g < gens(); ++g)
        for (int i = 0; i < m.e[g]; ++i) term = target.mul(term, images[g]);
      axpy(r, v, term);
    }
    return r;
  }

  // monomials of the given degree with weight (total exponent) <= wcap,
  // in lexicographic exponent order
  std::vector<GcMono> basis(int deg, int wcap) const {
    std::vector<GcMono> out;
    GcMono m = unit_mono();
    basis_rec(0, deg, wcap, m, out);
    std::sort(out.begin(), out.end());
    return out;
  }

  std::string show_mono(const GcMono& m) const {
    std::string s;
    for (int g = 0; g < gens(); ++g) {
      if (m.e[g] == 0) continue;
      if (!s.empty()) s += " ";
      s += gname_[g];
      if (m.e[g] > 1) s += "^" + std::to_string(m.e[g]);
    }
    return s.empty() ? "1" : s;
  }

  std::string show(const Elt& a) const {
    if (a.empty()) return "0";
    std::string s;
    for (const auto& [m, v] : a) {
      if (!s.empty()) s += " + ";
      s += "(" + v.str() + ") " + show_mono(m);
    }
    return s;
  }

 private:
  std::vector<int> gdeg_;
  std::vector<std::string> gname_;
  std::vector<Elt> gdiff_;

  void basis_rec(int g, int deg_left, int w_left, GcMono& m,
                 std::vector<GcMono>& out) const {
    if (g == gens()) {
      if (deg_left == 0) out.push_back(m);
      return;
    }
    int lo_bound = 0;
    int hi = odd(g) ? 1 : w_left;
    for (int e = lo_bound; e <= hi; ++e) {
      int dd = deg_left - e * gdeg_[g];
      int ww = w_left - e;
      if (ww < 0) break;
      if (gdeg_[g] > 0 && dd < 0) break;
      m.e[g] = e;
      basis_rec(g + 1, dd, ww, m, out);
    }
    m.e[g] = 0;
  }
};

}  // namespace opforms
