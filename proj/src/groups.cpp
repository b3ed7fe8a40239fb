#include "opforms/groups.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace opforms {

FiniteGroup FiniteGroup::cyclic(int m) {
  FiniteGroup g;
  g.n = m;
  g.mul.assign(m, std::vector<int>(m));
  g.inv.assign(m, 0);
  for (int a = 0; a < m; ++a) {
    for (int b = 0; b < m; ++b) g.mul[a][b] = (a + b) % m;
    g.inv[a] = (m - a) % m;
  }
  return g;
}

bool FiniteGroup::abelian() const {
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      if (mul[a][b] != mul[b][a]) return false;
  return true;
}

void FiniteGroup::check() const {
  for (int a = 0; a < n; ++a) {
    if (mul[id][a] != a || mul[a][id] != a)
      throw std::runtime_error("group unit law fails");
    if (mul[a][inv[a]] != id || mul[inv[a]][a] != id)
      throw std::runtime_error("group inverse law fails");
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        if (mul[mul[a][b]][c] != mul[a][mul[b][c]])
          throw std::runtime_error("group associativity fails");
  }
}

std::string SimplicialGroup::el_name(int q, El a) const {
  std::ostringstream os;
  os << "g" << q << "." << a;
  return os.str();
}

WBarGroup::WBarGroup(const SimplicialGroup& g) : g_(&g) {}

El WBarGroup::order(int q) const {
  El n = 1;
  for (int k = 0; k < q; ++k) n *= g_->order(k);
  return n;
}

std::vector<El> WBarGroup::coords(int q, El a) const {
  // little-endian decode (g_0 first), then reverse so the front is g_{q-1}
  std::vector<El> c;
  c.reserve(q);
  for (int k = 0; k < q; ++k) {
    El m = g_->order(k);
    c.push_back(a % m);
    a /= m;
  }
  std::reverse(c.begin(), c.end());
  return c;
}

El WBarGroup::from_coords(const std::vector<El>& c) const {
  const int q = static_cast<int>(c.size());
  El a = 0;
  for (int t = 0; t < q; ++t) a = a * g_->order(q - 1 - t) + c[t];
  return a;
}

El WBarGroup::mul(int q, El a, El b) const {
  auto ca = coords(q, a), cb = coords(q, b);
  for (int t = 0; t < q; ++t) ca[t] = g_->mul(q - 1 - t, ca[t], cb[t]);
  return from_coords(ca);
}

El WBarGroup::inverse(int q, El a) const {
  auto c = coords(q, a);
  for (int t = 0; t < q; ++t) c[t] = g_->inverse(q - 1 - t, c[t]);
  return from_coords(c);
}

El WBarGroup::identity(int q) const {
  std::vector<El> c(q);
  for (int t = 0; t < q; ++t) c[t] = g_->identity(q - 1 - t);
  return from_coords(c);
}

El WBarGroup::face_el(int q, int i, El a) const {
  auto c = coords(q, a);  // c[t] = g_{q-1-t} in G_{q-1-t}
  std::vector<El> r;
  r.reserve(q - 1);
  if (i == 0) {
    r.assign(c.begin() + 1, c.end());
  } else if (i < q) {
    for (int t = 0; t <= i - 2; ++t)
      r.push_back(g_->face_el(q - 1 - t, i - 1 - t, c[t]));
    // merge: the (q-i)-coordinate loses its 0th face onto the next one
    El top = g_->face_el(q - i, 0, c[i - 1]);
    r.push_back(g_->mul(q - i - 1, top, c[i]));
    for (int t = i + 1; t <= q - 1; ++t) r.push_back(c[t]);
  } else {
    for (int t = 0; t <= q - 2; ++t)
      r.push_back(g_->face_el(q - 1 - t, q - 1 - t, c[t]));
  }
  return from_coords(r);
}

El WBarGroup::degen_el(int q, int i, El a) const {
  auto c = coords(q, a);
  std::vector<El> r;
  r.reserve(q + 1);
  if (i == 0) {
    r.push_back(g_->identity(q));
    r.insert(r.end(), c.begin(), c.end());
  } else {
    for (int t = 0; t <= i - 1; ++t)
      r.push_back(g_->degen_el(q - 1 - t, i - 1 - t, c[t]));
    r.push_back(g_->identity(q - i));
    for (int t = i; t <= q - 1; ++t) r.push_back(c[t]);
  }
  return from_coords(r);
}

std::string WBarGroup::el_name(int q, El a) const {
  auto c = coords(q, a);
  std::string s = "[";
  for (int t = 0; t < q; ++t) {
    if (t) s += "|";
    s += g_->el_name(q - 1 - t, c[t]);
  }
  return s + "]";
}

El WGroup::mul(int q, El a, El b) const {
  return pair(q, g_->mul(q, fiber_part(q, a), fiber_part(q, b)),
              wbar_.mul(q, base_part(q, a), base_part(q, b)));
}

El WGroup::inverse(int q, El a) const {
  return pair(q, g_->inverse(q, fiber_part(q, a)),
              wbar_.inverse(q, base_part(q, a)));
}

El WGroup::identity(int q) const {
  return pair(q, g_->identity(q), wbar_.identity(q));
}

El WGroup::face_el(int q, int i, El a) const {
  El g = fiber_part(q, a), b = base_part(q, a);
  if (i == 0) {
    El gf = g_->mul(q - 1, g_->face_el(q, 0, g), wbar_.twist(q, b));
    return pair(q - 1, gf, wbar_.face_el(q, 0, b));
  }
  return pair(q - 1, g_->face_el(q, i, g), wbar_.face_el(q, i, b));
}

El WGroup::degen_el(int q, int i, El a) const {
  return pair(q + 1, g_->degen_el(q, i, fiber_part(q, a)),
              wbar_.degen_el(q, i, base_part(q, a)));
}

std::string WGroup::el_name(int q, El a) const {
  return "(" + g_->el_name(q, fiber_part(q, a)) + ";" +
         wbar_.el_name(q, base_part(q, a)) + ")";
}

void ElementSet::build(int n) const {
  if (n > maxdim_)
    throw std::runtime_error("ElementSet: dimension beyond construction bound");
  while (static_cast<int>(nondeg_.size()) <= n) {
    int q = static_cast<int>(nondeg_.size());
    std::vector<El> nd;
    std::map<El, int> ix;
    const El total = g_->order(q);
    for (El a = 0; a < total; ++a) {
      bool deg = false;
      for (int i = 0; i < q && !deg; ++i)
        deg = (a == g_->degen_el(q - 1, i, g_->face_el(q, i + 1, a)));
      if (!deg) {
        ix[a] = static_cast<int>(nd.size());
        nd.push_back(a);
      }
    }
    nondeg_.push_back(std::move(nd));
    index_.push_back(std::move(ix));
  }
}

int ElementSet::count(int n) const {
  if (n < 0) return 0;
  if (n > maxdim_) return 0;
  build(n);
  return static_cast<int>(nondeg_[n].size());
}

El ElementSet::element_of(int n, int idx) const {
  build(n);
  return nondeg_[n][idx];
}

int ElementSet::index_of_element(int n, El a) const {
  build(n);
  auto it = index_[n].find(a);
  return it == index_[n].end() ? -1 : it->second;
}

SimplexRef ElementSet::ref_of(int q, El a) const {
  build(q);
  int nd = index_of_element(q, a);
  if (nd >= 0) return nondeg(q, nd);
  // peel the largest degeneracy letter first
  for (int i = q - 1; i >= 0; --i) {
    El core = g_->face_el(q, i + 1, a);
    if (a == g_->degen_el(q - 1, i, core))
      return apply_degeneracy(ref_of(q - 1, core), i);
  }
  throw std::runtime_error("ElementSet: element has no canonical form");
}

SimplexRef ElementSet::face(int n, int idx, int i) const {
  return ref_of(n - 1, g_->face_el(n, i, element_of(n, idx)));
}

std::string ElementSet::label(int n, int idx) const {
  return g_->el_name(n, element_of(n, idx));
}

void check_universal_twisting(const SimplicialGroup& g, int N) {
  WBarGroup wb(g);
  auto fail = [](const char* what) {
    throw std::runtime_error(std::string("twisting identity fails: ") + what);
  };
  for (int q = 1; q <= N; ++q) {
    const El total = wb.order(q);
    for (El b = 0; b < total; ++b) {
      El t = wb.twist(q, b);
      if (wb.twist(q + 1, wb.degen_el(q, 0, b)) != g.identity(q))
        fail("tau(s_0 b) = e");
      for (int i = 1; i <= q; ++i)
        if (wb.twist(q + 1, wb.degen_el(q, i, b)) != g.degen_el(q - 1, i - 1, t))
          fail("tau(s_i b) = s_{i-1} tau(b)");
      if (q >= 2) {
        for (int j = 2; j <= q; ++j)
          if (wb.twist(q - 1, wb.face_el(q, j, b)) !=
              g.face_el(q - 1, j - 1, t))
            fail("tau(d_j b) = d_{j-1} tau(b)");
        El lhs = wb.twist(q - 1, wb.face_el(q, 1, b));
        El rhs = g.mul(q - 2, g.face_el(q - 1, 0, t),
                       wb.twist(q - 1, wb.face_el(q, 0, b)));
        if (lhs != rhs) fail("tau(d_1 b) = d_0 tau(b) . tau(d_0 b)");
      }
    }
  }
}

}  // namespace opforms
