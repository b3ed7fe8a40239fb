#include "opforms/einfty.hpp"

namespace opforms {

// All (q+1)-subsets of {0..n} as bitmasks, in increasing numeric order
// (Gosper's iteration).
std::vector<unsigned> model_faces(int n, int q) {
  std::vector<unsigned> out;
  if (q < 0 || q > n) return out;
  unsigned m = (1u << (q + 1)) - 1;
  const unsigned lim = 1u << (n + 1);
  while (m < lim) {
    out.push_back(m);
    unsigned c = m & (~m + 1);
    unsigned r = m + c;
    if (r >= lim) break;
    m = (((m ^ r) >> 2) / c) | r;
  }
  return out;
}

int face_index(const std::vector<unsigned>& faces, unsigned mask) {
  auto it = std::lower_bound(faces.begin(), faces.end(), mask);
  if (it == faces.end() || *it != mask) return -1;
  return static_cast<int>(it - faces.begin());
}

std::vector<std::vector<int>> multidegrees(int k, int total, int qmax) {
  std::vector<std::vector<int>> out;
  if (total < 0) return out;
  if (k == 0) {
    if (total == 0) out.push_back({});
    return out;
  }
  std::vector<int> cur(k);
  std::function<void(int, int)> rec = [&](int slot, int left) {
    if (slot == k - 1) {
      if (left <= qmax) {
        cur[slot] = left;
        out.push_back(cur);
      }
      return;
    }
    for (int q = 0; q <= std::min(left, qmax); ++q) {
      cur[slot] = q;
      rec(slot + 1, left - q);
    }
  };
  rec(0, total);
  return out;
}

std::vector<std::vector<int>> monotone_maps(int pdim, int qdim) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur(pdim + 1);
  std::function<void(int, int)> rec = [&](int pos, int lo) {
    if (pos == pdim + 1) {
      out.push_back(cur);
      return;
    }
    for (int v = lo; v <= qdim; ++v) {
      cur[pos] = v;
      rec(pos + 1, v);
    }
  };
  rec(0, 0);
  return out;
}

long long binom_mod(long long n, long long k, int p) {
  if (k < 0 || k > n) return 0;
  long long r = 1;
  while (n > 0 || k > 0) {
    long long nd = n % p, kd = k % p;
    if (kd > nd) return 0;
    // C(nd, kd) with digits below p
    long long c = 1;
    for (long long i = 0; i < kd; ++i) c = c * (nd - i) / (i + 1);
    r = (r * (c % p)) % p;
    n /= p;
    k /= p;
  }
  return r;
}

namespace {

// P^a P^b is reduced (no rewriting applies) when a >= p b.
bool reduced_pair(int a, int b, int p) { return b == 0 || a >= p * b; }

// One rewriting step: for a < p b,
//   P^a P^b = sum_j (-1)^{a+j} C((p-1)(b-j)-1, a-pj) P^{a+b-j} P^j  (mod p),
// the output pairs all reduced (j < b and a+b-j >= pj).  For p = 2 the sign
// is trivial and the coefficient is C(b-1-j, a-2j).
std::map<std::pair<int, int>, long long> reduce_pair(int a, int b, int p) {
  std::map<std::pair<int, int>, long long> acc;
  std::vector<std::pair<std::pair<int, int>, long long>> work{{{a, b}, 1}};
  while (!work.empty()) {
    auto [ab, c] = work.back();
    work.pop_back();
    if (reduced_pair(ab.first, ab.second, p)) {
      acc[ab] = (acc[ab] + c) % p;
      continue;
    }
    for (int j = 0; j * p <= ab.first; ++j) {
      long long bc = binom_mod(
          static_cast<long long>(p - 1) * (ab.second - j) - 1,
          ab.first - static_cast<long long>(p) * j, p);
      if ((ab.first + j) % 2) bc = (p - bc) % p;
      if (bc == 0) continue;
      work.push_back({{ab.first + ab.second - j, j}, (c * bc) % p});
    }
  }
  return acc;
}

long long inv_mod(long long a, int p) {
  long long r = 1, b = a % p, e = p - 2;
  while (e > 0) {
    if (e & 1) r = r * b % p;
    b = b * b % p;
    e >>= 1;
  }
  return r;
}

}  // namespace

// Rewrites P^t P^s with t > p s as a combination of compositions
// P^{s+t-i} P^i with s+t-i <= p i (the opposite reduced range), by exact
// elimination against the one-step reductions above.  The result is the
// unique such combination once the free coefficients (of compositions
// reducing to zero) are dropped; both sides agree under evaluation, e.g.
// Sq^3 Sq^1 = Sq^2 Sq^2 and Sq^5 Sq^1 = Sq^3 Sq^3.
std::vector<AdemTerm> adem_expand(int t, int s, int p) {
  if (t <= p * s) throw std::invalid_argument("adem_expand: requires t > p*s");
  const int n = t + s;
  // reduced monomials P^{n-j} P^j in this degree: j == 0 or n-j >= pj
  std::vector<std::pair<int, int>> basis;
  for (int j = 0; j <= n - 1; ++j)
    if (reduced_pair(n - j, j, p)) basis.emplace_back(n - j, j);
  auto basis_index = [&](const std::pair<int, int>& ab) {
    for (std::size_t r = 0; r < basis.size(); ++r)
      if (basis[r] == ab) return static_cast<int>(r);
    throw std::logic_error("adem_expand: unreduced expansion term");
  };
  // candidate columns, in increasing inner index
  std::vector<int> cand;
  for (int i = (n + p) / (p + 1); i <= n - 1; ++i)
    if (n - i <= p * i) cand.push_back(i);
  const std::size_t R = basis.size(), C = cand.size();
  std::vector<std::vector<long long>> M(R, std::vector<long long>(C + 1, 0));
  for (std::size_t c = 0; c < C; ++c)
    for (const auto& [ab, v] : reduce_pair(n - cand[c], cand[c], p))
      if (v) M[basis_index(ab)][c] = v;
  M[basis_index({t, s})][C] = 1;
  // row reduction, pivoting left to right; free columns stay zero
  std::vector<int> pivot_row(C, -1);
  std::size_t rr = 0;
  for (std::size_t c = 0; c < C && rr < R; ++c) {
    std::size_t pr = rr;
    while (pr < R && M[pr][c] == 0) ++pr;
    if (pr == R) continue;
    std::swap(M[rr], M[pr]);
    long long iv = inv_mod(M[rr][c], p);
    for (auto& v : M[rr]) v = v * iv % p;
    for (std::size_t r = 0; r < R; ++r) {
      if (r == rr || M[r][c] == 0) continue;
      long long f = M[r][c];
      for (std::size_t k = 0; k <= C; ++k)
        M[r][k] = ((M[r][k] - f * M[rr][k]) % p + p) % p;
    }
    pivot_row[c] = static_cast<int>(rr);
    ++rr;
  }
  for (std::size_t r = rr; r < R; ++r)
    if (M[r][C] != 0)
      throw std::runtime_error("adem_expand: no opposite-range expansion");
  std::vector<AdemTerm> out;
  for (std::size_t c = 0; c < C; ++c) {
    if (pivot_row[c] < 0) continue;
    long long v = M[pivot_row[c]][C];
    if (v) out.push_back({n - cand[c], cand[c], static_cast<int>(v)});
  }
  return out;
}

}  // namespace opforms
