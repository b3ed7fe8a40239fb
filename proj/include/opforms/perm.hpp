#pragma once

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace opforms {

// permutation of {0..n-1}; v[i] = image of i
using Perm = std::vector<int>;

inline Perm perm_id(int n) {
  Perm p(n);
  std::iota(p.begin(), p.end(), 0);
  return p;
}

// composition (a*b)(i) = a(b(i))
inline Perm perm_mul(const Perm& a, const Perm& b) {
  Perm r(b.size());
  for (size_t i = 0; i < b.size(); ++i) r[i] = a[b[i]];
  return r;
}

inline Perm perm_inv(const Perm& a) {
  Perm r(a.size());
  for (size_t i = 0; i < a.size(); ++i) r[a[i]] = static_cast<int>(i);
  return r;
}

inline int perm_sign(const Perm& a) {
  int inv = 0;
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = i + 1; j < a.size(); ++j)
      if (a[i] > a[j]) ++inv;
  return (inv % 2) ? -1 : 1;
}

// lexicographic rank; identity has rank 0
inline long long perm_rank(const Perm& a) {
  const int n = static_cast<int>(a.size());
  long long r = 0, fact = 1;
  for (int i = 2; i <= n; ++i) fact *= i;
  for (int i = 0; i < n; ++i) {
    if (n - i > 1) fact /= (n - i);
    int smaller = 0;
    for (int j = i + 1; j < n; ++j)
      if (a[j] < a[i]) ++smaller;
    r += smaller * fact;
  }
  return r;
}

inline Perm perm_unrank(int n, long long r) {
  std::vector<int> avail(n);
  std::iota(avail.begin(), avail.end(), 0);
  long long fact = 1;
  for (int i = 2; i < n; ++i) fact *= i;
  Perm p;
  p.reserve(n);
  for (int i = 0; i < n; ++i) {
    long long k = (fact > 0) ? r / fact : 0;
    r %= (fact > 0) ? fact : 1;
    p.push_back(avail[k]);
    avail.erase(avail.begin() + k);
    if (n - 1 - i > 1) fact /= (n - 1 - i);
  }
  return p;
}

inline long long factorial(int n) {
  long long f = 1;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

// operadic composition in the permutation operad: a permutes k blocks of
// sizes |parts[i]|, each part acts within its block
inline Perm perm_comp(const Perm& a, const std::vector<Perm>& parts) {
  const int k = static_cast<int>(a.size());
  if (static_cast<int>(parts.size()) != k)
    throw std::invalid_argument("perm_comp: arity mismatch");
  std::vector<int> sz(k), in_off(k, 0), out_off(k, 0);
  for (int i = 0; i < k; ++i) sz[i] = static_cast<int>(parts[i].size());
  int n = 0;
  for (int i = 0; i < k; ++i) {
    in_off[i] = n;
    n += sz[i];
  }
  for (int i = 0; i < k; ++i)
    for (int t = 0; t < k; ++t)
      if (a[t] < a[i]) out_off[i] += sz[t];
  Perm r(n);
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < sz[i]; ++j) r[in_off[i] + j] = out_off[i] + parts[i][j];
  return r;
}

inline std::string perm_str(const Perm& a) {
  std::string s = "(";
  for (size_t i = 0; i < a.size(); ++i) {
    if (i) s += " ";
    s += std::to_string(a[i]);
  }
  return s + ")";
}

}  // namespace opforms
