#pragma once

// doctest-based helpers shared by the simplicial-side test binaries;
// include after doctest.h.

#include <algorithm>
#include <vector>

#include "opforms/field.hpp"
#include "opforms/graded.hpp"
#include "opforms/simplicial.hpp"

namespace opforms {

// every ref of X with total dimension <= N
inline std::vector<SimplexRef> all_refs(const SimplicialSet& X, int N) {
  std::vector<SimplexRef> out, prev;
  for (int m = 0; m <= N; ++m) {
    std::vector<SimplexRef> cur;
    for (int i = 0; i < X.count(m); ++i) cur.push_back(nondeg(m, i));
    for (auto& r : prev)
      for (int j = 0; j <= m - 1; ++j) cur.push_back(apply_degeneracy(r, j));
    std::sort(cur.begin(), cur.end());
    cur.erase(std::unique(cur.begin(), cur.end()), cur.end());
    for (auto& r : cur) out.push_back(r);
    prev = std::move(cur);
  }
  return out;
}

inline void check_all_identities(const SimplicialSet& X, int N) {
  for (auto& r : all_refs(X, N)) {
    int n = r.total_dim();
    // d_i d_j = d_{j-1} d_i, i < j
    if (n >= 2)
      for (int j = 1; j <= n; ++j)
        for (int i = 0; i < j; ++i)
          CHECK(apply_face(X, apply_face(X, r, j), i) ==
                apply_face(X, apply_face(X, r, i), j - 1));
    // s_i s_j = s_{j+1} s_i, i <= j
    for (int j = 0; j <= n; ++j)
      for (int i = 0; i <= j; ++i)
        CHECK(apply_degeneracy(apply_degeneracy(r, j), i) ==
              apply_degeneracy(apply_degeneracy(r, i), j + 1));
    // d_i s_j relations
    for (int j = 0; j <= n; ++j) {
      SimplexRef sj = apply_degeneracy(r, j);
      for (int i = 0; i <= n + 1; ++i) {
        SimplexRef lhs = apply_face(X, sj, i);
        if (i == j || i == j + 1) {
          CHECK(lhs == r);
        } else if (i < j) {
          CHECK(lhs == apply_degeneracy(apply_face(X, r, i), j - 1));
        } else {
          CHECK(lhs == apply_degeneracy(apply_face(X, r, i - 1), j));
        }
      }
    }
  }
}

template <typename K>
std::vector<int> betti_list(const SimplicialSet& X, int nmax) {
  auto c = normalized_cochains<K>(X, nmax);
  c.validate();
  std::vector<int> out;
  for (int n = 0; n <= nmax; ++n) out.push_back(c.betti(n));
  return out;
}

}  // namespace opforms
