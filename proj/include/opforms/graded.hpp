#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "opforms/sparse.hpp"

namespace opforms {

// Cochain complex on a degree window: C^n for lo <= n <= hi, with
// differentials d_n: C^n -> C^(n+1) raising degree.  Degrees outside the
// window are treated as zero.
template <typename K>
struct CochainComplex {
  int lo = 0, hi = -1;
  std::map<int, int> dims;
  std::map<int, SparseMatrix<K>> d;

  int dim(int n) const {
    auto it = dims.find(n);
    return it == dims.end() ? 0 : it->second;
  }

  SparseMatrix<K> diff(int n) const {
    auto it = d.find(n);
    if (it != d.end()) return it->second;
    return SparseMatrix<K>(dim(n + 1), dim(n));
  }

  void set_diff(int n, SparseMatrix<K> m) {
    if (m.rows() != dim(n + 1) || m.cols() != dim(n))
      throw std::runtime_error("differential shape mismatch at degree " +
                               std::to_string(n));
    d[n] = std::move(m);
  }

  // Shape coherence and d.d = 0 across the window.
  void validate() const {
    for (int n = lo; n < hi; ++n) {
      auto dn = diff(n);
      if (dn.rows() != dim(n + 1) || dn.cols() != dim(n))
        throw std::runtime_error("differential shape mismatch at degree " +
                                 std::to_string(n));
      if (n + 1 < hi || d.count(n + 1)) {
        if (!(diff(n + 1) * dn).is_zero())
          throw std::runtime_error("d.d != 0 at degree " + std::to_string(n));
      }
    }
  }

  struct Cohomology {
    int betti = 0;
    QuotientBasis<K> classes;  // cocycle representatives mod coboundaries
  };

  // Only meaningful for n with n+1 differentials available (or genuinely
  // zero); truncated top degrees are the caller's responsibility.
  Cohomology cohomology(int n) const {
    Echelon<K> zn(diff(n));
    std::vector<SparseVec<K>> bdry;
    if (n > lo || d.count(n - 1)) bdry = Echelon<K>(diff(n - 1)).image_basis();
    Cohomology h;
    h.classes = QuotientBasis<K>(bdry, zn.kernel_basis());
    h.betti = h.classes.dim();
    return h;
  }

  int betti(int n) const {
    if (dim(n) == 0) return 0;
    int rk_n = Echelon<K>(diff(n)).rank();
    int rk_prev = Echelon<K>(diff(n - 1)).rank();
    return dim(n) - rk_n - rk_prev;
  }

  std::map<int, int> betti_table(int nmax) const {
    std::map<int, int> out;
    for (int n = lo; n <= nmax; ++n) out[n] = betti(n);
    return out;
  }
};

}  // namespace opforms
