#pragma once

#include <algorithm>
#include <cassert>
#include <map>
#include <optional>
#include <tuple>
#include <utility>
#include <vector>

namespace opforms {

// Sparse vector: (index, value) pairs, strictly increasing indices, no zeros.
template <typename K>
using SparseVec = std::vector<std::pair<int, K>>;

template <typename K>
SparseVec<K> vec_unit(int i) {
  return {{i, K::one()}};
}

// y + c*x, merged.
template <typename K>
SparseVec<K> vec_axpy(const SparseVec<K>& y, const K& c, const SparseVec<K>& x) {
  SparseVec<K> out;
  out.reserve(y.size() + x.size());
  std::size_t i = 0, j = 0;
  while (i < y.size() || j < x.size()) {
    if (j == x.size() || (i < y.size() && y[i].first < x[j].first)) {
      out.push_back(y[i++]);
    } else if (i == y.size() || x[j].first < y[i].first) {
      K v = c * x[j].second;
      if (!v.is_zero()) out.emplace_back(x[j].first, v);
      ++j;
    } else {
      K v = y[i].second + c * x[j].second;
      if (!v.is_zero()) out.emplace_back(y[i].first, v);
      ++i;
      ++j;
    }
  }
  return out;
}

template <typename K>
SparseVec<K> vec_add(const SparseVec<K>& a, const SparseVec<K>& b) {
  return vec_axpy(a, K::one(), b);
}

template <typename K>
SparseVec<K> vec_scale(const K& c, const SparseVec<K>& x) {
  SparseVec<K> out;
  if (c.is_zero()) return out;
  out.reserve(x.size());
  for (auto& [i, v] : x) out.emplace_back(i, c * v);
  return out;
}

template <typename K>
K vec_at(const SparseVec<K>& x, int i) {
  auto it = std::lower_bound(x.begin(), x.end(), i,
                             [](const auto& p, int k) { return p.first < k; });
  return (it != x.end() && it->first == i) ? it->second : K::zero();
}

// Collapses an unsorted/duplicated entry list to canonical form.
template <typename K>
SparseVec<K> vec_canon(SparseVec<K> x) {
  std::sort(x.begin(), x.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  SparseVec<K> out;
  for (auto& [i, v] : x) {
    if (!out.empty() && out.back().first == i) {
      out.back().second += v;
      if (out.back().second.is_zero()) out.pop_back();
    } else if (!v.is_zero()) {
      out.emplace_back(i, v);
    }
  }
  return out;
}

// Sparse matrix, canonical COO: entries sorted by (row, col), no zeros, no dups.
template <typename K>
class SparseMatrix {
 public:
  struct Entry {
    int r, c;
    K v;
  };

  SparseMatrix() = default;
  SparseMatrix(int rows, int cols) : rows_(rows), cols_(cols) {
    assert(rows >= 0 && cols >= 0);
  }

  int rows() const { return rows_; }
  int cols() const { return cols_; }

  void add(int r, int c, const K& v) {
    assert(0 <= r && r < rows_ && 0 <= c && c < cols_);
    if (v.is_zero()) return;
    ents_.push_back({r, c, v});
    dirty_ = true;
  }

  const std::vector<Entry>& entries() const {
    ensure();
    return ents_;
  }
  int nnz() const { return static_cast<int>(entries().size()); }
  bool is_zero() const { return entries().empty(); }

  static SparseMatrix identity(int n) {
    SparseMatrix m(n, n);
    for (int i = 0; i < n; ++i) m.add(i, i, K::one());
    return m;
  }

  static SparseMatrix from_columns(int rows, const std::vector<SparseVec<K>>& cols) {
    SparseMatrix m(rows, static_cast<int>(cols.size()));
    for (int j = 0; j < static_cast<int>(cols.size()); ++j)
      for (auto& [i, v] : cols[j]) m.add(i, j, v);
    return m;
  }

  std::vector<SparseVec<K>> columns() const {
    std::vector<SparseVec<K>> out(cols_);
    for (auto& e : entries()) out[e.c].emplace_back(e.r, e.v);
    for (auto& c : out)
      std::sort(c.begin(), c.end(),
                [](const auto& a, const auto& b) { return a.first < b.first; });
    return out;
  }

  SparseMatrix transpose() const {
    SparseMatrix m(cols_, rows_);
    for (auto& e : entries()) m.add(e.c, e.r, e.v);
    return m;
  }

  SparseVec<K> mul_vec(const SparseVec<K>& x) const {
    auto cs = columns();
    SparseVec<K> out;
    for (auto& [j, v] : x) out = vec_axpy(out, v, cs[j]);
    return out;
  }

  friend SparseMatrix operator*(const SparseMatrix& a, const SparseMatrix& b) {
    assert(a.cols_ == b.rows_);
    auto acols = a.columns();
    SparseMatrix m(a.rows_, b.cols_);
    auto bcols = b.columns();
    for (int j = 0; j < b.cols_; ++j) {
      SparseVec<K> col;
      for (auto& [t, v] : bcols[j]) col = vec_axpy(col, v, acols[t]);
      for (auto& [i, v] : col) m.add(i, j, v);
    }
    return m;
  }

  friend SparseMatrix operator+(const SparseMatrix& a, const SparseMatrix& b) {
    assert(a.rows_ == b.rows_ && a.cols_ == b.cols_);
    SparseMatrix m(a.rows_, a.cols_);
    for (auto& e : a.entries()) m.add(e.r, e.c, e.v);
    for (auto& e : b.entries()) m.add(e.r, e.c, e.v);
    return m;
  }

  friend SparseMatrix operator*(const K& c, const SparseMatrix& a) {
    SparseMatrix m(a.rows_, a.cols_);
    for (auto& e : a.entries()) m.add(e.r, e.c, c * e.v);
    return m;
  }

  friend bool operator==(const SparseMatrix& a, const SparseMatrix& b) {
    if (a.rows_ != b.rows_ || a.cols_ != b.cols_) return false;
    auto& ea = a.entries();
    auto& eb = b.entries();
    if (ea.size() != eb.size()) return false;
    for (std::size_t i = 0; i < ea.size(); ++i)
      if (ea[i].r != eb[i].r || ea[i].c != eb[i].c || !(ea[i].v == eb[i].v))
        return false;
    return true;
  }

  std::vector<std::vector<K>> to_dense() const {
    std::vector<std::vector<K>> d(rows_, std::vector<K>(cols_, K::zero()));
    for (auto& e : entries()) d[e.r][e.c] = e.v;
    return d;
  }

 private:
  void ensure() const {
    if (!dirty_) return;
    std::sort(ents_.begin(), ents_.end(), [](const Entry& a, const Entry& b) {
      return std::tie(a.r, a.c) < std::tie(b.r, b.c);
    });
    std::vector<Entry> out;
    out.reserve(ents_.size());
    for (auto& e : ents_) {
      if (!out.empty() && out.back().r == e.r && out.back().c == e.c) {
        out.back().v += e.v;
        if (out.back().v.is_zero()) out.pop_back();
      } else if (!e.v.is_zero()) {
        out.push_back(e);
      }
    }
    ents_ = std::move(out);
    dirty_ = false;
  }

  int rows_ = 0, cols_ = 0;
  mutable std::vector<Entry> ents_;
  mutable bool dirty_ = false;
};

// Column echelon factorization A*T = R with T invertible, computed by left-to-
// right column elimination with first-nonzero-row pivoting.  Pivot columns of R
// have distinct leading rows and leading coefficient 1.  Deterministic.
template <typename K>
class Echelon {
 public:
  explicit Echelon(const SparseMatrix<K>& a) : m_(a.rows()), n_(a.cols()) {
    R_ = a.columns();
    T_.resize(n_);
    for (int j = 0; j < n_; ++j) {
      T_[j] = vec_unit<K>(j);
      while (!R_[j].empty()) {
        int lead = R_[j].front().first;
        auto it = pivrow_.find(lead);
        if (it == pivrow_.end()) {
          K inv = R_[j].front().second.inv();
          R_[j] = vec_scale(inv, R_[j]);
          T_[j] = vec_scale(inv, T_[j]);
          pivrow_.emplace(lead, j);
          piv_.emplace_back(lead, j);
          break;
        }
        int c = it->second;
        K f = -R_[j].front().second;  // pivot leading coeff is 1
        R_[j] = vec_axpy(R_[j], f, R_[c]);
        T_[j] = vec_axpy(T_[j], f, T_[c]);
      }
    }
  }

  int rank() const { return static_cast<int>(piv_.size()); }
  int rows() const { return m_; }
  int cols() const { return n_; }
  const std::vector<std::pair<int, int>>& pivots() const { return piv_; }

  // Basis of ker(A), one n-vector per non-pivot column, in column order.
  std::vector<SparseVec<K>> kernel_basis() const {
    std::vector<SparseVec<K>> out;
    for (int j = 0; j < n_; ++j)
      if (R_[j].empty()) out.push_back(T_[j]);
    return out;
  }

  // Basis of im(A): the pivot columns of R, in column order.
  std::vector<SparseVec<K>> image_basis() const {
    std::vector<SparseVec<K>> out;
    for (int j = 0; j < n_; ++j)
      if (!R_[j].empty()) out.push_back(R_[j]);
    return out;
  }

  // Residual of b after elimination against the pivot columns; empty iff
  // b lies in im(A).
  SparseVec<K> reduce(SparseVec<K> b) const {
    while (!b.empty()) {
      auto it = pivrow_.find(b.front().first);
      if (it == pivrow_.end()) break;
      b = vec_axpy(b, -b.front().second, R_[it->second]);
    }
    return b;
  }

  bool in_image(const SparseVec<K>& b) const { return reduce(b).empty(); }

  // One x with A*x = b (coefficients of non-pivot columns zero); nullopt if
  // b is not in the image.
  std::optional<SparseVec<K>> solve(const SparseVec<K>& b) const {
    SparseVec<K> res = b, x;
    while (!res.empty()) {
      auto it = pivrow_.find(res.front().first);
      if (it == pivrow_.end()) return std::nullopt;
      K f = res.front().second;
      res = vec_axpy(res, -f, R_[it->second]);
      x = vec_axpy(x, f, T_[it->second]);
    }
    return x;
  }

 private:
  int m_, n_;
  std::vector<SparseVec<K>> R_, T_;
  std::vector<std::pair<int, int>> piv_;  // (leading row, column)
  std::map<int, int> pivrow_;
};

template <typename K>
int sparse_rank(const SparseMatrix<K>& a) {
  return Echelon<K>(a).rank();
}

// Working data for a quotient span(gens) / span(mod): echelonized class
// representatives plus coordinate extraction.  Deterministic in input order.
template <typename K>
class QuotientBasis {
 public:
  QuotientBasis() = default;
  QuotientBasis(const std::vector<SparseVec<K>>& mod,
                const std::vector<SparseVec<K>>& gens) {
    for (auto v : mod) insert(modcols_, modpiv_, std::move(v), nullptr);
    for (auto v : gens) {
      SparseVec<K> red = reduce_all(std::move(v), nullptr);
      if (red.empty()) continue;
      K inv = red.front().second.inv();
      red = vec_scale(inv, red);
      reppiv_.emplace(red.front().first, static_cast<int>(reps_.size()));
      reps_.push_back(std::move(red));
    }
  }

  const std::vector<SparseVec<K>>& reps() const { return reps_; }
  int dim() const { return static_cast<int>(reps_.size()); }

  // Coordinates of [v] in the reps basis; nullopt if v is outside
  // span(gens) + span(mod).
  std::optional<std::vector<K>> coords(SparseVec<K> v) const {
    std::vector<K> out(reps_.size(), K::zero());
    SparseVec<K> res = reduce_all(std::move(v), &out);
    if (!res.empty()) return std::nullopt;
    return out;
  }

  bool in_span(SparseVec<K> v) const { return coords(std::move(v)).has_value(); }

 private:
  // Eliminates v's leading entries against mod then rep pivots; records rep
  // coefficients into *coeff when given.
  SparseVec<K> reduce_all(SparseVec<K> v, std::vector<K>* coeff) const {
    while (!v.empty()) {
      int lead = v.front().first;
      auto itm = modpiv_.find(lead);
      if (itm != modpiv_.end()) {
        v = vec_axpy(v, -v.front().second, modcols_[itm->second]);
        continue;
      }
      auto itr = reppiv_.find(lead);
      if (itr != reppiv_.end()) {
        if (coeff) (*coeff)[itr->second] = v.front().second;
        v = vec_axpy(v, -v.front().second, reps_[itr->second]);
        continue;
      }
      break;
    }
    return v;
  }

  void insert(std::vector<SparseVec<K>>& cols, std::map<int, int>& piv,
              SparseVec<K> v, std::vector<K>*) {
    while (!v.empty()) {
      auto it = piv.find(v.front().first);
      if (it == piv.end()) {
        K inv = v.front().second.inv();
        v = vec_scale(inv, v);
        piv.emplace(v.front().first, static_cast<int>(cols.size()));
        cols.push_back(std::move(v));
        return;
      }
      v = vec_axpy(v, -v.front().second, cols[it->second]);
    }
  }

  std::vector<SparseVec<K>> modcols_, reps_;
  std::map<int, int> modpiv_, reppiv_;
};

}  // namespace opforms
