#include <functional>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "opforms/forms.hpp"

namespace opforms {

namespace {

// normalize a coefficient into [0, char) over positive characteristic
long long norm_coeff(long long v, int ch) {
  if (ch == 0) return v;
  v %= ch;
  if (v < 0) v += ch;
  return v;
}

void add_entry(OmegaOp::Elt& out, int deg, int idx, long long v, int ch) {
  const auto key = std::make_pair(deg, idx);
  auto it = out.c.find(key);
  long long s = (it == out.c.end() ? 0 : it->second) + v;
  s = norm_coeff(s, ch);
  if (s == 0) {
    if (it != out.c.end()) out.c.erase(it);
  } else if (it == out.c.end()) {
    out.c.emplace(key, s);
  } else {
    it->second = s;
  }
}

}  // namespace

OmegaOp::OmegaOp(const Operad& O, int n, int weight_cap, int deg_max, int field_char)
    : O_(&O), n_(n), wcap_(weight_cap), dmax_(deg_max), char_(field_char) {
  if (n < 0) throw std::invalid_argument("level must be nonnegative");
  std::vector<int> degs(2 * n, 0);
  std::vector<std::vector<std::pair<int, long long>>> diffs(2 * n);
  for (int i = 0; i < n; ++i) {
    degs[n + i] = 1;
    diffs[i] = {{n + i, 1}};
  }
  alg_ = std::make_unique<FreeAlgebraTruncation>(O, degs, diffs, wcap_, 0, dmax_,
                                                 char_);
}

void OmegaOp::accumulate(Elt& out, int p, int odeg, int oidx,
                         const std::vector<int>& word, long long coeff) const {
  if (char_ != 0) coeff = norm_coeff(coeff, char_);
  if (coeff == 0) return;
  const auto red = alg_->reduce(p, odeg, oidx, word, coeff);
  if (!red.in_window)
    throw std::logic_error("reduction escapes the truncation window");
  for (const auto& [idx, c] : red.terms) add_entry(out, red.deg, idx, c, char_);
}

OmegaOp::Elt OmegaOp::unit() const {
  Elt e;
  accumulate(e, 0, 0, O_->section_index(0), {}, 1);
  return e;
}

OmegaOp::Elt OmegaOp::x(int i) const {
  if (i < 1 || i > n_) throw std::out_of_range("coordinate index");
  Elt e;
  accumulate(e, 1, 0, O_->section_index(1), {i - 1}, 1);
  return e;
}

OmegaOp::Elt OmegaOp::dx(int i) const {
  if (i < 1 || i > n_) throw std::out_of_range("coordinate index");
  Elt e;
  accumulate(e, 1, 0, O_->section_index(1), {n_ + i - 1}, 1);
  return e;
}

OmegaOp::Elt OmegaOp::d(const Elt& a) const {
  Elt out;
  for (const auto& [key, coeff] : a.c) {
    const auto red = alg_->differential(key.first, key.second);
    if (!red.in_window)
      throw std::runtime_error("differential escapes the degree window");
    for (const auto& [idx, c] : red.terms)
      add_entry(out, red.deg, idx, norm_coeff(c * coeff, char_), char_);
  }
  return out;
}

OmegaOp::Elt OmegaOp::theta2(const Elt& a, const Elt& b) const {
  Elt out;
  for (const auto& [ka, ca] : a.c)
    for (const auto& [kb, cb] : b.c) {
      const auto red = alg_->theta(0, O_->section_index(2), {ka, kb});
      if (!red.in_window)
        throw std::runtime_error("product escapes the truncation caps");
      for (const auto& [idx, c] : red.terms)
        add_entry(out, red.deg, idx, norm_coeff(c * ca * cb, char_), char_);
    }
  return out;
}

OmegaOp::Elt OmegaOp::substitute(const OmegaOp& from, const OmegaOp& to,
                                 const std::vector<GenImage>& im, const Elt& a) {
  // all images are homogeneous of the generator's degree, so the letterwise
  // substitution needs no Koszul signs; dropped slots graft the arity-0
  // section, kept slots the arity-1 section
  Elt out;
  const Operad& O = *to.O_;
  const OpKey keep{1, 0, O.section_index(1)};
  const OpKey drop{0, 0, O.section_index(0)};
  for (const auto& [key, coeff] : a.c) {
    const FreeAlgebraMono& m = from.alg_->basis(key.first, key.second);
    const int p = m.weight;
    std::vector<OpKey> args(p);
    std::vector<int> kept;
    kept.reserve(p);
    std::function<void(int, long long)> rec = [&](int pos, long long acc) {
      if (acc == 0) return;
      if (pos == p) {
        for (const auto& t : O.compose(m.odeg, m.oidx, args))
          to.accumulate(out, static_cast<int>(kept.size()), m.odeg, t.idx, kept,
                        acc * t.c);
        return;
      }
      const GenImage& g = im[m.word[pos]];
      if (g.unit != 0) {
        args[pos] = drop;
        rec(pos + 1, acc * g.unit);
      }
      for (const auto& [tg, tc] : g.lin) {
        args[pos] = keep;
        kept.push_back(tg);
        rec(pos + 1, acc * tc);
        kept.pop_back();
      }
    };
    rec(0, coeff);
  }
  return out;
}

OmegaOp::Elt OmegaOp::face(const OmegaOp& from, const OmegaOp& to, int j,
                           const Elt& a) {
  const int n = from.n_;
  if (to.n_ != n - 1 || n < 1) throw std::invalid_argument("level mismatch");
  if (j < 0 || j > n) throw std::out_of_range("face index");
  const int tn = to.n_;
  std::vector<GenImage> im(2 * n);
  for (int i = 1; i <= n; ++i) {
    GenImage& gx = im[i - 1];
    GenImage& gd = im[n + i - 1];
    if (j == 0) {
      if (i == 1) {
        // x_1 |-> 1 - sum x_l, dx_1 |-> -sum dx_l at the lower level
        gx.unit = 1;
        for (int l = 1; l <= tn; ++l) gx.lin.emplace_back(l - 1, -1);
        for (int l = 1; l <= tn; ++l) gd.lin.emplace_back(tn + l - 1, -1);
      } else {
        gx.lin.emplace_back(i - 2, 1);
        gd.lin.emplace_back(tn + i - 2, 1);
      }
    } else if (i < j) {
      gx.lin.emplace_back(i - 1, 1);
      gd.lin.emplace_back(tn + i - 1, 1);
    } else if (i > j) {
      gx.lin.emplace_back(i - 2, 1);
      gd.lin.emplace_back(tn + i - 2, 1);
    }
    // i == j (j >= 1): both coordinates map to zero
  }
  return substitute(from, to, im, a);
}

OmegaOp::Elt OmegaOp::degen(const OmegaOp& from, const OmegaOp& to, int j,
                            const Elt& a) {
  const int n = from.n_;
  if (to.n_ != n + 1) throw std::invalid_argument("level mismatch");
  if (j < 0 || j > n) throw std::out_of_range("degeneracy index");
  const int tn = to.n_;
  std::vector<GenImage> im(2 * n);
  for (int i = 1; i <= n; ++i) {
    GenImage& gx = im[i - 1];
    GenImage& gd = im[n + i - 1];
    if (j >= 1 && i == j) {
      gx.lin.emplace_back(j - 1, 1);
      gx.lin.emplace_back(j, 1);
      gd.lin.emplace_back(tn + j - 1, 1);
      gd.lin.emplace_back(tn + j, 1);
    } else if (j >= 1 && i < j) {
      gx.lin.emplace_back(i - 1, 1);
      gd.lin.emplace_back(tn + i - 1, 1);
    } else {
      // j == 0, or i > j: shift up by one
      gx.lin.emplace_back(i, 1);
      gd.lin.emplace_back(tn + i, 1);
    }
  }
  return substitute(from, to, im, a);
}

namespace {

std::string omega_show(const OmegaOp& L, const OmegaOp::Elt& e) {
  if (e.c.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [key, c] : e.c) {
    if (!first) os << " + ";
    first = false;
    os << c << "*" << L.alg().label(key.first, key.second);
  }
  return os.str();
}

}  // namespace

std::optional<std::string> omega_op_identities(const Operad& O, int nmax,
                                               int wcap, int field_char) {
  const int top = nmax + 2;
  std::vector<OmegaOp> lvl;
  lvl.reserve(top + 1);
  for (int n = 0; n <= top; ++n) lvl.emplace_back(O, n, wcap, wcap + 1, field_char);

  auto fc = [&](int n, int j, const OmegaOp::Elt& e) {
    return OmegaOp::face(lvl[n], lvl[n - 1], j, e);
  };
  auto dg = [&](int n, int j, const OmegaOp::Elt& e) {
    return OmegaOp::degen(lvl[n], lvl[n + 1], j, e);
  };
  auto fail = [&](int n, int shown, const std::string& what,
                  const OmegaOp::Elt& got, const OmegaOp::Elt& want, int deg,
                  int idx) {
    std::ostringstream os;
    os << what << " fails at level " << n << " on " << lvl[n].alg().label(deg, idx)
       << ": " << omega_show(lvl[shown], got) << " vs " << omega_show(lvl[shown], want);
    return os.str();
  };

  for (int n = 0; n <= nmax; ++n) {
    const auto& A = lvl[n].alg();
    for (int deg = 0; deg <= wcap; ++deg) {
      for (int i = 0; i < A.dim(deg); ++i) {
        OmegaOp::Elt e;
        e.c[{deg, i}] = 1;
        // d^2 = 0
        const auto de = lvl[n].d(e);
        if (deg + 2 <= wcap + 1) {
          const auto dde = lvl[n].d(de);
          if (!dde.c.empty()) return fail(n, n, "d^2 = 0", dde, {}, deg, i);
        }
        // faces: d delta_j = delta_j d, delta_i delta_j = delta_{j-1} delta_i
        for (int j = 0; j <= n && n >= 1; ++j) {
          const auto fe = fc(n, j, e);
          const auto lhs = lvl[n - 1].d(fe);
          const auto rhs = fc(n, j, de);
          if (lhs != rhs) return fail(n, n - 1, "d vs face " + std::to_string(j), lhs, rhs, deg, i);
        }
        if (n >= 2) {
          for (int jj = 0; jj <= n; ++jj)
            for (int ii = 0; ii < jj; ++ii) {
              const auto lhs = fc(n - 1, ii, fc(n, jj, e));
              const auto rhs = fc(n - 1, jj - 1, fc(n, ii, e));
              if (lhs != rhs)
                return fail(n, n - 2, "face exchange (" + std::to_string(ii) + "," +
                                   std::to_string(jj) + ")",
                            lhs, rhs, deg, i);
            }
        }
        // degeneracies: d sigma_j = sigma_j d, sigma_i sigma_j = sigma_{j+1} sigma_i
        for (int j = 0; j <= n; ++j) {
          const auto se = dg(n, j, e);
          const auto lhs = lvl[n + 1].d(se);
          const auto rhs = dg(n, j, de);
          if (lhs != rhs)
            return fail(n, n + 1, "d vs degeneracy " + std::to_string(j), lhs, rhs, deg, i);
        }
        for (int jj = 0; jj <= n; ++jj)
          for (int ii = 0; ii <= jj; ++ii) {
            const auto lhs = dg(n + 1, ii, dg(n, jj, e));
            const auto rhs = dg(n + 1, jj + 1, dg(n, ii, e));
            if (lhs != rhs)
              return fail(n, n + 2, "degeneracy exchange (" + std::to_string(ii) + "," +
                                 std::to_string(jj) + ")",
                          lhs, rhs, deg, i);
          }
        // mixed: delta_i sigma_j
        for (int jj = 0; jj <= n; ++jj)
          for (int ii = 0; ii <= n + 1; ++ii) {
            const auto lhs = fc(n + 1, ii, dg(n, jj, e));
            OmegaOp::Elt rhs;
            if (ii < jj)
              rhs = dg(n - 1, jj - 1, fc(n, ii, e));
            else if (ii == jj || ii == jj + 1)
              rhs = e;
            else
              rhs = dg(n - 1, jj, fc(n, ii - 1, e));
            if (lhs != rhs)
              return fail(n, n, "face-degeneracy (" + std::to_string(ii) + "," +
                                 std::to_string(jj) + ")",
                          lhs, rhs, deg, i);
          }
      }
    }
  }
  return std::nullopt;
}

std::optional<std::string> omega_op_unit_law(const Operad& O, int n, int wcap,
                                             int field_char) {
  OmegaOp L(O, n, wcap, wcap + 1, field_char);
  const auto one = L.unit();
  for (int deg = 0; deg <= wcap; ++deg)
    for (int i = 0; i < L.alg().dim(deg); ++i) {
      OmegaOp::Elt e;
      e.c[{deg, i}] = 1;
      const auto l = L.theta2(one, e);
      const auto r = L.theta2(e, one);
      if (l != e || r != e) {
        std::ostringstream os;
        os << "unit law fails at level " << n << " on " << L.alg().label(deg, i)
           << ": left " << omega_show(L, l) << ", right " << omega_show(L, r);
        return os.str();
      }
    }
  return std::nullopt;
}

}  // namespace opforms
