#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "opforms/perm.hpp"

namespace opforms {

// basis element address inside an operad: arity, cochain degree (<= 0), index
struct OpKey {
  int arity = 0;
  int deg = 0;
  int idx = 0;
};

// integer-coefficient term over a basis; fields reduce the coefficient later
struct OpTerm {
  int idx = 0;
  long long c = 0;
};

// A dg-operad with integral structure constants, truncated to finite arity
// and bar-depth caps.  Degrees are cochain degrees, so components live in
// degrees -depth_cap()..0 and the differential raises degree by one.
class Operad {
 public:
  virtual ~Operad() = default;
  virtual std::string name() const = 0;
  virtual int arity_cap() const = 0;
  virtual int depth_cap() const = 0;
  virtual int dim(int arity, int deg) const = 0;
  // d: (arity, deg) -> (arity, deg+1)
  virtual std::vector<OpTerm> diff(int arity, int deg, int idx) const = 0;
  // free right action of the symmetric group on each component
  virtual std::vector<OpTerm> act(int arity, int deg, int idx, const Perm& s) const = 0;
  // gamma(xi; args): xi has arity args.size(); result arity = sum of arg
  // arities, result degree = deg0 + sum of arg degrees
  virtual std::vector<OpTerm> compose(int deg0, int idx0, const std::vector<OpKey>& args) const = 0;
  // augmentation to the one-dimensional arity components of Com
  virtual long long augment(int arity, int deg, int idx) const = 0;
  // index of the distinguished degree-0 section 1_n with augment = 1
  virtual int section_index(int arity) const = 0;
  virtual std::string label(int arity, int deg, int idx) const;
};

// Com: every arity is R concentrated in degree 0, trivial action
class ComOperad : public Operad {
 public:
  explicit ComOperad(int arity_cap = 16) : cap_(arity_cap) {}
  std::string name() const override { return "Com"; }
  int arity_cap() const override { return cap_; }
  int depth_cap() const override { return 0; }
  int dim(int arity, int deg) const override;
  std::vector<OpTerm> diff(int, int, int) const override { return {}; }
  std::vector<OpTerm> act(int, int, int, const Perm&) const override;
  std::vector<OpTerm> compose(int deg0, int idx0, const std::vector<OpKey>& args) const override;
  long long augment(int arity, int deg, int idx) const override;
  int section_index(int) const override { return 0; }

 private:
  int cap_;
};

// I: R in arities 0 and 1, zero elsewhere
class UnitOperad : public Operad {
 public:
  std::string name() const override { return "I"; }
  int arity_cap() const override { return 16; }
  int depth_cap() const override { return 0; }
  int dim(int arity, int deg) const override;
  std::vector<OpTerm> diff(int, int, int) const override { return {}; }
  std::vector<OpTerm> act(int, int, int, const Perm&) const override;
  std::vector<OpTerm> compose(int deg0, int idx0, const std::vector<OpKey>& args) const override;
  long long augment(int arity, int deg, int idx) const override;
  int section_index(int arity) const override;
};

// Acyclic bar resolutions of the symmetric groups, assembled into an operad.
// Degree -k basis of arity n: normalized words [g_1|..|g_k].g with g_i != e,
// freely spanned over the right translation action of the symmetric group.
// Composition is the shuffle (Eilenberg-Zilber) product applied levelwise
// through the permutation operad in homogeneous coordinates.
class BarOperad : public Operad {
 public:
  BarOperad(int arity_cap, int depth_cap);
  std::string name() const override { return "BarSym"; }
  int arity_cap() const override { return acap_; }
  int depth_cap() const override { return dcap_; }
  int dim(int arity, int deg) const override;
  std::vector<OpTerm> diff(int arity, int deg, int idx) const override;
  std::vector<OpTerm> act(int arity, int deg, int idx, const Perm& s) const override;
  std::vector<OpTerm> compose(int deg0, int idx0, const std::vector<OpKey>& args) const override;
  long long augment(int arity, int deg, int idx) const override;
  int section_index(int) const override { return 0; }
  std::string label(int arity, int deg, int idx) const override;

  // a word: letters are ranks of non-identity permutations, carrier a rank
  struct Word {
    std::vector<int> letters;
    int carrier = 0;
  };
  Word decode(int arity, int deg, int idx) const;
  int encode(int arity, const Word& w) const;
  const Perm& perm_of(int arity, int rank) const { return perms_[arity][rank]; }
  int group_order(int arity) const { return static_cast<int>(perms_[arity].size()); }

 private:
  int acap_, dcap_;
  std::vector<std::vector<Perm>> perms_;             // perms_[n] in lex order
  std::vector<std::vector<std::vector<int>>> mul_;   // mul_[n][a][b] = rank(ab)
  std::vector<std::vector<int>> inv_;                // inv_[n][a]
  void require(int arity, int deg) const;
};

struct AxiomReport {
  bool ok = true;
  std::string message;  // locates the first failing identity and witness
};

// Mechanical check of the dg-operad axioms on basis elements within the
// given arity/degree caps: action group law, units, chain-map gamma,
// associativity with Koszul signs, both equivariance laws, and compatibility
// of the augmentation.  Large components are sampled deterministically.
AxiomReport operad_axiom_check(const Operad& O, int max_arity, int max_depth,
                               long long budget = 2000000);

inline ComOperad com_operad(int arity_cap = 16) { return ComOperad(arity_cap); }
inline BarOperad bar_resolution_operad(int arity_cap, int depth) {
  return BarOperad(arity_cap, depth);
}

// As: arity n is the group algebra of the symmetric group in degree 0, the
// depth-zero slice of the bar resolution.  Free algebras over it are
// associative but not commutative.
class AsOperad : public BarOperad {
 public:
  explicit AsOperad(int arity_cap) : BarOperad(arity_cap, 0) {}
  std::string name() const override { return "As"; }
};

// ---------------------------------------------------------------------------
// Free algebra on graded generators, truncated by weight and a degree window.
// Basis: canonical representatives of coinvariants O(p) (x) M^{tensor p},
// lexicographically least in (operad index, letter word) over the diagonal
// action.  Works for operads whose symmetric action is monomial on the basis.

struct FreeAlgebraMono {
  int weight = 0;  // p
  int odeg = 0;
  int oidx = 0;
  std::vector<int> word;  // generator indices, length p
  int deg = 0;
};

class FreeAlgebraTruncation {
 public:
  // gen_degrees: degree of each generator; gen_diff[i] = terms of d(gen_i)
  // as (generator, coefficient) pairs one degree higher (empty if closed).
  // field_char matters for coinvariants: over characteristic 2 Koszul signs
  // vanish and sign-trivialized orbits survive (divided powers)
  FreeAlgebraTruncation(const Operad& O, std::vector<int> gen_degrees,
                        std::vector<std::vector<std::pair<int, long long>>> gen_diff,
                        int weight_cap, int deg_min, int deg_max, int field_char);

  int weight_cap() const { return wcap_; }
  int deg_min() const { return dmin_; }
  int deg_max() const { return dmax_; }
  int dim(int deg) const;
  const FreeAlgebraMono& basis(int deg, int i) const;
  std::string label(int deg, int i) const;

  // canonical form of an arbitrary pair; coefficient may pick up a sign or
  // vanish (sign-trivialized orbits); returns false if the element escapes
  // the truncation window (escape flagged, never silently dropped)
  struct Reduced {
    bool in_window = true;
    int deg = 0;
    std::vector<std::pair<int, long long>> terms;  // indices into basis(deg)
  };
  Reduced reduce(int p, int odeg, int oidx, const std::vector<int>& word,
                 long long coeff) const;

  // d on a basis element; escapes flagged via Reduced::in_window
  Reduced differential(int deg, int i) const;

  // theta_2-style evaluation: gamma on the operad parts, concatenation on the
  // words, with the Koszul interchange sign
  Reduced theta(int deg0, int oidx0, const std::vector<std::pair<int, int>>& factors) const;
  // factors: list of (deg, basis index) of algebra elements; deg0/oidx0
  // address an operad element of arity = factors.size() and degree deg0

  const Operad& operad() const { return O_; }
  int generator_degree(int g) const { return gdeg_[g]; }

 private:
  const Operad& O_;
  std::vector<int> gdeg_;
  std::vector<std::vector<std::pair<int, long long>>> gdiff_;
  int wcap_, dmin_, dmax_, char_;
  std::map<int, std::vector<FreeAlgebraMono>> basis_;
  std::map<int, std::map<std::pair<std::pair<int, int>, std::vector<int>>, int>> index_;
  int mono_degree(int odeg, const std::vector<int>& word) const;
  // canonical orbit representative; returns (odeg, oidx, word, sign) with
  // sign 0 when the orbit is sign-trivialized
  void canonicalize(int p, int odeg, int& oidx, std::vector<int>& word, long long& sign) const;
};

}  // namespace opforms
