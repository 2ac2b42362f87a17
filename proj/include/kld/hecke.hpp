#pragma once

#include <map>
#include <mutex>
#include <vector>

#include "kld/coxeter.hpp"
#include "kld/laurent.hpp"

namespace kld {

// Sparse element of the Hecke algebra in T-basis coordinates:
// element index -> nonzero Laurent polynomial, ordered by index.
class HeckeElement {
 public:
  using Map = std::map<int, LaurentPoly>;

  HeckeElement() = default;

  static HeckeElement unit() { return basis(0); }
  static HeckeElement basis(int w, LaurentPoly c = LaurentPoly::constant(1));

  bool is_zero() const { return c_.empty(); }
  size_t support_size() const { return c_.size(); }
  const Map& coords() const { return c_; }

  const LaurentPoly* find(int w) const;
  LaurentPoly coeff(int w) const;

  void set(int w, LaurentPoly p);                    // overwrite / erase on zero
  void add(int w, const LaurentPoly& p);             // accumulate
  void add_scaled(const HeckeElement& o, const LaurentPoly& c);
  HeckeElement& operator+=(const HeckeElement& o);
  HeckeElement& operator-=(const HeckeElement& o);

  bool operator==(const HeckeElement&) const = default;

 private:
  Map c_;
};

/*
  The Hecke algebra of an enumerated group with its weight function.
  T-basis products are folded one generator at a time along reduced words,
  using T_s T_w = T_{sw} when the length goes up and
  T_s T_w = T_{sw} + (e^{phi(s)} - e^{-phi(s)}) T_w when it goes down
  (and symmetrically on the right).

  This is a lightweight view over a GroupTable; the only state is a
  mutex-guarded memo of inverted basis elements used by the bar involution.
*/
class HeckeAlgebra {
 public:
  explicit HeckeAlgebra(const GroupTable& t);

  const GroupTable& group() const { return t_; }
  // e^{phi(s)} - e^{-phi(s)}
  const LaurentPoly& xi(int s) const { return xi_[s]; }

  HeckeElement mul_gen_left(int s, const HeckeElement& a) const;
  HeckeElement mul_gen_right(const HeckeElement& a, int s) const;
  HeckeElement mul_basis_left(int w, const HeckeElement& a) const;
  HeckeElement multiply(const HeckeElement& a, const HeckeElement& b) const;

  // T_w^{-1}, memoized per algebra instance
  HeckeElement basis_inverse(int w) const;
  // bar(sum a_w T_w) = sum bar(a_w) T_{w^{-1}}^{-1}
  HeckeElement bar(const HeckeElement& a) const;

  // coefficient of T_1
  LaurentPoly tau(const HeckeElement& a) const;

 private:
  const GroupTable& t_;
  std::vector<LaurentPoly> xi_;
  mutable std::mutex inv_mutex_;
  mutable std::map<int, HeckeElement> inv_cache_;
};

/*
  The Kazhdan-Lusztig basis: for every w the unique bar-invariant
  C_w = T_w + sum_{y<w} p_{y,w} T_y with deg p_{y,w} < 0.

  Computed by induction on length: C_s C_{sw} (s the smallest left descent)
  equals T_w plus lower terms; for each lower y in decreasing length order
  the bar-invariant completion of the current coefficient times C_y is
  subtracted. Bar-invariance and the degree bound are asserted for every row.
*/
class KLTable {
 public:
  static KLTable compute(const HeckeAlgebra& h);
  // adopt stored rows; the caller is responsible for validation
  static KLTable from_rows(std::vector<HeckeElement> rows);

  int size() const { return int(rows_.size()); }
  // C_w in T coordinates (includes the leading coefficient 1 at w)
  const HeckeElement& c(int w) const { return rows_[w]; }
  // p_{y,w}; 1 when y == w, 0 when absent
  LaurentPoly p(int y, int w) const;

  struct DeltaN {
    GammaElt delta;
    int64_t n = 0;
  };
  // Delta(w) = -deg tau(C_w), n_w the coefficient at e^{-Delta(w)}
  DeltaN delta_n(int w) const;

 private:
  std::vector<HeckeElement> rows_;
};

// C_x C_y expanded in the C basis by greedy elimination from the top length
// down; the result maps z -> h_{x,y,z} (nonzero entries only).
std::map<int, LaurentPoly> structure_row(const HeckeAlgebra& h, const KLTable& kl, int x,
                                         int y);

}  // namespace kld
