#include "kld/hecke.hpp"

#include <algorithm>

namespace kld {

HeckeElement HeckeElement::basis(int w, LaurentPoly c) {
  HeckeElement e;
  if (!c.is_zero()) e.c_[w] = std::move(c);
  return e;
}

const LaurentPoly* HeckeElement::find(int w) const {
  auto it = c_.find(w);
  return it == c_.end() ? nullptr : &it->second;
}

LaurentPoly HeckeElement::coeff(int w) const {
  const LaurentPoly* p = find(w);
  return p ? *p : LaurentPoly::zero();
}

void HeckeElement::set(int w, LaurentPoly p) {
  if (p.is_zero())
    c_.erase(w);
  else
    c_[w] = std::move(p);
}

void HeckeElement::add(int w, const LaurentPoly& p) {
  if (p.is_zero()) return;
  auto [it, fresh] = c_.try_emplace(w, p);
  if (!fresh) {
    it->second += p;
    if (it->second.is_zero()) c_.erase(it);
  }
}

void HeckeElement::add_scaled(const HeckeElement& o, const LaurentPoly& c) {
  if (c.is_zero()) return;
  for (const auto& [w, p] : o.c_) add(w, p * c);
}

HeckeElement& HeckeElement::operator+=(const HeckeElement& o) {
  for (const auto& [w, p] : o.c_) add(w, p);
  return *this;
}

HeckeElement& HeckeElement::operator-=(const HeckeElement& o) {
  for (const auto& [w, p] : o.c_) add(w, -p);
  return *this;
}

HeckeAlgebra::HeckeAlgebra(const GroupTable& t) : t_(t) {
  xi_.reserve(t.rank());
  for (int s = 0; s < t.rank(); ++s) {
    const GammaElt& phi = t.spec().weights[s];
    xi_.push_back(LaurentPoly::monomial(phi) - LaurentPoly::monomial(-phi));
  }
}

HeckeElement HeckeAlgebra::mul_gen_left(int s, const HeckeElement& a) const {
  HeckeElement out;
  for (const auto& [w, p] : a.coords()) {
    int sw = t_.mul_gen_left(s, w);
    out.add(sw, p);
    if (t_.length(sw) < t_.length(w)) out.add(w, p * xi_[s]);
  }
  return out;
}

HeckeElement HeckeAlgebra::mul_gen_right(const HeckeElement& a, int s) const {
  HeckeElement out;
  for (const auto& [w, p] : a.coords()) {
    int ws = t_.mul_gen_right(w, s);
    out.add(ws, p);
    if (t_.length(ws) < t_.length(w)) out.add(w, p * xi_[s]);
  }
  return out;
}

HeckeElement HeckeAlgebra::mul_basis_left(int w, const HeckeElement& a) const {
  HeckeElement cur = a;
  const auto& word = t_.word(w);
  for (auto it = word.rbegin(); it != word.rend(); ++it) cur = mul_gen_left(*it, cur);
  return cur;
}

HeckeElement HeckeAlgebra::multiply(const HeckeElement& a, const HeckeElement& b) const {
  HeckeElement out;
  for (const auto& [w, p] : a.coords()) out.add_scaled(mul_basis_left(w, b), p);
  return out;
}

HeckeElement HeckeAlgebra::basis_inverse(int w) const {
  {
    std::lock_guard<std::mutex> lock(inv_mutex_);
    auto it = inv_cache_.find(w);
    if (it != inv_cache_.end()) return it->second;
  }
  HeckeElement inv = HeckeElement::unit();
  // T_w = T_{s_1} ... T_{s_k}  =>  T_w^{-1} = T_{s_k}^{-1} ... T_{s_1}^{-1},
  // built by right multiplication with T_s^{-1} = T_s - xi_s.
  const auto& word = t_.word(w);
  for (auto it = word.rbegin(); it != word.rend(); ++it) {
    HeckeElement next = mul_gen_right(inv, *it);
    next.add_scaled(inv, -xi_[*it]);
    inv = std::move(next);
  }
  std::lock_guard<std::mutex> lock(inv_mutex_);
  return inv_cache_.emplace(w, std::move(inv)).first->second;
}

HeckeElement HeckeAlgebra::bar(const HeckeElement& a) const {
  HeckeElement out;
  for (const auto& [w, p] : a.coords())
    out.add_scaled(basis_inverse(t_.inverse(w)), p.bar());
  return out;
}

LaurentPoly HeckeAlgebra::tau(const HeckeElement& a) const { return a.coeff(0); }

KLTable KLTable::compute(const HeckeAlgebra& h) {
  const GroupTable& t = h.group();
  const int n = t.size();
  KLTable kl;
  kl.rows_.resize(n);
  kl.rows_[0] = HeckeElement::unit();

  // elements are numbered by length, so index order is induction order
  for (int w = 1; w < n; ++w) {
    int s = t.first_left_descent(w);
    int sw = t.mul_gen_left(s, w);

    // C_s C_{sw} with C_s = T_s + e^{-phi(s)}
    HeckeElement d = h.mul_gen_left(s, kl.rows_[sw]);
    d.add_scaled(kl.rows_[sw], LaurentPoly::monomial(-t.spec().weights[s]));

    // correct level by level, from length(w)-1 down to 0
    std::vector<std::vector<int>> by_length(t.length(w));
    for (const auto& [y, p] : d.coords())
      if (y != w) {
        if (t.length(y) >= t.length(w))
          throw InternalError("kl basis: unexpected top-length term in C_s C_{sw}");
        by_length[t.length(y)].push_back(y);
      }
    for (int lvl = t.length(w) - 1; lvl >= 0; --lvl) {
      for (int y : by_length[lvl]) {
        const LaurentPoly* cy = d.find(y);
        if (!cy) continue;
        LaurentPoly q = cy->sym_plus();
        if (q.is_zero()) continue;
        for (const auto& [z, pz] : kl.rows_[y].coords()) {
          d.add(z, -(q * pz));
          if (z != y && lvl > 0 && t.length(z) < lvl) {
            auto& bucket = by_length[t.length(z)];
            if (std::find(bucket.begin(), bucket.end(), z) == bucket.end())
              bucket.push_back(z);
          }
        }
      }
    }

    // the defining properties are theorems; failure means a bug
    if (d.coeff(w) != LaurentPoly::constant(1))
      throw InternalError("kl basis: leading coefficient is not 1");
    for (const auto& [y, p] : d.coords()) {
      if (y == w) continue;
      if (!(*p.degree() < GammaElt::zero()))
        throw InternalError("kl basis: coefficient of T_y has degree >= 0");
      if (!t.bruhat_leq(y, w) || t.length(y) >= t.length(w))
        throw InternalError("kl basis: support not below w in bruhat order");
    }
    if (h.bar(d) != d) throw InternalError("kl basis: C_w is not bar-invariant");

    kl.rows_[w] = std::move(d);
  }
  return kl;
}

KLTable KLTable::from_rows(std::vector<HeckeElement> rows) {
  KLTable kl;
  kl.rows_ = std::move(rows);
  return kl;
}

LaurentPoly KLTable::p(int y, int w) const {
  if (y == w) return LaurentPoly::constant(1);
  return rows_[w].coeff(y);
}

KLTable::DeltaN KLTable::delta_n(int w) const {
  LaurentPoly t = rows_[w].coeff(0);
  if (t.is_zero()) throw InternalError("tau(C_w) vanished");
  DeltaN dn;
  dn.delta = -*t.degree();
  dn.n = t.lead_coeff();
  return dn;
}

std::map<int, LaurentPoly> structure_row(const HeckeAlgebra& h, const KLTable& kl, int x,
                                         int y) {
  const GroupTable& t = h.group();
  HeckeElement rem = h.multiply(kl.c(x), kl.c(y));
  std::map<int, LaurentPoly> row;
  // peel off C_z from the top length down; equal lengths do not interact
  while (!rem.is_zero()) {
    int z = -1, zlen = -1;
    for (const auto& [u, p] : rem.coords())
      if (t.length(u) > zlen) {
        z = u;
        zlen = t.length(u);
      }
    LaurentPoly hz = rem.coeff(z);
    rem.add_scaled(kl.c(z), -hz);
    row.emplace(z, std::move(hz));
  }
  return row;
}

}  // namespace kld
