#include "kld/laurent.hpp"

#include <algorithm>
#include <map>

namespace kld {

int64_t checked_add(int64_t a, int64_t b) {
  int64_t r;
  if (__builtin_add_overflow(a, b, &r))
    throw OverflowError("integer overflow in coefficient addition");
  return r;
}

int64_t checked_mul(int64_t a, int64_t b) {
  int64_t r;
  if (__builtin_mul_overflow(a, b, &r))
    throw OverflowError("integer overflow in coefficient multiplication");
  return r;
}

GammaElt GammaElt::single(int64_t v) {
  return from_vector({v});
}

GammaElt GammaElt::from_vector(const std::vector<int64_t>& v) {
  if (v.size() > static_cast<size_t>(kMaxRank))
    throw ConfigError("exponent rank exceeds " + std::to_string(kMaxRank));
  GammaElt g;
  for (size_t i = 0; i < v.size(); ++i) {
    if (v[i] < INT32_MIN || v[i] > INT32_MAX)
      throw OverflowError("exponent coordinate out of range");
    g.coords[i] = static_cast<int32_t>(v[i]);
  }
  return g;
}

bool GammaElt::is_zero() const {
  for (int32_t x : coords)
    if (x != 0) return false;
  return true;
}

GammaElt GammaElt::operator-() const {
  GammaElt g;
  for (int i = 0; i < kMaxRank; ++i) g.coords[i] = -coords[i];
  return g;
}

GammaElt& GammaElt::operator+=(const GammaElt& o) {
  for (int i = 0; i < kMaxRank; ++i) {
    int64_t s = static_cast<int64_t>(coords[i]) + o.coords[i];
    if (s < INT32_MIN || s > INT32_MAX)
      throw OverflowError("exponent coordinate overflow");
    coords[i] = static_cast<int32_t>(s);
  }
  return *this;
}

std::vector<int64_t> GammaElt::to_vector(int rank) const {
  std::vector<int64_t> v(rank);
  for (int i = 0; i < rank; ++i) v[i] = coords[i];
  return v;
}

std::string GammaElt::str(int rank) const {
  if (rank <= 1) return std::to_string(coords[0]);
  std::string s = "(";
  for (int i = 0; i < rank; ++i) {
    if (i) s += ",";
    s += std::to_string(coords[i]);
  }
  return s + ")";
}

LaurentPoly LaurentPoly::constant(int64_t c) {
  return monomial(GammaElt::zero(), c);
}

LaurentPoly LaurentPoly::monomial(const GammaElt& g, int64_t c) {
  LaurentPoly p;
  if (c != 0) p.terms_.push_back({g, c});
  return p;
}

LaurentPoly LaurentPoly::e(int64_t k, int64_t c) {
  return monomial(GammaElt::single(k), c);
}

int64_t LaurentPoly::coeff(const GammaElt& g) const {
  auto it = std::lower_bound(terms_.begin(), terms_.end(), g,
                             [](const Term& t, const GammaElt& x) { return t.first < x; });
  if (it != terms_.end() && it->first == g) return it->second;
  return 0;
}

std::optional<GammaElt> LaurentPoly::degree() const {
  if (terms_.empty()) return std::nullopt;
  return terms_.back().first;
}

std::optional<GammaElt> LaurentPoly::valuation() const {
  if (terms_.empty()) return std::nullopt;
  return terms_.front().first;
}

int64_t LaurentPoly::lead_coeff() const {
  return terms_.empty() ? 0 : terms_.back().second;
}

LaurentPoly LaurentPoly::operator-() const {
  LaurentPoly r = *this;
  for (auto& t : r.terms_) t.second = -t.second;
  return r;
}

LaurentPoly& LaurentPoly::operator+=(const LaurentPoly& o) {
  add_scaled(o, GammaElt::zero(), 1);
  return *this;
}

LaurentPoly& LaurentPoly::operator-=(const LaurentPoly& o) {
  add_scaled(o, GammaElt::zero(), -1);
  return *this;
}

void LaurentPoly::add_scaled(const LaurentPoly& p, const GammaElt& shift, int64_t c) {
  if (c == 0 || p.terms_.empty()) return;
  std::vector<Term> merged;
  merged.reserve(terms_.size() + p.terms_.size());
  size_t i = 0, j = 0;
  const bool noshift = shift.is_zero();
  while (i < terms_.size() || j < p.terms_.size()) {
    if (j == p.terms_.size()) {
      merged.push_back(terms_[i++]);
      continue;
    }
    GammaElt g = noshift ? p.terms_[j].first : p.terms_[j].first + shift;
    if (i == terms_.size() || g < terms_[i].first) {
      merged.push_back({g, checked_mul(c, p.terms_[j].second)});
      ++j;
    } else if (terms_[i].first < g) {
      merged.push_back(terms_[i++]);
    } else {
      int64_t s = checked_add(terms_[i].second, checked_mul(c, p.terms_[j].second));
      if (s != 0) merged.push_back({g, s});
      ++i;
      ++j;
    }
  }
  terms_ = std::move(merged);
}

void LaurentPoly::add_mul(const LaurentPoly& q, const LaurentPoly& p) {
  for (const auto& [g, c] : q.terms()) add_scaled(p, g, c);
}

void LaurentPoly::sub_mul(const LaurentPoly& q, const LaurentPoly& p) {
  for (const auto& [g, c] : q.terms()) add_scaled(p, g, -c);
}

LaurentPoly operator*(const LaurentPoly& a, const LaurentPoly& b) {
  LaurentPoly r;
  if (a.is_zero() || b.is_zero()) return r;
  // accumulate via a map: products are small, clarity wins
  std::map<GammaElt, int64_t> acc;
  for (const auto& [ga, ca] : a.terms())
    for (const auto& [gb, cb] : b.terms()) {
      int64_t& slot = acc[ga + gb];
      slot = checked_add(slot, checked_mul(ca, cb));
    }
  for (const auto& [g, c] : acc)
    if (c != 0) r.terms_.push_back({g, c});
  return r;
}

LaurentPoly LaurentPoly::bar() const {
  LaurentPoly r;
  r.terms_.reserve(terms_.size());
  for (auto it = terms_.rbegin(); it != terms_.rend(); ++it)
    r.terms_.push_back({-it->first, it->second});
  return r;
}

LaurentPoly LaurentPoly::sym_plus() const {
  const GammaElt z = GammaElt::zero();
  LaurentPoly r;
  // mirror of the strictly positive part, in ascending order
  for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
    if (it->first > z) r.terms_.push_back({-it->first, it->second});
  }
  for (const auto& t : terms_) {
    if (t.first >= z) r.terms_.push_back(t);
  }
  return r;
}

std::string LaurentPoly::str(int rank) const {
  if (terms_.empty()) return "0";
  std::string s;
  for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
    const auto& [g, c] = *it;
    const bool neg = c < 0;
    const int64_t abs = neg ? -c : c;
    if (s.empty()) {
      if (neg) s += "-";
    } else {
      s += neg ? " - " : " + ";
    }
    if (g.is_zero()) {
      s += std::to_string(abs);
    } else {
      if (abs != 1) s += std::to_string(abs);
      s += "e[" + g.str(rank) + "]";
    }
  }
  return s;
}

bool is_prime(uint32_t p) {
  if (p < 2) return false;
  for (uint32_t d = 2; d * d <= p; ++d)
    if (p % d == 0) return false;
  return true;
}

ModPPoly reduce_mod_p(const LaurentPoly& a, uint32_t p) {
  if (!is_prime(p)) throw ConfigError("p = " + std::to_string(p) + " is not prime");
  ModPPoly r;
  r.p = p;
  for (const auto& [g, c] : a.terms()) {
    int64_t m = c % static_cast<int64_t>(p);
    if (m < 0) m += p;
    if (m != 0) r.terms.push_back({g, static_cast<uint32_t>(m)});
  }
  return r;
}

ModPPoly multiply(const ModPPoly& a, const ModPPoly& b) {
  if (a.p != b.p) throw ConfigError("modulus mismatch");
  ModPPoly r;
  r.p = a.p;
  std::map<GammaElt, uint64_t> acc;
  for (const auto& [ga, ca] : a.terms)
    for (const auto& [gb, cb] : b.terms)
      acc[ga + gb] = (acc[ga + gb] + static_cast<uint64_t>(ca) * cb) % a.p;
  for (const auto& [g, c] : acc)
    if (c != 0) r.terms.push_back({g, static_cast<uint32_t>(c)});
  return r;
}

std::string ModPPoly::str(int rank) const {
  if (terms.empty()) return "0";
  std::string s;
  for (auto it = terms.rbegin(); it != terms.rend(); ++it) {
    const auto& [g, c] = *it;
    if (!s.empty()) s += " + ";
    if (g.is_zero()) {
      s += std::to_string(c);
    } else {
      if (c != 1) s += std::to_string(c);
      s += "e[" + g.str(rank) + "]";
    }
  }
  return s;
}

}  // namespace kld
