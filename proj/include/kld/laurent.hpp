#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "kld/errors.hpp"

namespace kld {

int64_t checked_add(int64_t a, int64_t b);
int64_t checked_mul(int64_t a, int64_t b);

// Exponent group: Z^r with the lexicographic total order. Coordinates past
// the session rank r stay zero, so arithmetic and comparisons never need to
// know r; only parsing and printing do.
inline constexpr int kMaxRank = 8;

struct GammaElt {
  std::array<int32_t, kMaxRank> coords{};

  GammaElt() = default;

  static GammaElt zero() { return GammaElt{}; }
  static GammaElt single(int64_t v);
  // Validates length <= kMaxRank and that each entry fits in 32 bits.
  static GammaElt from_vector(const std::vector<int64_t>& v);

  bool is_zero() const;
  GammaElt operator-() const;
  GammaElt& operator+=(const GammaElt& o);
  friend GammaElt operator+(GammaElt a, const GammaElt& b) { return a += b; }
  friend GammaElt operator-(GammaElt a, const GammaElt& b) { return a += -b; }

  auto operator<=>(const GammaElt&) const = default;

  std::vector<int64_t> to_vector(int rank) const;
  // "3" for rank 1, "(1,0)" otherwise.
  std::string str(int rank = 1) const;
};

// Reduction of a Laurent polynomial mod p: coefficients in {1,...,p-1},
// same sparse ordered-term representation as LaurentPoly.
struct ModPPoly {
  uint32_t p = 2;
  std::vector<std::pair<GammaElt, uint32_t>> terms;  // ascending exponents

  bool is_zero() const { return terms.empty(); }
  bool operator==(const ModPPoly&) const = default;
  std::string str(int rank = 1) const;
};

ModPPoly multiply(const ModPPoly& a, const ModPPoly& b);

// Element of Z[Z^r]: sparse map exponent -> nonzero coefficient, stored as a
// vector of terms in increasing lexicographic exponent order. Coefficients
// are checked 64-bit integers; any overflow throws rather than wrapping.
class LaurentPoly {
 public:
  using Term = std::pair<GammaElt, int64_t>;

  LaurentPoly() = default;

  static LaurentPoly zero() { return LaurentPoly{}; }
  static LaurentPoly constant(int64_t c);
  static LaurentPoly monomial(const GammaElt& g, int64_t c = 1);
  // e^k in rank-1 exponents; the workhorse for tests.
  static LaurentPoly e(int64_t k, int64_t c = 1);

  bool is_zero() const { return terms_.empty(); }
  size_t term_count() const { return terms_.size(); }
  const std::vector<Term>& terms() const { return terms_; }

  int64_t coeff(const GammaElt& g) const;
  // nullopt encodes deg 0 = -infinity (resp. val 0 = +infinity).
  std::optional<GammaElt> degree() const;
  std::optional<GammaElt> valuation() const;
  int64_t lead_coeff() const;  // coefficient at degree(); 0 for the zero poly

  LaurentPoly operator-() const;
  LaurentPoly& operator+=(const LaurentPoly& o);
  LaurentPoly& operator-=(const LaurentPoly& o);
  friend LaurentPoly operator+(LaurentPoly a, const LaurentPoly& b) { return a += b; }
  friend LaurentPoly operator-(LaurentPoly a, const LaurentPoly& b) { return a -= b; }
  friend LaurentPoly operator*(const LaurentPoly& a, const LaurentPoly& b);

  // this += c * e^shift * p; the single operation all inner loops use.
  void add_scaled(const LaurentPoly& p, const GammaElt& shift, int64_t c);
  // this += q * p and this -= q * p (term-by-term over q).
  void add_mul(const LaurentPoly& q, const LaurentPoly& p);
  void sub_mul(const LaurentPoly& q, const LaurentPoly& p);

  // Exponent negation e^g -> e^{-g}; a ring involution.
  LaurentPoly bar() const;
  // The bar-invariant polynomial with the same coefficients in degrees >= 0:
  // sum_{g>0} a_g (e^g + e^{-g}) + a_0. (result - *this) has degree < 0.
  LaurentPoly sym_plus() const;

  bool operator==(const LaurentPoly&) const = default;

  // Canonical text form, terms by decreasing exponent: "e[2] - 2 + e[-2]".
  std::string str(int rank = 1) const;

 private:
  std::vector<Term> terms_;
};

bool is_prime(uint32_t p);
// Coefficientwise reduction; rejects non-prime p.
ModPPoly reduce_mod_p(const LaurentPoly& a, uint32_t p);

}  // namespace kld
