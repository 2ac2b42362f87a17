#pragma once

#include "kld/cells.hpp"
#include "kld/report.hpp"

namespace kld {

// Element of the Brauer quotient of H: coordinates on the G-fixed part of
// the T-basis, mod p. Keys are W element indices.
struct BrauerElement {
  uint32_t p = 2;
  std::map<int, ModPPoly> coords;

  bool is_zero() const { return coords.empty(); }
  bool operator==(const BrauerElement&) const = default;
};

// Projection of a G-fixed element of H: drops the coordinates outside the
// fixed subgroup (orbit sums of nontrivial orbits) and reduces mod p.
// Rejects non-fixed inputs and |G| not a power of p.
BrauerElement brauer_project(const GroupTable& t, const DiagramAutGroup& g,
                             const DescentSystem& d, const HeckeElement& a, uint32_t p);

// The basis-to-basis map from the fixed subsystem algebra: relabels T
// coordinates through the embedding and reduces mod p.
BrauerElement can_g(const DescentSystem& d, const HeckeElement& sub_elt, uint32_t p);

// Multiplicativity of can_g on all basis pairs of the fixed subsystem:
// can_g(T_x T_y) computed in H_G must match the projection of T_x T_y
// computed in H. Zero violations expected.
CheckOutcome verify_morphism(const GroupTable& t, const DiagramAutGroup& g,
                             const DescentSystem& d, uint32_t p);

// Mod-p comparison of the two Kazhdan-Lusztig structures: the p polynomials,
// the structure constants h on fixed triples, tau of the C basis, and the
// leading coefficients gamma.
std::vector<CheckOutcome> compare_kl_mod_p(const GroupTable& t, const KLTable& kl,
                                           const CellData& cd, const DiagramAutGroup& g,
                                           const DescentSystem& d, const KLTable& sub_kl,
                                           const CellData& sub_cd, uint32_t p);

// The ring on basis (t_w) with t_x t_y = sum_z gamma_{x,y,z^{-1}} t_z.
class JRing {
 public:
  JRing(const GroupTable& t, const GammaTable& gamma);

  int size() const { return n_; }
  const std::vector<std::pair<int, int64_t>>& row(int x, int y) const;
  std::map<int, int64_t> multiply(const std::map<int, int64_t>& a,
                                  const std::map<int, int64_t>& b) const;

  // exhaustive below the limit, deterministic sampling above
  CheckOutcome check_associativity(const std::string& name, int exhaustive_limit,
                                   uint64_t seed, int samples) const;

 private:
  int n_ = 0;
  std::map<std::pair<int, int>, std::vector<std::pair<int, int64_t>>> rows_;
  std::vector<std::pair<int, int64_t>> empty_;
};

// Concrete check of the asymptotic-ring descent: gamma is G-equivariant,
// gamma and gamma^G agree mod p on fixed triples, and both rings are
// associative. Refuses (status "skipped") unless the caller attests the
// conjecture suites passed for both instances.
std::vector<CheckOutcome> verify_j_descent(const GroupTable& t, const CellData& cd,
                                           const DiagramAutGroup& g, const DescentSystem& d,
                                           const CellData& sub_cd, uint32_t p,
                                           bool conjectures_verified,
                                           const std::string& hypothesis_note,
                                           uint64_t seed);

}  // namespace kld
