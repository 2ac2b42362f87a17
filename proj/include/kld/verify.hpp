#pragma once

#include <set>

#include "kld/brauer.hpp"

namespace kld {

// A fully computed instance: enumerated group, KL table, cell data.
struct Instance {
  std::string label;
  GroupTable group;
  KLTable kl;
  CellData cells;

  static Instance compute(const CoxeterSpec& spec, const SweepOptions& opts = {},
                          int cap = GroupTable::kDefaultCap);
  static Instance from_group(GroupTable t, const SweepOptions& opts = {});
};

struct VerifyOptions {
  int threads = 1;
  int p15_limit = 48;    // exhaustive tensor identity up to this group size
  int pair_limit = 400;  // exhaustive pair scans (P4, P9-P11, P14) up to this size
  int bound_limit = 48;  // exhaustive triple scan for the degree bound
  uint64_t seed = 12345;
  int samples = 100000;  // sample count above the pair gate
  bool run_bound_check = false;
};

extern const std::vector<std::string> kAllConjectures;  // "P1".."P15"

struct ConjectureReport {
  std::string instance_label;
  std::vector<CheckOutcome> checks;

  const CheckOutcome* check(const std::string& name) const;
  bool all_pass() const { return all_passed(checks); }
  bool passed(std::initializer_list<const char*> names) const;
};

// Each requested conjecture checked literally by exhaustion (or seeded
// sampling above the pair gate, with the gate recorded in the outcome).
ConjectureReport check_conjectures(const Instance& inst, const std::set<std::string>& which,
                                   const VerifyOptions& opts = {});
ConjectureReport check_all_conjectures(const Instance& inst, const VerifyOptions& opts = {});

// Consequences of P1-P4: gamma_{d,d,d} = n_d = +-1 for every duflo element,
// and gamma_{x,d,x^{-1}} = +-1 for the duflo element attached to x.
std::vector<CheckOutcome> check_lemma_consequences(const Instance& inst);

// The four comparison statements between (W, phi) and (W^G, phi_G), each
// gated on its own conjecture prerequisites for both instances.
struct TheoremAReport {
  std::vector<CheckOutcome> parts;  // named a, b, c, d
  bool all_pass() const { return all_passed(parts); }
};
TheoremAReport check_theorem_a(const Instance& big, const DescentSystem& d,
                               const Instance& sub, const ConjectureReport& big_cj,
                               const ConjectureReport& sub_cj);

// Exploratory-only comparisons of Delta and of the left preorders across the
// descent; never acceptance-gated.
std::vector<CheckOutcome> probe_open_questions(const Instance& big, const DescentSystem& d,
                                               const Instance& sub);

// Whether a report attests the full suite: P1-P14 pass and P15 passes or was
// size-gated. Used as the hypothesis for the asymptotic-ring descent.
bool conjecture_suite_verified(const ConjectureReport& r, std::string* why = nullptr);

}  // namespace kld
