#include "kld/verify.hpp"

#include <algorithm>
#include <random>
#include <thread>

namespace kld {

const std::vector<std::string> kAllConjectures = {"P1",  "P2",  "P3",  "P4",  "P5",
                                                  "P6",  "P7",  "P8",  "P9",  "P10",
                                                  "P11", "P12", "P13", "P14", "P15"};

Instance Instance::compute(const CoxeterSpec& spec, const SweepOptions& opts, int cap) {
  return from_group(GroupTable::enumerate(spec, cap), opts);
}

Instance Instance::from_group(GroupTable t, const SweepOptions& opts) {
  Instance inst;
  inst.label = t.spec().label;
  inst.group = std::move(t);
  HeckeAlgebra h(inst.group);
  inst.kl = KLTable::compute(h);
  inst.cells = compute_cell_data(h, inst.kl, opts);
  return inst;
}

const CheckOutcome* ConjectureReport::check(const std::string& name) const {
  for (const auto& c : checks)
    if (c.name == name) return &c;
  return nullptr;
}

bool ConjectureReport::passed(std::initializer_list<const char*> names) const {
  for (const char* n : names) {
    const CheckOutcome* c = check(n);
    if (!c || !c->passed()) return false;
  }
  return true;
}

namespace {

std::string gstr(const GammaElt& g, const Instance& inst) {
  return g.str(inst.group.spec().gamma_rank);
}

// all (ordered) pairs, or a seeded sample above the gate
template <typename F>
void for_pairs(int n, const VerifyOptions& o, CheckOutcome& c, F&& f) {
  if (n <= o.pair_limit) {
    c.universe = uint64_t(n) * n;
    for (int x = 0; x < n; ++x)
      for (int y = 0; y < n; ++y) f(x, y);
  } else {
    std::mt19937_64 rng(o.seed);
    std::uniform_int_distribution<int> r(0, n - 1);
    c.universe = o.samples;
    c.reason = "sampled: size " + std::to_string(n) + " exceeds pair gate " +
               std::to_string(o.pair_limit);
    for (int i = 0; i < o.samples; ++i) f(r(rng), r(rng));
  }
}

CheckOutcome check_p1(const Instance& inst) {
  CheckOutcome c;
  c.name = "P1";
  const int n = inst.group.size();
  c.universe = n;
  for (int z = 0; z < n; ++z)
    if (inst.cells.delta[z] < inst.cells.a[z]) {
      Witness w;
      w.add("z", z).add("a", gstr(inst.cells.a[z], inst))
          .add("delta", gstr(inst.cells.delta[z], inst));
      c.record(std::move(w));
    }
  c.finish();
  return c;
}

CheckOutcome check_p2(const Instance& inst) {
  CheckOutcome c;
  c.name = "P2";
  c.universe = inst.cells.gamma.size();
  for (const auto& [key, val] : inst.cells.gamma.entries()) {
    auto [x, y, d] = key;
    if (!inst.cells.is_duflo(d)) continue;
    if (x != inst.group.inverse(y)) {
      Witness w;
      w.add("x", x).add("y", y).add("d", d).add("gamma", val);
      c.record(std::move(w));
    }
  }
  c.finish();
  return c;
}

CheckOutcome check_p3(const Instance& inst) {
  CheckOutcome c;
  c.name = "P3";
  const int n = inst.group.size();
  c.universe = n;
  for (int y = 0; y < n; ++y) {
    int count = 0;
    for (int d : inst.cells.duflo)
      if (inst.cells.gamma.get(inst.group.inverse(y), y, d) != 0) ++count;
    if (count != 1) {
      Witness w;
      w.add("y", y).add("duflo_hits", count);
      c.record(std::move(w));
    }
  }
  c.finish();
  return c;
}

CheckOutcome check_p4(const Instance& inst, const VerifyOptions& o) {
  CheckOutcome c;
  c.name = "P4";
  for_pairs(inst.group.size(), o, c, [&](int zp, int z) {
    if (inst.cells.two_sided.leq_elems(zp, z) && inst.cells.a[z] > inst.cells.a[zp]) {
      Witness w;
      w.add("z_prime", zp).add("z", z).add("a_z", gstr(inst.cells.a[z], inst))
          .add("a_z_prime", gstr(inst.cells.a[zp], inst));
      c.record(std::move(w));
    }
  });
  c.finish();
  return c;
}

CheckOutcome check_p5(const Instance& inst) {
  CheckOutcome c;
  c.name = "P5";
  const int n = inst.group.size();
  c.universe = uint64_t(n) * inst.cells.duflo.size();
  for (int y = 0; y < n; ++y)
    for (int d : inst.cells.duflo) {
      int64_t g = inst.cells.gamma.get(inst.group.inverse(y), y, d);
      if (g == 0) continue;
      if (g != inst.cells.n[d] || (g != 1 && g != -1)) {
        Witness w;
        w.add("y", y).add("d", d).add("gamma", g).add("n_d", inst.cells.n[d]);
        c.record(std::move(w));
      }
    }
  c.finish();
  return c;
}

CheckOutcome check_p6(const Instance& inst) {
  CheckOutcome c;
  c.name = "P6";
  c.universe = inst.cells.duflo.size();
  for (int d : inst.cells.duflo)
    if (inst.group.multiply(d, d) != 0) {
      Witness w;
      w.add("d", d);
      c.record(std::move(w));
    }
  c.finish();
  return c;
}

CheckOutcome check_p7(const Instance& inst) {
  CheckOutcome c;
  c.name = "P7";
  c.universe = inst.cells.gamma.size();
  for (const auto& [key, val] : inst.cells.gamma.entries()) {
    auto [x, y, z] = key;
    if (inst.cells.gamma.get(y, z, x) != val) {
      Witness w;
      w.add("x", x).add("y", y).add("z", z).add("gamma_xyz", val)
          .add("gamma_yzx", inst.cells.gamma.get(y, z, x));
      c.record(std::move(w));
    }
  }
  c.finish();
  return c;
}

CheckOutcome check_p8(const Instance& inst) {
  CheckOutcome c;
  c.name = "P8";
  c.universe = inst.cells.gamma.size();
  const auto& left = inst.cells.left;
  const GroupTable& t = inst.group;
  for (const auto& [key, val] : inst.cells.gamma.entries()) {
    auto [x, y, z] = key;
    if (!left.sim(x, t.inverse(y)) || !left.sim(y, t.inverse(z)) ||
        !left.sim(z, t.inverse(x))) {
      Witness w;
      w.add("x", x).add("y", y).add("z", z).add("gamma", val);
      c.record(std::move(w));
    }
  }
  c.finish();
  return c;
}

CheckOutcome check_p9(const Instance& inst, const VerifyOptions& o, CellKind kind,
                      const char* name) {
  CheckOutcome c;
  c.name = name;
  const CellPartition& part = inst.cells.partition(kind);
  for_pairs(inst.group.size(), o, c, [&](int zp, int z) {
    if (part.leq_elems(zp, z) && inst.cells.a[zp] == inst.cells.a[z] && !part.sim(zp, z)) {
      Witness w;
      w.add("z_prime", zp).add("z", z).add("a", gstr(inst.cells.a[z], inst));
      c.record(std::move(w));
    }
  });
  c.finish();
  return c;
}

CheckOutcome check_p12(const Instance& inst, const VerifyOptions& o) {
  CheckOutcome c;
  c.name = "P12";
  const GroupTable& t = inst.group;
  const int r = t.rank();
  c.universe = 0;
  for (uint32_t mask = 0; mask + 1 < (1u << r); ++mask) {  // proper subsets
    std::vector<int> gens;
    for (int s = 0; s < r; ++s)
      if (mask & (1u << s)) gens.push_back(s);
    ParabolicA pa = parabolic_a(t, gens, {.threads = o.threads});
    c.universe += pa.sub.size();
    for (int z = 0; z < pa.sub.size(); ++z)
      if (pa.a[z] != inst.cells.a[pa.embed[z]]) {
        Witness w;
        std::string iset;
        for (int s : gens) iset += (iset.empty() ? "" : ",") + std::to_string(s + 1);
        w.add("I", iset).add("z", pa.embed[z])
            .add("a_I", gstr(pa.a[z], inst)).add("a", gstr(inst.cells.a[pa.embed[z]], inst));
        c.record(std::move(w));
      }
  }
  c.finish();
  return c;
}

CheckOutcome check_p13(const Instance& inst) {
  CheckOutcome c;
  c.name = "P13";
  c.universe = inst.group.size();
  const auto& left = inst.cells.left;
  for (const auto& cell : left.cells) {
    std::vector<int> ds;
    for (int w : cell)
      if (inst.cells.is_duflo(w)) ds.push_back(w);
    if (ds.size() != 1) {
      Witness w;
      w.add("cell_min", cell[0]).add("duflo_count", int64_t(ds.size()));
      c.record(std::move(w));
      continue;
    }
    for (int y : cell)
      if (inst.cells.gamma.get(inst.group.inverse(y), y, ds[0]) == 0) {
        Witness w;
        w.add("y", y).add("d", ds[0]);
        c.record(std::move(w));
      }
  }
  c.finish();
  return c;
}

CheckOutcome check_p14(const Instance& inst) {
  CheckOutcome c;
  c.name = "P14";
  const int n = inst.group.size();
  c.universe = n;
  for (int z = 0; z < n; ++z)
    if (!inst.cells.two_sided.sim(z, inst.group.inverse(z))) {
      Witness w;
      w.add("z", z).add("z_inv", inst.group.inverse(z));
      c.record(std::move(w));
    }
  c.finish();
  return c;
}

// integer tensors over pairs of exponents
using Tensor = std::map<std::pair<GammaElt, GammaElt>, int64_t>;

void tensor_acc(Tensor& t, const LaurentPoly& a, const LaurentPoly& b) {
  for (const auto& [ga, ca] : a.terms())
    for (const auto& [gb, cb] : b.terms()) {
      auto key = std::make_pair(ga, gb);
      int64_t v = checked_add(t.count(key) ? t[key] : 0, checked_mul(ca, cb));
      if (v == 0)
        t.erase(key);
      else
        t[key] = v;
    }
}

const LaurentPoly* row_entry(const std::vector<std::pair<int, LaurentPoly>>& row, int z) {
  auto it = std::lower_bound(row.begin(), row.end(), z,
                             [](const auto& e, int v) { return e.first < v; });
  return it != row.end() && it->first == z ? &it->second : nullptr;
}

CheckOutcome check_p15(const Instance& inst, const VerifyOptions& o) {
  const int n = inst.group.size();
  if (n > o.p15_limit)
    return CheckOutcome::skipped(
        "P15", "size gate: |W| = " + std::to_string(n) + " exceeds exhaustive limit " +
                   std::to_string(o.p15_limit));
  if (!inst.cells.full_h)
    return CheckOutcome::skipped("P15", "full structure constant table not retained");

  const FullHTable& H = *inst.cells.full_h;
  static const std::vector<std::pair<int, LaurentPoly>> kEmpty;
  auto row = [&](int a, int b) -> const std::vector<std::pair<int, LaurentPoly>>& {
    const auto* r = H.row(a, b);
    return r ? *r : kEmpty;
  };

  // group elements by a-value; the identity is quantified over y,w with a(y)=a(w)
  std::map<GammaElt, std::vector<int>> classes;
  for (int z = 0; z < n; ++z) classes[inst.cells.a[z]].push_back(z);

  CheckOutcome c;
  c.name = "P15";
  uint64_t universe = 0;
  for (const auto& [av, cls] : classes) universe += uint64_t(cls.size()) * cls.size();
  universe *= uint64_t(n) * n;
  c.universe = universe;

  const int threads = std::max(1, o.threads);
  std::vector<std::vector<std::array<int, 4>>> bad(threads);  // (w, x', x, y)
  std::vector<std::thread> pool;
  for (int k = 0; k < threads; ++k) {
    pool.emplace_back([&, k] {
      for (int w = k; w < n; w += threads) {
        const auto& wcls = classes.at(inst.cells.a[w]);
        for (int xp = 0; xp < n; ++xp) {
          const auto& row_wxp = row(w, xp);
          for (int x = 0; x < n; ++x) {
            const auto& row_xw = row(x, w);
            for (int y : wcls) {
              Tensor lhs, rhs;
              for (const auto& [yp, h1] : row_wxp)
                if (const LaurentPoly* h2 = row_entry(row(x, yp), y)) tensor_acc(lhs, h1, *h2);
              for (const auto& [yp, h2] : row_xw)
                if (const LaurentPoly* h1 = row_entry(row(yp, xp), y)) tensor_acc(rhs, *h1, h2);
              if (lhs != rhs) bad[k].push_back({w, xp, x, y});
            }
          }
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  std::vector<std::array<int, 4>> merged;
  for (auto& b : bad) merged.insert(merged.end(), b.begin(), b.end());
  std::sort(merged.begin(), merged.end());
  for (const auto& [w, xp, x, y] : merged) {
    Witness wit;
    wit.add("x", x).add("x_prime", xp).add("y", y).add("w", w);
    c.record(std::move(wit));
  }
  c.finish();
  return c;
}

// max_{x,y,z} deg tau(T_x T_y T_z) against the weight of the longest element
CheckOutcome check_bounded(const Instance& inst, const VerifyOptions& o) {
  const GroupTable& t = inst.group;
  const int n = t.size();
  if (n > o.bound_limit)
    return CheckOutcome::skipped("boundedness", "size gate: |W| = " + std::to_string(n) +
                                                    " exceeds exhaustive limit " +
                                                    std::to_string(o.bound_limit));
  HeckeAlgebra h(t);
  // rows[x][y] = T_x T_y, built along last letters
  std::vector<std::vector<HeckeElement>> rows(n, std::vector<HeckeElement>(n));
  for (int x = 0; x < n; ++x) {
    rows[x][0] = HeckeElement::basis(x);
    for (int y = 1; y < n; ++y) {
      int s = t.word(y).back();
      rows[x][y] = h.mul_gen_right(rows[x][t.mul_gen_right(y, s)], s);
    }
  }
  CheckOutcome c;
  c.name = "boundedness";
  c.universe = uint64_t(n) * n * n;
  const GammaElt bound = t.weight(n - 1);
  GammaElt observed;
  bool seen = false;
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y)
      for (int z = 0; z < n; ++z) {
        LaurentPoly tau;
        for (const auto& [u, p] : rows[x][y].coords())
          tau.add_mul(p, rows[u][z].coeff(0));
        auto deg = tau.degree();
        if (!deg) continue;
        if (!seen || observed < *deg) {
          observed = *deg;
          seen = true;
        }
        if (bound < *deg) {
          Witness w;
          w.add("x", x).add("y", y).add("z", z).add("deg", gstr(*deg, inst));
          c.record(std::move(w));
        }
      }
  c.reason = "observed gamma_0 = " + gstr(observed, inst) +
             ", weight of longest element = " + gstr(bound, inst);
  c.finish();
  return c;
}

}  // namespace

ConjectureReport check_conjectures(const Instance& inst, const std::set<std::string>& which,
                                   const VerifyOptions& opts) {
  ConjectureReport r;
  r.instance_label = inst.label;
  auto want = [&](const char* n) { return which.count(n) > 0; };

  if (want("P1")) r.checks.push_back(check_p1(inst));
  if (want("P2")) r.checks.push_back(check_p2(inst));
  if (want("P3")) r.checks.push_back(check_p3(inst));
  if (want("P4")) r.checks.push_back(check_p4(inst, opts));
  if (want("P5")) r.checks.push_back(check_p5(inst));
  if (want("P6")) r.checks.push_back(check_p6(inst));
  if (want("P7")) r.checks.push_back(check_p7(inst));
  if (want("P8")) r.checks.push_back(check_p8(inst));
  if (want("P9")) r.checks.push_back(check_p9(inst, opts, CellKind::Left, "P9"));
  if (want("P10")) r.checks.push_back(check_p9(inst, opts, CellKind::Right, "P10"));
  if (want("P11")) r.checks.push_back(check_p9(inst, opts, CellKind::TwoSided, "P11"));
  if (want("P12")) r.checks.push_back(check_p12(inst, opts));
  if (want("P13")) r.checks.push_back(check_p13(inst));
  if (want("P14")) r.checks.push_back(check_p14(inst));
  if (want("P15")) r.checks.push_back(check_p15(inst, opts));
  if (opts.run_bound_check) r.checks.push_back(check_bounded(inst, opts));
  return r;
}

ConjectureReport check_all_conjectures(const Instance& inst, const VerifyOptions& opts) {
  return check_conjectures(
      inst, std::set<std::string>(kAllConjectures.begin(), kAllConjectures.end()), opts);
}

std::vector<CheckOutcome> check_lemma_consequences(const Instance& inst) {
  std::vector<CheckOutcome> out;
  const GroupTable& t = inst.group;
  {
    CheckOutcome c;
    c.name = "gamma_ddd";
    c.universe = inst.cells.duflo.size();
    for (int d : inst.cells.duflo) {
      int64_t g = inst.cells.gamma.get(d, d, d);
      if (g != inst.cells.n[d] || (g != 1 && g != -1)) {
        Witness w;
        w.add("d", d).add("gamma", g).add("n_d", inst.cells.n[d]);
        c.record(std::move(w));
      }
    }
    c.finish();
    out.push_back(std::move(c));
  }
  {
    CheckOutcome c;
    c.name = "gamma_xdx";
    c.universe = t.size();
    for (int x = 0; x < t.size(); ++x) {
      int attached = -1;
      for (int d : inst.cells.duflo)
        if (inst.cells.gamma.get(t.inverse(x), x, d) != 0) {
          attached = d;
          break;
        }
      if (attached < 0) {
        Witness w;
        w.add("x", x).add("error", "no attached duflo element");
        c.record(std::move(w));
        continue;
      }
      int64_t g = inst.cells.gamma.get(x, attached, t.inverse(x));
      if (g != 1 && g != -1) {
        Witness w;
        w.add("x", x).add("d", attached).add("gamma", g);
        c.record(std::move(w));
      }
    }
    c.finish();
    out.push_back(std::move(c));
  }
  return out;
}

TheoremAReport check_theorem_a(const Instance& big, const DescentSystem& d,
                               const Instance& sub, const ConjectureReport& big_cj,
                               const ConjectureReport& sub_cj) {
  TheoremAReport rep;
  const int m = d.sub.size();

  auto prereq = [&](std::initializer_list<const char*> names, std::string* why) {
    for (const char* n : names) {
      const CheckOutcome* cb = big_cj.check(n);
      const CheckOutcome* cs = sub_cj.check(n);
      if (!cb || !cb->passed()) {
        *why = std::string(n) + " not verified for " + big.label;
        return false;
      }
      if (!cs || !cs->passed()) {
        *why = std::string(n) + " not verified for " + sub.label;
        return false;
      }
    }
    return true;
  };

  std::string why;
  if (!prereq({"P1", "P2", "P3", "P4"}, &why)) {
    for (const char* n : {"a", "b", "c", "d"})
      rep.parts.push_back(CheckOutcome::skipped(n, why));
    return rep;
  }

  {
    CheckOutcome c;
    c.name = "a";
    c.universe = m;
    for (int x = 0; x < m; ++x)
      if (sub.cells.a[x] != big.cells.a[d.embed[x]]) {
        Witness w;
        w.add("x", x).add("a_G", gstr(sub.cells.a[x], sub))
            .add("a", gstr(big.cells.a[d.embed[x]], big));
        c.record(std::move(w));
      }
    c.finish();
    rep.parts.push_back(std::move(c));
  }
  {
    CheckOutcome c;
    c.name = "b";
    c.universe = m;
    for (int x = 0; x < m; ++x)
      if (sub.cells.is_duflo(x) != big.cells.is_duflo(d.embed[x])) {
        Witness w;
        w.add("x", x).add("duflo_G", int64_t(sub.cells.is_duflo(x)))
            .add("duflo", int64_t(big.cells.is_duflo(d.embed[x])));
        c.record(std::move(w));
      }
    c.finish();
    rep.parts.push_back(std::move(c));
  }

  if (!prereq({"P13"}, &why)) {
    rep.parts.push_back(CheckOutcome::skipped("c", why));
  } else {
    CheckOutcome c;
    c.name = "c";
    c.universe = 2 * uint64_t(m) * m;
    for (int x = 0; x < m; ++x)
      for (int y = 0; y < m; ++y) {
        if (sub.cells.left.sim(x, y) != big.cells.left.sim(d.embed[x], d.embed[y])) {
          Witness w;
          w.add("kind", "L").add("x", x).add("y", y);
          c.record(std::move(w));
        }
        if (sub.cells.right.sim(x, y) != big.cells.right.sim(d.embed[x], d.embed[y])) {
          Witness w;
          w.add("kind", "R").add("x", x).add("y", y);
          c.record(std::move(w));
        }
      }
    c.finish();
    rep.parts.push_back(std::move(c));
  }

  if (!prereq({"P9", "P13"}, &why)) {
    rep.parts.push_back(CheckOutcome::skipped("d", why));
  } else {
    CheckOutcome c;
    c.name = "d";
    c.universe = uint64_t(m) * m;
    for (int x = 0; x < m; ++x)
      for (int y = 0; y < m; ++y)
        if (sub.cells.two_sided.sim(x, y) !=
            big.cells.two_sided.sim(d.embed[x], d.embed[y])) {
          Witness w;
          w.add("x", x).add("y", y);
          c.record(std::move(w));
        }
    c.finish();
    rep.parts.push_back(std::move(c));
  }
  return rep;
}

std::vector<CheckOutcome> probe_open_questions(const Instance& big, const DescentSystem& d,
                                               const Instance& sub) {
  std::vector<CheckOutcome> out;
  const int m = d.sub.size();
  {
    CheckOutcome c;
    c.name = "open_delta_monotone";
    c.reason = "exploratory";
    c.universe = m;
    for (int z = 0; z < m; ++z)
      if (sub.cells.delta[z] < big.cells.delta[d.embed[z]]) {
        Witness w;
        w.add("z", z).add("delta", gstr(big.cells.delta[d.embed[z]], big))
            .add("delta_G", gstr(sub.cells.delta[z], sub));
        c.record(std::move(w));
      }
    c.finish();
    out.push_back(std::move(c));
  }
  {
    CheckOutcome c;
    c.name = "open_leq_L_transfer";
    c.reason = "exploratory";
    c.universe = uint64_t(m) * m;
    for (int x = 0; x < m; ++x)
      for (int y = 0; y < m; ++y)
        if (sub.cells.left.leq_elems(x, y) &&
            !big.cells.left.leq_elems(d.embed[x], d.embed[y])) {
          Witness w;
          w.add("x", x).add("y", y);
          c.record(std::move(w));
        }
    c.finish();
    out.push_back(std::move(c));
  }
  return out;
}

bool conjecture_suite_verified(const ConjectureReport& r, std::string* why) {
  for (const auto& name : kAllConjectures) {
    const CheckOutcome* c = r.check(name);
    if (!c) {
      if (why) *why = name + " was not checked for " + r.instance_label;
      return false;
    }
    if (c->failed()) {
      if (why) *why = name + " failed for " + r.instance_label;
      return false;
    }
    if (c->status == "skipped" && name != "P15") {
      if (why) *why = name + " skipped for " + r.instance_label;
      return false;
    }
  }
  return true;
}

}  // namespace kld
