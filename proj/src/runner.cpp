#include "kld/runner.hpp"

#include <fstream>
#include <functional>
#include <thread>

namespace kld {

using nlohmann::json;

const std::set<std::string> kAllTasks = {"enumerate", "kl",        "cells", "conjectures",
                                         "brauer",    "theorem_a", "probe"};

namespace {

GammaElt weight_from_json(const json& w, int gamma_rank) {
  std::vector<int64_t> v;
  if (w.is_number_integer())
    v.push_back(w.get<int64_t>());
  else
    for (const auto& x : w) v.push_back(x.get<int64_t>());
  if (int(v.size()) > gamma_rank)
    throw ConfigError("weight vector longer than gamma_rank");
  return GammaElt::from_vector(v);
}

}  // namespace

RunConfig RunConfig::from_json(const json& j) {
  RunConfig cfg;

  if (j.contains("type")) {
    const auto& t = j.at("type");
    if (t.is_string()) {
      cfg.spec = CoxeterSpec::from_type(t.get<std::string>());
    } else if (t.is_object() && t.contains("matrix")) {
      cfg.spec.matrix = t.at("matrix").get<std::vector<std::vector<int>>>();
      cfg.spec.rank = int(cfg.spec.matrix.size());
      cfg.spec.label = "custom";
      cfg.spec.weights.assign(cfg.spec.rank, GammaElt::single(1));
    } else {
      throw ConfigError("field 'type' must be a name or {\"matrix\": [[...]]}");
    }
  } else if (j.contains("matrix")) {
    cfg.spec.matrix = j.at("matrix").get<std::vector<std::vector<int>>>();
    cfg.spec.rank = int(cfg.spec.matrix.size());
    cfg.spec.label = "custom";
    cfg.spec.weights.assign(cfg.spec.rank, GammaElt::single(1));
  } else {
    throw ConfigError("config needs a 'type' (or 'matrix') field");
  }

  if (j.contains("gamma_rank")) cfg.spec.gamma_rank = j.at("gamma_rank").get<int>();
  if (j.contains("weights")) {
    cfg.spec.weights.clear();
    for (const auto& w : j.at("weights"))
      cfg.spec.weights.push_back(weight_from_json(w, cfg.spec.gamma_rank));
  }
  if (j.contains("automorphisms")) {
    for (const auto& perm : j.at("automorphisms")) {
      std::vector<int> p;
      for (const auto& v : perm) {
        int x = v.get<int>();
        if (x < 1 || x > cfg.spec.rank)
          throw ConfigError("automorphism entries are 1-based generator indices");
        p.push_back(x - 1);
      }
      cfg.automorphisms.push_back(std::move(p));
    }
  }
  if (j.contains("p")) cfg.p = j.at("p").get<uint32_t>();
  if (j.contains("tasks")) {
    cfg.tasks.clear();
    for (const auto& t : j.at("tasks")) cfg.tasks.insert(t.get<std::string>());
  }
  if (j.contains("out_dir")) cfg.out_dir = j.at("out_dir").get<std::string>();
  if (j.contains("cache_dir")) cfg.cache_dir = j.at("cache_dir").get<std::string>();
  if (j.contains("formats")) {
    cfg.formats.clear();
    for (const auto& f : j.at("formats")) cfg.formats.insert(f.get<std::string>());
  }
  if (j.contains("force")) cfg.force = j.at("force").get<bool>();
  if (j.contains("bound_check")) cfg.bound_check = j.at("bound_check").get<bool>();
  if (j.contains("all_subgroups")) cfg.all_subgroups = j.at("all_subgroups").get<bool>();
  if (j.contains("seed")) cfg.seed = j.at("seed").get<uint64_t>();
  if (j.contains("jobs")) cfg.jobs = j.at("jobs").get<int>();
  if (j.contains("cap")) cfg.cap = j.at("cap").get<int>();
  if (j.contains("sweep_gate")) cfg.sweep_gate = j.at("sweep_gate").get<int>();
  return cfg;
}

RunConfig RunConfig::from_file(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw ConfigError("cannot open config file " + file.string());
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ConfigError("config file " + file.string() + " is not valid JSON: " + e.what());
  }
  return from_json(j);
}

void RunConfig::validate() const {
  if (spec.rank < 1) throw ConfigError("field 'type': group rank must be at least 1");
  spec.validate();
  spec.validate_weight_consistency();
  if (p && !is_prime(*p)) throw ConfigError("field 'p': " + std::to_string(*p) + " is not prime");
  for (const auto& t : tasks)
    if (!kAllTasks.count(t)) throw ConfigError("field 'tasks': unknown task '" + t + "'");
  for (const auto& f : formats)
    if (f != "json" && f != "csv" && f != "dot")
      throw ConfigError("field 'formats': unknown format '" + f + "'");
  const std::set<std::string> need_aut = {"brauer", "theorem_a", "probe"};
  for (const auto& t : tasks)
    if (need_aut.count(t) && automorphisms.empty())
      throw ConfigError("task '" + t + "' needs the 'automorphisms' field");
  if (tasks.count("brauer") && !p)
    throw ConfigError("task 'brauer' needs the prime field 'p'");
  if (cap < 1) throw ConfigError("field 'cap' must be positive");
}

std::set<std::string> RunConfig::resolved_tasks() const {
  std::set<std::string> r = tasks;
  if (r.count("brauer") || r.count("theorem_a")) r.insert("conjectures");
  if (r.count("conjectures") || r.count("probe")) r.insert("cells");
  if (r.count("cells")) r.insert("kl");
  r.insert("enumerate");
  return r;
}

namespace {

struct Emitter {
  const RunConfig& cfg;
  RunResult& result;

  void write(const std::string& name, const std::string& payload, const std::string& kind) {
    if (!cfg.formats.count(kind)) return;
    std::filesystem::create_directories(cfg.out_dir);
    std::ofstream out(cfg.out_dir / name, std::ios::binary);
    out << payload;
    result.files.push_back(name);
  }
  void write_json(const std::string& name, const json& j) { write(name, j.dump(2) + "\n", "json"); }
};

json witness_json(const Witness& w) {
  json o = json::object();
  for (const auto& [k, v] : w.fields) o[k] = v;
  return o;
}

json outcome_json(const CheckOutcome& c) {
  json o{{"name", c.name},
         {"status", c.status},
         {"universe", c.universe},
         {"violations", c.violations},
         {"witnesses", json::array()}};
  if (!c.reason.empty()) o["reason"] = c.reason;
  for (const auto& w : c.witnesses) o["witnesses"].push_back(witness_json(w));
  return o;
}

json outcomes_json(const std::vector<CheckOutcome>& cs) {
  json a = json::array();
  for (const auto& c : cs) a.push_back(outcome_json(c));
  return a;
}

json automorphism_json(const std::vector<std::vector<int>>& perms) {
  auto one = [](const std::vector<int>& p) {
    json a = json::array();
    for (int v : p) a.push_back(v + 1);
    return a;
  };
  if (perms.size() == 1) return one(perms[0]);
  json a = json::array();
  for (const auto& p : perms) a.push_back(one(p));
  return a;
}

json instance_json(const Instance& inst, const RunConfig& cfg) {
  const CoxeterSpec& s = inst.group.spec();
  json weights = json::array();
  for (const auto& w : s.weights) weights.push_back(gamma_to_json(w, s.gamma_rank));
  return json{{"label", inst.label},
              {"size", inst.group.size()},
              {"rank", s.rank},
              {"matrix", s.matrix},
              {"weights", weights},
              {"gamma_rank", s.gamma_rank},
              {"seed", cfg.seed}};
}

std::string csv_escape_word(const GroupTable& t, int w) {
  std::string s;
  for (int g : t.word(w)) {
    if (!s.empty() && t.rank() > 9) s += ".";
    s += std::to_string(g + 1);
  }
  return s.empty() ? "e" : s;
}

std::string elements_csv(const Instance& inst, bool with_cells) {
  const GroupTable& t = inst.group;
  const int rank = t.spec().gamma_rank;
  std::string out = "index,word,length,weight";
  if (with_cells) out += ",a,delta,n,duflo,cell_L,cell_R,cell_LR";
  out += "\n";
  for (int w = 0; w < t.size(); ++w) {
    out += std::to_string(w) + "," + csv_escape_word(t, w) + "," +
           std::to_string(t.length(w)) + "," + t.weight(w).str(rank);
    if (with_cells) {
      const CellData& cd = inst.cells;
      out += "," + cd.a[w].str(rank) + "," + cd.delta[w].str(rank) + "," +
             std::to_string(cd.n[w]) + "," + (cd.is_duflo(w) ? "1" : "0") + "," +
             std::to_string(cd.left.cell_of[w]) + "," + std::to_string(cd.right.cell_of[w]) +
             "," + std::to_string(cd.two_sided.cell_of[w]);
    }
    out += "\n";
  }
  return out;
}

json partition_json(const CellPartition& p, const std::string& kind) {
  json order = json::array();
  for (auto [from, to] : p.dag_edges) order.push_back({from, to});
  return json{{"kind", kind}, {"cells", p.cells}, {"order_edges", order}};
}

std::string partition_dot(const CellPartition& p, const std::string& kind) {
  std::string s = "digraph cells_" + kind + " {\n";
  for (size_t c = 0; c < p.cells.size(); ++c)
    s += "  c" + std::to_string(c) + " [label=\"" + kind + std::to_string(c) + " (size " +
         std::to_string(p.cells[c].size()) + ")\"];\n";
  for (auto [from, to] : p.dag_edges)
    s += "  c" + std::to_string(from) + " -> c" + std::to_string(to) + ";\n";
  s += "}\n";
  return s;
}

Instance build_instance(const CoxeterSpec& spec, const RunConfig& cfg,
                        const CacheStore& cache, bool need_cells, bool keep_full,
                        RunResult& res) {
  Instance inst;
  inst.label = spec.label;

  std::optional<GroupTable> t = cache.load_group(spec);
  if (t) {
    res.log.push_back("cache hit: group " + spec.label);
  } else {
    t = GroupTable::enumerate(spec, cfg.cap);
    cache.store_group(*t);
  }
  inst.group = std::move(*t);

  if (!need_cells) return inst;

  if (inst.group.size() > cfg.sweep_gate && !cfg.force)
    throw ConfigError("size gate: the structure constant sweep for |W| = " +
                      std::to_string(inst.group.size()) + " exceeds " +
                      std::to_string(cfg.sweep_gate) + "; pass --force to override");

  std::optional<KLTable> kl = cache.load_kl(inst.group);
  if (kl) {
    res.log.push_back("cache hit: kl " + spec.label);
  } else {
    HeckeAlgebra h(inst.group);
    kl = KLTable::compute(h);
    cache.store_kl(inst.group, *kl);
  }
  inst.kl = std::move(*kl);

  // the sweep retains full tables only below its own limit
  const bool want_full = keep_full && inst.group.size() <= SweepOptions{}.full_limit;
  std::optional<CellData> cd = cache.load_cells(inst.group, want_full);
  if (cd) {
    res.log.push_back("cache hit: cells " + spec.label);
  } else {
    HeckeAlgebra h(inst.group);
    int jobs = cfg.jobs > 0 ? cfg.jobs : int(std::thread::hardware_concurrency());
    cd = compute_cell_data(h, inst.kl, {.threads = std::max(1, jobs), .keep_full = want_full});
    cache.store_cells(inst.group, *cd);
  }
  inst.cells = std::move(*cd);
  return inst;
}

}  // namespace

RunResult run(const RunConfig& cfg) {
  cfg.validate();
  RunResult res;
  Emitter emit{cfg, res};
  const std::set<std::string> tasks = cfg.resolved_tasks();
  const bool need_cells = tasks.count("cells") > 0;
  const int jobs = cfg.jobs > 0 ? cfg.jobs : std::max(1u, std::thread::hardware_concurrency());

  CacheStore cache(cfg.cache_dir);

  VerifyOptions vopts;
  vopts.threads = jobs;
  vopts.seed = cfg.seed;
  vopts.run_bound_check = cfg.bound_check;

  Instance big;
  {
    CoxeterSpec spec = cfg.spec;
    bool keep_full = need_cells;  // the sweep gates retention at 48 itself
    big = build_instance(spec, cfg, cache, need_cells, keep_full, res);
    res.log.push_back("group " + spec.label + ": |W| = " + std::to_string(big.group.size()));
  }

  std::optional<DiagramAutGroup> g;
  std::optional<DescentSystem> ds;
  std::optional<Instance> sub;
  if (!cfg.automorphisms.empty()) {
    g = DiagramAutGroup::generate(big.group.spec(), cfg.automorphisms);
    ds = fixed_subsystem(big.group, *g);
    if (need_cells) {
      sub = build_instance(ds->sub_spec, cfg, cache, true, true, res);
      sub->group = ds->sub;  // identical tables; keep the descent's copy
      res.log.push_back("fixed subsystem: |W^G| = " + std::to_string(ds->sub.size()));
    }
  }

  if (tasks.count("enumerate")) {
    const CoxeterSpec& s = big.group.spec();
    json weights = json::array();
    for (const auto& w : s.weights) weights.push_back(gamma_to_json(w, s.gamma_rank));
    json longest = gamma_to_json(big.group.weight(big.group.size() - 1), s.gamma_rank);
    emit.write_json("group.json", json{{"label", s.label},
                                       {"size", big.group.size()},
                                       {"rank", s.rank},
                                       {"matrix", s.matrix},
                                       {"weights", weights},
                                       {"gamma_rank", s.gamma_rank},
                                       {"max_length", big.group.max_length()},
                                       {"longest_weight", longest}});
    emit.write("elements.csv", elements_csv(big, need_cells), "csv");
    if (sub) emit.write("elements_sub.csv", elements_csv(*sub, true), "csv");
  }

  if (tasks.count("kl")) {
    size_t nonzero = 0;
    for (int w = 0; w < big.kl.size(); ++w) nonzero += big.kl.c(w).support_size() - 1;
    emit.write_json("kl.json", json{{"label", big.label},
                                    {"size", big.kl.size()},
                                    {"nonzero_p_polys", nonzero}});
  }

  if (tasks.count("cells")) {
    for (auto [kind, name] : std::vector<std::pair<CellKind, std::string>>{
             {CellKind::Left, "L"}, {CellKind::Right, "R"}, {CellKind::TwoSided, "LR"}}) {
      const CellPartition& p = big.cells.partition(kind);
      emit.write_json("cells_" + name + ".json", partition_json(p, name));
      emit.write("cells_" + name + ".dot", partition_dot(p, name), "dot");
    }
  }

  bool any_fail = false;
  std::optional<ConjectureReport> big_cj, sub_cj;

  if (tasks.count("conjectures")) {
    big_cj = check_all_conjectures(big, vopts);
    auto lemma = check_lemma_consequences(big);
    big_cj->checks.insert(big_cj->checks.end(), lemma.begin(), lemma.end());
    emit.write_json("conjectures.json", json{{"instance", instance_json(big, cfg)},
                                             {"checks", outcomes_json(big_cj->checks)}});
    for (const auto& c : big_cj->checks)
      any_fail |= c.failed() && c.name != "boundedness";

    if (sub) {
      sub_cj = check_all_conjectures(*sub, vopts);
      auto sub_lemma = check_lemma_consequences(*sub);
      sub_cj->checks.insert(sub_cj->checks.end(), sub_lemma.begin(), sub_lemma.end());
      emit.write_json("conjectures_sub.json", json{{"instance", instance_json(*sub, cfg)},
                                                   {"checks", outcomes_json(sub_cj->checks)}});
      for (const auto& c : sub_cj->checks)
        any_fail |= c.failed() && c.name != "boundedness";
    }
  }

  if (tasks.count("brauer")) {
    CheckOutcome morphism = verify_morphism(big.group, *g, *ds, *cfg.p);
    json prop_b{{"check", "prop_B"},
                {"group", big.label},
                {"automorphism", automorphism_json(cfg.automorphisms)},
                {"p", *cfg.p},
                {"pairs_checked", morphism.universe},
                {"violations", json::array()}};
    for (const auto& w : morphism.witnesses) prop_b["violations"].push_back(witness_json(w));
    emit.write_json("prop_b.json", prop_b);
    any_fail |= morphism.failed();

    auto klmod = compare_kl_mod_p(big.group, big.kl, big.cells, *g, *ds, sub->kl, sub->cells,
                                  *cfg.p);
    emit.write_json("kl_mod_p.json", json{{"check", "kl_mod_p"},
                                          {"group", big.label},
                                          {"automorphism", automorphism_json(cfg.automorphisms)},
                                          {"p", *cfg.p},
                                          {"checks", outcomes_json(klmod)}});
    for (const auto& c : klmod) any_fail |= c.failed();

    std::string why_big, why_sub;
    bool ok = conjecture_suite_verified(*big_cj, &why_big) &&
              conjecture_suite_verified(*sub_cj, &why_sub);
    std::string why = ok ? "" : (why_big.empty() ? why_sub : why_big);
    auto jdes = verify_j_descent(big.group, big.cells, *g, *ds, sub->cells, *cfg.p, ok, why,
                                 cfg.seed);
    emit.write_json("j_descent.json", json{{"check", "j_descent"},
                                           {"group", big.label},
                                           {"automorphism", automorphism_json(cfg.automorphisms)},
                                           {"p", *cfg.p},
                                           {"checks", outcomes_json(jdes)}});
    for (const auto& c : jdes) any_fail |= c.failed();
  }

  if (tasks.count("theorem_a")) {
    TheoremAReport rep = check_theorem_a(big, *ds, *sub, *big_cj, *sub_cj);
    json out{{"check", "theorem_a"},
             {"group", big.label},
             {"automorphism", automorphism_json(cfg.automorphisms)},
             {"parts", outcomes_json(rep.parts)}};
    for (const auto& c : rep.parts) any_fail |= c.failed();

    if (cfg.all_subgroups) {
      json subs = json::array();
      for (const DiagramAutGroup& h : g->subgroups(big.group.spec())) {
        DescentSystem dh = fixed_subsystem(big.group, h);
        Instance sh = build_instance(dh.sub_spec, cfg, cache, true, true, res);
        sh.group = dh.sub;
        ConjectureReport cjh = check_all_conjectures(sh, vopts);
        TheoremAReport rh = check_theorem_a(big, dh, sh, *big_cj, cjh);
        json perms = json::array();
        for (const auto& p : h.perms()) {
          json a = json::array();
          for (int v : p) a.push_back(v + 1);
          perms.push_back(a);
        }
        subs.push_back(json{{"order", h.order()},
                            {"perms", perms},
                            {"fixed_size", dh.sub.size()},
                            {"parts", outcomes_json(rh.parts)}});
        for (const auto& c : rh.parts) any_fail |= c.failed();
      }
      out["subgroups"] = subs;
    }
    emit.write_json("theorem_a.json", out);
  }

  if (tasks.count("probe")) {
    auto probes = probe_open_questions(big, *ds, *sub);
    emit.write_json("probe.json", json{{"check", "open_questions"},
                                       {"exploratory", true},
                                       {"group", big.label},
                                       {"automorphism", automorphism_json(cfg.automorphisms)},
                                       {"checks", outcomes_json(probes)}});
    // exploratory: never contributes to the exit status
  }

  res.exit_code = any_fail ? 1 : 0;
  return res;
}

int summarize_reports(const std::filesystem::path& dir, std::string* out) {
  std::string text;
  int exit_code = 0;
  std::vector<std::filesystem::path> files;
  if (std::filesystem::is_directory(dir)) {
    for (const auto& f : std::filesystem::directory_iterator(dir))
      if (f.path().extension() == ".json") files.push_back(f.path());
    std::sort(files.begin(), files.end());
  } else if (std::filesystem::exists(dir)) {
    files.push_back(dir);
  } else {
    throw ConfigError("no reports at " + dir.string());
  }

  // count statuses recursively in each report
  for (const auto& f : files) {
    std::ifstream in(f);
    json j;
    try {
      in >> j;
    } catch (const json::exception&) {
      text += f.filename().string() + ": unreadable\n";
      exit_code = 1;
      continue;
    }
    int pass = 0, fail = 0, skipped = 0;
    std::function<void(const json&)> walk = [&](const json& node) {
      if (node.is_object()) {
        if (node.contains("status") && node.at("status").is_string()) {
          std::string s = node.at("status").get<std::string>();
          if (s == "pass") ++pass;
          if (s == "fail") ++fail;
          if (s == "skipped") ++skipped;
        }
        for (const auto& [k, v] : node.items()) walk(v);
      } else if (node.is_array()) {
        for (const auto& v : node) walk(v);
      }
    };
    walk(j);
    text += f.filename().string() + ": " + std::to_string(pass) + " pass, " +
            std::to_string(fail) + " fail, " + std::to_string(skipped) + " skipped\n";
    bool exploratory = j.is_object() && j.contains("exploratory") &&
                       j.at("exploratory").is_boolean() && j.at("exploratory").get<bool>();
    if (fail > 0 && !exploratory) exit_code = 1;
  }
  if (out) *out = text;
  return exit_code;
}

}  // namespace kld
