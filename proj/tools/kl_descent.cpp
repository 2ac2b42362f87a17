// kl-descent: Kazhdan-Lusztig bases, a-functions and cells for Hecke
// algebras of finite Coxeter groups with unequal parameters, with descent
// checks to fixed-point subgroups of diagram automorphisms.

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>

#include "kld/runner.hpp"

namespace {

std::vector<int64_t> parse_int_list(const std::string& s) {
  std::vector<int64_t> out;
  std::string cur;
  for (char c : s + ",") {
    if (c == ',') {
      if (!cur.empty()) out.push_back(std::stoll(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  return out;
}

std::vector<std::string> split_commas(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s + ",") {
    if (c == ',') {
      if (!cur.empty()) out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  return out;
}

// "1,2" -> scalars; "1,0;0,1" -> rank-2 vectors
nlohmann::json parse_weights(const std::string& s) {
  nlohmann::json out = nlohmann::json::array();
  if (s.find(';') == std::string::npos) {
    for (int64_t v : parse_int_list(s)) out.push_back(v);
    return out;
  }
  std::string cur;
  for (char c : s + ";") {
    if (c == ';') {
      out.push_back(parse_int_list(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  return out;
}

std::filesystem::path cache_dir_with_env(const std::string& flag) {
  if (!flag.empty()) return flag;
  if (const char* env = std::getenv("KL_DESCENT_CACHE_DIR")) return env;
  return {};
}

int run_command(const std::string& config_file, const std::string& type,
                const std::string& weights, const std::vector<std::string>& auts,
                const std::string& tasks, int p, const std::string& out_dir,
                const std::string& cache_dir, const std::string& formats, bool force,
                bool bound_check, bool all_subgroups, int jobs, int64_t seed, int cap,
                int gamma_rank, bool quiet) {
  nlohmann::json j = nlohmann::json::object();
  if (!config_file.empty()) {
    std::ifstream in(config_file);
    if (!in) throw kld::ConfigError("cannot open config file " + config_file);
    in >> j;
  }
  // flags override file values
  if (!type.empty()) j["type"] = type;
  if (gamma_rank > 0) j["gamma_rank"] = gamma_rank;
  if (!weights.empty()) j["weights"] = parse_weights(weights);
  if (!auts.empty()) {
    nlohmann::json a = nlohmann::json::array();
    for (const auto& s : auts) a.push_back(parse_int_list(s));
    j["automorphisms"] = a;
  }
  if (!tasks.empty()) j["tasks"] = split_commas(tasks);
  if (p > 0) j["p"] = p;
  if (!out_dir.empty()) j["out_dir"] = out_dir;
  std::filesystem::path cd = cache_dir_with_env(cache_dir);
  if (!cd.empty()) j["cache_dir"] = cd.string();
  if (!formats.empty()) j["formats"] = split_commas(formats);
  if (force) j["force"] = true;
  if (bound_check) j["bound_check"] = true;
  if (all_subgroups) j["all_subgroups"] = true;
  if (jobs > 0) j["jobs"] = jobs;
  if (seed >= 0) j["seed"] = seed;
  if (cap > 0) j["cap"] = cap;

  kld::RunConfig cfg = kld::RunConfig::from_json(j);
  kld::RunResult res = kld::run(cfg);
  if (!quiet) {
    for (const auto& line : res.log) std::cerr << line << "\n";
    for (const auto& f : res.files) std::cerr << "wrote " << (cfg.out_dir / f).string() << "\n";
    std::cerr << (res.exit_code == 0 ? "all checks passed" : "CHECK FAILED (see reports)")
              << "\n";
  }
  return res.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Kazhdan-Lusztig cells and fixed-point descent for unequal parameters"};
  app.require_subcommand(1);

  auto* run_cmd = app.add_subcommand("run", "execute tasks and write reports");
  std::string config_file, type, weights, tasks, out_dir, cache_dir, formats;
  std::vector<std::string> auts;
  int p = 0, jobs = 0, cap = 0, gamma_rank = 0;
  int64_t seed = -1;
  bool force = false, bound_check = false, all_subgroups = false, quiet = false;
  run_cmd->add_option("--config", config_file, "JSON config file; flags override it");
  run_cmd->add_option("--type", type, "group type, e.g. A3, B2, I2(7), A1+A1");
  run_cmd->add_option("--weights", weights, "per-generator weights: '1,2' or '1,0;0,1'");
  run_cmd->add_option("--gamma-rank", gamma_rank, "rank of the exponent lattice (default 1)");
  run_cmd->add_option("--aut", auts, "automorphism as 1-based images, e.g. 3,2,1 (repeatable)");
  run_cmd->add_option("--p", p, "prime for the mod-p checks");
  run_cmd->add_option("--tasks", tasks,
                      "comma list: enumerate,kl,cells,conjectures,brauer,theorem_a,probe");
  run_cmd->add_option("--out", out_dir, "report directory (default ./reports)");
  run_cmd->add_option("--cache-dir", cache_dir,
                      "cache directory (default $KL_DESCENT_CACHE_DIR; empty disables)");
  run_cmd->add_option("--format", formats, "comma list of json,csv,dot (default all)");
  run_cmd->add_option("--jobs", jobs, "worker threads (default: hardware)");
  run_cmd->add_option("--seed", seed, "seed for sampled checks");
  run_cmd->add_option("--cap", cap, "element cap for enumeration (default 10000)");
  run_cmd->add_flag("--force", force, "override the structure-sweep size gate");
  run_cmd->add_flag("--bound-check", bound_check, "exhaustive degree bound scan (|W| <= 48)");
  run_cmd->add_flag("--subgroups", all_subgroups, "theorem_a over every subgroup of G");
  run_cmd->add_flag("--quiet", quiet, "suppress progress output");

  auto* cache_cmd = app.add_subcommand("cache", "list, validate or purge the cache");
  std::string cache_action = "list", cache_dir2;
  cache_cmd->add_option("action", cache_action, "list | validate | gc | purge")
      ->check(CLI::IsMember({"list", "validate", "gc", "purge"}));
  cache_cmd->add_option("--cache-dir", cache_dir2, "cache directory");

  auto* report_cmd = app.add_subcommand("report", "summarize written reports");
  std::string report_path = "reports";
  report_cmd->add_option("path", report_path, "report directory or file");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run_cmd->parsed()) {
      return run_command(config_file, type, weights, auts, tasks, p, out_dir, cache_dir,
                         formats, force, bound_check, all_subgroups, jobs, seed, cap,
                         gamma_rank, quiet);
    }
    if (cache_cmd->parsed()) {
      kld::CacheStore store(cache_dir_with_env(cache_dir2));
      if (!store.enabled()) throw kld::ConfigError("no cache directory configured");
      if (cache_action == "list") {
        for (const auto& e : store.list())
          std::cout << e.file << "  kind=" << e.kind << "  " << (e.valid ? "ok" : "INVALID")
                    << "  " << e.note << "\n";
      } else if (cache_action == "validate") {
        for (const auto& e : store.validate())
          std::cout << e.file << "  " << (e.valid ? "ok" : "INVALID: " + e.note) << "\n";
      } else {
        int removed = store.gc(cache_action == "purge");
        std::cout << "removed " << removed << " entries\n";
      }
      return 0;
    }
    if (report_cmd->parsed()) {
      std::string text;
      int code = kld::summarize_reports(report_path, &text);
      std::cout << text;
      return code;
    }
  } catch (const kld::ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return 2;
  } catch (const kld::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
