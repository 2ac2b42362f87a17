#pragma once

#include <filesystem>
#include <set>

#include "kld/cache.hpp"
#include "kld/verify.hpp"

namespace kld {

extern const std::set<std::string> kAllTasks;  // enumerate kl cells conjectures
                                               // brauer theorem_a probe

// One batch run: which group, which automorphisms, which tasks, where the
// reports and the cache live. Parsed from a JSON config file and/or flags;
// flags override file values.
struct RunConfig {
  CoxeterSpec spec;
  std::vector<std::vector<int>> automorphisms;  // 0-based generator images
  std::optional<uint32_t> p;
  std::set<std::string> tasks = {"enumerate"};
  std::filesystem::path out_dir = "reports";
  std::filesystem::path cache_dir;  // empty disables caching
  std::set<std::string> formats = {"json", "csv", "dot"};
  bool force = false;
  bool bound_check = false;
  bool all_subgroups = false;  // run theorem_a over every subgroup of G
  uint64_t seed = 12345;
  int jobs = 0;  // 0 = hardware concurrency
  int cap = GroupTable::kDefaultCap;
  int sweep_gate = 400;

  static RunConfig from_json(const nlohmann::json& j);
  static RunConfig from_file(const std::filesystem::path& file);
  void validate() const;
  // resolve task dependencies (tasks pull what they need)
  std::set<std::string> resolved_tasks() const;
};

struct RunResult {
  int exit_code = 0;  // 0 all pass, 1 a mathematical check failed
  std::vector<std::string> files;  // report files written, in order
  std::vector<std::string> log;    // human-readable progress lines
};

// Executes the resolved task DAG and writes the report files. Configuration
// problems throw ConfigError (exit 2 at the CLI); a failed mathematical
// check yields exit_code 1 and a witness in the corresponding report.
RunResult run(const RunConfig& cfg);

// Summarize already-written reports; exit 1 if any recorded check failed.
int summarize_reports(const std::filesystem::path& dir, std::string* out);

}  // namespace kld
