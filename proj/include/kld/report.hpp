#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace kld {

// One counterexample, as ordered (field, value) pairs; values are exact
// renderings so a reader can re-feed them to the originating operation.
struct Witness {
  std::vector<std::pair<std::string, std::string>> fields;

  Witness& add(const std::string& k, const std::string& v) {
    fields.push_back({k, v});
    return *this;
  }
  Witness& add(const std::string& k, int64_t v) { return add(k, std::to_string(v)); }
  const std::string* get(const std::string& k) const {
    for (const auto& [key, val] : fields)
      if (key == k) return &val;
    return nullptr;
  }
  bool operator==(const Witness&) const = default;
};

inline constexpr size_t kMaxWitnesses = 25;

// Result of one named check over a finite universe of tuples.
struct CheckOutcome {
  std::string name;
  std::string status;  // "pass" | "fail" | "skipped"
  std::string reason;  // skip reason or informational note
  uint64_t universe = 0;
  uint64_t violations = 0;  // may exceed witnesses.size()
  std::vector<Witness> witnesses;

  bool passed() const { return status == "pass"; }
  bool failed() const { return status == "fail"; }

  void record(Witness w) {
    ++violations;
    if (witnesses.size() < kMaxWitnesses) witnesses.push_back(std::move(w));
  }
  void finish() { status = violations == 0 ? "pass" : "fail"; }
  static CheckOutcome skipped(std::string name, std::string reason) {
    CheckOutcome c;
    c.name = std::move(name);
    c.status = "skipped";
    c.reason = std::move(reason);
    return c;
  }
};

inline bool all_passed(const std::vector<CheckOutcome>& checks) {
  for (const auto& c : checks)
    if (c.failed()) return false;
  return true;
}

}  // namespace kld
