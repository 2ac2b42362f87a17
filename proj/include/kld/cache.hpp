#pragma once

#include <filesystem>
#include <optional>

#include <json.hpp>

#include "kld/cells.hpp"

namespace kld {

uint64_t fnv1a64(std::string_view s);
std::string hex64(uint64_t v);

// JSON forms used by both the cache and the report writers.
nlohmann::json gamma_to_json(const GammaElt& g, int rank);
GammaElt gamma_from_json(const nlohmann::json& j);
nlohmann::json poly_to_json(const LaurentPoly& p, int rank);
LaurentPoly poly_from_json(const nlohmann::json& j);

inline constexpr int kCacheSchemaVersion = 1;

/*
  Content-addressed store of expensive artifacts, one JSON file per entry.
  The key hashes the presentation (matrix, weights, exponent rank) plus the
  entry kind and schema version; loading re-validates the payload hash and
  cheap structural invariants, so a corrupt entry is never served.
*/
class CacheStore {
 public:
  CacheStore() = default;  // disabled store
  explicit CacheStore(std::filesystem::path dir);

  bool enabled() const { return !dir_.empty(); }
  const std::filesystem::path& dir() const { return dir_; }

  static std::string content_key(const CoxeterSpec& spec, const std::string& kind);

  std::optional<GroupTable> load_group(const CoxeterSpec& spec) const;
  void store_group(const GroupTable& t) const;

  std::optional<KLTable> load_kl(const GroupTable& t) const;
  void store_kl(const GroupTable& t, const KLTable& kl) const;

  std::optional<CellData> load_cells(const GroupTable& t, bool need_full) const;
  void store_cells(const GroupTable& t, const CellData& cd) const;

  struct EntryInfo {
    std::string file;
    std::string kind;
    std::string key;
    bool valid = false;
    std::string note;
  };
  std::vector<EntryInfo> list() const;
  // re-checks every entry; corrupt ones are renamed *.quarantined
  std::vector<EntryInfo> validate() const;
  // removes quarantined entries (and, with purge_all, everything)
  int gc(bool purge_all) const;

 private:
  std::filesystem::path path_for(const std::string& kind, const std::string& key) const;
  void write_entry(const std::string& kind, const std::string& key,
                   nlohmann::json payload) const;
  std::optional<nlohmann::json> read_entry(const std::string& kind,
                                           const std::string& key) const;

  std::filesystem::path dir_;
};

}  // namespace kld
