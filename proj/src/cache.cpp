#include "kld/cache.hpp"

#include <fcntl.h>
#include <unistd.h>

#include <fstream>

namespace kld {

using nlohmann::json;

uint64_t fnv1a64(std::string_view s) {
  uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

std::string hex64(uint64_t v) {
  static const char* digits = "0123456789abcdef";
  std::string s(16, '0');
  for (int i = 15; i >= 0; --i) {
    s[i] = digits[v & 0xf];
    v >>= 4;
  }
  return s;
}

json gamma_to_json(const GammaElt& g, int rank) {
  json a = json::array();
  for (int i = 0; i < rank; ++i) a.push_back(g.coords[i]);
  return a;
}

GammaElt gamma_from_json(const json& j) {
  std::vector<int64_t> v;
  for (const auto& x : j) v.push_back(x.get<int64_t>());
  return GammaElt::from_vector(v);
}

json poly_to_json(const LaurentPoly& p, int rank) {
  json terms = json::array();
  for (const auto& [g, c] : p.terms()) terms.push_back({gamma_to_json(g, rank), c});
  return terms;
}

LaurentPoly poly_from_json(const json& j) {
  LaurentPoly p;
  for (const auto& t : j)
    p += LaurentPoly::monomial(gamma_from_json(t.at(0)), t.at(1).get<int64_t>());
  return p;
}

namespace {

json spec_to_json(const CoxeterSpec& s) {
  json w = json::array();
  for (const auto& x : s.weights) w.push_back(gamma_to_json(x, s.gamma_rank));
  return json{{"rank", s.rank},
              {"gamma_rank", s.gamma_rank},
              {"matrix", s.matrix},
              {"weights", w},
              {"label", s.label}};
}

CoxeterSpec spec_from_json(const json& j) {
  CoxeterSpec s;
  s.rank = j.at("rank").get<int>();
  s.gamma_rank = j.at("gamma_rank").get<int>();
  s.matrix = j.at("matrix").get<std::vector<std::vector<int>>>();
  for (const auto& w : j.at("weights")) s.weights.push_back(gamma_from_json(w));
  s.label = j.at("label").get<std::string>();
  return s;
}

json hecke_to_json(const HeckeElement& e, int rank) {
  json out = json::array();
  for (const auto& [w, p] : e.coords()) out.push_back({w, poly_to_json(p, rank)});
  return out;
}

HeckeElement hecke_from_json(const json& j) {
  HeckeElement e;
  for (const auto& t : j) e.set(t.at(0).get<int>(), poly_from_json(t.at(1)));
  return e;
}

json partition_to_json(const CellPartition& p) {
  json leq = json::array();
  const int m = int(p.cells.size());
  for (int a = 0; a < m; ++a) {
    json below = json::array();
    for (int b = 0; b < m; ++b)
      if (p.leq.get(a, b)) below.push_back(b);
    leq.push_back(below);
  }
  return json{{"cells", p.cells}, {"leq", leq}, {"dag_edges", p.dag_edges}};
}

CellPartition partition_from_json(const json& j, int n) {
  CellPartition p;
  p.cells = j.at("cells").get<std::vector<std::vector<int>>>();
  const int m = int(p.cells.size());
  p.cell_of.assign(n, -1);
  for (int c = 0; c < m; ++c)
    for (int w : p.cells[c]) {
      if (w < 0 || w >= n || p.cell_of[w] != -1)
        throw ConfigError("cached partition is not a partition");
      p.cell_of[w] = c;
    }
  for (int w = 0; w < n; ++w)
    if (p.cell_of[w] == -1) throw ConfigError("cached partition misses an element");
  p.leq = BitMatrix(m);
  const auto& leq = j.at("leq");
  for (int a = 0; a < m; ++a)
    for (const auto& b : leq.at(a)) p.leq.set(a, b.get<int>());
  p.dag_edges = j.at("dag_edges").get<std::vector<std::pair<int, int>>>();
  return p;
}

// deterministic row sample for revalidation; always covers the identity row
// and the longest element's row
std::vector<int> sample_rows(uint64_t seed, int n, int count) {
  std::vector<int> rows = {0, n - 1};
  uint64_t state = seed ? seed : 1;
  for (int i = 0; i < count; ++i) {
    state = state * 6364136223846793005ULL + 1442695040888963407ULL;
    rows.push_back(int((state >> 33) % uint64_t(n)));
  }
  return rows;
}

}  // namespace

CacheStore::CacheStore(std::filesystem::path dir) : dir_(std::move(dir)) {
  if (!dir_.empty()) std::filesystem::create_directories(dir_);
}

std::string CacheStore::content_key(const CoxeterSpec& spec, const std::string& kind) {
  json key{{"schema", kCacheSchemaVersion},
           {"kind", kind},
           {"rank", spec.rank},
           {"gamma_rank", spec.gamma_rank},
           {"matrix", spec.matrix}};
  json w = json::array();
  for (const auto& x : spec.weights) w.push_back(gamma_to_json(x, spec.gamma_rank));
  key["weights"] = w;
  return hex64(fnv1a64(key.dump()));
}

std::filesystem::path CacheStore::path_for(const std::string& kind,
                                           const std::string& key) const {
  return dir_ / (kind + "-" + key + ".json");
}

void CacheStore::write_entry(const std::string& kind, const std::string& key,
                             json payload) const {
  if (!enabled()) return;
  std::filesystem::path file = path_for(kind, key);
  std::filesystem::path lock = file;
  lock += ".lock";
  int fd = ::open(lock.c_str(), O_CREAT | O_EXCL | O_WRONLY, 0644);
  if (fd < 0) return;  // a concurrent writer owns the entry
  ::close(fd);

  std::string payload_str = payload.dump();
  json entry{{"schema_version", kCacheSchemaVersion},
             {"kind", kind},
             {"key", key},
             {"payload_hash", hex64(fnv1a64(payload_str))},
             {"payload", std::move(payload)}};
  std::filesystem::path tmp = file;
  tmp += ".tmp";
  {
    std::ofstream out(tmp);
    out << entry.dump(2) << "\n";
  }
  std::filesystem::rename(tmp, file);
  std::filesystem::remove(lock);
}

std::optional<json> CacheStore::read_entry(const std::string& kind,
                                           const std::string& key) const {
  if (!enabled()) return std::nullopt;
  std::filesystem::path file = path_for(kind, key);
  std::ifstream in(file);
  if (!in) return std::nullopt;
  json entry;
  try {
    in >> entry;
    if (entry.at("schema_version").get<int>() != kCacheSchemaVersion) return std::nullopt;
    if (entry.at("kind").get<std::string>() != kind) return std::nullopt;
    if (entry.at("key").get<std::string>() != key) return std::nullopt;
    std::string payload_str = entry.at("payload").dump();
    if (entry.at("payload_hash").get<std::string>() != hex64(fnv1a64(payload_str)))
      return std::nullopt;
    return entry.at("payload");
  } catch (const json::exception&) {
    return std::nullopt;
  }
}

std::optional<GroupTable> CacheStore::load_group(const CoxeterSpec& spec) const {
  auto payload = read_entry("group", content_key(spec, "group"));
  if (!payload) return std::nullopt;
  try {
    CoxeterSpec stored = spec_from_json(payload->at("spec"));
    if (!stored.same_presentation(spec)) return std::nullopt;
    stored.label = spec.label;
    // rebuilding recomputes numbering, lengths and inverses from scratch
    return GroupTable::from_right_table(stored, payload->at("right").get<std::vector<int>>(),
                                        payload->at("size").get<int>());
  } catch (const Error&) {
    return std::nullopt;
  } catch (const json::exception&) {
    return std::nullopt;
  }
}

void CacheStore::store_group(const GroupTable& t) const {
  if (!enabled()) return;
  std::vector<int> right;
  right.reserve(size_t(t.size()) * t.rank());
  for (int w = 0; w < t.size(); ++w)
    for (int s = 0; s < t.rank(); ++s) right.push_back(t.mul_gen_right(w, s));
  json payload{{"spec", spec_to_json(t.spec())}, {"size", t.size()}, {"right", right}};
  write_entry("group", content_key(t.spec(), "group"), std::move(payload));
}

std::optional<KLTable> CacheStore::load_kl(const GroupTable& t) const {
  std::string key = content_key(t.spec(), "kl");
  auto payload = read_entry("kl", key);
  if (!payload) return std::nullopt;
  try {
    std::vector<HeckeElement> rows;
    for (const auto& r : payload->at("rows")) rows.push_back(hecke_from_json(r));
    if (int(rows.size()) != t.size()) return std::nullopt;
    KLTable kl = KLTable::from_rows(std::move(rows));
    // cheap revalidation: bar-invariance and shape of sampled rows
    HeckeAlgebra h(t);
    for (int w : sample_rows(fnv1a64(key), t.size(), 10)) {
      if (kl.c(w).coeff(w) != LaurentPoly::constant(1)) return std::nullopt;
      for (const auto& [y, p] : kl.c(w).coords())
        if (y != w && !(*p.degree() < GammaElt::zero())) return std::nullopt;
      if (!(h.bar(kl.c(w)) == kl.c(w))) return std::nullopt;
    }
    return kl;
  } catch (const Error&) {
    return std::nullopt;
  } catch (const json::exception&) {
    return std::nullopt;
  }
}

void CacheStore::store_kl(const GroupTable& t, const KLTable& kl) const {
  if (!enabled()) return;
  const int rank = t.spec().gamma_rank;
  json rows = json::array();
  for (int w = 0; w < kl.size(); ++w) rows.push_back(hecke_to_json(kl.c(w), rank));
  write_entry("kl", content_key(t.spec(), "kl"), json{{"rows", std::move(rows)}});
}

std::optional<CellData> CacheStore::load_cells(const GroupTable& t, bool need_full) const {
  auto payload = read_entry("cells", content_key(t.spec(), "cells"));
  if (!payload) return std::nullopt;
  try {
    const int n = t.size();
    CellData cd;
    for (const auto& j : payload->at("a")) cd.a.push_back(gamma_from_json(j));
    for (const auto& j : payload->at("delta")) cd.delta.push_back(gamma_from_json(j));
    cd.n = payload->at("n").get<std::vector<int64_t>>();
    cd.duflo = payload->at("duflo").get<std::vector<int>>();
    if (int(cd.a.size()) != n || int(cd.delta.size()) != n || int(cd.n.size()) != n)
      return std::nullopt;
    for (const auto& e : payload->at("gamma"))
      cd.gamma.set(e.at(0).get<int>(), e.at(1).get<int>(), e.at(2).get<int>(),
                   e.at(3).get<int64_t>());
    cd.left = partition_from_json(payload->at("left"), n);
    cd.right = partition_from_json(payload->at("right"), n);
    cd.two_sided = partition_from_json(payload->at("two_sided"), n);
    if (payload->contains("full_h")) {
      FullHTable full;
      for (const auto& row : payload->at("full_h")) {
        auto& dst = full.rows[{row.at(0).get<int>(), row.at(1).get<int>()}];
        for (const auto& e : row.at(2))
          dst.push_back({e.at(0).get<int>(), poly_from_json(e.at(1))});
      }
      cd.full_h = std::move(full);
    } else if (need_full) {
      return std::nullopt;
    }
    // duflo must be consistent with a and delta
    for (int z = 0; z < n; ++z)
      if ((cd.a[z] == cd.delta[z]) != cd.is_duflo(z)) return std::nullopt;
    return cd;
  } catch (const Error&) {
    return std::nullopt;
  } catch (const json::exception&) {
    return std::nullopt;
  }
}

void CacheStore::store_cells(const GroupTable& t, const CellData& cd) const {
  if (!enabled()) return;
  const int rank = t.spec().gamma_rank;
  json a = json::array(), delta = json::array(), gamma = json::array();
  for (const auto& g : cd.a) a.push_back(gamma_to_json(g, rank));
  for (const auto& g : cd.delta) delta.push_back(gamma_to_json(g, rank));
  for (const auto& [key, val] : cd.gamma.entries())
    gamma.push_back({key[0], key[1], key[2], val});
  json payload{{"a", std::move(a)},
               {"delta", std::move(delta)},
               {"n", cd.n},
               {"duflo", cd.duflo},
               {"gamma", std::move(gamma)},
               {"left", partition_to_json(cd.left)},
               {"right", partition_to_json(cd.right)},
               {"two_sided", partition_to_json(cd.two_sided)}};
  if (cd.full_h) {
    json full = json::array();
    for (const auto& [xy, row] : cd.full_h->rows) {
      json entries = json::array();
      for (const auto& [z, p] : row) entries.push_back({z, poly_to_json(p, rank)});
      full.push_back({xy.first, xy.second, std::move(entries)});
    }
    payload["full_h"] = std::move(full);
  }
  write_entry("cells", content_key(t.spec(), "cells"), std::move(payload));
}

std::vector<CacheStore::EntryInfo> CacheStore::list() const {
  std::vector<EntryInfo> out;
  if (!enabled() || !std::filesystem::exists(dir_)) return out;
  for (const auto& f : std::filesystem::directory_iterator(dir_)) {
    if (f.path().extension() != ".json") continue;
    EntryInfo info;
    info.file = f.path().filename().string();
    std::ifstream in(f.path());
    try {
      json entry;
      in >> entry;
      info.kind = entry.at("kind").get<std::string>();
      info.key = entry.at("key").get<std::string>();
      std::string payload_str = entry.at("payload").dump();
      info.valid = entry.at("schema_version").get<int>() == kCacheSchemaVersion &&
                   entry.at("payload_hash").get<std::string>() == hex64(fnv1a64(payload_str));
      info.note = info.valid ? "ok" : "hash or schema mismatch";
    } catch (const json::exception&) {
      info.valid = false;
      info.note = "unreadable";
    }
    out.push_back(std::move(info));
  }
  std::sort(out.begin(), out.end(),
            [](const EntryInfo& a, const EntryInfo& b) { return a.file < b.file; });
  return out;
}

std::vector<CacheStore::EntryInfo> CacheStore::validate() const {
  std::vector<EntryInfo> out = list();
  for (auto& info : out) {
    if (info.valid) continue;
    std::filesystem::path from = dir_ / info.file;
    std::filesystem::path to = from;
    to += ".quarantined";
    std::filesystem::rename(from, to);
    info.note += "; quarantined";
  }
  return out;
}

int CacheStore::gc(bool purge_all) const {
  if (!enabled() || !std::filesystem::exists(dir_)) return 0;
  int removed = 0;
  std::vector<std::filesystem::path> victims;
  for (const auto& f : std::filesystem::directory_iterator(dir_)) {
    const std::string name = f.path().filename().string();
    if (name.ends_with(".quarantined") || name.ends_with(".lock") ||
        name.ends_with(".tmp") || (purge_all && name.ends_with(".json")))
      victims.push_back(f.path());
  }
  for (const auto& v : victims) {
    std::filesystem::remove(v);
    ++removed;
  }
  return removed;
}

}  // namespace kld
