#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <unistd.h>

#include <fstream>

#include "kld/cache.hpp"
#include "kld/verify.hpp"

using namespace kld;

namespace {

struct TempDir {
  std::filesystem::path path;
  TempDir() {
    path = std::filesystem::temp_directory_path() /
           ("kld-cache-test-" + std::to_string(::getpid()) + "-" +
            std::to_string(counter()++));
    std::filesystem::create_directories(path);
  }
  ~TempDir() { std::filesystem::remove_all(path); }
  static int& counter() {
    static int c = 0;
    return c;
  }
};

}  // namespace

TEST_CASE("round trip of group, kl and cell data") {
  TempDir tmp;
  CacheStore store(tmp.path);

  CoxeterSpec spec = CoxeterSpec::from_type("B2");
  spec.weights = {GammaElt::single(1), GammaElt::single(2)};
  Instance inst = Instance::compute(spec, {.keep_full = true});

  CHECK_FALSE(store.load_group(spec).has_value());
  store.store_group(inst.group);
  store.store_kl(inst.group, inst.kl);
  store.store_cells(inst.group, inst.cells);

  auto t2 = store.load_group(spec);
  REQUIRE(t2.has_value());
  CHECK(t2->size() == inst.group.size());
  for (int w = 0; w < t2->size(); ++w) {
    CHECK(t2->word(w) == inst.group.word(w));
    CHECK(t2->weight(w) == inst.group.weight(w));
  }

  auto kl2 = store.load_kl(*t2);
  REQUIRE(kl2.has_value());
  for (int w = 0; w < t2->size(); ++w) CHECK(kl2->c(w) == inst.kl.c(w));

  auto cd2 = store.load_cells(*t2, true);
  REQUIRE(cd2.has_value());
  CHECK(cd2->a == inst.cells.a);
  CHECK(cd2->delta == inst.cells.delta);
  CHECK(cd2->n == inst.cells.n);
  CHECK(cd2->duflo == inst.cells.duflo);
  CHECK(cd2->gamma == inst.cells.gamma);
  CHECK(cd2->left.cells == inst.cells.left.cells);
  CHECK(cd2->two_sided.cells == inst.cells.two_sided.cells);
  REQUIRE(cd2->full_h.has_value());
  CHECK(cd2->full_h->rows.size() == inst.cells.full_h->rows.size());

  // keys separate kinds and presentations
  CoxeterSpec other = CoxeterSpec::from_type("B2");
  CHECK(CacheStore::content_key(spec, "kl") != CacheStore::content_key(spec, "group"));
  CHECK(CacheStore::content_key(spec, "kl") != CacheStore::content_key(other, "kl"));
  CHECK_FALSE(store.load_group(other).has_value());
}

TEST_CASE("a flipped byte quarantines the entry") {
  TempDir tmp;
  CacheStore store(tmp.path);
  GroupTable t = GroupTable::enumerate(CoxeterSpec::from_type("A2"));
  store.store_group(t);

  auto entries = store.list();
  REQUIRE(entries.size() == 1);
  CHECK(entries[0].valid);

  // flip one byte inside the payload
  std::filesystem::path file = tmp.path / entries[0].file;
  std::string text;
  {
    std::ifstream in(file);
    text.assign(std::istreambuf_iterator<char>(in), {});
  }
  size_t pos = text.find("\"size\": 6");
  REQUIRE(pos != std::string::npos);
  text[pos + 8] = '7';
  {
    std::ofstream out(file);
    out << text;
  }

  CHECK_FALSE(store.load_group(t.spec()).has_value());
  auto checked = store.validate();
  REQUIRE(checked.size() == 1);
  CHECK_FALSE(checked[0].valid);
  CHECK(checked[0].note.find("quarantined") != std::string::npos);
  CHECK(store.list().empty());  // entry moved aside
  CHECK(store.gc(false) == 1);  // quarantined file removed
}

TEST_CASE("kl entries are revalidated by invariants on load") {
  TempDir tmp;
  CacheStore store(tmp.path);
  GroupTable t = GroupTable::enumerate(CoxeterSpec::from_type("A2"));
  HeckeAlgebra h(t);
  KLTable kl = KLTable::compute(h);
  store.store_kl(t, kl);

  // rewrite the entry with a doctored row but a correct payload hash
  std::string key = CacheStore::content_key(t.spec(), "kl");
  std::filesystem::path file = tmp.path / ("kl-" + key + ".json");
  nlohmann::json entry;
  {
    std::ifstream in(file);
    in >> entry;
  }
  // break bar-invariance: bump an exponent in the longest row
  entry["payload"]["rows"][5][0][1][0][0][0] = 1;
  std::string payload_str = entry["payload"].dump();
  entry["payload_hash"] = hex64(fnv1a64(payload_str));
  {
    std::ofstream out(file);
    out << entry.dump(2) << "\n";
  }
  CHECK_FALSE(store.load_kl(t).has_value());
}

TEST_CASE("empty cache lists nothing") {
  TempDir tmp;
  CacheStore store(tmp.path);
  CHECK(store.list().empty());
  CHECK(store.validate().empty());
  CHECK(store.gc(true) == 0);
  CacheStore disabled;
  CHECK_FALSE(disabled.enabled());
  CHECK(disabled.list().empty());
}

TEST_CASE("serialization helpers round trip") {
  LaurentPoly p = LaurentPoly::e(2) - LaurentPoly::constant(2) + LaurentPoly::e(-5, 7);
  CHECK(poly_from_json(poly_to_json(p, 1)) == p);
  GammaElt g = GammaElt::from_vector({3, -1});
  CHECK(gamma_from_json(gamma_to_json(g, 2)) == g);
  CHECK(hex64(fnv1a64("")) == hex64(0xcbf29ce484222325ULL));
}
