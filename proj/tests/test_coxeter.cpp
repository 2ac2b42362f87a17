#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <map>
#include <numeric>
#include <set>

#include "kld/coxeter.hpp"

using namespace kld;

namespace {

CoxeterSpec spec_of(const std::string& type) { return CoxeterSpec::from_type(type); }

GroupTable group_of(const std::string& type) {
  return GroupTable::enumerate(spec_of(type));
}

// Permutation model of S4 with adjacent transpositions; the oracle for A3.
struct S4Oracle {
  using Perm = std::array<int, 4>;
  std::vector<Perm> elems;
  std::map<Perm, int> index;

  S4Oracle() {
    Perm p = {0, 1, 2, 3};
    std::vector<Perm> all;
    do {
      all.push_back(p);
    } while (std::next_permutation(p.begin(), p.end()));
    for (const auto& q : all) {
      index[q] = int(elems.size());
      elems.push_back(q);
    }
  }

  static Perm mul(const Perm& a, const Perm& b) {
    // composition acting on positions: (a*b)(i) = a(b(i))
    Perm c;
    for (int i = 0; i < 4; ++i) c[i] = a[b[i]];
    return c;
  }

  static Perm gen(int s) {
    Perm p = {0, 1, 2, 3};
    std::swap(p[s], p[s + 1]);
    return p;
  }

  static int inversions(const Perm& p) {
    int inv = 0;
    for (int i = 0; i < 4; ++i)
      for (int j = i + 1; j < 4; ++j)
        if (p[i] > p[j]) ++inv;
    return inv;
  }
};

// Exhaustive subword test on the fixed reduced word of y.
bool subword_leq(const GroupTable& t, int x, int y) {
  const auto& wy = t.word(y);
  const int k = t.length(x);
  const int n = int(wy.size());
  if (k > n) return false;
  for (uint32_t mask = 0; mask < (1u << n); ++mask) {
    if (__builtin_popcount(mask) != k) continue;
    std::vector<int> sub;
    for (int i = 0; i < n; ++i)
      if (mask & (1u << i)) sub.push_back(wy[i]);
    if (t.element_of_word(sub) == x && int(sub.size()) == k) return true;
  }
  return false;
}

std::multiset<int> length_multiset(const GroupTable& t) {
  std::multiset<int> m;
  for (int w = 0; w < t.size(); ++w) m.insert(t.length(w));
  return m;
}

}  // namespace

TEST_CASE("enumerate small groups") {
  GroupTable a2 = group_of("A2");
  CHECK(a2.size() == 6);
  CHECK(length_multiset(a2) == std::multiset<int>{0, 1, 1, 2, 2, 3});

  CHECK(group_of("B2").size() == 8);
  CHECK(group_of("A1").size() == 2);
  CHECK(group_of("G2").size() == 12);
  CHECK(group_of("I2(5)").size() == 10);
  CHECK(group_of("I2(7)").size() == 14);
  CHECK(group_of("H3").size() == 120);
  CHECK(group_of("D4").size() == 192);
  CHECK(group_of("B3").size() == 48);
  CHECK(group_of("A1+A1").size() == 4);
  CHECK(group_of("A2+B2").size() == 48);
}

TEST_CASE("A3 against the S4 permutation model") {
  GroupTable t = group_of("A3");
  S4Oracle s4;
  REQUIRE(t.size() == 24);
  CHECK(t.max_length() == 6);

  // map each element through its reduced word and compare everything
  std::vector<S4Oracle::Perm> img(t.size());
  for (int w = 0; w < t.size(); ++w) {
    S4Oracle::Perm p = {0, 1, 2, 3};
    for (int s : t.word(w)) p = S4Oracle::mul(p, S4Oracle::gen(s));
    img[w] = p;
    CHECK(S4Oracle::inversions(p) == t.length(w));
  }
  std::set<S4Oracle::Perm> distinct(img.begin(), img.end());
  CHECK(distinct.size() == 24);

  for (int w = 0; w < t.size(); ++w)
    for (int s = 0; s < 3; ++s) {
      S4Oracle::Perm expected = S4Oracle::mul(img[w], S4Oracle::gen(s));
      CHECK(img[t.mul_gen_right(w, s)] == expected);
    }
  for (int x = 0; x < t.size(); ++x)
    for (int y = 0; y < t.size(); ++y)
      CHECK(img[t.multiply(x, y)] == S4Oracle::mul(img[x], img[y]));
}

TEST_CASE("element numbering is canonical") {
  GroupTable t = group_of("A3");
  CHECK(t.word(0).empty());
  for (int s = 0; s < 3; ++s) CHECK(t.word(t.generator(s)) == std::vector<int>{s});
  for (int w = 0; w + 1 < t.size(); ++w) {
    CHECK(t.length(w) <= t.length(w + 1));
    if (t.length(w) == t.length(w + 1)) CHECK(t.word(w) < t.word(w + 1));
  }
  // re-enumeration is bit-identical
  GroupTable t2 = group_of("A3");
  for (int w = 0; w < t.size(); ++w) CHECK(t.word(w) == t2.word(w));
}

TEST_CASE("enumeration errors") {
  CHECK_THROWS_WITH_AS(GroupTable::enumerate(spec_of("A3"), 10),
                       doctest::Contains("too large or infinite"), ConfigError);

  // affine triangle group is infinite
  CoxeterSpec aff;
  aff.rank = 3;
  aff.matrix = {{1, 3, 3}, {3, 1, 3}, {3, 3, 1}};
  aff.weights.assign(3, GammaElt::single(1));
  aff.label = "affine";
  CHECK_THROWS_AS(GroupTable::enumerate(aff, 2000), ConfigError);

  // odd bond with unequal weights
  CoxeterSpec bad = spec_of("A2");
  bad.weights = {GammaElt::single(1), GammaElt::single(2)};
  CHECK_THROWS_WITH_AS(GroupTable::enumerate(bad),
                       doctest::Contains("inconsistent weight function"), ConfigError);

  // B2 weights may differ (even bond)
  CoxeterSpec ok = spec_of("B2");
  ok.weights = {GammaElt::single(1), GammaElt::single(2)};
  CHECK(GroupTable::enumerate(ok).size() == 8);

  CoxeterSpec neg = spec_of("A1");
  neg.weights = {GammaElt::single(-1)};
  CHECK_THROWS_AS(GroupTable::enumerate(neg), ConfigError);

  CHECK_THROWS_AS(spec_of("Q5"), ConfigError);
  CHECK_THROWS_AS(spec_of("E9"), ConfigError);
  CHECK_THROWS_AS(spec_of("I2(1)"), ConfigError);
}

TEST_CASE("lengths, weights, inverses") {
  for (const char* type : {"A2", "B2", "A3", "B3"}) {
    GroupTable t = group_of(type);
    for (int w = 0; w < t.size(); ++w) {
      CHECK(t.length(t.inverse(w)) == t.length(w));
      CHECK(t.weight(t.inverse(w)) == t.weight(w));
      CHECK(t.multiply(w, t.inverse(w)) == 0);
      // unit weights: weight = length
      CHECK(t.weight(w) == GammaElt::single(t.length(w)));
      for (int s = 0; s < t.rank(); ++s)
        CHECK(t.mul_gen_right(t.mul_gen_right(w, s), s) == w);
    }
  }
  // weight additivity on length-additive products
  GroupTable b2 = GroupTable::enumerate([] {
    CoxeterSpec s = spec_of("B2");
    s.weights = {GammaElt::single(1), GammaElt::single(3)};
    return s;
  }());
  for (int x = 0; x < b2.size(); ++x)
    for (int y = 0; y < b2.size(); ++y) {
      int xy = b2.multiply(x, y);
      if (b2.length(xy) == b2.length(x) + b2.length(y))
        CHECK(b2.weight(xy) == b2.weight(x) + b2.weight(y));
    }
}

TEST_CASE("bruhat order") {
  GroupTable a2 = group_of("A2");
  int w0 = a2.size() - 1;
  CHECK(a2.bruhat_leq(0, w0));
  CHECK_FALSE(a2.bruhat_leq(a2.generator(0), a2.generator(1)));
  CHECK(a2.bruhat_leq(a2.generator(0), w0));

  for (const char* type : {"A2", "B2", "A3"}) {
    GroupTable t = group_of(type);
    for (int x = 0; x < t.size(); ++x)
      for (int y = 0; y < t.size(); ++y)
        CHECK(t.bruhat_leq(x, y) == subword_leq(t, x, y));
  }
}

TEST_CASE("longest elements of parabolics") {
  GroupTable a2 = group_of("A2");
  CHECK(a2.longest_element(std::vector<int>{0}) == a2.generator(0));
  int w0 = a2.longest_element(std::vector<int>{0, 1});
  CHECK(a2.length(w0) == 3);
  CHECK(w0 == a2.size() - 1);

  GroupTable a3 = group_of("A3");
  int l13 = a3.longest_element(std::vector<int>{0, 2});
  CHECK(a3.length(l13) == 2);
  CHECK(a3.weight(l13) == GammaElt::single(2));
  CHECK(l13 == a3.multiply(a3.generator(0), a3.generator(2)));
}

TEST_CASE("diagram automorphisms act letterwise") {
  GroupTable a3 = group_of("A3");
  std::vector<int> swap13 = {2, 1, 0};
  DiagramAutGroup g = DiagramAutGroup::generate(a3.spec(), {swap13});
  CHECK(g.order() == 2);

  int s1s2 = a3.element_of_word(std::vector<int>{0, 1});
  int s3s2 = a3.element_of_word(std::vector<int>{2, 1});
  CHECK(act(a3, swap13, s1s2) == s3s2);
  CHECK(act(a3, swap13, 0) == 0);

  for (int w = 0; w < a3.size(); ++w) {
    int img = act(a3, swap13, w);
    CHECK(a3.length(img) == a3.length(w));
    CHECK(a3.weight(img) == a3.weight(w));
    CHECK(act(a3, swap13, img) == w);
  }

  // order-3 automorphism of D4: three applications are the identity
  GroupTable d4 = group_of("D4");
  std::vector<int> tri = {2, 1, 3, 0};  // s1 -> s3 -> s4 -> s1, fixing s2
  DiagramAutGroup gd = DiagramAutGroup::generate(d4.spec(), {tri});
  CHECK(gd.order() == 3);
  std::vector<int> tab = act_table(d4, tri);
  for (int w = 0; w < d4.size(); ++w) CHECK(tab[tab[tab[w]]] == w);

  // invalid inputs
  CHECK_THROWS_AS(DiagramAutGroup::generate(a3.spec(), {{0, 0, 1}}), ConfigError);
  CHECK_THROWS_AS(DiagramAutGroup::generate(a3.spec(), {{1, 0, 2}}), ConfigError);
}

TEST_CASE("fixed subsystem of A2 under the diagram swap") {
  GroupTable a2 = group_of("A2");
  DiagramAutGroup g = DiagramAutGroup::generate(a2.spec(), {{1, 0}});
  DescentSystem d = fixed_subsystem(a2, g);

  CHECK(d.sub.size() == 2);
  CHECK(d.sub_spec.rank == 1);
  CHECK(d.s_omega == std::vector<int>{5});
  CHECK(d.sub_spec.weights[0] == GammaElt::single(3));

  // oracle: scan of all six elements
  std::vector<int> tab = act_table(a2, {1, 0});
  std::vector<int> fixed;
  for (int w = 0; w < 6; ++w)
    if (tab[w] == w) fixed.push_back(w);
  CHECK(fixed == d.fixed);
  CHECK(fixed == std::vector<int>{0, 5});
}

TEST_CASE("fixed subsystem of A3 under the diagram swap") {
  GroupTable a3 = group_of("A3");
  DiagramAutGroup g = DiagramAutGroup::generate(a3.spec(), {{2, 1, 0}});
  DescentSystem d = fixed_subsystem(a3, g);

  CHECK(d.sub.size() == 8);
  CHECK(d.sub_spec.rank == 2);
  // order 4 product: type B2 with weights (1,2)
  CHECK(d.sub_spec.matrix[0][1] == 4);
  CHECK(d.sub_spec.weights[0] == GammaElt::single(1));
  CHECK(d.sub_spec.weights[1] == GammaElt::single(2));
  CHECK(d.s_omega[0] == a3.generator(1));
  CHECK(d.s_omega[1] == a3.multiply(a3.generator(0), a3.generator(2)));

  // oracle: permutation model shows s2 * s1s3 has order 4
  S4Oracle s4;
  auto p2 = S4Oracle::gen(1);
  auto p13 = S4Oracle::mul(S4Oracle::gen(0), S4Oracle::gen(2));
  auto q = S4Oracle::mul(p2, p13);
  auto cur = q;
  int ord = 1;
  while (cur != S4Oracle::Perm{0, 1, 2, 3}) {
    cur = S4Oracle::mul(cur, q);
    ++ord;
  }
  CHECK(ord == 4);

  // fixed-point scan
  std::vector<int> tab = act_table(a3, {2, 1, 0});
  std::vector<int> fixed;
  for (int w = 0; w < a3.size(); ++w)
    if (tab[w] == w) fixed.push_back(w);
  CHECK(fixed == d.fixed);
  CHECK(fixed.size() == 8);
}

TEST_CASE("fixed subsystem of D4 under triality") {
  GroupTable d4 = group_of("D4");
  DiagramAutGroup g = DiagramAutGroup::generate(d4.spec(), {{2, 1, 3, 0}});
  DescentSystem d = fixed_subsystem(d4, g);

  // type G2 with weights (1,3)
  CHECK(d.sub_spec.rank == 2);
  CHECK(d.sub_spec.matrix[0][1] == 6);
  CHECK(d.sub.size() == 12);
  CHECK(d.sub_spec.weights[0] == GammaElt::single(1));
  CHECK(d.sub_spec.weights[1] == GammaElt::single(3));
  CHECK(d4.length(d.s_omega[1]) == 3);

  std::vector<int> tab = act_table(d4, {2, 1, 3, 0});
  std::vector<int> fixed;
  for (int w = 0; w < d4.size(); ++w)
    if (tab[w] == w) fixed.push_back(w);
  CHECK(fixed == d.fixed);
}

TEST_CASE("length additivity transfers between W and the fixed subgroup") {
  GroupTable a3 = group_of("A3");
  DiagramAutGroup g = DiagramAutGroup::generate(a3.spec(), {{2, 1, 0}});
  DescentSystem d = fixed_subsystem(a3, g);
  for (int x = 0; x < d.sub.size(); ++x)
    for (int y = 0; y < d.sub.size(); ++y) {
      int xy = d.sub.multiply(x, y);
      bool add_sub = d.sub.length(xy) == d.sub.length(x) + d.sub.length(y);
      bool add_big = a3.length(d.embed[xy]) == a3.length(d.embed[x]) + a3.length(d.embed[y]);
      CHECK(add_sub == add_big);
      CHECK(d.embed[xy] == a3.multiply(d.embed[x], d.embed[y]));
    }
}

TEST_CASE("trivial automorphism group reproduces the group") {
  GroupTable b2 = group_of("B2");
  DescentSystem d = fixed_subsystem(b2, DiagramAutGroup::trivial(2));
  CHECK(d.sub.size() == b2.size());
  CHECK(d.sub_spec.matrix == b2.spec().matrix);
  for (int x = 0; x < d.sub.size(); ++x) CHECK(d.embed[x] == x);
}

TEST_CASE("subgroup enumeration of the triality S3") {
  GroupTable d4 = group_of("D4");
  DiagramAutGroup s3 =
      DiagramAutGroup::generate(d4.spec(), {{2, 1, 3, 0}, {0, 1, 3, 2}});
  CHECK(s3.order() == 6);
  auto subs = s3.subgroups(d4.spec());
  REQUIRE(subs.size() == 6);  // 1, three C2, C3, S3
  CHECK(subs[0].order() == 1);
  CHECK(subs[1].order() == 2);
  CHECK(subs[2].order() == 2);
  CHECK(subs[3].order() == 2);
  CHECK(subs[4].order() == 3);
  CHECK(subs[5].order() == 6);

  // a C2 fixes a B3 subsystem with weights (1,1,2)
  DescentSystem d = fixed_subsystem(d4, subs[1]);
  CHECK(d.sub.size() == 48);
  CHECK(d.sub_spec.rank == 3);
}
