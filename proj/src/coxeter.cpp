#include "kld/coxeter.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <numeric>
#include <set>

namespace kld {

namespace {

/*
  Coset enumeration over the trivial subgroup, HLT strategy with full
  coincidence processing. All generators are involutions, so the coset
  table is its own inverse table: every assignment c.s = d is stored in
  both directions.

  Every scan of a relation either closes, yields a deduction, or defines
  fresh cosets until it closes, so after one sweep over all (eventually
  defined) cosets the table is complete and every relation closes from
  every live coset. Coincidences merge classes through a union-find with
  queue-based propagation.
*/
class CosetEnumerator {
 public:
  CosetEnumerator(const CoxeterSpec& spec, int cap) : n_(spec.rank), cap_(cap) {
    for (int i = 0; i < n_; ++i)
      for (int j = i + 1; j < n_; ++j) {
        std::vector<int> w;
        for (int k = 0; k < spec.matrix[i][j]; ++k) {
          w.push_back(i);
          w.push_back(j);
        }
        rels_.push_back(std::move(w));
      }
    // involution relations last: they complete the table where the braid
    // relations did not force entries
    for (int i = 0; i < n_; ++i) rels_.push_back({i, i});
    new_coset();
  }

  // right-multiplication table over live cosets, in definition order
  std::pair<std::vector<int>, int> run() {
    for (int c = 0; c < int(rep_.size()); ++c) {
      if (find(c) != c) continue;
      for (const auto& w : rels_) {
        scan_and_fill(c, w);
        if (find(c) != c) break;
      }
    }
    return compact();
  }

 private:
  int n_, cap_;
  std::vector<std::vector<int>> rels_;
  std::vector<int> tab_;  // tab_[c*n_+g]; -1 undefined
  std::vector<int> rep_;  // union-find, path-halving
  std::vector<std::pair<int, int>> pending_;
  int live_ = 0;

  int find(int c) {
    while (rep_[c] != c) {
      rep_[c] = rep_[rep_[c]];
      c = rep_[c];
    }
    return c;
  }
  int get(int c, int g) const { return tab_[size_t(c) * n_ + g]; }
  void put(int c, int g, int d) { tab_[size_t(c) * n_ + g] = d; }

  int new_coset() {
    if (live_ >= cap_ || int(rep_.size()) >= 8 * cap_ + 64)
      throw ConfigError("group too large or infinite (element cap " +
                        std::to_string(cap_) + " exceeded)");
    int c = int(rep_.size());
    rep_.push_back(c);
    tab_.resize(tab_.size() + n_, -1);
    ++live_;
    return c;
  }

  // record c.g = d, propagating any conflict
  void deduce(int c, int g, int d) {
    c = find(c);
    d = find(d);
    int cg = get(c, g);
    if (cg != -1) {
      if (find(cg) != d) coincide(find(cg), d);
      return;
    }
    int dg = get(d, g);
    if (dg != -1) {
      if (find(dg) != c) coincide(find(dg), c);
      return;
    }
    put(c, g, d);
    put(d, g, c);
  }

  void coincide(int a, int b) {
    pending_.push_back({a, b});
    while (!pending_.empty()) {
      auto [x, y] = pending_.back();
      pending_.pop_back();
      x = find(x);
      y = find(y);
      if (x == y) continue;
      if (x > y) std::swap(x, y);  // smaller index survives; 0 never dies
      rep_[y] = x;
      --live_;
      for (int g = 0; g < n_; ++g) {
        int e = get(y, g);
        if (e == -1) continue;
        put(y, g, -1);
        if (get(e, g) == y) put(e, g, -1);
        int xr = find(x), er = find(e);
        int cur = get(xr, g);
        if (cur != -1) {
          if (find(cur) != er) pending_.push_back({cur, er});
        } else if (int cur2 = get(er, g); cur2 != -1) {
          if (find(cur2) != xr) pending_.push_back({cur2, xr});
        } else {
          put(xr, g, er);
          put(er, g, xr);
        }
      }
    }
  }

  void scan_and_fill(int c, const std::vector<int>& w) {
    const int L = int(w.size());
    int f = c, i = 0;   // forward state x_i
    int b = c, j = L;   // backward state x_j
    for (;;) {
      while (i < j) {
        int t = get(f, w[i]);
        if (t == -1) break;
        f = t;
        ++i;
      }
      while (j > i) {
        int t = get(b, w[j - 1]);
        if (t == -1) break;
        b = t;
        --j;
      }
      if (i == j) {
        if (f != b) coincide(f, b);
        return;
      }
      if (j == i + 1) {
        deduce(f, w[i], b);
        return;
      }
      int d = new_coset();
      put(f, w[i], d);
      put(d, w[i], f);
      f = d;
      ++i;
    }
  }

  std::pair<std::vector<int>, int> compact() {
    std::vector<int> dense(rep_.size(), -1);
    int n = 0;
    for (int c = 0; c < int(rep_.size()); ++c)
      if (find(c) == c) dense[c] = n++;
    std::vector<int> right(size_t(n) * n_, -1);
    for (int c = 0; c < int(rep_.size()); ++c) {
      if (find(c) != c) continue;
      for (int g = 0; g < n_; ++g) {
        int d = get(c, g);
        if (d == -1 || find(d) != d)
          throw InternalError("coset table incomplete after enumeration");
        right[size_t(dense[c]) * n_ + g] = dense[d];
      }
    }
    return {std::move(right), n};
  }
};

std::vector<std::vector<int>> chain_matrix(int n, int special_bond, int special_pos) {
  std::vector<std::vector<int>> m(n, std::vector<int>(n, 2));
  for (int i = 0; i < n; ++i) m[i][i] = 1;
  for (int i = 0; i + 1 < n; ++i) m[i][i + 1] = m[i + 1][i] = 3;
  if (special_pos >= 0) m[special_pos][special_pos + 1] = m[special_pos + 1][special_pos] = special_bond;
  return m;
}

CoxeterSpec single_type(const std::string& type) {
  CoxeterSpec s;
  s.label = type;
  if (type.size() < 2) throw ConfigError("unknown group type '" + type + "'");
  char family = type[0];
  std::string rest = type.substr(1);

  if (family == 'I') {
    // I2(m)
    size_t open = rest.find('('), close = rest.find(')');
    if (rest.substr(0, 1) != "2" || open == std::string::npos || close == std::string::npos)
      throw ConfigError("unknown group type '" + type + "' (expected I2(m))");
    int m = std::stoi(rest.substr(open + 1, close - open - 1));
    if (m < 2) throw ConfigError("I2(m) needs m >= 2");
    s.rank = 2;
    s.matrix = {{1, m}, {m, 1}};
    return s;
  }

  for (char c : rest)
    if (!std::isdigit(static_cast<unsigned char>(c)))
      throw ConfigError("unknown group type '" + type + "'");
  int n = std::stoi(rest);
  s.rank = n;
  switch (family) {
    case 'A':
      if (n < 1) throw ConfigError("bad rank in '" + type + "'");
      s.matrix = chain_matrix(n, 3, -1);
      break;
    case 'B':
    case 'C':
      if (n < 2) throw ConfigError("bad rank in '" + type + "'");
      s.matrix = chain_matrix(n, 4, n - 2);
      break;
    case 'D': {
      if (n < 3) throw ConfigError("bad rank in '" + type + "'");
      s.matrix = chain_matrix(n - 1, 3, -1);
      for (auto& row : s.matrix) row.push_back(2);
      s.matrix.push_back(std::vector<int>(n, 2));
      s.matrix[n - 1][n - 1] = 1;
      s.matrix[n - 3][n - 1] = s.matrix[n - 1][n - 3] = 3;
      break;
    }
    case 'E': {
      if (n < 6 || n > 8) throw ConfigError("bad rank in '" + type + "'");
      s.matrix = std::vector<std::vector<int>>(n, std::vector<int>(n, 2));
      for (int i = 0; i < n; ++i) s.matrix[i][i] = 1;
      auto bond = [&](int i, int j) { s.matrix[i][j] = s.matrix[j][i] = 3; };
      bond(0, 1);
      bond(1, 2);
      bond(2, 3);
      bond(2, 4);
      for (int i = 4; i + 1 < n; ++i) bond(i, i + 1);
      break;
    }
    case 'F':
      if (n != 4) throw ConfigError("bad rank in '" + type + "'");
      s.matrix = chain_matrix(4, 4, 1);
      break;
    case 'G':
      if (n != 2) throw ConfigError("bad rank in '" + type + "'");
      s.matrix = {{1, 6}, {6, 1}};
      break;
    case 'H':
      if (n != 3 && n != 4) throw ConfigError("bad rank in '" + type + "'");
      s.matrix = chain_matrix(n, 3, -1);
      s.matrix[0][1] = s.matrix[1][0] = 5;
      break;
    default:
      throw ConfigError("unknown group type '" + type + "'");
  }
  return s;
}

}  // namespace

CoxeterSpec CoxeterSpec::from_type(const std::string& type) {
  std::vector<CoxeterSpec> parts;
  size_t pos = 0;
  while (pos <= type.size()) {
    size_t plus = type.find('+', pos);
    std::string piece = type.substr(pos, plus == std::string::npos ? plus : plus - pos);
    if (piece.empty()) throw ConfigError("unknown group type '" + type + "'");
    parts.push_back(single_type(piece));
    if (plus == std::string::npos) break;
    pos = plus + 1;
  }
  if (parts.size() == 1) {
    CoxeterSpec s = parts[0];
    s.weights.assign(s.rank, GammaElt::single(1));
    return s;
  }
  CoxeterSpec s;
  s.label = type;
  for (const auto& p : parts) s.rank += p.rank;
  s.matrix = std::vector<std::vector<int>>(s.rank, std::vector<int>(s.rank, 2));
  int off = 0;
  for (const auto& p : parts) {
    for (int i = 0; i < p.rank; ++i)
      for (int j = 0; j < p.rank; ++j) s.matrix[off + i][off + j] = p.matrix[i][j];
    off += p.rank;
  }
  s.weights.assign(s.rank, GammaElt::single(1));
  return s;
}

void CoxeterSpec::validate() const {
  if (rank < 0) throw ConfigError("group rank must be nonnegative");
  if (int(matrix.size()) != rank) throw ConfigError("coxeter matrix has wrong size");
  for (int i = 0; i < rank; ++i) {
    if (int(matrix[i].size()) != rank) throw ConfigError("coxeter matrix is not square");
    if (matrix[i][i] != 1) throw ConfigError("coxeter matrix diagonal must be 1");
    for (int j = 0; j < rank; ++j) {
      if (i != j && matrix[i][j] < 2)
        throw ConfigError("off-diagonal coxeter matrix entries must be >= 2");
      if (matrix[i][j] != matrix[j][i]) throw ConfigError("coxeter matrix must be symmetric");
    }
  }
  if (int(weights.size()) != rank)
    throw ConfigError("need one weight per generator (" + std::to_string(rank) + ")");
  for (const auto& w : weights)
    if (!(GammaElt::zero() < w))
      throw ConfigError("generator weights must be strictly positive");
  if (gamma_rank < 1 || gamma_rank > kMaxRank)
    throw ConfigError("gamma rank must lie in 1.." + std::to_string(kMaxRank));
}

void CoxeterSpec::validate_weight_consistency() const {
  // conjugate generators (odd bond chains) must carry equal weights
  std::vector<int> root(rank);
  std::iota(root.begin(), root.end(), 0);
  auto find = [&](int x) {
    while (root[x] != x) x = root[x] = root[root[x]];
    return x;
  };
  for (int i = 0; i < rank; ++i)
    for (int j = i + 1; j < rank; ++j)
      if (matrix[i][j] % 2 == 1) root[find(i)] = find(j);
  for (int i = 0; i < rank; ++i)
    if (weights[i] != weights[find(i)])
      throw ConfigError("inconsistent weight function: generators " + std::to_string(i + 1) +
                        " and " + std::to_string(find(i) + 1) +
                        " are conjugate (odd bond) but have different weights");
}

bool CoxeterSpec::same_presentation(const CoxeterSpec& o) const {
  return rank == o.rank && matrix == o.matrix && weights == o.weights &&
         gamma_rank == o.gamma_rank;
}

void BitMatrix::or_row(int dst, int src) {
  for (size_t k = 0; k < words_; ++k)
    bits_[size_t(dst) * words_ + k] |= bits_[size_t(src) * words_ + k];
}

GroupTable GroupTable::enumerate(const CoxeterSpec& spec, int cap) {
  spec.validate();
  spec.validate_weight_consistency();
  auto [right, n] = CosetEnumerator(spec, cap).run();
  GroupTable t;
  t.build_from_right_table(spec, std::move(right), n);
  return t;
}

GroupTable GroupTable::from_right_table(const CoxeterSpec& spec, std::vector<int> right,
                                        int size) {
  spec.validate();
  spec.validate_weight_consistency();
  if (int(right.size()) != size * spec.rank || size < 1)
    throw ConfigError("right-multiplication table has wrong shape");
  for (int v : right)
    if (v < 0 || v >= size) throw ConfigError("right-multiplication table entry out of range");
  GroupTable t;
  t.build_from_right_table(spec, std::move(right), size);
  return t;
}

void GroupTable::build_from_right_table(const CoxeterSpec& spec, std::vector<int> right0,
                                        int n) {
  const int r = spec.rank;

  // lengths = Cayley graph distance from the identity coset
  std::vector<int> len(n, -1);
  std::vector<int> bfs;
  bfs.reserve(n);
  len[0] = 0;
  bfs.push_back(0);
  for (size_t q = 0; q < bfs.size(); ++q) {
    int c = bfs[q];
    for (int s = 0; s < r; ++s) {
      int d = right0[size_t(c) * r + s];
      if (len[d] == -1) {
        len[d] = len[c] + 1;
        bfs.push_back(d);
      }
    }
  }
  for (int c = 0; c < n; ++c)
    if (len[c] == -1) throw InternalError("coset table is not transitive");

  // left-multiplication table along the BFS tree: s.(c.t) = (s.c).t
  std::vector<int> left0(size_t(n) * r);
  for (int s = 0; s < r; ++s) left0[0 * r + s] = right0[0 * r + s];
  for (size_t q = 0; q < bfs.size(); ++q) {
    int c = bfs[q];
    for (int tgen = 0; tgen < r; ++tgen) {
      int d = right0[size_t(c) * r + tgen];
      if (len[d] != len[c] + 1) continue;
      for (int s = 0; s < r; ++s)
        left0[size_t(d) * r + s] = right0[size_t(left0[size_t(c) * r + s]) * r + tgen];
    }
  }

  // lex-minimal reduced words, by increasing length: the first letter of the
  // minimal word is the smallest left descent
  std::vector<std::vector<int>> word0(n);
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) { return len[a] < len[b]; });
  for (int c : order) {
    if (c == 0) continue;
    int s = 0;
    while (len[left0[size_t(c) * r + s]] >= len[c]) ++s;
    int sc = left0[size_t(c) * r + s];
    word0[c].reserve(len[c]);
    word0[c].push_back(s);
    word0[c].insert(word0[c].end(), word0[sc].begin(), word0[sc].end());
  }

  // canonical numbering: (length, lex-minimal word)
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    if (len[a] != len[b]) return len[a] < len[b];
    return word0[a] < word0[b];
  });
  std::vector<int> newidx(n);
  for (int i = 0; i < n; ++i) newidx[order[i]] = i;

  spec_ = spec;
  size_ = n;
  right_.assign(size_t(n) * r, -1);
  left_.assign(size_t(n) * r, -1);
  length_.resize(n);
  word_.resize(n);
  weight_.resize(n);
  inverse_.resize(n);
  for (int c = 0; c < n; ++c) {
    int i = newidx[c];
    length_[i] = len[c];
    word_[i] = word0[c];
    for (int s = 0; s < r; ++s) {
      right_[size_t(i) * r + s] = newidx[right0[size_t(c) * r + s]];
      left_[size_t(i) * r + s] = newidx[left0[size_t(c) * r + s]];
    }
  }
  for (int w = 0; w < n; ++w) {
    GammaElt phi;
    int inv = 0;
    for (auto it = word_[w].rbegin(); it != word_[w].rend(); ++it)
      inv = right_[size_t(inv) * r + *it];
    for (int s : word_[w]) phi += spec.weights[s];
    inverse_[w] = inv;
    weight_[w] = phi;
  }

  // numbering invariants: identity first, then the generators in order
  if (!word_[0].empty()) throw InternalError("identity not numbered 0");
  for (int s = 0; s < r && s + 1 < n; ++s)
    if (word_[s + 1] != std::vector<int>{s}) throw InternalError("generator numbering broken");
  for (int w = 0; w < n; ++w) {
    if (inverse_[inverse_[w]] != w || length_[inverse_[w]] != length_[w])
      throw InternalError("inverse table broken");
    for (int s = 0; s < r; ++s) {
      if (right_[size_t(right_[size_t(w) * r + s]) * r + s] != w)
        throw InternalError("right multiplication not involutive");
      if (std::abs(length_[right_[size_t(w) * r + s]] - length_[w]) != 1)
        throw InternalError("generator action must change length by one");
    }
  }

  build_bruhat();
}

void GroupTable::build_bruhat() {
  const int n = size_;
  bruhat_ = BitMatrix(n);
  bruhat_.set(0, 0);
  for (int y = 1; y < n; ++y) {
    int s = first_left_descent(y);
    int sy = mul_gen_left(s, y);  // sy < y, so its row exists
    for (int x = 0; x < n; ++x) {
      int sx = mul_gen_left(s, x);
      bool le = length(sx) < length(x) ? bruhat_.get(sy, sx) : bruhat_.get(sy, x);
      if (le) bruhat_.set(y, x);
    }
  }
}

int GroupTable::first_left_descent(int w) const {
  for (int s = 0; s < rank(); ++s)
    if (left_descent(s, w)) return s;
  return -1;
}

int GroupTable::multiply(int x, int y) const {
  int cur = x;
  for (int s : word_[y]) cur = mul_gen_right(cur, s);
  return cur;
}

int GroupTable::element_of_word(std::span<const int> w) const {
  int cur = 0;
  for (int s : w) {
    if (s < 0 || s >= rank()) throw ConfigError("word letter out of range");
    cur = mul_gen_right(cur, s);
  }
  return cur;
}

int GroupTable::longest_element(std::span<const int> gens) const {
  int cur = 0;
  for (;;) {
    int next = -1;
    for (int s : gens) {
      int c = mul_gen_right(cur, s);
      if (length(c) > length(cur)) {
        next = c;
        break;
      }
    }
    if (next == -1) return cur;
    cur = next;
  }
}

DiagramAutGroup DiagramAutGroup::generate(const CoxeterSpec& spec,
                                          const std::vector<std::vector<int>>& gens) {
  const int n = spec.rank;
  for (const auto& p : gens) {
    if (int(p.size()) != n) throw ConfigError("automorphism permutation has wrong length");
    std::vector<bool> seen(n, false);
    for (int v : p) {
      if (v < 0 || v >= n || seen[v]) throw ConfigError("automorphism is not a permutation");
      seen[v] = true;
    }
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j)
        if (spec.matrix[p[i]][p[j]] != spec.matrix[i][j])
          throw ConfigError("automorphism does not preserve the coxeter matrix");
      if (spec.weights[p[i]] != spec.weights[i])
        throw ConfigError("automorphism does not preserve the weights");
    }
  }

  std::vector<int> id(n);
  std::iota(id.begin(), id.end(), 0);
  std::set<std::vector<int>> closed{id};
  std::vector<std::vector<int>> frontier{id};
  while (!frontier.empty()) {
    std::vector<std::vector<int>> next;
    for (const auto& a : frontier)
      for (const auto& g : gens) {
        std::vector<int> c(n);
        for (int i = 0; i < n; ++i) c[i] = g[a[i]];
        if (closed.insert(c).second) next.push_back(c);
      }
    frontier = std::move(next);
  }

  DiagramAutGroup g;
  g.rank_ = n;
  g.perms_.assign(closed.begin(), closed.end());
  return g;
}

DiagramAutGroup DiagramAutGroup::trivial(int rank) {
  std::vector<int> id(rank);
  std::iota(id.begin(), id.end(), 0);
  DiagramAutGroup g;
  g.rank_ = rank;
  g.perms_ = {id};
  return g;
}

bool DiagramAutGroup::is_p_power_order(uint32_t p) const {
  if (!is_prime(p)) return false;
  int n = order();
  while (n % p == 0) n /= p;
  return n == 1;
}

std::vector<DiagramAutGroup> DiagramAutGroup::subgroups(const CoxeterSpec& spec) const {
  if (order() > 16) throw ConfigError("subgroup enumeration supported for |G| <= 16");
  std::set<std::set<std::vector<int>>> seen;
  std::vector<DiagramAutGroup> out;
  const int n = order();
  for (uint32_t mask = 0; mask < (1u << n); ++mask) {
    std::vector<std::vector<int>> gens;
    for (int i = 0; i < n; ++i)
      if (mask & (1u << i)) gens.push_back(perms_[i]);
    DiagramAutGroup h = generate(spec, gens);
    std::set<std::vector<int>> key(h.perms_.begin(), h.perms_.end());
    if (seen.insert(key).second) out.push_back(std::move(h));
  }
  std::sort(out.begin(), out.end(), [](const DiagramAutGroup& a, const DiagramAutGroup& b) {
    if (a.order() != b.order()) return a.order() < b.order();
    return a.perms() < b.perms();
  });
  return out;
}

int act(const GroupTable& t, const std::vector<int>& sigma, int w) {
  std::vector<int> mapped;
  mapped.reserve(t.word(w).size());
  for (int s : t.word(w)) mapped.push_back(sigma[s]);
  return t.element_of_word(mapped);
}

std::vector<int> act_table(const GroupTable& t, const std::vector<int>& sigma) {
  std::vector<int> out(t.size());
  for (int w = 0; w < t.size(); ++w) out[w] = act(t, sigma, w);
  return out;
}

DescentSystem fixed_subsystem(const GroupTable& t, const DiagramAutGroup& g) {
  const int r = t.rank();

  // generator orbits under G
  std::vector<int> root(r);
  std::iota(root.begin(), root.end(), 0);
  auto find = [&](int x) {
    while (root[x] != x) x = root[x] = root[root[x]];
    return x;
  };
  for (const auto& p : g.perms())
    for (int s = 0; s < r; ++s) root[find(s)] = find(p[s]);
  std::map<int, std::vector<int>> by_root;
  for (int s = 0; s < r; ++s) by_root[find(s)].push_back(s);

  DescentSystem d;
  for (auto& [rt, orb] : by_root) {
    d.orbits.push_back(orb);
    d.s_omega.push_back(t.longest_element(orb));
  }
  // order S_G by (length of the orbit's longest element, smallest generator)
  std::vector<int> order(d.orbits.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    int la = t.length(d.s_omega[a]), lb = t.length(d.s_omega[b]);
    if (la != lb) return la < lb;
    return d.orbits[a][0] < d.orbits[b][0];
  });
  {
    std::vector<std::vector<int>> orb2;
    std::vector<int> so2;
    for (int i : order) {
      orb2.push_back(d.orbits[i]);
      so2.push_back(d.s_omega[i]);
    }
    d.orbits = std::move(orb2);
    d.s_omega = std::move(so2);
  }

  const int k = int(d.s_omega.size());
  d.sub_spec.rank = k;
  d.sub_spec.gamma_rank = t.spec().gamma_rank;
  d.sub_spec.label = t.spec().label + (g.is_trivial() ? "" : "^G");
  d.sub_spec.matrix = std::vector<std::vector<int>>(k, std::vector<int>(k, 1));
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) {
      if (i == j) continue;
      int prod = t.multiply(d.s_omega[i], d.s_omega[j]);
      int cur = prod, ord = 1;
      while (cur != 0) {
        cur = t.multiply(cur, prod);
        ++ord;
      }
      d.sub_spec.matrix[i][j] = ord;
    }
  for (int i = 0; i < k; ++i) d.sub_spec.weights.push_back(t.weight(d.s_omega[i]));

  d.sub = GroupTable::enumerate(d.sub_spec, t.size());

  // embed via words in the s_omega generators
  d.embed.resize(d.sub.size());
  for (int x = 0; x < d.sub.size(); ++x) {
    int cur = 0;
    for (int s : d.sub.word(x)) cur = t.multiply(cur, d.s_omega[s]);
    d.embed[x] = cur;
  }

  // fixed points of the generator-permutation action on W
  std::vector<char> is_fixed(t.size(), 1);
  for (const auto& p : g.perms()) {
    std::vector<int> tab = act_table(t, p);
    for (int w = 0; w < t.size(); ++w)
      if (tab[w] != w) is_fixed[w] = 0;
  }
  for (int w = 0; w < t.size(); ++w)
    if (is_fixed[w]) d.fixed.push_back(w);

  std::vector<int> sorted_embed = d.embed;
  std::sort(sorted_embed.begin(), sorted_embed.end());
  if (std::adjacent_find(sorted_embed.begin(), sorted_embed.end()) != sorted_embed.end())
    throw InternalError("fixed subsystem embedding is not injective");
  if (sorted_embed != d.fixed)
    throw InternalError("fixed subsystem does not exhaust the fixed points");

  d.embed_inv.assign(t.size(), -1);
  for (int x = 0; x < d.sub.size(); ++x) d.embed_inv[d.embed[x]] = x;

  for (int x = 0; x < d.sub.size(); ++x)
    if (t.weight(d.embed[x]) != d.sub.weight(x))
      throw InternalError("restricted weight function mismatch");

  return d;
}

}  // namespace kld
