#include "kld/cells.hpp"

#include <algorithm>
#include <numeric>
#include <thread>

namespace kld {

namespace {

struct ZStat {
  std::optional<GammaElt> max;
  std::vector<std::tuple<int, int, int64_t>> wit;  // (x, y, lead) at max degree

  void feed(int x, int y, const GammaElt& deg, int64_t lead) {
    if (!max || *max < deg) {
      max = deg;
      wit.clear();
    }
    if (deg == *max) wit.emplace_back(x, y, lead);
  }
  void merge(ZStat&& o) {
    if (!o.max) return;
    if (!max || *max < *o.max) {
      max = o.max;
      wit = std::move(o.wit);
    } else if (*max == *o.max) {
      wit.insert(wit.end(), o.wit.begin(), o.wit.end());
    }
  }
};

struct SweepChunk {
  std::vector<ZStat> z;
  std::vector<std::pair<int, int>> left_edges;   // y -> z from rows (s, y)
  std::vector<std::pair<int, int>> right_edges;  // x -> z from rows (x, s)
  FullHTable full;
};

/*
  All products C_x C_y for y in [y_begin, y_end). For fixed y the rows
  T_w C_y are shared across x: V_1 = C_y and V_w = T_s V_{sw} for the
  smallest left descent s, filled in increasing element order. The product
  is then the linear combination sum_w (C_x)_w V_w, and the C-expansion is
  read off top length down against the KL rows.
*/
void sweep_range(const HeckeAlgebra& h, const KLTable& kl, int y_begin, int y_end,
                 bool keep_full, SweepChunk& out) {
  const GroupTable& t = h.group();
  const int n = t.size();
  out.z.resize(n);

  std::vector<HeckeElement> v(n);
  std::vector<LaurentPoly> acc(n);

  for (int y = y_begin; y < y_end; ++y) {
    v[0] = kl.c(y);
    for (int w = 1; w < n; ++w) {
      int s = t.first_left_descent(w);
      v[w] = h.mul_gen_left(s, v[t.mul_gen_left(s, w)]);
    }

    for (int x = 0; x < n; ++x) {
      for (auto& p : acc) p = LaurentPoly::zero();
      for (const auto& [w, cw] : kl.c(x).coords())
        for (const auto& [u, p] : v[w].coords()) acc[u].add_mul(cw, p);

      std::vector<std::pair<int, LaurentPoly>> row;
      for (int z = n - 1; z >= 0; --z) {
        if (acc[z].is_zero()) continue;
        LaurentPoly hz = std::move(acc[z]);
        acc[z] = LaurentPoly::zero();
        for (const auto& [u, p] : kl.c(z).coords()) {
          if (u == z)
            acc[u] = LaurentPoly::zero();
          else
            acc[u].sub_mul(hz, p);
        }
        out.z[z].feed(x, y, *hz.degree(), hz.lead_coeff());
        if (x >= 1 && x <= t.rank()) out.left_edges.push_back({y, z});
        if (y >= 1 && y <= t.rank()) out.right_edges.push_back({x, z});
        row.push_back({z, std::move(hz)});
      }
      if (keep_full) {
        std::reverse(row.begin(), row.end());
        out.full.rows.emplace(std::make_pair(x, y), std::move(row));
      }
    }
  }
}

CellPartition partition_from_edges(int n, const std::vector<std::pair<int, int>>& edges) {
  std::vector<std::vector<int>> adj(n);
  for (auto [from, to] : edges) adj[from].push_back(to);
  for (auto& a : adj) {
    std::sort(a.begin(), a.end());
    a.erase(std::unique(a.begin(), a.end()), a.end());
  }

  std::vector<std::vector<int>> comps = tarjan_sccs(adj);  // sinks first
  const int m = int(comps.size());
  std::vector<int> comp_of(n);
  for (int c = 0; c < m; ++c)
    for (int w : comps[c]) comp_of[w] = c;

  // reachability over the condensation, in emission order
  BitMatrix reach(m);
  std::vector<std::vector<int>> comp_adj(m);
  for (int c = 0; c < m; ++c) {
    reach.set(c, c);
    for (int w : comps[c])
      for (int u : adj[w])
        if (comp_of[u] != c) comp_adj[c].push_back(comp_of[u]);
    std::sort(comp_adj[c].begin(), comp_adj[c].end());
    comp_adj[c].erase(std::unique(comp_adj[c].begin(), comp_adj[c].end()), comp_adj[c].end());
    for (int d : comp_adj[c]) reach.or_row(c, d);
  }

  // canonical ids: sort cells by minimal element
  for (auto& c : comps) std::sort(c.begin(), c.end());
  std::vector<int> order(m);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](int a, int b) { return comps[a][0] < comps[b][0]; });
  std::vector<int> canon(m);
  for (int i = 0; i < m; ++i) canon[order[i]] = i;

  CellPartition part;
  part.cells.resize(m);
  part.cell_of.resize(n);
  for (int c = 0; c < m; ++c) part.cells[canon[c]] = comps[c];
  for (int w = 0; w < n; ++w) part.cell_of[w] = canon[comp_of[w]];
  part.leq = BitMatrix(m);
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b)
      if (reach.get(order[b], order[a])) part.leq.set(a, b);
  for (int c = 0; c < m; ++c)
    for (int d : comp_adj[c]) part.dag_edges.push_back({canon[c], canon[d]});
  std::sort(part.dag_edges.begin(), part.dag_edges.end());
  return part;
}

}  // namespace

std::vector<std::vector<int>> tarjan_sccs(const std::vector<std::vector<int>>& adj) {
  const int n = int(adj.size());
  std::vector<int> num(n, -1), low(n, 0), stack, frame_v, frame_i;
  std::vector<char> on_stack(n, 0);
  std::vector<std::vector<int>> comps;
  int counter = 0;

  for (int root = 0; root < n; ++root) {
    if (num[root] != -1) continue;
    frame_v = {root};
    frame_i = {0};
    num[root] = low[root] = counter++;
    stack.push_back(root);
    on_stack[root] = 1;
    while (!frame_v.empty()) {
      int v = frame_v.back();
      if (frame_i.back() < int(adj[v].size())) {
        int u = adj[v][frame_i.back()++];
        if (num[u] == -1) {
          num[u] = low[u] = counter++;
          stack.push_back(u);
          on_stack[u] = 1;
          frame_v.push_back(u);
          frame_i.push_back(0);
        } else if (on_stack[u]) {
          low[v] = std::min(low[v], num[u]);
        }
      } else {
        frame_v.pop_back();
        frame_i.pop_back();
        if (!frame_v.empty()) low[frame_v.back()] = std::min(low[frame_v.back()], low[v]);
        if (low[v] == num[v]) {
          std::vector<int> comp;
          for (;;) {
            int u = stack.back();
            stack.pop_back();
            on_stack[u] = 0;
            comp.push_back(u);
            if (u == v) break;
          }
          comps.push_back(std::move(comp));
        }
      }
    }
  }
  return comps;
}

CellData compute_cell_data(const HeckeAlgebra& h, const KLTable& kl,
                           const SweepOptions& opts) {
  const GroupTable& t = h.group();
  const int n = t.size();
  const bool keep_full = opts.keep_full && n <= opts.full_limit;

  int threads = std::max(1, opts.threads);
  threads = std::min<int>(threads, n);
  std::vector<SweepChunk> chunks(threads);
  if (threads == 1) {
    sweep_range(h, kl, 0, n, keep_full, chunks[0]);
  } else {
    std::vector<std::thread> pool;
    for (int k = 0; k < threads; ++k) {
      int lo = n * k / threads, hi = n * (k + 1) / threads;
      pool.emplace_back([&, k, lo, hi] { sweep_range(h, kl, lo, hi, keep_full, chunks[k]); });
    }
    for (auto& th : pool) th.join();
  }

  // merge chunks in y order; the result is scheduling independent
  SweepChunk all;
  all.z.resize(n);
  for (auto& c : chunks) {
    for (int z = 0; z < n; ++z) all.z[z].merge(std::move(c.z[z]));
    all.left_edges.insert(all.left_edges.end(), c.left_edges.begin(), c.left_edges.end());
    all.right_edges.insert(all.right_edges.end(), c.right_edges.begin(), c.right_edges.end());
    if (keep_full) all.full.rows.merge(c.full.rows);
  }

  CellData cd;
  cd.a.resize(n);
  cd.delta.resize(n);
  cd.n.resize(n);
  for (int z = 0; z < n; ++z) {
    if (!all.z[z].max) throw InternalError("a-function sweep missed an element");
    cd.a[z] = *all.z[z].max;
    std::sort(all.z[z].wit.begin(), all.z[z].wit.end());
    for (auto& [x, y, lead] : all.z[z].wit) cd.gamma.set(x, y, t.inverse(z), lead);
    auto dn = kl.delta_n(z);
    cd.delta[z] = dn.delta;
    cd.n[z] = dn.n;
    if (cd.a[z] == cd.delta[z]) cd.duflo.push_back(z);
  }

  std::vector<std::pair<int, int>> lr_edges = all.left_edges;
  lr_edges.insert(lr_edges.end(), all.right_edges.begin(), all.right_edges.end());
  cd.left = partition_from_edges(n, all.left_edges);
  cd.right = partition_from_edges(n, all.right_edges);
  cd.two_sided = partition_from_edges(n, lr_edges);
  if (keep_full) cd.full_h = std::move(all.full);
  return cd;
}

CellPartition cell_partition(const HeckeAlgebra& h, const KLTable& kl, CellKind kind) {
  const GroupTable& t = h.group();
  const int n = t.size();
  std::vector<std::pair<int, int>> edges;
  for (int y = 0; y < n; ++y)
    for (int s = 0; s < t.rank(); ++s) {
      if (kind != CellKind::Right)
        for (const auto& [z, hz] : structure_row(h, kl, t.generator(s), y))
          edges.push_back({y, z});
      if (kind != CellKind::Left)
        for (const auto& [z, hz] : structure_row(h, kl, y, t.generator(s)))
          edges.push_back({y, z});
    }
  return partition_from_edges(n, edges);
}

ParabolicA parabolic_a(const GroupTable& t, std::span<const int> gens,
                       const SweepOptions& opts) {
  CoxeterSpec sub;
  sub.rank = int(gens.size());
  sub.gamma_rank = t.spec().gamma_rank;
  sub.label = t.spec().label + "|I";
  sub.matrix.assign(sub.rank, std::vector<int>(sub.rank, 1));
  for (int i = 0; i < sub.rank; ++i)
    for (int j = 0; j < sub.rank; ++j)
      if (i != j) sub.matrix[i][j] = t.spec().matrix[gens[i]][gens[j]];
  for (int i = 0; i < sub.rank; ++i) sub.weights.push_back(t.spec().weights[gens[i]]);

  ParabolicA pa;
  pa.sub = GroupTable::enumerate(sub, t.size());
  pa.embed.resize(pa.sub.size());
  for (int x = 0; x < pa.sub.size(); ++x) {
    std::vector<int> word;
    for (int s : pa.sub.word(x)) word.push_back(gens[s]);
    pa.embed[x] = t.element_of_word(word);
  }
  HeckeAlgebra h(pa.sub);
  KLTable kl = KLTable::compute(h);
  SweepOptions o = opts;
  o.keep_full = false;
  pa.a = compute_cell_data(h, kl, o).a;
  return pa;
}

}  // namespace kld
