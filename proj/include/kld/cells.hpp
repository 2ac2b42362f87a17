#pragma once

#include <array>
#include <map>
#include <optional>
#include <span>

#include "kld/hecke.hpp"

namespace kld {

// Leading coefficients gamma_{x,y,z}: the coefficient of e^{a(z^{-1})} in
// h_{x,y,z^{-1}}. Sparse, nonzero entries only.
class GammaTable {
 public:
  using Key = std::array<int, 3>;

  int64_t get(int x, int y, int z) const {
    auto it = g_.find({x, y, z});
    return it == g_.end() ? 0 : it->second;
  }
  void set(int x, int y, int z, int64_t v) {
    if (v != 0) g_[{x, y, z}] = v;
  }
  const std::map<Key, int64_t>& entries() const { return g_; }
  size_t size() const { return g_.size(); }
  bool operator==(const GammaTable&) const = default;

 private:
  std::map<Key, int64_t> g_;
};

enum class CellKind { Left, Right, TwoSided };

// A partition of W into cells together with the partial order induced on
// cells by the generating preorder. Cell ids are canonical: cells are sorted
// by their minimal element.
struct CellPartition {
  std::vector<int> cell_of;
  std::vector<std::vector<int>> cells;
  BitMatrix leq;  // leq.get(a, b): cell a lies below cell b
  std::vector<std::pair<int, int>> dag_edges;  // condensation edges (from, to=below)

  bool leq_elems(int x, int y) const { return leq.get(cell_of[x], cell_of[y]); }
  bool sim(int x, int y) const { return cell_of[x] == cell_of[y]; }
  bool same_partition(const CellPartition& o) const { return cells == o.cells; }
};

// Full structure-constant table, kept only for small groups.
struct FullHTable {
  std::map<std::pair<int, int>, std::vector<std::pair<int, LaurentPoly>>> rows;

  const std::vector<std::pair<int, LaurentPoly>>* row(int x, int y) const {
    auto it = rows.find({x, y});
    return it == rows.end() ? nullptr : &it->second;
  }
};

struct SweepOptions {
  int threads = 1;
  bool keep_full = false;  // retain every h_{x,y,z}; quadratic memory
  int full_limit = 48;     // keep_full honored only up to this group size
};

// Everything the conjecture checks consume, produced by one full sweep of
// C_x C_y over all pairs.
struct CellData {
  std::vector<GammaElt> a;      // a(z) = max_{x,y} deg h_{x,y,z}
  std::vector<GammaElt> delta;  // Delta(z) = -deg tau(C_z)
  std::vector<int64_t> n;       // n_z
  std::vector<int> duflo;       // sorted {z : a(z) = Delta(z)}
  GammaTable gamma;
  CellPartition left, right, two_sided;
  std::optional<FullHTable> full_h;

  bool is_duflo(int z) const {
    return std::binary_search(duflo.begin(), duflo.end(), z);
  }
  const CellPartition& partition(CellKind k) const {
    return k == CellKind::Left ? left : k == CellKind::Right ? right : two_sided;
  }
};

CellData compute_cell_data(const HeckeAlgebra& h, const KLTable& kl,
                           const SweepOptions& opts = {});

// Only the partitions (preorder edges come from generator rows, no sweep).
CellPartition cell_partition(const HeckeAlgebra& h, const KLTable& kl, CellKind kind);

// a-function of the standard parabolic subgroup on the given generators,
// computed as a standalone instance, with the embedding into W.
struct ParabolicA {
  GroupTable sub;
  std::vector<int> embed;  // sub element -> W element
  std::vector<GammaElt> a;
};

ParabolicA parabolic_a(const GroupTable& t, std::span<const int> gens,
                       const SweepOptions& opts = {});

// Strongly connected components of a digraph, emitted sinks-first.
std::vector<std::vector<int>> tarjan_sccs(const std::vector<std::vector<int>>& adj);

}  // namespace kld
