#pragma once

#include <span>
#include <string>
#include <vector>

#include "kld/laurent.hpp"

namespace kld {

// Presentation data: Coxeter matrix plus one weight per generator.
struct CoxeterSpec {
  int rank = 0;
  std::vector<std::vector<int>> matrix;  // m_ss = 1, m_st = m_ts >= 2
  std::vector<GammaElt> weights;         // strictly positive in the lex order
  int gamma_rank = 1;
  std::string label;  // "A3", "B2+A1", or "custom"

  // "A3", "I2(7)", "H3", products via "+": "A1+B2". Unit weights.
  static CoxeterSpec from_type(const std::string& type);

  void validate() const;  // shape, symmetry, weight positivity
  // odd m_st forces equal weights on s,t; throws ConfigError otherwise
  void validate_weight_consistency() const;
  bool same_presentation(const CoxeterSpec& o) const;
};

// Packed |W| x |W| bit matrix (Bruhat order rows).
class BitMatrix {
 public:
  BitMatrix() = default;
  explicit BitMatrix(int n) : n_(n), words_((n + 63) / 64), bits_(size_t(n) * words_) {}
  bool get(int i, int j) const { return (bits_[size_t(i) * words_ + j / 64] >> (j % 64)) & 1; }
  void set(int i, int j) { bits_[size_t(i) * words_ + j / 64] |= uint64_t(1) << (j % 64); }
  void or_row(int dst, int src);
  int size() const { return n_; }

 private:
  int n_ = 0;
  size_t words_ = 0;
  std::vector<uint64_t> bits_;
};

// A fully enumerated finite Coxeter group. Elements are dense indices,
// numbered by (length, lex-minimal reduced word); 0 is the identity and
// generator s is element s+1. Immutable after construction.
class GroupTable {
 public:
  // BFS cap on the element count; exceeding it rejects the input.
  static constexpr int kDefaultCap = 10000;

  GroupTable() = default;  // empty; fill via enumerate
  static GroupTable enumerate(const CoxeterSpec& spec, int cap = kDefaultCap);
  // rebuild from a stored right-multiplication table (canonical numbering is
  // recomputed, so loading is self-validating)
  static GroupTable from_right_table(const CoxeterSpec& spec, std::vector<int> right,
                                     int size);

  int size() const { return size_; }
  int rank() const { return spec_.rank; }
  const CoxeterSpec& spec() const { return spec_; }

  int length(int w) const { return length_[w]; }
  const GammaElt& weight(int w) const { return weight_[w]; }
  int inverse(int w) const { return inverse_[w]; }
  const std::vector<int>& word(int w) const { return word_[w]; }

  int mul_gen_right(int w, int s) const { return right_[size_t(w) * rank() + s]; }
  int mul_gen_left(int s, int w) const { return left_[size_t(w) * rank() + s]; }
  bool right_descent(int w, int s) const { return length(mul_gen_right(w, s)) < length(w); }
  bool left_descent(int s, int w) const { return length(mul_gen_left(s, w)) < length(w); }
  // smallest s with sw < w; -1 for the identity
  int first_left_descent(int w) const;

  int generator(int s) const { return s + 1; }
  int multiply(int x, int y) const;                // fold word(y) on the right of x
  int element_of_word(std::span<const int> w) const;

  // unique maximal-length element of the standard parabolic W_I
  int longest_element(std::span<const int> gens) const;

  // Bruhat order via the lifting property; full table built on enumeration
  bool bruhat_leq(int x, int y) const { return bruhat_.get(y, x); }

  int max_length() const { return length_[size_ - 1]; }

 private:
  void build_from_right_table(const CoxeterSpec& spec, std::vector<int> right, int size);
  void build_bruhat();

  CoxeterSpec spec_;
  int size_ = 0;
  std::vector<int> right_;   // [w*rank + s]
  std::vector<int> left_;    // [w*rank + s]
  std::vector<int> length_;
  std::vector<int> inverse_;
  std::vector<GammaElt> weight_;
  std::vector<std::vector<int>> word_;
  BitMatrix bruhat_;         // row y holds {x : x <= y}
};

// Group of Coxeter-matrix- and weight-preserving permutations of the
// generator set, closed under composition.
class DiagramAutGroup {
 public:
  // Validates each generator permutation against spec, then closes.
  static DiagramAutGroup generate(const CoxeterSpec& spec,
                                  const std::vector<std::vector<int>>& gens);
  static DiagramAutGroup trivial(int rank);

  int order() const { return int(perms_.size()); }
  int rank() const { return rank_; }
  const std::vector<int>& perm(int i) const { return perms_[i]; }
  const std::vector<std::vector<int>>& perms() const { return perms_; }
  bool is_p_power_order(uint32_t p) const;
  bool is_trivial() const { return perms_.size() == 1; }

  // All subgroups (as DiagramAutGroups), sorted by order then elements.
  std::vector<DiagramAutGroup> subgroups(const CoxeterSpec& spec) const;

 private:
  int rank_ = 0;
  std::vector<std::vector<int>> perms_;  // sorted, identity first
};

// sigma applied letterwise to a reduced word of w
int act(const GroupTable& t, const std::vector<int>& sigma, int w);
// full element permutation table for sigma
std::vector<int> act_table(const GroupTable& t, const std::vector<int>& sigma);

// The fixed subsystem (W^G, S_G, phi_G) of a diagram automorphism group:
// generators are the longest elements of the orbit parabolics, ordered by
// (length, smallest generator in the orbit).
struct DescentSystem {
  std::vector<std::vector<int>> orbits;  // generator orbits
  std::vector<int> s_omega;              // W element index per orbit
  CoxeterSpec sub_spec;
  GroupTable sub;                        // enumerated (W^G, S_G)
  std::vector<int> embed;                // sub element -> W element
  std::vector<int> fixed;                // sorted W indices of G-fixed elements
  std::vector<int> embed_inv;            // W element -> sub element or -1

  bool is_fixed(int w) const { return embed_inv[w] >= 0; }
};

DescentSystem fixed_subsystem(const GroupTable& t, const DiagramAutGroup& g);

}  // namespace kld
