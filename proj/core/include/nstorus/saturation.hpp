// The Z^2 growth recursion behind the forcing-subspace constructions: a
// symmetric set containing the origin grows by admissible sums
//   l = m + n with |m| != |n| and m x n != 0,
// and "covers box R" once every |l|_inf <= R lies in an iterate. Coverage is
// certified on finite boxes only; all arithmetic is exact integer work.

#pragma once

#include <array>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "nstorus/basis.hpp"

namespace nstorus {

using LatticePoint = std::array<int, 2>;

class SymmetricSet {
 public:
  SymmetricSet();  // {(0,0)}
  // Adds the origin and the negation of every generator.
  explicit SymmetricSet(const std::vector<LatticePoint>& generators);
  // Literal form "(1,0),(1,1)"; whitespace tolerated. Throws ConfigError.
  static SymmetricSet parse(std::string_view literal);

  bool contains(const LatticePoint& p) const { return elems_.count(p) > 0; }
  size_t size() const { return elems_.size(); }
  const std::set<LatticePoint>& elems() const { return elems_; }
  void insert(const LatticePoint& p);  // inserts p and -p

  friend bool operator==(const SymmetricSet&, const SymmetricSet&) = default;

 private:
  std::set<LatticePoint> elems_;
};

// K together with every admissible pair sum from K. Monotone, preserves
// symmetry and the origin.
SymmetricSet grow_once(const SymmetricSet& K);

struct CoverageReport {
  bool covered = false;
  int iters = 0;               // iterations actually performed
  bool fixed_point = false;    // growth stalled before covering
  int fixed_point_iter = -1;   // first i with K^i == K^{i-1}
  std::vector<size_t> sizes;   // |K^0|, |K^1|, ... (frontier growth record)
  std::vector<LatticePoint> missing;  // box points still absent at the end
  int box_radius = 0;
  int max_iter = 0;
};

// Iterates grow_once until the box |l|_inf <= R is covered, a fixed point is
// reached, or max_iter is exhausted; reports which.
CoverageReport saturating_within(const SymmetricSet& K, int box_radius, int max_iter);

// Basis ids spanned by K \ {0} (mean modes included only on request). Every
// point of K must fit the truncation box.
SubspaceSpec subspace_of(const SymmetricSet& K, int truncation, bool include_mean = false);

std::string format_point(const LatticePoint& p);

}  // namespace nstorus
