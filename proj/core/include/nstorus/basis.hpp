// Trigonometric eigenbasis of the Stokes operator on the 2-torus [0,2pi)^2.
//
// Every wavevector j in Z^2 \ {0} names exactly one real divergence-free
// basis function:
//   sin(j.x) j_perp / (sqrt(2) pi |j|)   if j1 > 0, or j1 == 0 and j2 > 0,
//   cos(j.x) j_perp / (sqrt(2) pi |j|)   otherwise,
// with j_perp = (-j2, j1). Two constant "mean" modes (1,0)/2pi and
// (0,1)/2pi complete the basis. All functions are L2-normalized, so the
// H-norm of a field is the Euclidean norm of its coefficient vector.
//
// Enumeration order is (eigenvalue |j|^2 ascending, then mean modes by axis,
// then lexicographic (j1, j2)); it is fixed and mirrored in the basis.json
// manifest so that downstream tools agree on "the first N modes".

#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

namespace nstorus {

struct BasisId {
  std::int32_t j1 = 0;
  std::int32_t j2 = 0;
  std::int8_t axis = 0;  // 0: oscillatory; 1 or 2: mean mode (j == 0)

  static BasisId mean(int axis);
  static BasisId osc(int j1, int j2);

  bool is_mean() const { return axis != 0; }
  // True when the function is the sine branch of the sign convention.
  bool is_sin() const { return j1 > 0 || (j1 == 0 && j2 > 0); }
  long eigenvalue() const { return static_cast<long>(j1) * j1 + static_cast<long>(j2) * j2; }
  int box_radius() const;  // |j|_inf, 0 for mean modes

  std::string label() const;  // "mean_x", "mean_y", "e_1_0", "e_-1_2", ...

  friend bool operator==(const BasisId&, const BasisId&) = default;
};

// Canonical enumeration order (see file comment).
bool basis_less(const BasisId& a, const BasisId& b);

// Inverse of BasisId::label(); throws ConfigError on malformed input.
BasisId basis_id_from_label(const std::string& label);

// All ids with |j|_inf <= box_radius plus the two mean modes, in canonical
// order. dim = 2 + (2M+1)^2 - 1.
std::vector<BasisId> basis_enumerate(int box_radius);

// Shared, immutable id <-> index table for one truncation. Instances are
// memoized per truncation and safe to share across threads.
class BasisIndex {
 public:
  static std::shared_ptr<const BasisIndex> get(int box_radius);

  int box_radius() const { return box_radius_; }
  int size() const { return static_cast<int>(ids_.size()); }
  const std::vector<BasisId>& ids() const { return ids_; }
  const BasisId& id_at(int index) const { return ids_[index]; }

  bool contains(const BasisId& id) const;
  // Index in canonical order; throws ConfigError if outside the truncation.
  int index_of(const BasisId& id) const;

 private:
  explicit BasisIndex(int box_radius);
  int box_radius_;
  std::vector<BasisId> ids_;
};

// Ordered list of distinct basis ids spanning a subspace (projection targets,
// forcing supports). The order defines the coordinate layout of projected
// vectors.
class SubspaceSpec {
 public:
  SubspaceSpec() = default;
  explicit SubspaceSpec(std::vector<BasisId> ids);  // throws on duplicates

  // First n oscillatory ids in canonical order at the given truncation.
  static SubspaceSpec first_oscillatory(int n, int box_radius);

  int dim() const { return static_cast<int>(ids_.size()); }
  const std::vector<BasisId>& ids() const { return ids_; }
  const BasisId& id_at(int i) const { return ids_[i]; }
  // Smallest box radius containing every id.
  int required_box_radius() const;
  bool contains(const BasisId& id) const;

  friend bool operator==(const SubspaceSpec&, const SubspaceSpec&) = default;

 private:
  std::vector<BasisId> ids_;
};

}  // namespace nstorus

template <>
struct std::hash<nstorus::BasisId> {
  size_t operator()(const nstorus::BasisId& id) const noexcept {
    std::uint64_t h = (static_cast<std::uint64_t>(static_cast<std::uint32_t>(id.j1)) << 32) |
                      static_cast<std::uint32_t>(id.j2);
    h ^= static_cast<std::uint64_t>(id.axis) << 1;
    h *= 0x9E3779B97F4A7C15ull;
    h ^= h >> 29;
    return static_cast<size_t>(h);
  }
};
