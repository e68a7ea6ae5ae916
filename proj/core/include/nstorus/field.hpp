// Divergence-free velocity fields as real coefficient vectors over the
// trigonometric Stokes eigenbasis (see basis.hpp). Fields are plain value
// types: copy freely, treat as immutable once built, share across threads.

#pragma once

#include <Eigen/Core>
#include <vector>

#include "nstorus/basis.hpp"

namespace nstorus {

class SpectralField {
 public:
  SpectralField() = default;
  explicit SpectralField(int box_radius);  // zero field
  static SpectralField mode(int box_radius, const BasisId& id, double amplitude);

  int truncation() const { return index_ ? index_->box_radius() : 0; }
  bool empty() const { return !index_; }
  const BasisIndex& basis() const { return *index_; }
  int size() const { return index_ ? index_->size() : 0; }

  double coeff(const BasisId& id) const;        // throws outside truncation
  void set_coeff(const BasisId& id, double c);  // build step; throws outside truncation

  const Eigen::VectorXd& coeffs() const { return coeffs_; }
  Eigen::VectorXd& coeffs() { return coeffs_; }

  double norm_h() const;  // sqrt(sum c^2)
  double norm_v() const;  // sqrt(sum (1 + |j|^2) c^2)

  SpectralField& operator+=(const SpectralField& o);
  SpectralField& operator-=(const SpectralField& o);
  SpectralField& operator*=(double s);
  friend SpectralField operator+(SpectralField a, const SpectralField& b) { return a += b; }
  friend SpectralField operator-(SpectralField a, const SpectralField& b) { return a -= b; }
  friend SpectralField operator*(double s, SpectralField a) { return a *= s; }

  // Same field carried in a larger truncation box.
  SpectralField embedded(int box_radius) const;

 private:
  std::shared_ptr<const BasisIndex> index_;
  Eigen::VectorXd coeffs_;
};

double norm_h(const SpectralField& u);
double norm_v(const SpectralField& u);

// L2 inner product; equals the Euclidean product of coefficient vectors.
double inner_h(const SpectralField& u, const SpectralField& v);

// Coefficientwise Stokes operator: c_j -> |j|^2 c_j, mean modes unchanged.
SpectralField apply_stokes(const SpectralField& u);

// Coordinates of u on F, in F's id order. Every id of F must lie within u's
// truncation.
Eigen::VectorXd project(const SpectralField& u, const SubspaceSpec& F);

// Field with the given F-coordinates and zeros elsewhere.
SpectralField embed(const SubspaceSpec& F, const Eigen::VectorXd& coords, int box_radius);

// Pointwise velocity on the uniform n x n lattice x_ab = (2pi a/n, 2pi b/n).
// Row-major storage, component arrays of length n^2. Requires n >= 2M+2 so
// synthesis is alias-free.
struct PhysicalField {
  int n = 0;
  std::vector<double> ux;
  std::vector<double> uy;
};
PhysicalField evaluate_physical(const SpectralField& u, int n);

}  // namespace nstorus
