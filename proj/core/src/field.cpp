#include "nstorus/field.hpp"

#include <cmath>
#include <numbers>

#include "nstorus/errors.hpp"

namespace nstorus {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

SpectralField::SpectralField(int box_radius)
    : index_(BasisIndex::get(box_radius)), coeffs_(Eigen::VectorXd::Zero(index_->size())) {}

SpectralField SpectralField::mode(int box_radius, const BasisId& id, double amplitude) {
  SpectralField u(box_radius);
  u.set_coeff(id, amplitude);
  return u;
}

double SpectralField::coeff(const BasisId& id) const {
  return coeffs_[index_->index_of(id)];
}

void SpectralField::set_coeff(const BasisId& id, double c) {
  coeffs_[index_->index_of(id)] = c;
}

double SpectralField::norm_h() const { return coeffs_.size() ? coeffs_.norm() : 0.0; }

double SpectralField::norm_v() const {
  if (!index_) return 0.0;
  double s = 0.0;
  for (int i = 0; i < size(); ++i) {
    const double c = coeffs_[i];
    s += (1.0 + static_cast<double>(index_->id_at(i).eigenvalue())) * c * c;
  }
  return std::sqrt(s);
}

SpectralField& SpectralField::operator+=(const SpectralField& o) {
  if (truncation() != o.truncation())
    throw ConfigError("field truncations differ in +: " + std::to_string(truncation()) +
                      " vs " + std::to_string(o.truncation()));
  coeffs_ += o.coeffs_;
  return *this;
}

SpectralField& SpectralField::operator-=(const SpectralField& o) {
  if (truncation() != o.truncation())
    throw ConfigError("field truncations differ in -: " + std::to_string(truncation()) +
                      " vs " + std::to_string(o.truncation()));
  coeffs_ -= o.coeffs_;
  return *this;
}

SpectralField& SpectralField::operator*=(double s) {
  coeffs_ *= s;
  return *this;
}

SpectralField SpectralField::embedded(int box_radius) const {
  if (box_radius < truncation())
    throw ConfigError("cannot embed truncation " + std::to_string(truncation()) +
                      " into smaller box " + std::to_string(box_radius));
  if (box_radius == truncation()) return *this;
  SpectralField out(box_radius);
  for (int i = 0; i < size(); ++i) out.set_coeff(index_->id_at(i), coeffs_[i]);
  return out;
}

double norm_h(const SpectralField& u) { return u.norm_h(); }
double norm_v(const SpectralField& u) { return u.norm_v(); }

double inner_h(const SpectralField& u, const SpectralField& v) {
  if (u.truncation() != v.truncation())
    throw ConfigError("field truncations differ in inner product");
  return u.coeffs().dot(v.coeffs());
}

SpectralField apply_stokes(const SpectralField& u) {
  SpectralField out = u;
  for (int i = 0; i < u.size(); ++i)
    out.coeffs()[i] = u.coeffs()[i] * static_cast<double>(u.basis().id_at(i).eigenvalue());
  return out;
}

Eigen::VectorXd project(const SpectralField& u, const SubspaceSpec& F) {
  Eigen::VectorXd out(F.dim());
  for (int i = 0; i < F.dim(); ++i) out[i] = u.coeff(F.id_at(i));
  return out;
}

SpectralField embed(const SubspaceSpec& F, const Eigen::VectorXd& coords, int box_radius) {
  if (coords.size() != F.dim())
    throw ConfigError("coordinate vector length does not match subspace dimension");
  SpectralField u(box_radius);
  for (int i = 0; i < F.dim(); ++i) u.set_coeff(F.id_at(i), coords[i]);
  return u;
}

PhysicalField evaluate_physical(const SpectralField& u, int n) {
  const int M = u.truncation();
  if (n < 2 * M + 2)
    throw ConfigError("grid of " + std::to_string(n) + " points aliases truncation box " +
                      std::to_string(M) + " (need n >= 2M+2)");
  PhysicalField f;
  f.n = n;
  f.ux.assign(static_cast<size_t>(n) * n, 0.0);
  f.uy.assign(static_cast<size_t>(n) * n, 0.0);

  // One table of sin/cos(k a 2pi/n) covers every phase j.x on the lattice.
  std::vector<double> sin_t(n), cos_t(n);
  for (int a = 0; a < n; ++a) {
    sin_t[a] = std::sin(kTwoPi * a / n);
    cos_t[a] = std::cos(kTwoPi * a / n);
  }

  const double mean_norm = 1.0 / kTwoPi;
  for (int i = 0; i < u.size(); ++i) {
    const double c = u.coeffs()[i];
    if (c == 0.0) continue;
    const BasisId& id = u.basis().id_at(i);
    if (id.is_mean()) {
      double* comp = (id.axis == 1) ? f.ux.data() : f.uy.data();
      for (int p = 0; p < n * n; ++p) comp[p] += c * mean_norm;
      continue;
    }
    const double scale = c / (std::numbers::sqrt2 * std::numbers::pi *
                              std::sqrt(static_cast<double>(id.eigenvalue())));
    const double px = -scale * id.j2;  // j_perp = (-j2, j1)
    const double py = scale * id.j1;
    const bool sin_branch = id.is_sin();
    for (int a = 0; a < n; ++a) {
      for (int b = 0; b < n; ++b) {
        // phase (j1 a + j2 b) 2pi/n, reduced mod n
        long m = (static_cast<long>(id.j1) * a + static_cast<long>(id.j2) * b) % n;
        if (m < 0) m += n;
        const double w = sin_branch ? sin_t[m] : cos_t[m];
        f.ux[static_cast<size_t>(a) * n + b] += px * w;
        f.uy[static_cast<size_t>(a) * n + b] += py * w;
      }
    }
  }
  return f;
}

}  // namespace nstorus
