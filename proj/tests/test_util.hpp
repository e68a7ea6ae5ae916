// Shared helpers for the unit tests. The synthesis/gradient routines here
// are written from the closed-form basis definitions on purpose: they act as
// independent oracles for the library paths under test.

#pragma once

#include <array>
#include <cmath>
#include <numbers>
#include <set>
#include <vector>

#include "nstorus/field.hpp"
#include "nstorus/rng.hpp"
#include "nstorus/saturation.hpp"

namespace testutil {

using nstorus::BasisId;
using nstorus::RngStream;
using nstorus::SpectralField;

inline constexpr double kPi = std::numbers::pi;

// Random field over oscillatory modes with per-mode scale decaying in |j|.
inline SpectralField random_field(int M, RngStream& rng, double scale = 1.0,
                                  double decay = 1.0) {
  SpectralField u(M);
  for (const auto& id : nstorus::basis_enumerate(M)) {
    if (id.is_mean()) continue;
    const double s = scale / std::pow(static_cast<double>(id.eigenvalue()), decay);
    u.set_coeff(id, s * rng.gaussian());
  }
  return u;
}

// Closed-form value of the unit-normalized basis function at (x, y).
inline std::array<double, 2> basis_value(const BasisId& id, double x, double y) {
  if (id.is_mean()) {
    const double c = 1.0 / (2.0 * kPi);
    return id.axis == 1 ? std::array<double, 2>{c, 0.0} : std::array<double, 2>{0.0, c};
  }
  const double norm = std::numbers::sqrt2 * kPi * std::sqrt(static_cast<double>(id.eigenvalue()));
  const double phase = id.j1 * x + id.j2 * y;
  const double w = id.is_sin() ? std::sin(phase) : std::cos(phase);
  return {-id.j2 * w / norm, id.j1 * w / norm};
}

// Gradient d(component i)/d(x_k), rows = component, cols = direction.
inline std::array<std::array<double, 2>, 2> basis_gradient(const BasisId& id, double x,
                                                           double y) {
  if (id.is_mean()) return {{{0.0, 0.0}, {0.0, 0.0}}};
  const double norm = std::numbers::sqrt2 * kPi * std::sqrt(static_cast<double>(id.eigenvalue()));
  const double phase = id.j1 * x + id.j2 * y;
  const double dw = id.is_sin() ? std::cos(phase) : -std::sin(phase);
  const double px = -id.j2 / norm, py = id.j1 / norm;
  return {{{px * dw * id.j1, px * dw * id.j2}, {py * dw * id.j1, py * dw * id.j2}}};
}

// Quadrature oracle for Pi((u . grad) v): evaluates the transport term from
// closed forms on an n x n lattice and projects it on each basis id of the
// output box by the (exact for trig polynomials) uniform-grid rule. The
// divergence-free basis makes the Leray projection implicit.
inline SpectralField bilinear_quadrature_oracle(const SpectralField& u, const SpectralField& v,
                                                int n) {
  const int M = u.truncation();
  std::vector<double> wx(static_cast<size_t>(n) * n, 0.0), wy(wx);
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      const double x = 2.0 * kPi * a / n, y = 2.0 * kPi * b / n;
      double ux = 0, uy = 0;
      std::array<std::array<double, 2>, 2> gv{{{0, 0}, {0, 0}}};
      for (int i = 0; i < u.size(); ++i) {
        const auto& id = u.basis().id_at(i);
        const double cu = u.coeffs()[i];
        if (cu != 0.0) {
          const auto val = basis_value(id, x, y);
          ux += cu * val[0];
          uy += cu * val[1];
        }
        const double cv = v.coeffs()[i];
        if (cv != 0.0) {
          const auto gr = basis_gradient(id, x, y);
          for (int r = 0; r < 2; ++r)
            for (int c = 0; c < 2; ++c) gv[r][c] += cv * gr[r][c];
        }
      }
      const size_t p = static_cast<size_t>(a) * n + b;
      wx[p] = ux * gv[0][0] + uy * gv[0][1];
      wy[p] = ux * gv[1][0] + uy * gv[1][1];
    }
  }
  SpectralField out(M);
  const double cellw = (2.0 * kPi) * (2.0 * kPi) / (static_cast<double>(n) * n);
  for (const auto& id : nstorus::basis_enumerate(M)) {
    if (id.is_mean()) continue;  // transport of solenoidal fields is mean-free
    double acc = 0.0;
    for (int a = 0; a < n; ++a) {
      for (int b = 0; b < n; ++b) {
        const auto e = basis_value(id, 2.0 * kPi * a / n, 2.0 * kPi * b / n);
        const size_t p = static_cast<size_t>(a) * n + b;
        acc += wx[p] * e[0] + wy[p] * e[1];
      }
    }
    out.set_coeff(id, acc * cellw);
  }
  return out;
}

inline double rel_err(double got, double want) {
  return std::abs(got - want) / std::max(1e-300, std::abs(want));
}

// Independent frontier-based closure for the lattice growth rule. A sum of
// two points both known before the previous layer was already collected
// then, so each layer only needs sums touching the newest points; the
// layers reproduce the full-pair iterates exactly.
struct BfsOracle {
  std::set<nstorus::LatticePoint> all;
  std::vector<nstorus::LatticePoint> frontier;
  std::vector<std::set<nstorus::LatticePoint>> iterates;  // iterates[i] == K^i

  explicit BfsOracle(const nstorus::SymmetricSet& K0) {
    all = K0.elems();
    frontier.assign(all.begin(), all.end());
    iterates.push_back(all);
  }

  static bool ok(const nstorus::LatticePoint& m, const nstorus::LatticePoint& n) {
    const long long m2 = 1LL * m[0] * m[0] + 1LL * m[1] * m[1];
    const long long n2 = 1LL * n[0] * n[0] + 1LL * n[1] * n[1];
    return m2 != n2 && (1LL * m[0] * n[1] - 1LL * m[1] * n[0]) != 0;
  }

  bool step() {  // advances one layer; false at a fixed point
    std::vector<nstorus::LatticePoint> fresh;
    auto offer = [&](int a, int b) {
      if (all.insert({a, b}).second) fresh.push_back({a, b});
      if (all.insert({-a, -b}).second) fresh.push_back({-a, -b});
    };
    const std::set<nstorus::LatticePoint> prev = iterates.back();
    for (const auto& m : frontier)
      for (const auto& n : prev)
        if (ok(m, n)) offer(m[0] + n[0], m[1] + n[1]);
    if (fresh.empty()) return false;
    frontier = std::move(fresh);
    iterates.push_back(all);
    return true;
  }

  bool covers(int R) const {
    for (int a = -R; a <= R; ++a)
      for (int b = -R; b <= R; ++b)
        if (!iterates.back().count({a, b})) return false;
    return true;
  }
};

}  // namespace testutil
