#include "mode_rep.hpp"

#include <cmath>
#include <numbers>

namespace nstorus::detail {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
// u_hat(k) = phi_k k_perp/(kPhiScale |k|); u_hat(0) = mean/2pi
const double kPhiScale = 2.0 * std::numbers::sqrt2 * std::numbers::pi;
}  // namespace

ModeGrid::ModeGrid(int box_radius) : M(box_radius), W(2 * box_radius + 1) {
  eig.resize(static_cast<size_t>(size()));
  inv_abs.resize(static_cast<size_t>(size()));
  for (int k1 = -M; k1 <= M; ++k1) {
    for (int k2 = -M; k2 <= M; ++k2) {
      const double e = static_cast<double>(k1) * k1 + static_cast<double>(k2) * k2;
      eig[idx(k1, k2)] = e;
      inv_abs[idx(k1, k2)] = (e == 0.0) ? 0.0 : 1.0 / std::sqrt(e);
    }
  }
}

void state_axpy(double a, const ModeState& x, ModeState& y) {
  y.mean_x += a * x.mean_x;
  y.mean_y += a * x.mean_y;
  const size_t n = x.phi.size();
  for (size_t i = 0; i < n; ++i) y.phi[i] += a * x.phi[i];
}

void state_scale(ModeState& s, double a) {
  s.mean_x *= a;
  s.mean_y *= a;
  for (auto& c : s.phi) c *= a;
}

void state_damp(ModeState& s, const std::vector<double>& factors) {
  const size_t n = s.phi.size();
  for (size_t i = 0; i < n; ++i) s.phi[i] *= factors[i];
}

double state_norm_h2(const ModeState& s) {
  // |phi_m|^2 + |phi_{-m}|^2 = 2 (P^2 + Q^2); mean slots are coefficients
  double acc = 0.0;
  for (const auto& c : s.phi) acc += std::norm(c);
  return s.mean_x * s.mean_x + s.mean_y * s.mean_y + 0.5 * acc;
}

bool state_finite(const ModeState& s) {
  return std::isfinite(state_norm_h2(s));
}

void field_to_state(const SpectralField& u, const ModeGrid& g, ModeState& out) {
  out.resize(g);
  out.mean_x = u.coeff(BasisId::mean(1));
  out.mean_y = u.coeff(BasisId::mean(2));
  const int m = u.truncation();
  for (int j1 = 0; j1 <= m; ++j1) {
    for (int j2 = (j1 == 0 ? 1 : -m); j2 <= m; ++j2) {
      // (j1,j2) runs over the positive half-lattice
      const double p = u.coeff(BasisId::osc(j1, j2));    // sin branch
      const double q = u.coeff(BasisId::osc(-j1, -j2));  // cos branch
      if (p == 0.0 && q == 0.0) continue;
      out.phi[g.idx(j1, j2)] = {-q, -p};
      out.phi[g.idx(-j1, -j2)] = {q, -p};  // -conj
    }
  }
}

SpectralField state_to_field(const ModeState& s, const ModeGrid& g) {
  SpectralField u(g.M);
  u.set_coeff(BasisId::mean(1), s.mean_x);
  u.set_coeff(BasisId::mean(2), s.mean_y);
  for (int j1 = 0; j1 <= g.M; ++j1) {
    for (int j2 = (j1 == 0 ? 1 : -g.M); j2 <= g.M; ++j2) {
      const std::complex<double> phi = s.phi[g.idx(j1, j2)];
      if (phi.real() == 0.0 && phi.imag() == 0.0) continue;
      u.set_coeff(BasisId::osc(j1, j2), -phi.imag());
      u.set_coeff(BasisId::osc(-j1, -j2), -phi.real());
    }
  }
  return u;
}

void bilinear_direct(const ModeGrid& g, const ModeState& u, const ModeState& v, ModeState& out) {
  const int M = g.M;
  const std::complex<double>* up = u.phi.data();
  const std::complex<double>* vp = v.phi.data();
  const double* inv_abs = g.inv_abs.data();

  out.mean_x = out.mean_y = 0.0;  // transport of a solenoidal field has zero mean
  const double pair_scale = 1.0 / kPhiScale;  // one stored->physical factor per product
  for (int k1 = -M; k1 <= M; ++k1) {
    for (int k2 = -M; k2 <= M; ++k2) {
      if (k1 == 0 && k2 == 0) continue;
      const int kidx = g.idx(k1, k2);
      double acc_re = 0.0, acc_im = 0.0;

      // p = 0: advection by the mean flow, i (U.k) psi_k with U = mean/2pi
      const double uk = (u.mean_x * k1 + u.mean_y * k2) / kTwoPi;
      if (uk != 0.0) {
        const std::complex<double> psi = vp[kidx];
        acc_re -= uk * psi.imag();
        acc_im += uk * psi.real();
      }

      // p, q = k - p both inside the box and nonzero
      const int p1_lo = std::max(-M, k1 - M), p1_hi = std::min(M, k1 + M);
      const int p2_lo = std::max(-M, k2 - M), p2_hi = std::min(M, k2 + M);
      for (int p1 = p1_lo; p1 <= p1_hi; ++p1) {
        const int q1 = k1 - p1;
        for (int p2 = p2_lo; p2 <= p2_hi; ++p2) {
          const int q2 = k2 - p2;
          if ((p1 == 0 && p2 == 0) || (q1 == 0 && q2 == 0)) continue;
          const std::complex<double> phi = up[g.idx(p1, p2)];
          if (phi.real() == 0.0 && phi.imag() == 0.0) continue;
          const double cross = static_cast<double>(p1) * q2 - static_cast<double>(p2) * q1;
          if (cross == 0.0) continue;  // collinear pair: no interaction
          const double dot = static_cast<double>(q1) * k1 + static_cast<double>(q2) * k2;
          if (dot == 0.0) continue;
          const std::complex<double> psi = vp[g.idx(q1, q2)];
          if (psi.real() == 0.0 && psi.imag() == 0.0) continue;
          const double coef = pair_scale * cross * inv_abs[g.idx(p1, p2)] * dot *
                              inv_abs[g.idx(q1, q2)] * inv_abs[kidx];
          // acc += i coef phi psi
          const double tre = phi.real() * psi.real() - phi.imag() * psi.imag();
          const double tim = phi.real() * psi.imag() + phi.imag() * psi.real();
          acc_re -= coef * tim;
          acc_im += coef * tre;
        }
      }
      out.phi[kidx] = {acc_re, acc_im};
    }
  }
}

}  // namespace nstorus::detail
