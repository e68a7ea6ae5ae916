// Internal complex representation used by the time integrator.
//
// A divergence-free field u = sum_k u_hat(k) e^{i k.x} has u_hat(k)
// proportional to k_perp/|k| with one complex amplitude per wavevector,
// plus a real mean 2-vector at k = 0. We carry the amplitudes in the
// normalization of the real basis coefficients (P = sin amplitude at m,
// Q = cos amplitude at -m, for m in the positive half-lattice):
//   phi_m = -Q - iP,   phi_{-m} = -conj(phi_m),
// so that u_hat(k) = phi_k k_perp/(2 sqrt2 pi |k|) and the mean slots hold
// the mean-mode coefficients directly (u_hat(0) = mean/2pi). Conversions to
// and from SpectralField are then exact data movement; the physical scale
// factors live inside the bilinear kernels only. Reality of the field reads
// phi_{-k} = -conj(phi_k).
//
// Everything here is allocation-free on the hot path and private to the
// dynamics module.

#pragma once

#include <complex>
#include <vector>

#include "nstorus/field.hpp"

namespace nstorus::detail {

struct ModeGrid {
  int M = 0;  // box radius, |k|_inf <= M
  int W = 0;  // 2M+1
  std::vector<double> eig;      // |k|^2 per flat index
  std::vector<double> inv_abs;  // 1/|k|, 0 at the origin

  explicit ModeGrid(int box_radius);
  int size() const { return W * W; }
  int idx(int k1, int k2) const { return (k1 + M) * W + (k2 + M); }
};

struct ModeState {
  double mean_x = 0.0;
  double mean_y = 0.0;
  std::vector<std::complex<double>> phi;  // flat over the box; origin entry stays 0

  void resize(const ModeGrid& g) {
    mean_x = mean_y = 0.0;
    phi.assign(static_cast<size_t>(g.size()), {0.0, 0.0});
  }
  void set_zero() {
    mean_x = mean_y = 0.0;
    std::fill(phi.begin(), phi.end(), std::complex<double>{0.0, 0.0});
  }
};

void state_axpy(double a, const ModeState& x, ModeState& y);  // y += a x
void state_scale(ModeState& s, double a);
// phi[i] *= factors[i]; mean untouched (eigenvalue 0).
void state_damp(ModeState& s, const std::vector<double>& factors);
double state_norm_h2(const ModeState& s);  // squared H-norm
bool state_finite(const ModeState& s);

// Conversions between the public coefficient vector and the internal state.
// Fields of smaller truncation embed; larger ones are rejected by the caller.
void field_to_state(const SpectralField& u, const ModeGrid& g, ModeState& out);
SpectralField state_to_field(const ModeState& s, const ModeGrid& g);

// out = Pi((u . grad) v) truncated to the box, by dense convolution over
// coefficient pairs. Exact within the truncation.
void bilinear_direct(const ModeGrid& g, const ModeState& u, const ModeState& v, ModeState& out);

}  // namespace nstorus::detail
