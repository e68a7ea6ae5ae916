// Galerkin time integration of the incompressible 2D Navier-Stokes system
//   du/dt + nu L u + B(u,u) = g(t),   B(u,v) = Pi((u . grad) v),
// on the truncation box |j|_inf <= M. The stiff dissipative term is treated
// by an exact integrating factor; the remainder is stepped with RK2 or RK4.
// Two interchangeable evaluations of B are provided: a dense coefficient
// convolution (exact within the truncation, the reference) and a padded
// pseudo-spectral transform (fast, cross-checked against the first).

#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <vector>

#include "nstorus/field.hpp"

namespace nstorus {

enum class TimeStepper { exp_rk2, exp_rk4 };
enum class NonlinearityPath { direct_convolution, pseudospectral };

struct SimParams {
  double nu = 0.1;
  int truncation = 4;
  // The integrating factor makes the dissipative term exact at any dt, so
  // dt carries no nu M^2 stability bound; it governs the accuracy of the
  // advection stages (and the blow-up guard below catches a dt too coarse
  // for the advective scales).
  double dt = 1e-2;
  TimeStepper integrator = TimeStepper::exp_rk4;
  NonlinearityPath nonlinearity = NonlinearityPath::pseudospectral;
  // Integration aborts once norm_h(u) exceeds blowup_factor * (norm_h(u0)+1);
  // 2D NS does not blow up, so this only flags numerical instability.
  double blowup_factor = 1e6;

  void validate() const;
};

// Time-dependent force on [0, horizon): either piecewise-constant segments
// or a sampled path with linear interpolation between samples.
struct ForcingSignal {
  enum class Kind { piecewise_constant, sampled_path };

  Kind kind = Kind::piecewise_constant;
  double horizon = 0.0;
  // piecewise_constant: times are segment starts (times[0] == 0); field i is
  //   active on [times[i], times[i+1]) and the last until the horizon.
  // sampled_path: times are sample instants (times[0] == 0, last == horizon),
  //   values interpolate linearly in between.
  std::vector<double> times;
  std::vector<SpectralField> fields;

  static ForcingSignal zero(double horizon, int truncation);
  static ForcingSignal constant(const SpectralField& g, double horizon);
  static ForcingSignal piecewise(std::vector<double> segment_starts,
                                 std::vector<SpectralField> fields, double horizon);
  static ForcingSignal sampled(double sample_dt, std::vector<SpectralField> values);

  int truncation() const;
  SpectralField at(double t) const;
  void validate() const;
};

// The piecewise-constant random force: k kicks, kick i acting on
// [(i-1)T, iT).
struct KickSequence {
  double segment_length = 0.0;  // T
  std::vector<SpectralField> kicks;

  int count() const { return static_cast<int>(kicks.size()); }
  double horizon() const { return segment_length * count(); }
  ForcingSignal to_forcing() const;
  void validate() const;
};

// Pi((u . grad) v) truncated to the shared box. Truncations must match.
SpectralField bilinear(const SpectralField& u, const SpectralField& v,
                       NonlinearityPath path = NonlinearityPath::direct_convolution);

// g - nu L u - B(u,u).
SpectralField rhs(const SpectralField& u, const SpectralField& g, double nu,
                  NonlinearityPath path = NonlinearityPath::direct_convolution);

using SnapshotFn = std::function<void(long step, double time, const SpectralField& u)>;

// Solution u(t) of the forced system from u0. Throws DivergedError on
// numerical blow-up. The optional callback sees every accepted step
// (including the initial state at step 0).
SpectralField resolve(const SpectralField& u0, const ForcingSignal& f, double t,
                      const SimParams& p, const SnapshotFn& on_step = nullptr);

// State after k kicks: u(kT), with kick i constant on its segment.
SpectralField kick_chain(const KickSequence& ks, const SpectralField& u0, const SimParams& p);

// Same, but reporting every accepted step (chain diagnostics sample the
// segment boundaries from the callback).
SpectralField kick_chain_observed(const KickSequence& ks, const SpectralField& u0,
                                  const SimParams& p, const SnapshotFn& on_step);

// Linearization along the trajectory of (u0, f):
//   dtheta/dt + nu L theta + B(theta,u) + B(u,theta) = df,  theta(0) = du0.
// Base and tangent states are co-integrated with the same scheme, so the
// result is the derivative of the discrete flow up to integration error.
struct TangentResult {
  SpectralField u;      // base solution at time t
  SpectralField theta;  // tangent state at time t
};
TangentResult tangent_resolve(const SpectralField& u0, const ForcingSignal& f,
                              const SpectralField& du0, const ForcingSignal& df, double t,
                              const SimParams& p);

// Pathwise solve for forcing given as the distributional derivative of a
// continuous path zeta (zeta(0) = 0): integrates the shifted unknown
// v = u - zeta,
//   dv/dt + nu L v + B(v+zeta, v+zeta) = h - nu L zeta,  v(0) = u0,
// and returns u(t) = v(t) + zeta(t). h may be empty (no deterministic part).
SpectralField substituted_resolve(const SpectralField& u0,
                                  const std::optional<ForcingSignal>& h,
                                  const ForcingSignal& zeta_path, double t, const SimParams& p,
                                  const SnapshotFn& on_step = nullptr);

}  // namespace nstorus
