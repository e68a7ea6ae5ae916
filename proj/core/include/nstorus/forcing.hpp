// Samplers for decomposable random fields: independent scalar draws with
// unit second moment scaled by a square-summable coefficient sequence over a
// fixed set of basis ids. These realize the kick amplitudes, stationary
// colored forcing, and Wiener paths that drive the simulator.

#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "nstorus/dynamics.hpp"
#include "nstorus/field.hpp"
#include "nstorus/rng.hpp"

namespace nstorus {

// Unit-second-moment scalar laws. All have a density whose support contains
// zero; `custom` delegates to a user sampler that must satisfy the same
// contract.
enum class ScalarLaw { gaussian, uniform, custom };

struct CoefficientLaw {
  SubspaceSpec ids;
  std::vector<double> b;        // one nonnegative coefficient per id
  std::vector<ScalarLaw> pi;    // one scalar law per id
  std::function<double(RngStream&)> custom_sampler;  // used for ScalarLaw::custom

  // b_r = scale * 2^{-r}, r = 1..dim (sum b^2 -> scale^2/3 as dim grows)
  static CoefficientLaw geometric(SubspaceSpec ids, ScalarLaw law, double scale = 1.0);
  // b_r = scale / r (sum b^2 -> scale^2 pi^2/6)
  static CoefficientLaw polynomial(SubspaceSpec ids, ScalarLaw law, double scale = 1.0);
  // b_r = amplitude on every id
  static CoefficientLaw finite(SubspaceSpec ids, ScalarLaw law, double amplitude = 1.0);
  // all coefficients zero: the degenerate negative control
  static CoefficientLaw zero(SubspaceSpec ids);

  int dim() const { return ids.dim(); }
  double sum_b_squared() const;
  int required_box_radius() const { return ids.required_box_radius(); }
  void validate() const;
  double draw_scalar(int i, RngStream& rng) const;
};

// One draw xi = sum_j b_j xi_j e_j as a field in the given truncation box.
// E norm_h(xi)^2 = sum b_j^2. Draws consume the stream in id order.
SpectralField sample_decomposable(const CoefficientLaw& cl, int truncation, RngStream& rng);

// k i.i.d. draws as a kick sequence with segment length T.
KickSequence sample_kicks(const CoefficientLaw& cl, int k, double T, int truncation,
                          RngStream& rng);

// Brownian path zeta(t) = sum_j b_j beta_j(t) e_j sampled on the grid
// {0, dt, ..., T}; zeta(0) = 0, independent Gaussian increments of variance
// dt b_j^2 per coefficient. dt must divide T.
ForcingSignal sample_wiener_path(const CoefficientLaw& cl, double T, double dt, int truncation,
                                 RngStream& rng);

// Stationary Ornstein-Uhlenbeck force with per-coefficient autocovariance
// b_j^2 exp(-|t-s|/tau), sampled on {0, dt, ..., T} (exact discretization).
ForcingSignal sample_colored_gaussian(const CoefficientLaw& cl, double tau, double T, double dt,
                                      int truncation, RngStream& rng);

// Monte Carlo probe of the support: counts draws with norm_h(xi - x) <= eps.
struct SupportProbe {
  long long hits = 0;
  long long draws = 0;
  double fraction = 0.0;
  double ci_lo = 0.0;  // Clopper-Pearson 95%
  double ci_hi = 0.0;
};
SupportProbe support_ball_probe(const CoefficientLaw& cl, int truncation,
                                const SpectralField& target, double eps, long long n_draws,
                                RngStream& rng);

}  // namespace nstorus
