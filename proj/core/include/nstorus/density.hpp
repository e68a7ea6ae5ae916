// Monte Carlo ensembles of projected states P_F u(t) and the statistical
// diagnostics run on them: quantized-duplicate (atom) counts, ball-mass
// scaling, kernel density estimates, binned total-variation distances with
// bootstrap intervals, support hits, stationary-chain sampling, and the
// exact-zero probe for analytic functionals of decomposable draws.

#pragma once

#include <Eigen/Core>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "nstorus/dynamics.hpp"
#include "nstorus/forcing.hpp"

namespace nstorus {

enum class ForcingModel { kick, colored, white };

std::string to_string(ForcingModel m);
ForcingModel forcing_model_from_string(const std::string& s);

// Everything needed to regenerate an ensemble bit-exactly.
struct EnsembleSpec {
  ForcingModel model = ForcingModel::kick;
  SimParams physics;
  CoefficientLaw law;
  SubspaceSpec projection;
  SpectralField u0;

  // kick model: horizon is kick_count * kick_T
  double kick_T = 0.5;
  int kick_count = 2;
  // colored/white models: horizon t, path sampled at path_dt (defaults to
  // physics.dt when 0), colored correlation time tau
  double t = 1.0;
  double path_dt = 0.0;
  double tau = 1.0;
  std::optional<ForcingSignal> deterministic_part;  // h, colored/white only

  std::uint64_t seed = 0;
  int workers = 1;

  double horizon() const;
  void validate() const;
  nlohmann::json to_json() const;  // provenance record (excludes h paths)
  // Rebuilds a spec from a provenance record; together with to_json this
  // makes a sample set regenerable bit-exactly from its sidecar. Specs with
  // a deterministic forcing part are not round-trippable and are rejected.
  static EnsembleSpec from_json(const nlohmann::json& j);
};

struct SampleMeta {
  double t = 0.0;
  std::vector<BasisId> f_ids;
  std::string model;
  std::uint64_t seed = 0;
  std::uint64_t stream_begin = 0;
  std::uint64_t stream_end = 0;  // exclusive
  bool rows_dependent = false;   // stationary chains flag this
  nlohmann::json provenance;

  nlohmann::json to_json() const;
};

struct SampleSet {
  Eigen::MatrixXd samples;  // n rows, dim F columns
  SampleMeta meta;

  long n() const { return samples.rows(); }
  int dim() const { return static_cast<int>(samples.cols()); }
};

// n independent trajectories, one RNG stream each, projected at the horizon.
// A diverged trajectory aborts with its stream id in the message.
SampleSet run_ensemble(const EnsembleSpec& spec, long n);

// Max multiplicity of rows after coordinatewise quantization floor(x/q).
long atom_test(const SampleSet& s, double quantum);

struct BallMassCurve {
  std::vector<double> radii;
  std::vector<double> mass;       // empirical fractions
  std::vector<double> ci_lo, ci_hi;
  double slope = 0.0;             // log-log fit over radii with >= 5 hits
  int slope_points = 0;
};
BallMassCurve ball_mass_curve(const SampleSet& s, const Eigen::VectorXd& center,
                              std::vector<double> radii);

struct KdeResult {
  std::vector<std::vector<double>> axes;  // per-dimension grid coordinates
  std::vector<double> values;             // row-major over the grid
  std::vector<double> bandwidth;          // Silverman per coordinate (scaled)
  double integral = 0.0;                  // grid quadrature of the estimate
};
// Gaussian product-kernel density on a regular grid; dim <= 3.
KdeResult kde(const SampleSet& s, int grid_per_axis = 64, double bandwidth_scale = 1.0);

struct TvEstimate {
  double estimate = 0.0;  // binned L1/2: a lower bound on the true TV
  double ci_lo = 0.0;
  double ci_hi = 0.0;
  int bins_per_dim = 0;
  int bootstrap = 0;
};
TvEstimate tv_estimate(const SampleSet& a, const SampleSet& b, int bins_per_dim = 16,
                       int bootstrap = 200, std::uint64_t seed = 1234);

struct TvCurvePoint {
  double amplitude = 0.0;
  TvEstimate tv;
};
// TV between the law at u0 and at u0 + a * direction for each amplitude,
// independent seeds per ensemble, one shared baseline.
std::vector<TvCurvePoint> tv_continuity_curve(const EnsembleSpec& base,
                                              const SpectralField& direction,
                                              const std::vector<double>& amplitudes, long n,
                                              int bins_per_dim = 16, int bootstrap = 200);

// #{rows with |row - y| <= eps}.
long support_hit(const SampleSet& s, const Eigen::VectorXd& y, double eps);

// Single kick-model chain sampled at u(kT), k in [burn_in, k_max] with the
// given stride. Rows are dependent; the meta says so.
SampleSet stationary_ensemble(const EnsembleSpec& kick_spec, int burn_in, int k_max,
                              int stride);

// Fraction of draws with f(xi) == 0 exactly.
double analytic_null_probe(const CoefficientLaw& law, int truncation,
                           const std::function<double(const SpectralField&)>& f, long n_draws,
                           RngStream& rng);

// Built-in functionals for the probe.
std::function<double(const SpectralField&)> functional_zero();
std::function<double(const SpectralField&)> functional_coordinate(const BasisId& id);
std::function<double(const SpectralField&)> functional_coordinate_product(const BasisId& a,
                                                                          const BasisId& b);

}  // namespace nstorus
