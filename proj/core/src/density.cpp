#include "nstorus/density.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "nstorus/errors.hpp"
#include "nstorus/io.hpp"
#include "nstorus/parallel.hpp"
#include "nstorus/stats.hpp"

namespace nstorus {

std::string to_string(ForcingModel m) {
  switch (m) {
    case ForcingModel::kick:
      return "kick";
    case ForcingModel::colored:
      return "colored";
    case ForcingModel::white:
      return "white";
  }
  return "?";
}

ForcingModel forcing_model_from_string(const std::string& s) {
  if (s == "kick") return ForcingModel::kick;
  if (s == "colored") return ForcingModel::colored;
  if (s == "white") return ForcingModel::white;
  throw ConfigError("unknown forcing model '" + s + "'");
}

double EnsembleSpec::horizon() const {
  return model == ForcingModel::kick ? kick_T * kick_count : t;
}

void EnsembleSpec::validate() const {
  physics.validate();
  law.validate();
  const int M = physics.truncation;
  if (law.required_box_radius() > M)
    throw ConfigError("law ids exceed truncation box " + std::to_string(M));
  for (const auto& id : projection.ids())
    if (id.box_radius() > M)
      throw ConfigError("projection id " + id.label() + " exceeds truncation box " +
                        std::to_string(M));
  if (projection.dim() < 1) throw ConfigError("projection subspace is empty");
  if (u0.truncation() > M) throw ConfigError("initial condition exceeds truncation box");
  if (model == ForcingModel::kick) {
    if (!(kick_T > 0.0) || kick_count < 1)
      throw ConfigError("kick model needs kick_T > 0 and kick_count >= 1");
  } else {
    if (!(t > 0.0)) throw ConfigError("horizon t must be positive");
    if (model == ForcingModel::colored && !(tau > 0.0))
      throw ConfigError("colored model needs tau > 0");
  }
  if (workers < 1) throw ConfigError("workers must be >= 1");
}

nlohmann::json EnsembleSpec::to_json() const {
  nlohmann::json j;
  j["model"] = to_string(model);
  j["physics"] = {{"nu", physics.nu},
                  {"M", physics.truncation},
                  {"dt", physics.dt},
                  {"integrator", physics.integrator == TimeStepper::exp_rk4 ? "exp_rk4" : "exp_rk2"},
                  {"nonlinearity", physics.nonlinearity == NonlinearityPath::pseudospectral
                                       ? "pseudospectral_2/3"
                                       : "direct_convolution"}};
  nlohmann::json law_ids = nlohmann::json::array();
  for (const auto& id : law.ids.ids()) law_ids.push_back(id.label());
  nlohmann::json law_pi = nlohmann::json::array();
  for (auto p : law.pi)
    law_pi.push_back(p == ScalarLaw::gaussian ? "gaussian"
                                              : (p == ScalarLaw::uniform ? "uniform" : "custom"));
  j["law"] = {{"ids", law_ids}, {"b", law.b}, {"pi", law_pi}};
  nlohmann::json f_ids = nlohmann::json::array();
  for (const auto& id : projection.ids()) f_ids.push_back(id.label());
  j["projection"] = f_ids;
  nlohmann::json u0j = nlohmann::json::object();
  for (int i = 0; i < u0.size(); ++i)
    if (u0.coeffs()[i] != 0.0) u0j[u0.basis().id_at(i).label()] = u0.coeffs()[i];
  j["u0"] = u0j;
  if (model == ForcingModel::kick) {
    j["kick"] = {{"T", kick_T}, {"k", kick_count}};
  } else {
    j["t"] = t;
    j["path_dt"] = path_dt;
    if (model == ForcingModel::colored) j["tau"] = tau;
    j["has_deterministic_part"] = deterministic_part.has_value();
  }
  j["seed"] = seed;
  return j;
}

EnsembleSpec EnsembleSpec::from_json(const nlohmann::json& j) {
  EnsembleSpec s;
  s.model = forcing_model_from_string(j.at("model").get<std::string>());
  const nlohmann::json& ph = j.at("physics");
  s.physics.nu = ph.at("nu").get<double>();
  s.physics.truncation = ph.at("M").get<int>();
  s.physics.dt = ph.at("dt").get<double>();
  s.physics.integrator =
      ph.at("integrator").get<std::string>() == "exp_rk2" ? TimeStepper::exp_rk2
                                                          : TimeStepper::exp_rk4;
  s.physics.nonlinearity = ph.at("nonlinearity").get<std::string>() == "direct_convolution"
                               ? NonlinearityPath::direct_convolution
                               : NonlinearityPath::pseudospectral;

  const nlohmann::json& lj = j.at("law");
  std::vector<BasisId> law_ids;
  for (const auto& lbl : lj.at("ids")) law_ids.push_back(basis_id_from_label(lbl));
  CoefficientLaw law;
  law.ids = SubspaceSpec(std::move(law_ids));
  law.b = lj.at("b").get<std::vector<double>>();
  for (const auto& pi : lj.at("pi")) {
    const std::string name = pi.get<std::string>();
    if (name == "custom")
      throw ConfigError("custom scalar laws cannot be rebuilt from provenance");
    law.pi.push_back(name == "uniform" ? ScalarLaw::uniform : ScalarLaw::gaussian);
  }
  law.validate();
  s.law = std::move(law);

  std::vector<BasisId> f_ids;
  for (const auto& lbl : j.at("projection")) f_ids.push_back(basis_id_from_label(lbl));
  s.projection = SubspaceSpec(std::move(f_ids));

  s.u0 = SpectralField(s.physics.truncation);
  for (const auto& [lbl, c] : j.at("u0").items())
    s.u0.set_coeff(basis_id_from_label(lbl), c.get<double>());

  if (s.model == ForcingModel::kick) {
    s.kick_T = j.at("kick").at("T").get<double>();
    s.kick_count = j.at("kick").at("k").get<int>();
  } else {
    s.t = j.at("t").get<double>();
    s.path_dt = j.at("path_dt").get<double>();
    if (s.model == ForcingModel::colored) s.tau = j.at("tau").get<double>();
    if (j.value("has_deterministic_part", false))
      throw ConfigError("deterministic forcing parts are not serialized in provenance");
  }
  s.seed = j.at("seed").get<std::uint64_t>();
  s.validate();
  return s;
}

nlohmann::json SampleMeta::to_json() const {
  nlohmann::json j;
  j["t"] = t;
  nlohmann::json ids = nlohmann::json::array();
  for (const auto& id : f_ids) ids.push_back(id.label());
  j["f_ids"] = ids;
  j["model"] = model;
  j["seed"] = seed;
  j["stream_begin"] = stream_begin;
  j["stream_end"] = stream_end;
  j["rows_dependent"] = rows_dependent;
  j["provenance"] = provenance;
  return j;
}

namespace {

// eta + h evaluated on eta's sample grid. Exact when h is constant or
// sampled on the same grid; other shapes are interpolated at the samples.
ForcingSignal add_deterministic(const ForcingSignal& eta, const ForcingSignal& h) {
  ForcingSignal out = eta;
  for (size_t i = 0; i < out.times.size(); ++i) {
    SpectralField hv = h.at(std::min(out.times[i], h.horizon));
    out.fields[i] += hv.embedded(out.fields[i].truncation());
  }
  return out;
}

SpectralField run_one_trajectory(const EnsembleSpec& spec, std::uint64_t stream) {
  RngStream rng(spec.seed, stream);
  const int M = spec.physics.truncation;
  switch (spec.model) {
    case ForcingModel::kick: {
      KickSequence ks = sample_kicks(spec.law, spec.kick_count, spec.kick_T, M, rng);
      return kick_chain(ks, spec.u0, spec.physics);
    }
    case ForcingModel::colored: {
      const double pdt = spec.path_dt > 0.0 ? spec.path_dt : spec.physics.dt;
      ForcingSignal g = sample_colored_gaussian(spec.law, spec.tau, spec.t, pdt, M, rng);
      if (spec.deterministic_part) g = add_deterministic(g, *spec.deterministic_part);
      return resolve(spec.u0, g, spec.t, spec.physics);
    }
    case ForcingModel::white: {
      const double pdt = spec.path_dt > 0.0 ? spec.path_dt : spec.physics.dt;
      ForcingSignal zeta = sample_wiener_path(spec.law, spec.t, pdt, M, rng);
      return substituted_resolve(spec.u0, spec.deterministic_part, zeta, spec.t, spec.physics);
    }
  }
  throw ConfigError("unreachable forcing model");
}

}  // namespace

SampleSet run_ensemble(const EnsembleSpec& spec, long n) {
  spec.validate();
  if (n < 1) throw ConfigError("ensemble size must be >= 1");
  SampleSet out;
  out.samples.resize(n, spec.projection.dim());
  parallel_chunks(n, spec.workers, [&](long lo, long hi, int) {
    for (long i = lo; i < hi; ++i) {
      try {
        const SpectralField u = run_one_trajectory(spec, static_cast<std::uint64_t>(i));
        out.samples.row(i) = project(u, spec.projection).transpose();
      } catch (const DivergedError& e) {
        throw DivergedError("trajectory stream " + std::to_string(i) + ": " + e.what(), e.step,
                            e.time);
      }
    }
  });
  out.meta.t = spec.horizon();
  out.meta.f_ids = spec.projection.ids();
  out.meta.model = to_string(spec.model);
  out.meta.seed = spec.seed;
  out.meta.stream_begin = 0;
  out.meta.stream_end = static_cast<std::uint64_t>(n);
  out.meta.rows_dependent = false;
  out.meta.provenance = spec.to_json();
  return out;
}

long atom_test(const SampleSet& s, double quantum) {
  if (!(quantum > 0.0)) throw ConfigError("atom test needs a positive quantum");
  std::unordered_map<std::string, long> counts;
  counts.reserve(static_cast<size_t>(s.n()));
  std::string key;
  long best = 0;
  for (long r = 0; r < s.n(); ++r) {
    key.clear();
    for (int c = 0; c < s.dim(); ++c) {
      const long long q = static_cast<long long>(std::floor(s.samples(r, c) / quantum));
      key.append(reinterpret_cast<const char*>(&q), sizeof q);
    }
    best = std::max(best, ++counts[key]);
  }
  return best;
}

BallMassCurve ball_mass_curve(const SampleSet& s, const Eigen::VectorXd& center,
                              std::vector<double> radii) {
  if (center.size() != s.dim()) throw ConfigError("ball center dimension mismatch");
  if (radii.empty()) throw ConfigError("ball mass curve needs radii");
  for (size_t i = 1; i < radii.size(); ++i)
    if (!(radii[i] >= radii[i - 1])) throw ConfigError("radii must be non-decreasing");
  BallMassCurve out;
  out.radii = std::move(radii);
  std::vector<double> dist(static_cast<size_t>(s.n()));
  for (long r = 0; r < s.n(); ++r)
    dist[static_cast<size_t>(r)] = (s.samples.row(r).transpose() - center).norm();
  std::sort(dist.begin(), dist.end());
  std::vector<double> fit_r, fit_m;
  for (double rad : out.radii) {
    const auto it = std::upper_bound(dist.begin(), dist.end(), rad);
    const long long hits = it - dist.begin();
    const double mass = static_cast<double>(hits) / static_cast<double>(s.n());
    out.mass.push_back(mass);
    const BinomialCi ci = clopper_pearson(hits, s.n());
    out.ci_lo.push_back(ci.lo);
    out.ci_hi.push_back(ci.hi);
    if (hits >= 5) {
      fit_r.push_back(rad);
      fit_m.push_back(mass);
    }
  }
  out.slope = log_log_slope(fit_r, fit_m, &out.slope_points);
  return out;
}

KdeResult kde(const SampleSet& s, int grid_per_axis, double bandwidth_scale) {
  const int d = s.dim();
  if (d < 1 || d > 3) throw ConfigError("kde supports 1 <= dim <= 3");
  if (grid_per_axis < 8) throw ConfigError("kde grid too coarse");
  if (!(bandwidth_scale > 0.0)) throw ConfigError("bandwidth scale must be positive");
  const long n = s.n();
  KdeResult out;
  out.axes.resize(d);
  out.bandwidth.resize(d);

  std::vector<double> lo(d), hi(d), cell(d);
  const double silverman = std::pow(4.0 / ((d + 2.0) * static_cast<double>(n)),
                                    1.0 / (d + 4.0));
  for (int c = 0; c < d; ++c) {
    const double mean = s.samples.col(c).mean();
    const double sd = std::sqrt((s.samples.col(c).array() - mean).square().sum() /
                                std::max<long>(1, n - 1));
    const double cmin = s.samples.col(c).minCoeff();
    const double cmax = s.samples.col(c).maxCoeff();
    double h = bandwidth_scale * sd * silverman;
    // keep the kernel resolved by the grid and nonzero for degenerate data
    h = std::max({h, (cmax - cmin) / static_cast<double>(grid_per_axis - 11),
                  1e-3 * (1.0 + std::abs(mean))});
    out.bandwidth[c] = h;
    lo[c] = cmin - 5.0 * h;
    hi[c] = cmax + 5.0 * h;
    cell[c] = (hi[c] - lo[c]) / static_cast<double>(grid_per_axis - 1);
    out.axes[c].resize(grid_per_axis);
    for (int g = 0; g < grid_per_axis; ++g) out.axes[c][g] = lo[c] + g * cell[c];
  }

  long grid_total = 1;
  for (int c = 0; c < d; ++c) grid_total *= grid_per_axis;
  out.values.assign(static_cast<size_t>(grid_total), 0.0);

  const double norm = 1.0 / (static_cast<double>(n) *
                             std::pow(2.0 * std::numbers::pi, d / 2.0) *
                             [&] {
                               double p = 1.0;
                               for (int c = 0; c < d; ++c) p *= out.bandwidth[c];
                               return p;
                             }());
  std::vector<int> ix(d, 0);
  for (long g = 0; g < grid_total; ++g) {
    double acc = 0.0;
    for (long r = 0; r < n; ++r) {
      double e = 0.0;
      for (int c = 0; c < d; ++c) {
        const double z = (out.axes[c][ix[c]] - s.samples(r, c)) / out.bandwidth[c];
        e += z * z;
      }
      if (e < 40.0) acc += std::exp(-0.5 * e);
    }
    out.values[static_cast<size_t>(g)] = norm * acc;
    int c = 0;
    while (c < d && ++ix[c] == grid_per_axis) ix[c++] = 0;
  }
  double cellvol = 1.0;
  for (int c = 0; c < d; ++c) cellvol *= cell[c];
  for (double v : out.values) out.integral += v * cellvol;
  return out;
}

namespace {

struct Binned {
  std::vector<int> idx_a, idx_b;  // bin index per row
  long bins_total = 0;
};

Binned bin_two_sets(const SampleSet& a, const SampleSet& b, int bins_per_dim) {
  const int d = a.dim();
  long total = 1;
  for (int c = 0; c < d; ++c) {
    total *= bins_per_dim;
    if (total > 10'000'000) throw ConfigError("tv bin grid too large for this dimension");
  }
  std::vector<double> lo(d), width(d);
  for (int c = 0; c < d; ++c) {
    const double mn = std::min(a.samples.col(c).minCoeff(), b.samples.col(c).minCoeff());
    const double mx = std::max(a.samples.col(c).maxCoeff(), b.samples.col(c).maxCoeff());
    lo[c] = mn;
    width[c] = (mx > mn) ? (mx - mn) / bins_per_dim : 1.0;
  }
  auto index_rows = [&](const Eigen::MatrixXd& m, std::vector<int>& out_idx) {
    out_idx.resize(static_cast<size_t>(m.rows()));
    for (long r = 0; r < m.rows(); ++r) {
      long flat = 0;
      for (int c = 0; c < d; ++c) {
        int i = static_cast<int>((m(r, c) - lo[c]) / width[c]);
        i = std::clamp(i, 0, bins_per_dim - 1);
        flat = flat * bins_per_dim + i;
      }
      out_idx[static_cast<size_t>(r)] = static_cast<int>(flat);
    }
  };
  Binned out;
  out.bins_total = total;
  index_rows(a.samples, out.idx_a);
  index_rows(b.samples, out.idx_b);
  return out;
}

double binned_tv(const std::vector<int>& ia, const std::vector<int>& ib, long bins) {
  std::vector<double> pa(static_cast<size_t>(bins), 0.0), pb(static_cast<size_t>(bins), 0.0);
  const double wa = 1.0 / static_cast<double>(ia.size());
  const double wb = 1.0 / static_cast<double>(ib.size());
  for (int i : ia) pa[static_cast<size_t>(i)] += wa;
  for (int i : ib) pb[static_cast<size_t>(i)] += wb;
  double acc = 0.0;
  for (long i = 0; i < bins; ++i)
    acc += std::abs(pa[static_cast<size_t>(i)] - pb[static_cast<size_t>(i)]);
  return 0.5 * acc;
}

}  // namespace

TvEstimate tv_estimate(const SampleSet& a, const SampleSet& b, int bins_per_dim, int bootstrap,
                       std::uint64_t seed) {
  if (a.dim() != b.dim()) throw ConfigError("tv estimate needs matching dimensions");
  if (bins_per_dim < 2) throw ConfigError("tv estimate needs >= 2 bins per dim");
  const Binned bn = bin_two_sets(a, b, bins_per_dim);
  TvEstimate out;
  out.bins_per_dim = bins_per_dim;
  out.bootstrap = bootstrap;
  out.estimate = binned_tv(bn.idx_a, bn.idx_b, bn.bins_total);
  if (bootstrap > 0) {
    RngStream rng(seed, 0xB00757A9ull);
    std::vector<double> reps(static_cast<size_t>(bootstrap));
    std::vector<int> ra(bn.idx_a.size()), rb(bn.idx_b.size());
    for (int r = 0; r < bootstrap; ++r) {
      for (auto& v : ra)
        v = bn.idx_a[static_cast<size_t>(rng.next_u64() % bn.idx_a.size())];
      for (auto& v : rb)
        v = bn.idx_b[static_cast<size_t>(rng.next_u64() % bn.idx_b.size())];
      reps[static_cast<size_t>(r)] = binned_tv(ra, rb, bn.bins_total);
    }
    out.ci_lo = percentile(reps, 0.025);
    out.ci_hi = percentile(reps, 0.975);
  } else {
    out.ci_lo = out.ci_hi = out.estimate;
  }
  return out;
}

std::vector<TvCurvePoint> tv_continuity_curve(const EnsembleSpec& base,
                                              const SpectralField& direction,
                                              const std::vector<double>& amplitudes, long n,
                                              int bins_per_dim, int bootstrap) {
  if (amplitudes.empty()) throw ConfigError("tv curve needs amplitudes");
  const SampleSet baseline = run_ensemble(base, n);
  std::vector<TvCurvePoint> out;
  out.reserve(amplitudes.size());
  for (size_t i = 0; i < amplitudes.size(); ++i) {
    EnsembleSpec spec = base;
    SpectralField shift = direction;
    shift *= amplitudes[i];
    spec.u0 = base.u0.embedded(spec.physics.truncation) +
              shift.embedded(spec.physics.truncation);
    spec.seed = base.seed + 1000003ull * (i + 1);  // independent draws per amplitude
    const SampleSet perturbed = run_ensemble(spec, n);
    TvCurvePoint pt;
    pt.amplitude = amplitudes[i];
    pt.tv = tv_estimate(baseline, perturbed, bins_per_dim, bootstrap,
                        base.seed ^ (0x7F4A7C15ull + i));
    out.push_back(pt);
  }
  return out;
}

long support_hit(const SampleSet& s, const Eigen::VectorXd& y, double eps) {
  if (y.size() != s.dim()) throw ConfigError("support target dimension mismatch");
  if (!(eps > 0.0)) throw ConfigError("support hit needs eps > 0");
  long hits = 0;
  for (long r = 0; r < s.n(); ++r)
    if ((s.samples.row(r).transpose() - y).norm() <= eps) ++hits;
  return hits;
}

SampleSet stationary_ensemble(const EnsembleSpec& kick_spec, int burn_in, int k_max,
                              int stride) {
  if (kick_spec.model != ForcingModel::kick)
    throw ConfigError("stationary sampling runs on the kick model");
  if (burn_in < 0 || k_max <= burn_in || stride < 1)
    throw ConfigError("stationary sampling needs 0 <= burn_in < k_max and stride >= 1");
  EnsembleSpec spec = kick_spec;
  spec.validate();
  const int M = spec.physics.truncation;
  const double T = spec.kick_T;

  // One long chain: all kicks drawn from a single stream, integrated in one
  // pass, sampled at segment boundaries.
  RngStream rng(spec.seed, 0);
  KickSequence ks = sample_kicks(spec.law, k_max, T, M, rng);

  const long rows = (k_max - burn_in) / stride + 1;
  SampleSet out;
  out.samples.resize(rows, spec.projection.dim());
  long row = 0;
  const auto on_step = [&](long, double time, const SpectralField& u) {
    const double m_real = time / T;
    const long m = std::lround(m_real);
    if (std::abs(m_real - static_cast<double>(m)) > 1e-9) return;
    if (m < burn_in || m > k_max || (m - burn_in) % stride != 0) return;
    if (row < rows) out.samples.row(row++) = project(u, spec.projection).transpose();
  };
  kick_chain_observed(ks, spec.u0, spec.physics, on_step);
  if (row != rows)
    throw ConfigError("stationary sampling missed segment boundaries (dt/T mismatch)");

  out.meta.t = static_cast<double>(k_max) * T;
  out.meta.f_ids = spec.projection.ids();
  out.meta.model = "kick-stationary";
  out.meta.seed = spec.seed;
  out.meta.stream_begin = 0;
  out.meta.stream_end = 1;
  out.meta.rows_dependent = true;
  out.meta.provenance = spec.to_json();
  out.meta.provenance["stationary"] = {{"burn_in", burn_in}, {"k_max", k_max}, {"stride", stride}};
  return out;
}

double analytic_null_probe(const CoefficientLaw& law, int truncation,
                           const std::function<double(const SpectralField&)>& f, long n_draws,
                           RngStream& rng) {
  if (n_draws < 1) throw ConfigError("null probe needs draws");
  long zeros = 0;
  for (long i = 0; i < n_draws; ++i) {
    const SpectralField xi = sample_decomposable(law, truncation, rng);
    if (f(xi) == 0.0) ++zeros;
  }
  return static_cast<double>(zeros) / static_cast<double>(n_draws);
}

std::function<double(const SpectralField&)> functional_zero() {
  return [](const SpectralField&) { return 0.0; };
}

std::function<double(const SpectralField&)> functional_coordinate(const BasisId& id) {
  return [id](const SpectralField& u) { return u.coeff(id); };
}

std::function<double(const SpectralField&)> functional_coordinate_product(const BasisId& a,
                                                                          const BasisId& b) {
  return [a, b](const SpectralField& u) { return u.coeff(a) * u.coeff(b); };
}

}  // namespace nstorus
