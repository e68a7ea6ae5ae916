// nstorus: experiment driver for the spectral 2D Navier-Stokes simulator.
//
// Subcommands: simulate, saturate, density, jacobian, tv, stationary,
// support, basis. Each takes a JSON config (--config) plus overrides and
// writes deterministic reports under --out. Exit codes: 0 success or
// affirmative finding, 1 negative finding, 2 bad input, 3 numerical failure.

#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

#include "nstorus/config.hpp"
#include "nstorus/control.hpp"
#include "nstorus/density.hpp"
#include "nstorus/errors.hpp"
#include "nstorus/io.hpp"
#include "nstorus/saturation.hpp"
#include "nstorus/stats.hpp"

namespace fs = std::filesystem;
using namespace nstorus;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitNegative = 1;
constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;

struct CommonOpts {
  std::string config_path;
  std::string out_dir = ".";
  std::optional<std::uint64_t> seed;
  std::optional<int> workers;
  std::string format = "json";
};

ExperimentConfig load_with_overrides(const CommonOpts& opts) {
  if (opts.config_path.empty()) throw ConfigError("--config is required for this subcommand");
  ExperimentConfig cfg = load_experiment_config(opts.config_path);
  if (opts.seed) cfg.ensemble.seed = *opts.seed;
  if (opts.workers) cfg.ensemble.workers = std::max(1, *opts.workers);
  return cfg;
}

fs::path ensure_out(const CommonOpts& opts) {
  fs::path dir(opts.out_dir);
  fs::create_directories(dir);
  return dir;
}

void write_json(const fs::path& path, const json& j) {
  std::ofstream out(path, std::ios::trunc);
  out << j.dump(2) << "\n";
  if (!out) throw ConfigError("cannot write " + path.string());
}

void write_manifest(const fs::path& dir, const std::string& command,
                    const ExperimentConfig* cfg, const CommonOpts& opts,
                    const std::vector<std::string>& outputs, const json& extra = {}) {
  json m;
  m["command"] = command;
  if (cfg) {
    m["config_echo"] = cfg->raw_text;
    m["seed"] = cfg->ensemble.seed;
    m["workers"] = cfg->ensemble.workers;
  }
  m["format"] = opts.format;
  m["outputs"] = outputs;
  if (!extra.empty()) m["extra"] = extra;
  write_json(dir / "manifest.json", m);
}

json tv_point_json(const TvCurvePoint& pt) {
  return json{{"amplitude", pt.amplitude},
              {"estimate", pt.tv.estimate},
              {"ci_lo", pt.tv.ci_lo},
              {"ci_hi", pt.tv.ci_hi}};
}

// Radii for the ball-mass scan: a geometric ladder across the sample spread
// unless the config pins explicit radii.
std::vector<double> density_radii(const json& block, const SampleSet& s,
                                  const Eigen::VectorXd& center) {
  if (block.contains("radii")) return block.at("radii").get<std::vector<double>>();
  double spread = 0.0;
  for (long r = 0; r < s.n(); ++r)
    spread += (s.samples.row(r).transpose() - center).squaredNorm();
  spread = std::sqrt(spread / std::max<long>(1, s.n()));
  if (spread == 0.0) spread = 1.0;
  std::vector<double> radii;
  for (double f = 0.05; f <= 0.85; f *= 1.45) radii.push_back(f * spread);
  return radii;
}

int cmd_simulate(const CommonOpts& opts) {
  const ExperimentConfig cfg = load_with_overrides(opts);
  const fs::path dir = ensure_out(opts);
  const EnsembleSpec& es = cfg.ensemble;
  const int stride = std::max(1, static_cast<int>(
                                     cfg.block("run").value("snapshot_stride", 1)));

  std::vector<std::pair<double, SpectralField>> snaps;
  long counter = 0;
  const SnapshotFn keep = [&](long step, double time, const SpectralField& u) {
    if (step % stride == 0 || step == 0) snaps.emplace_back(time, u);
    ++counter;
  };

  const bool export_forcing = cfg.block("run").value("export_forcing", false);
  std::optional<Eigen::MatrixXd> forcing_rows;

  RngStream rng(es.seed, 0);
  const int M = es.physics.truncation;
  switch (es.model) {
    case ForcingModel::kick: {
      const KickSequence ks = sample_kicks(es.law, es.kick_count, es.kick_T, M, rng);
      if (export_forcing) forcing_rows = ensemble_matrix_of(ks);
      kick_chain_observed(ks, es.u0, es.physics, keep);
      break;
    }
    case ForcingModel::colored: {
      const double pdt = es.path_dt > 0.0 ? es.path_dt : es.physics.dt;
      const ForcingSignal g = sample_colored_gaussian(es.law, es.tau, es.t, pdt, M, rng);
      if (export_forcing) forcing_rows = ensemble_matrix_of(g);
      resolve(es.u0, g, es.t, es.physics, keep);
      break;
    }
    case ForcingModel::white: {
      const double pdt = es.path_dt > 0.0 ? es.path_dt : es.physics.dt;
      const ForcingSignal zeta = sample_wiener_path(es.law, es.t, pdt, M, rng);
      if (export_forcing) forcing_rows = ensemble_matrix_of(zeta);
      substituted_resolve(es.u0, es.deterministic_part, zeta, es.t, es.physics, keep);
      break;
    }
  }

  const fs::path traj = dir / "trajectory.csv";
  write_trajectory_csv(traj, snaps);
  std::vector<std::string> outputs{"trajectory.csv"};
  if (cfg.block("run").value("export_binary", false)) {
    Eigen::MatrixXd rows(snaps.size(), 1 + snaps.front().second.size());
    for (size_t i = 0; i < snaps.size(); ++i) {
      rows(static_cast<Eigen::Index>(i), 0) = snaps[i].first;
      rows.row(static_cast<Eigen::Index>(i)).tail(snaps[i].second.size()) =
          snaps[i].second.coeffs().transpose();
    }
    json meta = {{"content", "trajectory"}, {"columns", "time, coefficients"}, {"seed", es.seed}};
    write_ensemble_matrix(dir / "trajectory.ens", rows, &meta);
    outputs.push_back("trajectory.ens");
  }
  if (forcing_rows) {
    json meta = {{"content", es.model == ForcingModel::kick ? "kicks" : "path"},
                 {"seed", es.seed}};
    write_ensemble_matrix(dir / "forcing.ens", *forcing_rows, &meta);
    outputs.push_back("forcing.ens");
  }
  write_manifest(dir, "simulate", &cfg, opts, outputs,
                 json{{"steps", counter}, {"snapshots", snaps.size()}});
  std::cout << "simulate: " << snaps.size() << " snapshots -> " << traj.string() << "\n";
  return kExitOk;
}

int cmd_saturate(const CommonOpts& opts, const std::string& literal, int radius, int max_iter) {
  const SymmetricSet K = SymmetricSet::parse(literal);
  const CoverageReport rep = saturating_within(K, radius, max_iter);

  json j;
  j["generators"] = literal;
  j["box_radius"] = rep.box_radius;
  j["max_iter"] = rep.max_iter;
  j["covered"] = rep.covered;
  j["iters"] = rep.iters;
  j["fixed_point"] = rep.fixed_point;
  j["fixed_point_iter"] = rep.fixed_point_iter;
  j["set_sizes"] = rep.sizes;
  json missing = json::array();
  for (size_t i = 0; i < rep.missing.size() && i < 64; ++i)
    missing.push_back({rep.missing[i][0], rep.missing[i][1]});
  j["missing_count"] = rep.missing.size();
  j["missing"] = missing;

  if (!opts.out_dir.empty()) {
    const fs::path dir = ensure_out(opts);
    write_json(dir / "coverage.json", j);
    write_manifest(dir, "saturate", nullptr, opts, {"coverage.json"},
                   json{{"set_literal", literal}});
  }
  std::cout << (rep.covered ? "covered" : "not covered") << " box R=" << radius << " after "
            << rep.iters << " iterations";
  if (rep.fixed_point) std::cout << " (fixed point at iteration " << rep.fixed_point_iter << ")";
  std::cout << "\n";
  return rep.covered ? kExitOk : kExitNegative;
}

int cmd_density(const CommonOpts& opts) {
  const ExperimentConfig cfg = load_with_overrides(opts);
  const fs::path dir = ensure_out(opts);
  const json block = cfg.block("density");
  const double quantum = block.value("q", 1e-6);

  const SampleSet s = run_ensemble(cfg.ensemble, cfg.n);
  json meta = s.meta.to_json();
  write_ensemble_matrix(dir / "samples.ens", s.samples, &meta);

  const long multiplicity = atom_test(s, quantum);
  const bool atom_flag = multiplicity > 1;

  Eigen::VectorXd center = s.samples.colwise().mean().transpose();
  const BallMassCurve curve = ball_mass_curve(s, center, density_radii(block, s, center));

  json rep;
  rep["n"] = s.n();
  rep["dim"] = s.dim();
  rep["quantum"] = quantum;
  rep["atom_multiplicity"] = multiplicity;
  rep["atom_flag"] = atom_flag;
  rep["ball_slope"] = curve.slope;
  rep["ball_slope_points"] = curve.slope_points;
  rep["radii"] = curve.radii;
  rep["mass"] = curve.mass;
  rep["mass_ci_lo"] = curve.ci_lo;
  rep["mass_ci_hi"] = curve.ci_hi;

  // optional configured window for the scaling exponent, e.g. [1.6, 2.4]
  bool slope_negative = false;
  if (block.contains("slope_window")) {
    const auto win = block.at("slope_window").get<std::vector<double>>();
    if (win.size() != 2) throw ConfigError("slope_window must be [lo, hi]");
    const bool in_window = curve.slope > win[0] && curve.slope < win[1];
    rep["slope_window"] = win;
    rep["slope_in_window"] = in_window;
    slope_negative = !in_window;
  }

  const int kde_grid = block.value("kde_grid", 0);
  if (kde_grid >= 8 && s.dim() <= 3) {
    const KdeResult k = kde(s, kde_grid, block.value("kde_bandwidth_scale", 1.0));
    rep["kde_integral"] = k.integral;
    rep["kde_bandwidth"] = k.bandwidth;
  }
  write_json(dir / "density_report.json", rep);

  Eigen::MatrixXd table(curve.radii.size(), 4);
  for (size_t i = 0; i < curve.radii.size(); ++i) {
    table(i, 0) = curve.radii[i];
    table(i, 1) = curve.mass[i];
    table(i, 2) = curve.ci_lo[i];
    table(i, 3) = curve.ci_hi[i];
  }
  write_csv(dir / "ball_mass.csv", {"radius", "mass", "ci_lo", "ci_hi"}, table);
  write_manifest(dir, "density", &cfg, opts,
                 {"samples.ens", "density_report.json", "ball_mass.csv"});
  std::cout << "density: multiplicity " << multiplicity << ", ball slope " << curve.slope
            << (atom_flag ? " [ATOM FLAG]" : "") << "\n";
  return (atom_flag || slope_negative) ? kExitNegative : kExitOk;
}

int cmd_jacobian(const CommonOpts& opts) {
  const ExperimentConfig cfg = load_with_overrides(opts);
  const fs::path dir = ensure_out(opts);
  const json block = cfg.block("jacobian");
  const EnsembleSpec& es = cfg.ensemble;
  const int M = es.physics.truncation;

  const SubspaceSpec H0 =
      block.contains("h0") ? parse_idspec(block.at("h0"), M) : es.law.ids;
  const int k = block.value("k", es.kick_count);
  const double T = block.value("T", es.kick_T);
  const double tol = block.value("tol", 1e-6);
  const int draws = block.value("draws", 3);
  const double amplitude = block.value("amplitude", 1.0);

  CoefficientLaw law = CoefficientLaw::finite(H0, ScalarLaw::gaussian, amplitude);
  std::vector<double> t_grid = block.contains("t_grid")
                                   ? block.at("t_grid").get<std::vector<double>>()
                                   : std::vector<double>{T};

  const auto rows = bad_time_scan(t_grid, es.u0, law, k, draws, es.projection, es.physics,
                                  tol, es.seed, es.workers);

  // one representative jacobian at the first grid point for the sv table
  RngStream rng(es.seed, 0);
  const KickSequence ks = sample_kicks(law, k, t_grid.front(), M, rng);
  const ControlJacobian J = jacobian(ks, es.u0, H0, es.projection, es.physics,
                                     JacobianMethod::tangent, 1e-4, es.workers);
  const RankReport rr = rank_report(J, tol);

  json rep;
  rep["dim_f"] = es.projection.dim();
  rep["kick_count"] = k;
  rep["tolerance"] = tol;
  rep["draws_per_T"] = draws;
  json scan = json::array();
  bool any_surjective = false;
  for (const auto& row : rows) {
    scan.push_back({{"T", row.T},
                    {"max_rank", row.max_rank},
                    {"surjective", row.surjective},
                    {"ranks", row.ranks}});
    any_surjective = any_surjective || row.surjective;
  }
  rep["scan"] = scan;
  rep["surjective"] = any_surjective;
  rep["singular_values"] = rr.singular_values;

  if (block.value("k_sweep", false)) {
    const auto smallest =
        smallest_surjective_k(es.u0, law, t_grid.front(), k, draws, es.projection, es.physics,
                              tol, es.seed, es.workers);
    if (smallest)
      rep["smallest_surjective_k"] = *smallest;
    else
      rep["smallest_surjective_k"] = nullptr;
  }
  write_json(dir / "jacobian_report.json", rep);

  Eigen::MatrixXd sv(rr.singular_values.size(), 1);
  for (size_t i = 0; i < rr.singular_values.size(); ++i) sv(i, 0) = rr.singular_values[i];
  write_csv(dir / "singular_values.csv", {"sigma"}, sv);
  write_manifest(dir, "jacobian", &cfg, opts,
                 {"jacobian_report.json", "singular_values.csv"});
  std::cout << "jacobian: max rank " << rows.front().max_rank << " of " << es.projection.dim()
            << (any_surjective ? " (surjective)" : " (rank-deficient)") << "\n";
  return any_surjective ? kExitOk : kExitNegative;
}

int cmd_tv(const CommonOpts& opts) {
  const ExperimentConfig cfg = load_with_overrides(opts);
  const fs::path dir = ensure_out(opts);
  const json block = cfg.block("tv");
  if (!block.contains("amplitudes")) throw ConfigError("tv block needs 'amplitudes'");
  const auto amplitudes = block.at("amplitudes").get<std::vector<double>>();
  for (size_t i = 1; i < amplitudes.size(); ++i)
    if (!(amplitudes[i] < amplitudes[i - 1]))
      throw ConfigError("tv amplitudes must decrease");

  SpectralField direction(cfg.ensemble.physics.truncation);
  if (block.contains("direction")) {
    const auto jv = block.at("direction").at("j").get<std::vector<int>>();
    direction.set_coeff(BasisId::osc(jv.at(0), jv.at(1)), 1.0);
  } else {
    direction.set_coeff(cfg.ensemble.projection.id_at(0), 1.0);
  }

  const int bins = block.value("bins", 16);
  const int bootstrap = block.value("bootstrap", 200);
  const auto curve =
      tv_continuity_curve(cfg.ensemble, direction, amplitudes, cfg.n, bins, bootstrap);

  const double threshold = block.value("threshold_smallest", 0.1);
  bool decreasing_within_ci = true;
  for (size_t i = 1; i < curve.size(); ++i)
    if (curve[i].tv.estimate > curve[i - 1].tv.ci_hi) decreasing_within_ci = false;
  const bool smallest_ok = curve.back().tv.estimate < threshold;
  const bool overall_drop = curve.back().tv.estimate < curve.front().tv.estimate;

  json rep;
  rep["bins_per_dim"] = bins;
  rep["bootstrap"] = bootstrap;
  rep["threshold_smallest"] = threshold;
  json pts = json::array();
  for (const auto& pt : curve) pts.push_back(tv_point_json(pt));
  rep["curve"] = pts;
  rep["decreasing_within_ci"] = decreasing_within_ci;
  rep["smallest_below_threshold"] = smallest_ok;
  rep["overall_drop"] = overall_drop;
  const bool pass = decreasing_within_ci && smallest_ok && overall_drop;
  rep["pass"] = pass;
  write_json(dir / "tv_report.json", rep);

  Eigen::MatrixXd table(curve.size(), 4);
  for (size_t i = 0; i < curve.size(); ++i) {
    table(i, 0) = curve[i].amplitude;
    table(i, 1) = curve[i].tv.estimate;
    table(i, 2) = curve[i].tv.ci_lo;
    table(i, 3) = curve[i].tv.ci_hi;
  }
  write_csv(dir / "tv_curve.csv", {"amplitude", "tv", "ci_lo", "ci_hi"}, table);
  write_manifest(dir, "tv", &cfg, opts, {"tv_report.json", "tv_curve.csv"});
  std::cout << "tv: " << curve.front().tv.estimate << " -> " << curve.back().tv.estimate
            << (pass ? " (pass)" : " (fail)") << "\n";
  return pass ? kExitOk : kExitNegative;
}

int cmd_stationary(const CommonOpts& opts) {
  const ExperimentConfig cfg = load_with_overrides(opts);
  const fs::path dir = ensure_out(opts);
  const json block = cfg.block("stationary");
  const int burn_in = block.value("burn_in", 200);
  const int k_max = block.value("k_max", 2200);
  const int stride = block.value("stride", 2);
  const double quantum = block.value("q", 1e-6);

  const SampleSet s = stationary_ensemble(cfg.ensemble, burn_in, k_max, stride);
  json meta = s.meta.to_json();
  write_ensemble_matrix(dir / "stationary.ens", s.samples, &meta);

  const long multiplicity = atom_test(s, quantum);
  Eigen::VectorXd center = s.samples.colwise().mean().transpose();
  const BallMassCurve curve = ball_mass_curve(s, center, density_radii(block, s, center));

  // split-chain mixing diagnostic, reported only
  SampleSet first, second;
  first.samples = s.samples.topRows(s.n() / 2);
  second.samples = s.samples.bottomRows(s.n() / 2);
  const TvEstimate split = tv_estimate(first, second, 8, 100, cfg.ensemble.seed);

  json rep;
  rep["rows"] = s.n();
  rep["rows_dependent"] = true;
  rep["burn_in"] = burn_in;
  rep["k_max"] = k_max;
  rep["stride"] = stride;
  rep["atom_multiplicity"] = multiplicity;
  rep["atom_flag"] = multiplicity > 1;
  rep["ball_slope"] = curve.slope;
  rep["split_chain_tv"] = {{"estimate", split.estimate},
                           {"ci_lo", split.ci_lo},
                           {"ci_hi", split.ci_hi}};
  write_json(dir / "stationary_report.json", rep);
  write_manifest(dir, "stationary", &cfg, opts, {"stationary.ens", "stationary_report.json"});
  std::cout << "stationary: " << s.n() << " rows, multiplicity " << multiplicity
            << ", ball slope " << curve.slope << "\n";
  return multiplicity > 1 ? kExitNegative : kExitOk;
}

int cmd_support(const CommonOpts& opts) {
  const ExperimentConfig cfg = load_with_overrides(opts);
  const fs::path dir = ensure_out(opts);
  const json block = cfg.block("support");
  const double radius = block.value("radius", 1.0);
  const double eps = block.value("eps", 0.25);
  const int grid = block.value("grid", 5);
  const int d = cfg.ensemble.projection.dim();
  if (d < 1 || d > 3) throw ConfigError("support probe needs 1 <= dim F <= 3");

  const SampleSet s = run_ensemble(cfg.ensemble, cfg.n);

  // target lattice over [-R, R]^d clipped to the closed ball
  std::vector<Eigen::VectorXd> targets;
  std::vector<int> ix(d, 0);
  while (true) {
    Eigen::VectorXd y(d);
    for (int a = 0; a < d; ++a)
      y[a] = grid == 1 ? 0.0 : -radius + 2.0 * radius * ix[a] / (grid - 1);
    if (y.norm() <= radius + 1e-12) targets.push_back(y);
    int a = 0;
    while (a < d && ++ix[a] == grid) ix[a++] = 0;
    if (a == d) break;
  }

  bool all_positive = true;
  json rows = json::array();
  Eigen::MatrixXd table(targets.size(), d + 3);
  for (size_t i = 0; i < targets.size(); ++i) {
    const long hits = support_hit(s, targets[i], eps);
    const BinomialCi ci = clopper_pearson(hits, s.n());
    all_positive = all_positive && hits > 0;
    json row;
    row["target"] = std::vector<double>(targets[i].data(), targets[i].data() + d);
    row["hits"] = hits;
    row["fraction"] = static_cast<double>(hits) / static_cast<double>(s.n());
    row["ci_lo"] = ci.lo;
    row["ci_hi"] = ci.hi;
    rows.push_back(std::move(row));
    for (int a = 0; a < d; ++a) table(i, a) = targets[i][a];
    table(i, d) = static_cast<double>(hits);
    table(i, d + 1) = ci.lo;
    table(i, d + 2) = ci.hi;
  }

  json rep;
  rep["eps"] = eps;
  rep["radius"] = radius;
  rep["n"] = s.n();
  rep["targets"] = rows;
  rep["all_targets_hit"] = all_positive;
  write_json(dir / "support_report.json", rep);

  std::vector<std::string> headers;
  for (int a = 0; a < d; ++a) headers.push_back("y" + std::to_string(a));
  headers.insert(headers.end(), {"hits", "ci_lo", "ci_hi"});
  write_csv(dir / "support_hits.csv", headers, table);
  write_manifest(dir, "support", &cfg, opts, {"support_report.json", "support_hits.csv"});
  std::cout << "support: " << targets.size() << " targets, "
            << (all_positive ? "all hit" : "some empty") << "\n";
  return all_positive ? kExitOk : kExitNegative;
}

int cmd_basis(const CommonOpts& opts, int truncation) {
  const fs::path dir = ensure_out(opts);
  write_json(dir / "basis.json", basis_manifest(truncation));
  write_manifest(dir, "basis", nullptr, opts, {"basis.json"}, json{{"M", truncation}});
  std::cout << "basis manifest for M=" << truncation << " -> " << (dir / "basis.json").string()
            << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"spectral Galerkin experiments for the randomly forced 2D Navier-Stokes system"};
  app.require_subcommand(1);

  CommonOpts opts;
  app.add_option("--config", opts.config_path, "experiment config (JSON)");
  app.add_option("--out", opts.out_dir, "output directory");
  std::uint64_t seed_val = 0;
  auto* seed_flag = app.add_option("--seed", seed_val, "override the config seed");
  int workers_val = 0;
  auto* workers_flag = app.add_option("--workers", workers_val, "worker threads");
  app.add_option("--format", opts.format, "report format hint (csv, json)")
      ->check(CLI::IsMember({"csv", "json"}));

  auto* simulate = app.add_subcommand("simulate", "integrate one trajectory and export CSV");
  auto* saturate = app.add_subcommand("saturate", "grow a symmetric set and certify coverage");
  std::string literal;
  int radius = 5, max_iter = 10;
  saturate->add_option("--set", literal, "set literal, e.g. \"(1,0),(1,1)\"")->required();
  saturate->add_option("--radius", radius, "box radius to cover");
  saturate->add_option("--max-iter", max_iter, "iteration budget");
  auto* density = app.add_subcommand("density", "ensemble + absolute-continuity diagnostics");
  auto* jacobian_cmd = app.add_subcommand("jacobian", "control Jacobian rank/surjectivity scan");
  auto* tv = app.add_subcommand("tv", "total-variation continuity sweep");
  auto* stationary = app.add_subcommand("stationary", "long-chain stationary diagnostics");
  auto* support = app.add_subcommand("support", "support-fullness target grid probe");
  auto* basis = app.add_subcommand("basis", "emit the basis.json ordering manifest");
  int manifest_m = 4;
  basis->add_option("--M", manifest_m, "truncation box radius");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  if (seed_flag->count()) opts.seed = seed_val;
  if (workers_flag->count()) opts.workers = workers_val;

  try {
    if (simulate->parsed()) return cmd_simulate(opts);
    if (saturate->parsed()) return cmd_saturate(opts, literal, radius, max_iter);
    if (density->parsed()) return cmd_density(opts);
    if (jacobian_cmd->parsed()) return cmd_jacobian(opts);
    if (tv->parsed()) return cmd_tv(opts);
    if (stationary->parsed()) return cmd_stationary(opts);
    if (support->parsed()) return cmd_support(opts);
    if (basis->parsed()) return cmd_basis(opts, manifest_m);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const DivergedError& e) {
    std::cerr << "numerical failure: " << e.what() << " (step " << e.step << ", t=" << e.time
              << ")\n";
    return kExitNumerical;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  }
  return kExitConfig;
}
