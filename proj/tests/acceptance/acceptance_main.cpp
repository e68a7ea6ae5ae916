// Acceptance suite: one pass/fail line per criterion, nonzero exit when any
// fail. Every tolerance is pinned here in code; runs are seeded and
// deterministic on a given build.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "nstorus/control.hpp"
#include "nstorus/density.hpp"
#include "nstorus/saturation.hpp"
#include "nstorus/stats.hpp"
#include "test_util.hpp"

using namespace nstorus;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

int failures = 0;

void run_criterion(int id, const std::string& title, const std::function<Outcome()>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome out;
  try {
    out = body();
  } catch (const std::exception& e) {
    out.pass = false;
    out.detail = std::string("exception: ") + e.what();
  }
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  std::printf("[%s] criterion %2d: %s — %s (%.1f s)\n", out.pass ? "PASS" : "FAIL", id,
              title.c_str(), out.detail.c_str(), wall);
  std::fflush(stdout);
  if (!out.pass) ++failures;
}

std::string fmt(double x) {
  std::ostringstream ss;
  ss.precision(3);
  ss << x;
  return ss.str();
}

SimParams mc_params(int M) {  // ensemble-scale integrator settings
  SimParams p;
  p.nu = 0.1;
  p.truncation = M;
  p.dt = 0.02;
  p.integrator = TimeStepper::exp_rk2;
  p.nonlinearity = NonlinearityPath::pseudospectral;
  return p;
}

EnsembleSpec kick_ensemble(double b_amp, int M, std::uint64_t seed) {
  EnsembleSpec s;
  s.model = ForcingModel::kick;
  s.physics = mc_params(M);
  const SubspaceSpec H0 = subspace_of(SymmetricSet::parse("(1,0),(1,1)"), M);
  s.law = b_amp == 0.0 ? CoefficientLaw::zero(H0)
                       : CoefficientLaw::finite(H0, ScalarLaw::gaussian, b_amp);
  s.projection = SubspaceSpec(std::vector<BasisId>{BasisId::osc(1, 0), BasisId::osc(1, 1)});
  s.u0 = SpectralField(M);
  s.kick_T = 0.5;
  s.kick_count = 2;
  s.seed = seed;
  s.workers = 2;
  return s;
}

std::vector<double> radius_ladder(const SampleSet& s, const Eigen::VectorXd& center,
                                  double lo_frac, double hi_frac) {
  double spread = 0.0;
  for (long r = 0; r < s.n(); ++r)
    spread += (s.samples.row(r).transpose() - center).squaredNorm();
  spread = std::sqrt(spread / static_cast<double>(s.n()));
  std::vector<double> radii;
  for (double f = lo_frac; f <= hi_frac; f *= 1.45) radii.push_back(f * spread);
  return radii;
}

// 1: single-mode decay at M=8 is exact to 1e-8 and fast
Outcome c1_single_mode_decay() {
  SimParams p;
  p.nu = 0.1;
  p.truncation = 8;
  p.dt = 1e-3;
  p.integrator = TimeStepper::exp_rk4;
  p.nonlinearity = NonlinearityPath::pseudospectral;
  const SpectralField u0 = SpectralField::mode(8, BasisId::osc(1, 0), 1.0);
  const auto t0 = std::chrono::steady_clock::now();
  const SpectralField u1 = resolve(u0, ForcingSignal::zero(1.0, 8), 1.0, p);
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  SpectralField want = u0;
  want *= std::exp(-0.1);
  const double err = (u1 - want).norm_h();
  return {err < 1e-8 && wall < 1.0,
          "|u(1) - e^{-0.1} e_(1,0)|_H = " + fmt(err) + ", wall " + fmt(wall) + " s"};
}

// 2: skew symmetry of the advection term and agreement of the two paths
Outcome c2_skew_and_path_agreement() {
  RngStream rng(4242, 0);
  double worst_skew = 0.0, worst_rel = 0.0;
  for (int rep = 0; rep < 100; ++rep) {
    SpectralField u = testutil::random_field(8, rng);
    SpectralField v = testutil::random_field(8, rng);
    u *= 1.0 / u.norm_h();
    v *= 1.0 / v.norm_h();
    const SpectralField d = bilinear(u, v, NonlinearityPath::direct_convolution);
    worst_skew = std::max(worst_skew, std::abs(inner_h(d, v)));
    const SpectralField s = bilinear(u, v, NonlinearityPath::pseudospectral);
    worst_rel = std::max(worst_rel, (d - s).norm_h() / d.norm_h());
  }
  return {worst_skew < 1e-12 && worst_rel < 1e-10,
          "max |(B(u,v),v)| = " + fmt(worst_skew) + ", max path rel diff = " + fmt(worst_rel)};
}

// 3: the kick chain obeys the time-rescaling identity
Outcome c3_rescaling_identity() {
  const double T = 0.5, nu = 0.2;
  const int M = 4, k = 2;
  RngStream rng(59, 0);
  const SpectralField u0 = testutil::random_field(M, rng, 0.3);
  KickSequence ks;
  ks.segment_length = T;
  for (int i = 0; i < k; ++i) ks.kicks.push_back(testutil::random_field(M, rng, 0.5));

  SimParams p;
  p.nu = nu;
  p.truncation = M;
  p.dt = 1e-3;
  const auto t0 = std::chrono::steady_clock::now();
  const SpectralField lhs = kick_chain(ks, u0, p);

  SimParams ps = p;
  ps.nu = T * nu;
  ps.dt = p.dt / T;
  KickSequence rescaled;
  rescaled.segment_length = 1.0;
  for (const auto& kick : ks.kicks) {
    SpectralField s = kick;
    s *= T * T;
    rescaled.kicks.push_back(s);
  }
  SpectralField su0 = u0;
  su0 *= T;
  SpectralField rhs_side = kick_chain(rescaled, su0, ps);
  rhs_side *= 1.0 / T;
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  const double rel = (lhs - rhs_side).norm_h() / lhs.norm_h();
  return {rel < 1e-6 && wall < 5.0, "relative gap " + fmt(rel) + ", wall " + fmt(wall) + " s"};
}

// 4: finite-difference and tangent Jacobians cross-validate
Outcome c4_jacobian_cross_validation() {
  SimParams p;
  p.nu = 0.1;
  p.truncation = 4;
  p.dt = 4e-3;
  const SubspaceSpec H0 = subspace_of(SymmetricSet::parse("(1,0),(1,1)"), 4);
  const SubspaceSpec F = SubspaceSpec::first_oscillatory(4, 4);
  const CoefficientLaw law = CoefficientLaw::finite(H0, ScalarLaw::gaussian, 1.0);
  RngStream rng(11, 0);
  const KickSequence ks = sample_kicks(law, 3, 0.4, 4, rng);
  const SpectralField u0 = testutil::random_field(4, rng, 0.2);

  const ControlJacobian Jt = jacobian(ks, u0, H0, F, p, JacobianMethod::tangent);
  const ControlJacobian J1 = jacobian(ks, u0, H0, F, p, JacobianMethod::fd, 0.1);
  const ControlJacobian J2 = jacobian(ks, u0, H0, F, p, JacobianMethod::fd, 0.05);
  const double e1 = (J1.matrix - Jt.matrix).norm() / Jt.matrix.norm();
  const double e2 = (J2.matrix - Jt.matrix).norm() / Jt.matrix.norm();
  const double ratio = e1 / e2;
  return {e1 < 1e-4 && e2 < 1e-4 && ratio > 2.5 && ratio < 6.0,
          "rel err " + fmt(e1) + " (eps 0.1) and " + fmt(e2) + " (eps 0.05), shrink x" +
              fmt(ratio)};
}

// 5: surjectivity probe, saturating vs collinear control subspaces
Outcome c5_condition_c_probe() {
  SimParams p;
  p.nu = 0.1;
  p.truncation = 4;
  p.dt = 4e-3;
  const SubspaceSpec F = SubspaceSpec::first_oscillatory(4, 4);

  const auto t0 = std::chrono::steady_clock::now();
  const SubspaceSpec H0 = subspace_of(SymmetricSet::parse("(1,0),(1,1)"), 4);
  const CoefficientLaw sat_law = CoefficientLaw::finite(H0, ScalarLaw::gaussian, 1.0);
  const auto pos = bad_time_scan({0.4}, SpectralField(4), sat_law, 6, 2, F, p, 1e-6, 2718, 2);

  const SubspaceSpec H0c = subspace_of(SymmetricSet::parse("(1,0),(2,0)"), 4);
  const CoefficientLaw col_law = CoefficientLaw::finite(H0c, ScalarLaw::gaussian, 1.0);
  const auto neg = bad_time_scan({0.4}, SpectralField(4), col_law, 6, 2, F, p, 1e-6, 2719, 2);
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  const bool ok = pos.front().surjective && pos.front().max_rank == 4 &&
                  !neg.front().surjective && neg.front().max_rank < F.dim() && wall < 60.0;
  return {ok, "saturating rank " + std::to_string(pos.front().max_rank) + "/4, collinear rank " +
                  std::to_string(neg.front().max_rank) + "/4, wall " + fmt(wall) + " s"};
}

// 6: saturation recursion vs the independent closure oracle
Outcome c6_saturation_recursion() {
  const SymmetricSet gen = SymmetricSet::parse("(1,0),(1,1)");
  const CoverageReport rep = saturating_within(gen, 5, 10);
  bool ok = rep.covered && rep.iters <= 10 && !rep.fixed_point;

  testutil::BfsOracle oracle(gen);
  for (int i = 0; i < rep.iters && ok; ++i) ok = oracle.step();
  ok = ok && oracle.covers(5);
  // the final iterate must agree elementwise
  SymmetricSet cur = gen;
  for (int i = 0; i < rep.iters; ++i) cur = grow_once(cur);
  ok = ok && cur.elems() == oracle.iterates.back();

  const CoverageReport stall = saturating_within(SymmetricSet::parse("(1,0),(0,1)"), 5, 10);
  ok = ok && !stall.covered && stall.fixed_point && stall.fixed_point_iter == 1 &&
       stall.sizes.size() == 2 && stall.sizes[0] == stall.sizes[1];
  return {ok, "covered R=5 in " + std::to_string(rep.iters) +
                  " iterations (oracle agrees); unit cross stalls at iteration 1"};
}

// 7: absolute-continuity diagnostics at desk scale, with negative control
Outcome c7_absolute_continuity() {
  const long n = 10'000;
  const auto t0 = std::chrono::steady_clock::now();
  const SampleSet s = run_ensemble(kick_ensemble(0.5, 3, 2027), n);
  const long multiplicity = atom_test(s, 1e-6);

  Eigen::VectorXd center = s.samples.colwise().mean().transpose();
  const BallMassCurve curve = ball_mass_curve(s, center, radius_ladder(s, center, 0.05, 0.85));
  const bool slope_ok = curve.slope > 1.6 && curve.slope < 2.4;

  EnsembleSpec degenerate = kick_ensemble(0.0, 3, 2028);
  degenerate.u0 = SpectralField::mode(3, BasisId::osc(1, 0), 0.8);
  const SampleSet d = run_ensemble(degenerate, n);
  const long dmult = atom_test(d, 1e-6);
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  return {multiplicity == 1 && slope_ok && dmult == n && wall < 600.0,
          "multiplicity " + std::to_string(multiplicity) + ", ball slope " + fmt(curve.slope) +
              ", zero-noise multiplicity " + std::to_string(dmult) + "/" + std::to_string(n) +
              ", wall " + fmt(wall) + " s"};
}

// 8: total-variation continuity in the initial condition
Outcome c8_tv_continuity() {
  EnsembleSpec base = kick_ensemble(0.5, 3, 31);
  base.projection = SubspaceSpec(std::vector<BasisId>{BasisId::osc(1, 0)});
  const SpectralField dir = SpectralField::mode(3, BasisId::osc(1, 0), 1.0);
  const auto curve = tv_continuity_curve(base, dir, {0.4, 0.2, 0.1, 0.05}, 10'000, 16, 200);

  bool decreasing_within_ci = true;
  for (size_t i = 1; i < curve.size(); ++i)
    if (curve[i].tv.estimate > curve[i - 1].tv.ci_hi) decreasing_within_ci = false;
  const bool overall = curve.back().tv.estimate < curve.front().tv.estimate;
  const bool smallest = curve.back().tv.estimate < 0.1;

  std::string seq;
  for (const auto& pt : curve) seq += fmt(pt.tv.estimate) + " ";
  return {decreasing_within_ci && overall && smallest, "estimates " + seq + "(smallest < 0.1)"};
}

// 9: support fullness of the white-noise projected law
Outcome c9_support_fullness() {
  EnsembleSpec s;
  s.model = ForcingModel::white;
  s.physics = mc_params(3);
  s.physics.dt = 0.025;
  s.law = CoefficientLaw::finite(SubspaceSpec::first_oscillatory(8, 3), ScalarLaw::gaussian, 0.6);
  s.projection = SubspaceSpec(std::vector<BasisId>{BasisId::osc(1, 0), BasisId::osc(0, 1)});
  s.u0 = SpectralField(3);
  s.t = 0.5;
  s.path_dt = 0.025;
  s.seed = 99;
  s.workers = 2;
  const SampleSet set = run_ensemble(s, 100'000);

  long min_hits = std::numeric_limits<long>::max();
  int targets = 0;
  for (double y0 : {-1.0, -0.5, 0.0, 0.5, 1.0}) {
    for (double y1 : {-1.0, -0.5, 0.0, 0.5, 1.0}) {
      if (y0 * y0 + y1 * y1 > 1.0 + 1e-12) continue;  // 5x5 grid clipped to B_F(1)
      Eigen::VectorXd y(2);
      y << y0, y1;
      min_hits = std::min(min_hits, support_hit(set, y, 0.25));
      ++targets;
    }
  }
  return {min_hits >= 1, std::to_string(targets) + " targets in B_F(1), min hit count " +
                             std::to_string(min_hits)};
}

// 10: exact zeros of analytic functionals of decomposable draws
Outcome c10_zero_one_probe() {
  const SubspaceSpec ids = SubspaceSpec::first_oscillatory(8, 2);
  const CoefficientLaw law = CoefficientLaw::geometric(ids, ScalarLaw::gaussian);
  RngStream r1(112233, 0);
  const auto prod = functional_coordinate_product(BasisId::osc(1, 0), BasisId::osc(0, 1));
  const double frac = analytic_null_probe(law, 2, prod, 1'000'000, r1);
  RngStream r2(112233, 1);
  const double zero_frac = analytic_null_probe(law, 2, functional_zero(), 10'000, r2);
  return {frac == 0.0 && zero_frac == 1.0,
          "coordinate-product exact-zero fraction " + fmt(frac) + ", null functional " +
              fmt(zero_frac)};
}

// 11: sampler second moments match sum b_j^2
Outcome c11_sampler_moments() {
  const SubspaceSpec ids = SubspaceSpec::first_oscillatory(12, 3);
  bool ok = true;
  std::string detail;
  int variant = 0;
  for (const auto& law : {CoefficientLaw::geometric(ids, ScalarLaw::gaussian),
                          CoefficientLaw::polynomial(ids, ScalarLaw::gaussian)}) {
    const long n = 100'000;
    RngStream rng(886644, static_cast<std::uint64_t>(variant));
    double mean = 0, sq = 0;
    for (long i = 0; i < n; ++i) {
      const SpectralField xi = sample_decomposable(law, 3, rng);
      const double e = xi.norm_h() * xi.norm_h();
      mean += e;
      sq += e * e;
    }
    mean /= n;
    const double sigma = std::sqrt((sq / n - mean * mean) / n);
    const double want = law.sum_b_squared();
    ok = ok && std::abs(mean - want) < 3.0 * sigma;
    detail += (variant ? "; polynomial " : "geometric ") + fmt(mean) + " vs " + fmt(want) +
              " (3sigma " + fmt(3 * sigma) + ")";
    ++variant;
  }
  return {ok, detail};
}

// 12: stationary-chain projection diagnostics
Outcome c12_stationary_projection() {
  const SampleSet s = stationary_ensemble(kick_ensemble(0.5, 3, 777), 200, 2200, 2);
  const long multiplicity = atom_test(s, 1e-6);
  Eigen::VectorXd center = s.samples.colwise().mean().transpose();
  const BallMassCurve curve = ball_mass_curve(s, center, radius_ladder(s, center, 0.1, 0.9));
  const bool slope_ok = curve.slope > 1.6 && curve.slope < 2.4;
  return {multiplicity == 1 && slope_ok,
          std::to_string(s.n()) + " chain rows, multiplicity " + std::to_string(multiplicity) +
              ", ball slope " + fmt(curve.slope)};
}

}  // namespace

int main() {
  std::printf("nstorus acceptance suite\n");
  run_criterion(1, "single-mode decay (M=8, nu=0.1, dt=1e-3)", c1_single_mode_decay);
  run_criterion(2, "advection skew symmetry and dual-path agreement (M=8)",
                c2_skew_and_path_agreement);
  run_criterion(3, "kick-chain time-rescaling identity (T=0.5, nu=0.2, k=2, M=4)",
                c3_rescaling_identity);
  run_criterion(4, "FD vs tangent Jacobian cross-validation (M=4, k=3)",
                c4_jacobian_cross_validation);
  run_criterion(5, "surjectivity probe: saturating vs collinear H0 (k=6)", c5_condition_c_probe);
  run_criterion(6, "saturation recursion with closure oracle (R=5)", c6_saturation_recursion);
  run_criterion(7, "absolute-continuity diagnostics (n=1e4, d=2)", c7_absolute_continuity);
  run_criterion(8, "TV continuity under dyadic initial perturbations (n=1e4)", c8_tv_continuity);
  run_criterion(9, "support fullness of the white-noise law (n=1e5, eps=0.25)",
                c9_support_fullness);
  run_criterion(10, "zero-one probe for analytic functionals (1e6 draws)", c10_zero_one_probe);
  run_criterion(11, "sampler second moments (1e5 draws)", c11_sampler_moments);
  run_criterion(12, "stationary projection diagnostics (burn 200, k_max 2200)",
                c12_stationary_projection);
  std::printf("%d of 12 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
