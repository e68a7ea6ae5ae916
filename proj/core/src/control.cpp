#include "nstorus/control.hpp"

#include <Eigen/SVD>
#include <cmath>

#include "nstorus/errors.hpp"
#include "nstorus/io.hpp"
#include "nstorus/parallel.hpp"

namespace nstorus {

namespace {

void check_kicks_on_h0(const KickSequence& ks, const SubspaceSpec& H0) {
  for (const auto& kick : ks.kicks) {
    for (int i = 0; i < kick.size(); ++i) {
      if (kick.coeffs()[i] == 0.0) continue;
      if (!H0.contains(kick.basis().id_at(i)))
        throw ConfigError("kick carries coefficient off the control subspace at id " +
                          kick.basis().id_at(i).label());
    }
  }
}

}  // namespace

Eigen::VectorXd f_k(const KickSequence& ks, const SpectralField& u0, const SubspaceSpec& F,
                    const SimParams& p) {
  return project(kick_chain(ks, u0, p), F);
}

ControlJacobian jacobian(const KickSequence& ks, const SpectralField& u0,
                         const SubspaceSpec& H0, const SubspaceSpec& F, const SimParams& p,
                         JacobianMethod method, double eps_fd, int workers) {
  ks.validate();
  p.validate();
  check_kicks_on_h0(ks, H0);
  if (H0.required_box_radius() > p.truncation || F.required_box_radius() > p.truncation)
    throw ConfigError("control or projection subspace exceeds the simulation box");
  if (method == JacobianMethod::fd && !(eps_fd > 0.0))
    throw ConfigError("finite differences need eps_fd > 0");
  const int k = ks.count();
  const int nc = H0.dim();
  const int rows = F.dim();

  ControlJacobian J;
  J.matrix.resize(rows, static_cast<Eigen::Index>(k) * nc);
  J.meta.T = ks.segment_length;
  J.meta.nu = p.nu;
  J.meta.kick_count = k;
  J.meta.method = method;
  J.meta.eps_fd = (method == JacobianMethod::fd) ? eps_fd : 0.0;
  J.meta.u0_digest = digest_of(u0);
  J.meta.kicks_digest = digest_of(ks);
  J.meta.control_ids = H0.ids();
  J.meta.f_ids = F.ids();

  const ForcingSignal base = ks.to_forcing();
  const int M = p.truncation;
  const SpectralField zero(M);

  // One independent solve per column (kick index major, H0 id minor);
  // columns write disjoint matrix slices.
  auto fill_column = [&](int col) {
    const int l = col / nc, c = col % nc;
    const BasisId id = H0.id_at(c);
    if (method == JacobianMethod::fd) {
      KickSequence plus = ks, minus = ks;
      plus.kicks[l].set_coeff(id, ks.kicks[l].coeff(id) + eps_fd);
      minus.kicks[l].set_coeff(id, ks.kicks[l].coeff(id) - eps_fd);
      J.matrix.col(col) = (f_k(plus, u0, F, p) - f_k(minus, u0, F, p)) / (2.0 * eps_fd);
      return;
    }
    // tangent: the unit kick-coefficient perturbation enters as a
    // piecewise-constant delta-force active on segment l only
    std::vector<double> starts(ks.kicks.size());
    std::vector<SpectralField> segs(ks.kicks.size(), zero);
    for (size_t i = 0; i < starts.size(); ++i)
      starts[i] = static_cast<double>(i) * ks.segment_length;
    segs[l] = SpectralField::mode(M, id, 1.0);
    const ForcingSignal df =
        ForcingSignal::piecewise(std::move(starts), std::move(segs), base.horizon);
    const TangentResult r = tangent_resolve(u0, base, zero, df, base.horizon, p);
    J.matrix.col(col) = project(r.theta, F);
  };
  parallel_chunks(static_cast<long>(k) * nc, workers, [&](long lo, long hi, int) {
    for (long col = lo; col < hi; ++col) fill_column(static_cast<int>(col));
  });
  return J;
}

RankReport rank_report(const ControlJacobian& J, double tol_rel) {
  if (J.matrix.size() == 0) throw ConfigError("rank report of an empty matrix");
  if (!(tol_rel > 0.0 && tol_rel < 1.0)) throw ConfigError("rank tolerance must lie in (0,1)");
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(J.matrix);
  RankReport rep;
  rep.tol_rel = tol_rel;
  rep.singular_values.assign(svd.singularValues().data(),
                             svd.singularValues().data() + svd.singularValues().size());
  const double smax = rep.singular_values.empty() ? 0.0 : rep.singular_values.front();
  for (double s : rep.singular_values)
    if (s > tol_rel * smax && smax > 0.0) ++rep.rank;
  rep.surjective = (rep.rank == static_cast<int>(J.matrix.rows()));
  return rep;
}

std::vector<BadTimeRow> bad_time_scan(const std::vector<double>& T_grid,
                                      const SpectralField& u0, const CoefficientLaw& law,
                                      int kick_count, int n_draws, const SubspaceSpec& F,
                                      const SimParams& p, double tol_rel, std::uint64_t seed,
                                      int workers) {
  if (T_grid.empty()) throw ConfigError("bad-time scan needs a nonempty T grid");
  if (n_draws < 1) throw ConfigError("bad-time scan needs at least one kick draw");
  const SubspaceSpec H0 = law.ids;
  std::vector<BadTimeRow> rows;
  rows.reserve(T_grid.size());
  std::uint64_t stream = 0;
  for (double T : T_grid) {
    BadTimeRow row;
    row.T = T;
    for (int d = 0; d < n_draws; ++d) {
      RngStream rng(seed, stream++);
      const KickSequence ks = sample_kicks(law, kick_count, T, p.truncation, rng);
      const ControlJacobian J =
          jacobian(ks, u0, H0, F, p, JacobianMethod::tangent, 1e-4, workers);
      const RankReport rep = rank_report(J, tol_rel);
      row.ranks.push_back(rep.rank);
      row.max_rank = std::max(row.max_rank, rep.rank);
    }
    row.surjective = (row.max_rank == F.dim());
    rows.push_back(std::move(row));
  }
  return rows;
}

std::optional<int> smallest_surjective_k(const SpectralField& u0, const CoefficientLaw& law,
                                         double T, int k_max, int n_draws,
                                         const SubspaceSpec& F, const SimParams& p,
                                         double tol_rel, std::uint64_t seed, int workers) {
  for (int k = 1; k <= k_max; ++k) {
    const auto rows = bad_time_scan({T}, u0, law, k, n_draws, F, p, tol_rel, seed + k, workers);
    if (rows.front().surjective) return k;
  }
  return std::nullopt;
}

CoveringReport covering_probe(const SpectralField& u0, const SubspaceSpec& F, double R,
                              int grid_per_axis, const std::vector<KickSequence>& controls,
                              const SimParams& p, double tolerance, int workers) {
  const int d = F.dim();
  if (d < 1 || d > 3) throw ConfigError("covering probe supports 1 <= dim F <= 3");
  if (R < 0.0 || !(tolerance > 0.0)) throw ConfigError("covering probe needs R >= 0, tol > 0");
  if (controls.empty()) throw ConfigError("covering probe needs at least one control");
  if (R > 0.0 && grid_per_axis < 2) throw ConfigError("covering grid needs >= 2 points per axis");

  // Axis-aligned lattice over [-R, R]^d intersected with the closed ball.
  std::vector<Eigen::VectorXd> targets;
  if (R == 0.0) {
    targets.emplace_back(Eigen::VectorXd::Zero(d));
  } else {
    const int g = grid_per_axis;
    std::vector<int> ix(d, 0);
    while (true) {
      Eigen::VectorXd y(d);
      for (int a = 0; a < d; ++a)
        y[a] = -R + 2.0 * R * static_cast<double>(ix[a]) / static_cast<double>(g - 1);
      if (y.norm() <= R + 1e-12) targets.push_back(y);
      int a = 0;
      while (a < d && ++ix[a] == g) ix[a++] = 0;
      if (a == d) break;
    }
  }

  CoveringReport rep;
  rep.tolerance = tolerance;
  rep.controls_tried = static_cast<int>(controls.size());
  rep.targets.resize(static_cast<Eigen::Index>(targets.size()), d);
  for (size_t i = 0; i < targets.size(); ++i) rep.targets.row(static_cast<Eigen::Index>(i)) = targets[i];
  rep.best_distance =
      Eigen::VectorXd::Constant(static_cast<Eigen::Index>(targets.size()),
                                std::numeric_limits<double>::infinity());

  // one chain integration per control, reduced over targets afterwards
  Eigen::MatrixXd reached(static_cast<Eigen::Index>(controls.size()), d);
  parallel_chunks(static_cast<long>(controls.size()), workers, [&](long lo, long hi, int) {
    for (long i = lo; i < hi; ++i)
      reached.row(i) = f_k(controls[static_cast<size_t>(i)], u0, F, p).transpose();
  });
  for (Eigen::Index c = 0; c < reached.rows(); ++c) {
    for (Eigen::Index i = 0; i < rep.best_distance.size(); ++i) {
      const double dist = (reached.row(c) - rep.targets.row(i)).norm();
      rep.best_distance[i] = std::min(rep.best_distance[i], dist);
    }
  }
  long hit = 0;
  for (Eigen::Index i = 0; i < rep.best_distance.size(); ++i)
    if (rep.best_distance[i] <= tolerance) ++hit;
  rep.coverage_fraction = static_cast<double>(hit) / static_cast<double>(targets.size());
  return rep;
}

}  // namespace nstorus
