// Control-to-projection maps for the kicked system and their derivatives:
// the map (kicks) -> P_F u(kT), its Jacobian with respect to the kick
// coefficients on a control subspace H0 (finite differences or the tangent
// solver), numerical rank / surjectivity verdicts, per-T scans, and an
// empirical reachability probe over a family of controls.

#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "nstorus/dynamics.hpp"
#include "nstorus/field.hpp"
#include "nstorus/forcing.hpp"

namespace nstorus {

// P_F of the kick-chain endpoint.
Eigen::VectorXd f_k(const KickSequence& ks, const SpectralField& u0, const SubspaceSpec& F,
                    const SimParams& p);

enum class JacobianMethod { fd, tangent };

struct JacobianMeta {
  double T = 0.0;
  double nu = 0.0;
  int kick_count = 0;
  JacobianMethod method = JacobianMethod::tangent;
  double eps_fd = 0.0;  // 0 for the tangent method
  std::uint64_t u0_digest = 0;
  std::uint64_t kicks_digest = 0;
  std::vector<BasisId> control_ids;  // H0 ids, minor index of the column order
  std::vector<BasisId> f_ids;        // row order
};

// dim F x (k * dim H0) matrix of d(P_F u(kT)) / d(kick coefficients).
// Columns are ordered kick-index major, H0-id minor.
struct ControlJacobian {
  Eigen::MatrixXd matrix;
  JacobianMeta meta;
};

// Kicks must be supported on H0 (their coefficients off H0 all zero).
// Columns are independent solves and are dispatched over `workers` threads;
// the assembled matrix does not depend on the worker count.
ControlJacobian jacobian(const KickSequence& ks, const SpectralField& u0,
                         const SubspaceSpec& H0, const SubspaceSpec& F, const SimParams& p,
                         JacobianMethod method, double eps_fd = 1e-4, int workers = 1);

struct RankReport {
  int rank = 0;
  bool surjective = false;  // rank == dim F
  std::vector<double> singular_values;
  double tol_rel = 0.0;
};

// rank = #{sigma_i > tol_rel * sigma_max}.
RankReport rank_report(const ControlJacobian& J, double tol_rel = 1e-6);

struct BadTimeRow {
  double T = 0.0;
  int max_rank = 0;
  bool surjective = false;  // some draw reached rank == dim F
  std::vector<int> ranks;   // per draw
};

// For each T in the grid, draws n_draws random kick sequences from the law
// (restricted to H0 ids) and records the best numerical rank. T values where
// every draw is rank-deficient are the empirically flagged "bad" times.
std::vector<BadTimeRow> bad_time_scan(const std::vector<double>& T_grid,
                                      const SpectralField& u0, const CoefficientLaw& law,
                                      int kick_count, int n_draws, const SubspaceSpec& F,
                                      const SimParams& p, double tol_rel, std::uint64_t seed,
                                      int workers = 1);

// Smallest kick count whose Jacobian reaches full rank at some random draw,
// sweeping k = 1..k_max. Empty when none does.
std::optional<int> smallest_surjective_k(const SpectralField& u0, const CoefficientLaw& law,
                                         double T, int k_max, int n_draws,
                                         const SubspaceSpec& F, const SimParams& p,
                                         double tol_rel, std::uint64_t seed, int workers = 1);

struct CoveringReport {
  Eigen::MatrixXd targets;        // rows: grid points of B_F(R)
  Eigen::VectorXd best_distance;  // min over controls of |f_k - target|
  double coverage_fraction = 0.0; // share within tolerance
  double tolerance = 0.0;
  int controls_tried = 0;
};

// Evaluates f_k for every control in the family once, then reports how much
// of a grid over the ball B_F(R) is reached within tolerance. dim F <= 3.
CoveringReport covering_probe(const SpectralField& u0, const SubspaceSpec& F, double R,
                              int grid_per_axis, const std::vector<KickSequence>& controls,
                              const SimParams& p, double tolerance, int workers = 1);

}  // namespace nstorus
