#include "nstorus/forcing.hpp"

#include <cmath>

#include "nstorus/errors.hpp"
#include "nstorus/stats.hpp"

namespace nstorus {

namespace {
CoefficientLaw make_law(SubspaceSpec ids, ScalarLaw law, std::vector<double> b) {
  CoefficientLaw cl;
  cl.ids = std::move(ids);
  cl.b = std::move(b);
  cl.pi.assign(cl.ids.dim(), law);
  cl.validate();
  return cl;
}
}  // namespace

CoefficientLaw CoefficientLaw::geometric(SubspaceSpec ids, ScalarLaw law, double scale) {
  std::vector<double> b(ids.dim());
  for (int r = 0; r < ids.dim(); ++r) b[r] = scale * std::ldexp(1.0, -(r + 1));
  return make_law(std::move(ids), law, std::move(b));
}

CoefficientLaw CoefficientLaw::polynomial(SubspaceSpec ids, ScalarLaw law, double scale) {
  std::vector<double> b(ids.dim());
  for (int r = 0; r < ids.dim(); ++r) b[r] = scale / static_cast<double>(r + 1);
  return make_law(std::move(ids), law, std::move(b));
}

CoefficientLaw CoefficientLaw::finite(SubspaceSpec ids, ScalarLaw law, double amplitude) {
  std::vector<double> b(ids.dim(), amplitude);
  return make_law(std::move(ids), law, std::move(b));
}

CoefficientLaw CoefficientLaw::zero(SubspaceSpec ids) {
  std::vector<double> b(ids.dim(), 0.0);
  return make_law(std::move(ids), ScalarLaw::gaussian, std::move(b));
}

double CoefficientLaw::sum_b_squared() const {
  double s = 0.0;
  for (double x : b) s += x * x;
  return s;
}

void CoefficientLaw::validate() const {
  if (static_cast<int>(b.size()) != ids.dim() || static_cast<int>(pi.size()) != ids.dim())
    throw ConfigError("coefficient law arrays do not match its id list");
  for (double x : b)
    if (!(x >= 0.0) || !std::isfinite(x))
      throw ConfigError("coefficient law needs finite nonnegative b");
  for (ScalarLaw l : pi)
    if (l == ScalarLaw::custom && !custom_sampler)
      throw ConfigError("custom scalar law without a sampler");
}

double CoefficientLaw::draw_scalar(int i, RngStream& rng) const {
  switch (pi[i]) {
    case ScalarLaw::gaussian:
      return rng.gaussian();
    case ScalarLaw::uniform:
      return rng.uniform_unit_variance();
    case ScalarLaw::custom:
      return custom_sampler(rng);
  }
  return 0.0;
}

SpectralField sample_decomposable(const CoefficientLaw& cl, int truncation, RngStream& rng) {
  cl.validate();
  if (cl.required_box_radius() > truncation)
    throw ConfigError("law ids exceed the requested truncation box");
  SpectralField xi(truncation);
  for (int i = 0; i < cl.dim(); ++i)
    xi.set_coeff(cl.ids.id_at(i), cl.b[i] * cl.draw_scalar(i, rng));
  return xi;
}

KickSequence sample_kicks(const CoefficientLaw& cl, int k, double T, int truncation,
                          RngStream& rng) {
  if (k < 1) throw ConfigError("kick count must be >= 1");
  KickSequence ks;
  ks.segment_length = T;
  ks.kicks.reserve(k);
  for (int i = 0; i < k; ++i) ks.kicks.push_back(sample_decomposable(cl, truncation, rng));
  ks.validate();
  return ks;
}

ForcingSignal sample_wiener_path(const CoefficientLaw& cl, double T, double dt, int truncation,
                                 RngStream& rng) {
  cl.validate();
  if (!(T > 0.0) || !(dt > 0.0)) throw ConfigError("wiener path needs positive T and dt");
  const double steps_real = T / dt;
  const long steps = std::lround(steps_real);
  if (steps < 1 || std::abs(steps_real - static_cast<double>(steps)) > 1e-9 * steps_real)
    throw ConfigError("wiener path dt must divide T");
  const double sq_dt = std::sqrt(dt);
  std::vector<SpectralField> vals;
  vals.reserve(steps + 1);
  vals.emplace_back(truncation);  // zeta(0) = 0
  SpectralField cur(truncation);
  for (long s = 1; s <= steps; ++s) {
    for (int i = 0; i < cl.dim(); ++i) {
      const double inc = cl.b[i] * sq_dt * rng.gaussian();
      cur.set_coeff(cl.ids.id_at(i), cur.coeff(cl.ids.id_at(i)) + inc);
    }
    vals.push_back(cur);
  }
  return ForcingSignal::sampled(dt, std::move(vals));
}

ForcingSignal sample_colored_gaussian(const CoefficientLaw& cl, double tau, double T, double dt,
                                      int truncation, RngStream& rng) {
  cl.validate();
  if (!(tau > 0.0)) throw ConfigError("correlation time must be positive");
  if (!(T > 0.0) || !(dt > 0.0)) throw ConfigError("colored path needs positive T and dt");
  const long steps = static_cast<long>(std::ceil(T / dt - 1e-9));
  const double rho = std::exp(-dt / tau);
  const double fresh = std::sqrt(1.0 - rho * rho);
  std::vector<double> x(cl.dim());
  for (int i = 0; i < cl.dim(); ++i) x[i] = cl.b[i] * rng.gaussian();  // stationary start
  std::vector<SpectralField> vals;
  vals.reserve(steps + 1);
  auto emit = [&] {
    SpectralField f(truncation);
    for (int i = 0; i < cl.dim(); ++i) f.set_coeff(cl.ids.id_at(i), x[i]);
    vals.push_back(std::move(f));
  };
  emit();
  for (long s = 1; s <= steps; ++s) {
    for (int i = 0; i < cl.dim(); ++i)
      x[i] = rho * x[i] + fresh * cl.b[i] * rng.gaussian();
    emit();
  }
  return ForcingSignal::sampled(dt, std::move(vals));
}

SupportProbe support_ball_probe(const CoefficientLaw& cl, int truncation,
                                const SpectralField& target, double eps, long long n_draws,
                                RngStream& rng) {
  if (!(eps > 0.0)) throw ConfigError("support probe needs eps > 0");
  if (n_draws < 1) throw ConfigError("support probe needs at least one draw");
  const SpectralField x = target.embedded(truncation);
  SupportProbe out;
  out.draws = n_draws;
  for (long long d = 0; d < n_draws; ++d) {
    SpectralField xi = sample_decomposable(cl, truncation, rng);
    xi -= x;
    if (xi.norm_h() <= eps) ++out.hits;
  }
  out.fraction = static_cast<double>(out.hits) / static_cast<double>(out.draws);
  const BinomialCi ci = clopper_pearson(out.hits, out.draws, 0.95);
  out.ci_lo = ci.lo;
  out.ci_hi = ci.hi;
  return out;
}

}  // namespace nstorus
