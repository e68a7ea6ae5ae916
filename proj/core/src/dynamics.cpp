#include "nstorus/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "fft_workspace.hpp"
#include "mode_rep.hpp"
#include "nstorus/errors.hpp"

namespace nstorus {

using detail::FftWorkspace;
using detail::ModeGrid;
using detail::ModeState;

void SimParams::validate() const {
  if (!(nu > 0.0) || !std::isfinite(nu)) throw ConfigError("viscosity must be positive");
  if (truncation < 1) throw ConfigError("truncation box radius must be >= 1");
  if (!(dt > 0.0) || !std::isfinite(dt)) throw ConfigError("dt must be positive");
  if (!(blowup_factor > 1.0)) throw ConfigError("blowup_factor must exceed 1");
}

ForcingSignal ForcingSignal::zero(double horizon, int truncation) {
  return constant(SpectralField(truncation), horizon);
}

ForcingSignal ForcingSignal::constant(const SpectralField& g, double horizon) {
  ForcingSignal f;
  f.kind = Kind::piecewise_constant;
  f.horizon = horizon;
  f.times = {0.0};
  f.fields = {g};
  return f;
}

ForcingSignal ForcingSignal::piecewise(std::vector<double> segment_starts,
                                       std::vector<SpectralField> fields, double horizon) {
  ForcingSignal f;
  f.kind = Kind::piecewise_constant;
  f.horizon = horizon;
  f.times = std::move(segment_starts);
  f.fields = std::move(fields);
  f.validate();
  return f;
}

ForcingSignal ForcingSignal::sampled(double sample_dt, std::vector<SpectralField> values) {
  if (values.size() < 2) throw ConfigError("sampled path needs at least two samples");
  if (!(sample_dt > 0.0)) throw ConfigError("sample dt must be positive");
  ForcingSignal f;
  f.kind = Kind::sampled_path;
  f.fields = std::move(values);
  f.times.resize(f.fields.size());
  for (size_t i = 0; i < f.times.size(); ++i) f.times[i] = static_cast<double>(i) * sample_dt;
  f.horizon = f.times.back();
  f.validate();
  return f;
}

int ForcingSignal::truncation() const {
  if (fields.empty()) throw ConfigError("forcing signal has no fields");
  return fields.front().truncation();
}

void ForcingSignal::validate() const {
  if (fields.empty() || times.size() != fields.size())
    throw ConfigError("forcing signal times/fields mismatch");
  if (times.front() != 0.0) throw ConfigError("forcing signal must start at t = 0");
  for (size_t i = 1; i < times.size(); ++i)
    if (!(times[i] > times[i - 1])) throw ConfigError("forcing signal times must increase");
  if (!(horizon >= times.back()) || !std::isfinite(horizon))
    throw ConfigError("forcing horizon shorter than its breakpoints");
  const int m = fields.front().truncation();
  for (const auto& f : fields)
    if (f.truncation() != m) throw ConfigError("forcing fields carry mixed truncations");
}

SpectralField ForcingSignal::at(double t) const {
  if (fields.empty() || times.size() != fields.size())
    throw ConfigError("forcing signal times/fields mismatch");
  if (t < 0.0 || t > horizon + 1e-12) throw ConfigError("forcing evaluated outside horizon");
  auto it = std::upper_bound(times.begin(), times.end(), t);
  size_t i = (it == times.begin()) ? 0 : static_cast<size_t>(it - times.begin() - 1);
  if (kind == Kind::piecewise_constant) return fields[i];
  if (i + 1 >= fields.size()) return fields.back();
  const double dt = times[i + 1] - times[i];
  const double th = std::clamp((t - times[i]) / dt, 0.0, 1.0);
  SpectralField out = fields[i];
  out *= (1.0 - th);
  SpectralField next = fields[i + 1];
  next *= th;
  out += next;
  return out;
}

void KickSequence::validate() const {
  if (!(segment_length > 0.0)) throw ConfigError("kick segment length must be positive");
  if (kicks.empty()) throw ConfigError("kick sequence needs at least one kick");
  const int m = kicks.front().truncation();
  for (const auto& k : kicks)
    if (k.truncation() != m) throw ConfigError("kicks carry mixed truncations");
}

ForcingSignal KickSequence::to_forcing() const {
  validate();
  std::vector<double> starts(kicks.size());
  for (size_t i = 0; i < kicks.size(); ++i) starts[i] = static_cast<double>(i) * segment_length;
  return ForcingSignal::piecewise(starts, kicks, horizon());
}

namespace {

// Forcing converted to internal states once per integration.
struct PreparedForcing {
  ForcingSignal::Kind kind = ForcingSignal::Kind::piecewise_constant;
  std::vector<double> times;
  std::vector<ModeState> vals;
  double horizon = 0.0;

  static PreparedForcing prepare(const ForcingSignal& f, const ModeGrid& g) {
    f.validate();
    if (f.truncation() > g.M)
      throw ConfigError("forcing truncation " + std::to_string(f.truncation()) +
                        " exceeds simulation box " + std::to_string(g.M));
    PreparedForcing p;
    p.kind = f.kind;
    p.times = f.times;
    p.horizon = f.horizon;
    p.vals.resize(f.fields.size());
    for (size_t i = 0; i < f.fields.size(); ++i)
      detail::field_to_state(f.fields[i].embedded(g.M), g, p.vals[i]);
    return p;
  }

  // Interval containing a piece that starts at ps. Pieces never straddle a
  // breakpoint, so one lookup per RHS evaluation is exact.
  size_t interval_of(double ps) const {
    auto it = std::upper_bound(times.begin(), times.end(), ps + 1e-12);
    size_t i = (it == times.begin()) ? 0 : static_cast<size_t>(it - times.begin() - 1);
    if (kind == ForcingSignal::Kind::sampled_path && i + 1 >= times.size())
      i = times.size() - 2;
    return i;
  }

  // acc += g(stage_t), with the segment resolved from the piece start.
  void add_at(double stage_t, double piece_start, ModeState& acc) const {
    const size_t i = interval_of(piece_start);
    if (kind == ForcingSignal::Kind::piecewise_constant) {
      detail::state_axpy(1.0, vals[i], acc);
      return;
    }
    const double t0 = times[i], t1 = times[i + 1];
    const double th = std::clamp((stage_t - t0) / (t1 - t0), 0.0, 1.0);
    detail::state_axpy(1.0 - th, vals[i], acc);
    detail::state_axpy(th, vals[i + 1], acc);
  }

  // zeta(stage_t) written into out.
  void eval_at(double stage_t, double piece_start, ModeState& out) const {
    out.set_zero();
    add_at(stage_t, piece_start, out);
  }

  void breakpoints_into(double t_end, std::vector<double>& bp) const {
    for (double x : times)
      if (x > 1e-14 && x < t_end - 1e-14) bp.push_back(x);
  }
};

class Stepper {
 public:
  explicit Stepper(const SimParams& p) : p_(p), grid_(p.truncation) {
    if (p.nonlinearity == NonlinearityPath::pseudospectral)
      fft_ = std::make_unique<FftWorkspace>(p.truncation);
    tmp_.resize(grid_);
  }

  const ModeGrid& grid() const { return grid_; }
  const SimParams& params() const { return p_; }

  void eval_bilinear(const ModeState& a, const ModeState& b, ModeState& out) {
    if (fft_)
      fft_->bilinear(grid_, a, b, out);
    else
      detail::bilinear_direct(grid_, a, b, out);
  }

  ModeState& scratch() { return tmp_; }

  // Advance all components from time 0 to t_end. rhs has signature
  // rhs(const vector<ModeState>& s, double stage_time, double piece_start,
  //     vector<ModeState>& out).
  template <class Rhs>
  void integrate(std::vector<ModeState>& state, double t_end, std::vector<double> breakpoints,
                 Rhs&& rhs, const SnapshotFn& on_step) {
    const double norm0 = std::sqrt(detail::state_norm_h2(state[0]));
    const double thr = p_.blowup_factor * (norm0 + 1.0);
    const double thr2 = thr * thr;

    ensure_scratch(state.size());
    if (on_step) on_step(0, 0.0, detail::state_to_field(state[0], grid_));
    if (t_end <= 0.0) return;

    std::sort(breakpoints.begin(), breakpoints.end());
    breakpoints.erase(std::unique(breakpoints.begin(), breakpoints.end()), breakpoints.end());
    breakpoints.push_back(t_end);

    long step = 0;
    double a = 0.0;
    for (double b : breakpoints) {
      if (!(b > a)) continue;
      const double len = b - a;
      const long nsteps = std::max<long>(1, static_cast<long>(std::ceil(len / p_.dt - 1e-9)));
      const double h = len / static_cast<double>(nsteps);
      set_damp(h);
      for (long i = 0; i < nsteps; ++i) {
        const double t = a + static_cast<double>(i) * h;
        step_once(state, t, a, h, rhs);
        ++step;
        const double n2 = detail::state_norm_h2(state[0]);
        if (!(n2 <= thr2))
          throw DivergedError("trajectory diverged (norm_h " + std::to_string(std::sqrt(n2)) +
                                  " past guard " + std::to_string(thr) + ")",
                              step, t + h);
        for (size_t c = 1; c < state.size(); ++c)
          if (!detail::state_finite(state[c]))
            throw DivergedError("auxiliary component diverged", step, t + h);
        if (on_step) on_step(step, t + h, detail::state_to_field(state[0], grid_));
      }
      a = b;
    }
  }

 private:
  void ensure_scratch(size_t ncomp) {
    auto fit = [&](std::vector<ModeState>& v) {
      if (v.size() != ncomp) {
        v.resize(ncomp);
        for (auto& s : v) s.resize(grid_);
      }
    };
    fit(k1_);
    fit(k2_);
    fit(k3_);
    fit(k4_);
    fit(arg_);
  }

  void set_damp(double h) {
    if (h == damp_h_) return;
    damp_h_ = h;
    const size_t n = grid_.eig.size();
    damp_half_.resize(n);
    damp_full_.resize(n);
    for (size_t i = 0; i < n; ++i) {
      damp_half_[i] = std::exp(-0.5 * p_.nu * grid_.eig[i] * h);
      damp_full_[i] = damp_half_[i] * damp_half_[i];
    }
  }

  // One integrating-factor RK step: exp(-nu L .) handled exactly, the rest
  // with the classical RK2 midpoint or RK4 tableau.
  template <class Rhs>
  void step_once(std::vector<ModeState>& u, double t, double piece_start, double h, Rhs&& rhs) {
    const size_t nc = u.size();
    rhs(u, t, piece_start, k1_);
    if (p_.integrator == TimeStepper::exp_rk2) {
      for (size_t c = 0; c < nc; ++c) {
        arg_[c] = u[c];
        detail::state_axpy(0.5 * h, k1_[c], arg_[c]);
        detail::state_damp(arg_[c], damp_half_);
      }
      rhs(arg_, t + 0.5 * h, piece_start, k2_);
      for (size_t c = 0; c < nc; ++c) {
        detail::state_damp(u[c], damp_full_);
        detail::state_damp(k2_[c], damp_half_);
        detail::state_axpy(h, k2_[c], u[c]);
      }
      return;
    }
    // exp_rk4
    for (size_t c = 0; c < nc; ++c) {
      arg_[c] = u[c];
      detail::state_axpy(0.5 * h, k1_[c], arg_[c]);
      detail::state_damp(arg_[c], damp_half_);
    }
    rhs(arg_, t + 0.5 * h, piece_start, k2_);
    for (size_t c = 0; c < nc; ++c) {
      arg_[c] = u[c];
      detail::state_damp(arg_[c], damp_half_);
      detail::state_axpy(0.5 * h, k2_[c], arg_[c]);
    }
    rhs(arg_, t + 0.5 * h, piece_start, k3_);
    for (size_t c = 0; c < nc; ++c) {
      arg_[c] = u[c];
      detail::state_damp(arg_[c], damp_full_);
      detail::state_damp(k3_[c], damp_half_);  // reused as-is in the combine below
      detail::state_axpy(h, k3_[c], arg_[c]);
    }
    rhs(arg_, t + h, piece_start, k4_);
    for (size_t c = 0; c < nc; ++c) {
      detail::state_damp(u[c], damp_full_);
      detail::state_damp(k1_[c], damp_full_);
      detail::state_axpy(h / 6.0, k1_[c], u[c]);
      detail::state_damp(k2_[c], damp_half_);
      detail::state_axpy(h / 3.0, k2_[c], u[c]);
      detail::state_axpy(h / 3.0, k3_[c], u[c]);
      detail::state_axpy(h / 6.0, k4_[c], u[c]);
    }
  }

  SimParams p_;
  ModeGrid grid_;
  std::unique_ptr<FftWorkspace> fft_;
  std::vector<double> damp_half_, damp_full_;
  double damp_h_ = -1.0;
  std::vector<ModeState> k1_, k2_, k3_, k4_, arg_;
  ModeState tmp_;
};

void check_time_in_horizon(double t, double horizon) {
  if (t < 0.0 || t > horizon + 1e-9)
    throw ConfigError("requested time " + std::to_string(t) + " outside forcing horizon " +
                      std::to_string(horizon));
}

ModeState initial_state(const SpectralField& u0, const ModeGrid& g) {
  if (u0.truncation() > g.M)
    throw ConfigError("initial condition truncation exceeds simulation box");
  ModeState s;
  detail::field_to_state(u0.embedded(g.M), g, s);
  return s;
}

}  // namespace

SpectralField bilinear(const SpectralField& u, const SpectralField& v, NonlinearityPath path) {
  if (u.truncation() != v.truncation())
    throw ConfigError("bilinear arguments carry different truncations");
  ModeGrid g(u.truncation());
  ModeState su, sv, out;
  detail::field_to_state(u, g, su);
  detail::field_to_state(v, g, sv);
  out.resize(g);
  if (path == NonlinearityPath::pseudospectral) {
    FftWorkspace w(g.M);
    w.bilinear(g, su, sv, out);
  } else {
    detail::bilinear_direct(g, su, sv, out);
  }
  return detail::state_to_field(out, g);
}

SpectralField rhs(const SpectralField& u, const SpectralField& g, double nu,
                  NonlinearityPath path) {
  SpectralField out = g;
  SpectralField lu = apply_stokes(u);
  lu *= nu;
  out -= lu;
  out -= bilinear(u, u, path);
  return out;
}

SpectralField resolve(const SpectralField& u0, const ForcingSignal& f, double t,
                      const SimParams& p, const SnapshotFn& on_step) {
  p.validate();
  check_time_in_horizon(t, f.horizon);
  Stepper st(p);
  PreparedForcing g = PreparedForcing::prepare(f, st.grid());
  std::vector<ModeState> state{initial_state(u0, st.grid())};
  std::vector<double> bp;
  g.breakpoints_into(t, bp);
  st.integrate(
      state, t, std::move(bp),
      [&](const std::vector<ModeState>& s, double tt, double ps, std::vector<ModeState>& out) {
        st.eval_bilinear(s[0], s[0], out[0]);
        detail::state_scale(out[0], -1.0);
        g.add_at(tt, ps, out[0]);
      },
      on_step);
  return detail::state_to_field(state[0], st.grid());
}

SpectralField kick_chain(const KickSequence& ks, const SpectralField& u0, const SimParams& p) {
  return resolve(u0, ks.to_forcing(), ks.horizon(), p);
}

SpectralField kick_chain_observed(const KickSequence& ks, const SpectralField& u0,
                                  const SimParams& p, const SnapshotFn& on_step) {
  return resolve(u0, ks.to_forcing(), ks.horizon(), p, on_step);
}

TangentResult tangent_resolve(const SpectralField& u0, const ForcingSignal& f,
                              const SpectralField& du0, const ForcingSignal& df, double t,
                              const SimParams& p) {
  p.validate();
  check_time_in_horizon(t, f.horizon);
  check_time_in_horizon(t, df.horizon);
  Stepper st(p);
  PreparedForcing g = PreparedForcing::prepare(f, st.grid());
  PreparedForcing dg = PreparedForcing::prepare(df, st.grid());
  std::vector<ModeState> state{initial_state(u0, st.grid()), initial_state(du0, st.grid())};
  std::vector<double> bp;
  g.breakpoints_into(t, bp);
  dg.breakpoints_into(t, bp);
  st.integrate(
      state, t, std::move(bp),
      [&](const std::vector<ModeState>& s, double tt, double ps, std::vector<ModeState>& out) {
        st.eval_bilinear(s[0], s[0], out[0]);
        detail::state_scale(out[0], -1.0);
        g.add_at(tt, ps, out[0]);
        // theta' = df - B(u,theta) - B(theta,u) - nu L theta
        st.eval_bilinear(s[0], s[1], out[1]);
        st.eval_bilinear(s[1], s[0], st.scratch());
        detail::state_axpy(1.0, st.scratch(), out[1]);
        detail::state_scale(out[1], -1.0);
        dg.add_at(tt, ps, out[1]);
      },
      nullptr);
  TangentResult res;
  res.u = detail::state_to_field(state[0], st.grid());
  res.theta = detail::state_to_field(state[1], st.grid());
  return res;
}

SpectralField substituted_resolve(const SpectralField& u0, const std::optional<ForcingSignal>& h,
                                  const ForcingSignal& zeta_path, double t, const SimParams& p,
                                  const SnapshotFn& on_step) {
  p.validate();
  if (zeta_path.kind != ForcingSignal::Kind::sampled_path)
    throw ConfigError("substituted solve expects a sampled path for zeta");
  check_time_in_horizon(t, zeta_path.horizon);
  if (zeta_path.fields.front().norm_h() > 1e-12)
    throw ConfigError("zeta path must start at zero");
  Stepper st(p);
  PreparedForcing z = PreparedForcing::prepare(zeta_path, st.grid());
  std::optional<PreparedForcing> hp;
  if (h) {
    check_time_in_horizon(t, h->horizon);
    hp = PreparedForcing::prepare(*h, st.grid());
  }
  const auto& eig = st.grid().eig;
  std::vector<ModeState> state{initial_state(u0, st.grid())};
  ModeState zt, w;
  zt.resize(st.grid());
  w.resize(st.grid());
  std::vector<double> bp;
  z.breakpoints_into(t, bp);
  if (hp) hp->breakpoints_into(t, bp);
  SnapshotFn report_u;  // the observable state is u = v + zeta(t)
  if (on_step) {
    report_u = [&](long step, double time, const SpectralField& v_field) {
      SpectralField u = v_field;
      u += zeta_path.at(std::min(time, zeta_path.horizon)).embedded(u.truncation());
      on_step(step, time, u);
    };
  }
  st.integrate(
      state, t, std::move(bp),
      [&](const std::vector<ModeState>& s, double tt, double ps, std::vector<ModeState>& out) {
        z.eval_at(tt, ps, zt);
        w = s[0];
        detail::state_axpy(1.0, zt, w);
        // v' = h - nu L zeta - B(v+zeta, v+zeta) - nu L v
        st.eval_bilinear(w, w, out[0]);
        detail::state_scale(out[0], -1.0);
        for (size_t i = 0; i < eig.size(); ++i) out[0].phi[i] -= p.nu * eig[i] * zt.phi[i];
        if (hp) hp->add_at(tt, ps, out[0]);
      },
      report_u);
  z.eval_at(t, t, zt);
  detail::state_axpy(1.0, zt, state[0]);
  return detail::state_to_field(state[0], st.grid());
}

}  // namespace nstorus
