#include "fft_workspace.hpp"

#include <cstring>
#include <numbers>
#include <map>
#include <mutex>

namespace nstorus::detail {

namespace {
// FFTW's planner is not thread-safe; executions on distinct buffers are.
// Plans are cached per grid size for the lifetime of the process, so a
// workspace costs only buffer allocations (ensembles build one per
// trajectory).
struct PlanSet {
  fftw_plan fwd;
  fftw_plan bwd;
};

PlanSet plans_for(int n) {
  static std::mutex mu;
  static std::map<int, PlanSet> cache;
  std::scoped_lock lock(mu);
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;
  fftw_complex* proto = fftw_alloc_complex(static_cast<size_t>(n) * n);
  PlanSet p;
  p.fwd = fftw_plan_dft_2d(n, n, proto, proto, FFTW_FORWARD, FFTW_ESTIMATE);
  p.bwd = fftw_plan_dft_2d(n, n, proto, proto, FFTW_BACKWARD, FFTW_ESTIMATE);
  fftw_free(proto);  // plans keep no reference; all buffers share fftw_alloc alignment
  cache[n] = p;
  return p;
}

int padded_size(int M) {
  int n = 3 * M + 2;
  return (n + 3) / 4 * 4;  // multiple of 4 keeps FFT factors small
}
}  // namespace

FftWorkspace::FftWorkspace(int box_radius) : M_(box_radius), n_(padded_size(box_radius)) {
  const size_t count = static_cast<size_t>(n_) * n_;
  for (auto& b : buf_) b = fftw_alloc_complex(count);
  const PlanSet p = plans_for(n_);
  fwd_ = p.fwd;
  bwd_ = p.bwd;
}

FftWorkspace::~FftWorkspace() {
  for (auto& b : buf_) fftw_free(b);  // plans stay in the process-wide cache
}

void FftWorkspace::bilinear(const ModeGrid& g, const ModeState& u, const ModeState& v,
                            ModeState& out) {
  const int M = M_;
  const size_t count = static_cast<size_t>(n_) * n_;
  for (auto& b : buf_) std::memset(b, 0, count * sizeof(fftw_complex));

  // Spectral packing of physical u_hat: buf0/1 = u components, buf2..5 =
  // grad v components (d1 v_x, d2 v_x, d1 v_y, d2 v_y). Stored amplitudes
  // convert by 1/(2 sqrt2 pi), mean slots by 1/2pi.
  const double phys = 1.0 / (2.0 * std::numbers::sqrt2 * std::numbers::pi);
  buf_[0][0][0] = u.mean_x / (2.0 * std::numbers::pi);
  buf_[1][0][0] = u.mean_y / (2.0 * std::numbers::pi);
  for (int k1 = -M; k1 <= M; ++k1) {
    for (int k2 = -M; k2 <= M; ++k2) {
      if (k1 == 0 && k2 == 0) continue;
      const int src = g.idx(k1, k2);
      const size_t dst = static_cast<size_t>(gidx(k1)) * n_ + gidx(k2);
      const double inv = phys * g.inv_abs[src];
      const double perp_x = -k2 * inv, perp_y = k1 * inv;

      const std::complex<double> pu = u.phi[src];
      buf_[0][dst][0] = pu.real() * perp_x;
      buf_[0][dst][1] = pu.imag() * perp_x;
      buf_[1][dst][0] = pu.real() * perp_y;
      buf_[1][dst][1] = pu.imag() * perp_y;

      const std::complex<double> pv = v.phi[src];
      const std::complex<double> vx(pv.real() * perp_x, pv.imag() * perp_x);
      const std::complex<double> vy(pv.real() * perp_y, pv.imag() * perp_y);
      // multiply by i k
      buf_[2][dst][0] = -k1 * vx.imag();
      buf_[2][dst][1] = k1 * vx.real();
      buf_[3][dst][0] = -k2 * vx.imag();
      buf_[3][dst][1] = k2 * vx.real();
      buf_[4][dst][0] = -k1 * vy.imag();
      buf_[4][dst][1] = k1 * vy.real();
      buf_[5][dst][0] = -k2 * vy.imag();
      buf_[5][dst][1] = k2 * vy.real();
    }
  }

  for (auto& b : buf_) fftw_execute_dft(bwd_, b, b);

  // w = (u . grad) v pointwise; overwrite buf2 with w_x, buf4 with w_y.
  for (size_t i = 0; i < count; ++i) {
    const double ux_re = buf_[0][i][0], ux_im = buf_[0][i][1];
    const double uy_re = buf_[1][i][0], uy_im = buf_[1][i][1];
    const double d1vx_re = buf_[2][i][0], d1vx_im = buf_[2][i][1];
    const double d2vx_re = buf_[3][i][0], d2vx_im = buf_[3][i][1];
    const double d1vy_re = buf_[4][i][0], d1vy_im = buf_[4][i][1];
    const double d2vy_re = buf_[5][i][0], d2vy_im = buf_[5][i][1];
    buf_[2][i][0] = ux_re * d1vx_re - ux_im * d1vx_im + uy_re * d2vx_re - uy_im * d2vx_im;
    buf_[2][i][1] = ux_re * d1vx_im + ux_im * d1vx_re + uy_re * d2vx_im + uy_im * d2vx_re;
    buf_[4][i][0] = ux_re * d1vy_re - ux_im * d1vy_im + uy_re * d2vy_re - uy_im * d2vy_im;
    buf_[4][i][1] = ux_re * d1vy_im + ux_im * d1vy_re + uy_re * d2vy_im + uy_im * d2vy_re;
  }

  fftw_execute_dft(fwd_, buf_[2], buf_[2]);
  fftw_execute_dft(fwd_, buf_[4], buf_[4]);

  // Extract the k_perp component (this applies the Leray projection),
  // truncate to the box, and return to stored amplitudes. The forward
  // transform carries an n^2 factor.
  const double scale = (1.0 / phys) / (static_cast<double>(n_) * n_);
  out.mean_x = out.mean_y = 0.0;
  for (int k1 = -M; k1 <= M; ++k1) {
    for (int k2 = -M; k2 <= M; ++k2) {
      if (k1 == 0 && k2 == 0) continue;
      const int dst = g.idx(k1, k2);
      const size_t src = static_cast<size_t>(gidx(k1)) * n_ + gidx(k2);
      const double inv = scale * g.inv_abs[dst];
      const double perp_x = -k2 * inv, perp_y = k1 * inv;
      out.phi[dst] = {buf_[2][src][0] * perp_x + buf_[4][src][0] * perp_y,
                      buf_[2][src][1] * perp_x + buf_[4][src][1] * perp_y};
    }
  }
}

}  // namespace nstorus::detail
