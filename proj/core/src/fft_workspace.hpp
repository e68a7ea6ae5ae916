// FFTW-backed evaluation of the advection term on a padded grid. The grid is
// sized so that retained modes |k|_inf <= M pick up no aliasing from the
// quadratic product (n >= 3M+2, the 2/3-style padding). One workspace owns
// its buffers and plans; use one instance per thread.

#pragma once

#include <fftw3.h>

#include "mode_rep.hpp"

namespace nstorus::detail {

class FftWorkspace {
 public:
  explicit FftWorkspace(int box_radius);
  ~FftWorkspace();
  FftWorkspace(const FftWorkspace&) = delete;
  FftWorkspace& operator=(const FftWorkspace&) = delete;

  int grid_size() const { return n_; }

  // out = Pi((u . grad) v) truncated to the box. Matches bilinear_direct to
  // round-off.
  void bilinear(const ModeGrid& g, const ModeState& u, const ModeState& v, ModeState& out);

 private:
  int M_;
  int n_;
  static constexpr int kBufs = 6;
  fftw_complex* buf_[kBufs];
  fftw_plan fwd_;  // physical -> spectral (unscaled)
  fftw_plan bwd_;  // spectral -> physical, e^{+ik.x} synthesis

  int gidx(int k) const {  // wavenumber -> grid row/col
    return k >= 0 ? k : k + n_;
  }
};

}  // namespace nstorus::detail
