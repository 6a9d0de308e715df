#include "chasym/fft.hpp"

#include <fftw3.h>

#include <mutex>
#include <stdexcept>
#include <vector>

namespace chasym {

namespace {

// The FFTW planner is not reentrant.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

std::vector<int> dims_of(const Grid& g) { return std::vector<int>(static_cast<size_t>(g.dim), g.n); }

}  // namespace

RealFft::RealFft(const Grid& grid) : grid_(grid) {
  grid_.validate();
  real_ = static_cast<double*>(fftw_malloc(sizeof(double) * grid_.size()));
  spec_ = static_cast<Complex*>(fftw_malloc(sizeof(Complex) * grid_.spectral_size()));
  if (!real_ || !spec_) {
    release();
    throw std::bad_alloc();
  }
  auto dims = dims_of(grid_);
  auto* cspec = reinterpret_cast<fftw_complex*>(spec_);
  std::lock_guard lock(planner_mutex());
  fwd_ = fftw_plan_dft_r2c(grid_.dim, dims.data(), real_, cspec, FFTW_ESTIMATE);
  bwd_ = fftw_plan_dft_c2r(grid_.dim, dims.data(), cspec, real_, FFTW_ESTIMATE);
  if (!fwd_ || !bwd_) throw std::runtime_error("FFTW planning failed");
}

RealFft::~RealFft() { release(); }

RealFft::RealFft(RealFft&& o) noexcept
    : grid_(o.grid_), real_(o.real_), spec_(o.spec_), fwd_(o.fwd_), bwd_(o.bwd_) {
  o.real_ = nullptr;
  o.spec_ = nullptr;
  o.fwd_ = o.bwd_ = nullptr;
}

RealFft& RealFft::operator=(RealFft&& o) noexcept {
  if (this != &o) {
    release();
    grid_ = o.grid_;
    real_ = o.real_;
    spec_ = o.spec_;
    fwd_ = o.fwd_;
    bwd_ = o.bwd_;
    o.real_ = nullptr;
    o.spec_ = nullptr;
    o.fwd_ = o.bwd_ = nullptr;
  }
  return *this;
}

void RealFft::release() {
  {
    std::lock_guard lock(planner_mutex());
    if (fwd_) fftw_destroy_plan(static_cast<fftw_plan>(fwd_));
    if (bwd_) fftw_destroy_plan(static_cast<fftw_plan>(bwd_));
  }
  fwd_ = bwd_ = nullptr;
  if (real_) fftw_free(real_);
  if (spec_) fftw_free(spec_);
  real_ = nullptr;
  spec_ = nullptr;
}

void RealFft::forward() { fftw_execute(static_cast<fftw_plan>(fwd_)); }
void RealFft::backward() { fftw_execute(static_cast<fftw_plan>(bwd_)); }

ComplexFft::ComplexFft(const Grid& grid) : grid_(grid) {
  grid_.validate();
  buf_ = static_cast<Complex*>(fftw_malloc(sizeof(Complex) * grid_.size()));
  if (!buf_) throw std::bad_alloc();
  auto dims = dims_of(grid_);
  auto* c = reinterpret_cast<fftw_complex*>(buf_);
  std::lock_guard lock(planner_mutex());
  fwd_ = fftw_plan_dft(grid_.dim, dims.data(), c, c, FFTW_FORWARD, FFTW_ESTIMATE);
  bwd_ = fftw_plan_dft(grid_.dim, dims.data(), c, c, FFTW_BACKWARD, FFTW_ESTIMATE);
  if (!fwd_ || !bwd_) throw std::runtime_error("FFTW planning failed");
}

ComplexFft::~ComplexFft() {
  {
    std::lock_guard lock(planner_mutex());
    if (fwd_) fftw_destroy_plan(static_cast<fftw_plan>(fwd_));
    if (bwd_) fftw_destroy_plan(static_cast<fftw_plan>(bwd_));
  }
  if (buf_) fftw_free(buf_);
}

void ComplexFft::forward() { fftw_execute(static_cast<fftw_plan>(fwd_)); }
void ComplexFft::backward() { fftw_execute(static_cast<fftw_plan>(bwd_)); }

}  // namespace chasym
