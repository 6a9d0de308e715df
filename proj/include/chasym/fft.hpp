#pragma once

#include <complex>
#include <memory>
#include <span>

#include "chasym/grid.hpp"

namespace chasym {

using Complex = std::complex<double>;

/// Real-to-half-complex transform pair on a Grid, owning aligned work buffers.
/// forward: c_k = sum_j r_j e^{-2 pi i k j / N}; backward is the unnormalized inverse
/// (callers divide by grid.size()). Plans use FFTW_ESTIMATE so results are
/// reproducible run to run.
class RealFft {
 public:
  explicit RealFft(const Grid& grid);
  ~RealFft();
  RealFft(const RealFft&) = delete;
  RealFft& operator=(const RealFft&) = delete;
  RealFft(RealFft&&) noexcept;
  RealFft& operator=(RealFft&&) noexcept;

  std::span<double> real() { return {real_, grid_.size()}; }
  std::span<Complex> spectral() { return {spec_, grid_.spectral_size()}; }

  /// real() -> spectral()
  void forward();
  /// spectral() -> real(); spectral() is clobbered.
  void backward();

  const Grid& grid() const { return grid_; }

 private:
  void release();
  Grid grid_;
  double* real_ = nullptr;
  Complex* spec_ = nullptr;
  void* fwd_ = nullptr;
  void* bwd_ = nullptr;
};

/// Full complex transform on a Grid (used for off-grid spectral evaluation).
class ComplexFft {
 public:
  explicit ComplexFft(const Grid& grid);
  ~ComplexFft();
  ComplexFft(const ComplexFft&) = delete;
  ComplexFft& operator=(const ComplexFft&) = delete;

  std::span<Complex> data() { return {buf_, grid_.size()}; }
  void forward();
  void backward();

 private:
  Grid grid_;
  Complex* buf_ = nullptr;
  void* fwd_ = nullptr;
  void* bwd_ = nullptr;
};

}  // namespace chasym
