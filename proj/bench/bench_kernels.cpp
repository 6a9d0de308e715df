// Serial reference vs OpenMP kernels, plus one full nonlinear evaluation.

#include <benchmark/benchmark.h>

#include <cmath>
#include <vector>

#include "chasym/kernels.hpp"
#include "chasym/nonlinear.hpp"

namespace {

using chasym::kernels::Complex;

std::vector<double> ramp(std::size_t n) {
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = std::sin(0.001 * static_cast<double>(i));
  return v;
}

std::vector<Complex> cramp(std::size_t n) {
  std::vector<Complex> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = {std::sin(0.001 * i), std::cos(0.002 * i)};
  return v;
}

template <bool Omp>
void BM_Polynomial(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  auto w = ramp(n);
  std::vector<double> out(n);
  const std::vector<double> coeffs = {0.0, 0.0, std::sqrt(3.0), 1.0};
  for (auto _ : state) {
    if constexpr (Omp) chasym::kernels::omp::polynomial(w, coeffs, out);
    else chasym::kernels::serial::polynomial(w, coeffs, out);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

template <bool Omp>
void BM_Rk4Combine(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  auto w = cramp(n), n1 = cramp(n), n2 = cramp(n), n3 = cramp(n), n4 = cramp(n);
  auto e = ramp(n), e2 = ramp(n);
  std::vector<Complex> out(n);
  for (auto _ : state) {
    if constexpr (Omp) chasym::kernels::omp::rk4_combine(w, n1, n2, n3, n4, e, e2, 1e-3, out);
    else chasym::kernels::serial::rk4_combine(w, n1, n2, n3, n4, e, e2, 1e-3, out);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

template <bool Omp>
void BM_Sum(benchmark::State& state) {
  auto w = ramp(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    double s = Omp ? chasym::kernels::omp::sum(w) : chasym::kernels::serial::sum(w);
    benchmark::DoNotOptimize(s);
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_NonlinearCH(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  const int n = static_cast<int>(state.range(1));
  chasym::Grid g{d, n, 64.0};
  chasym::PseudoSpectral ps(g, chasym::Dealias::TwoThirds);
  std::vector<double> w(g.size());
  for (std::size_t i = 0; i < w.size(); ++i) w[i] = 0.01 * std::sin(0.37 * static_cast<double>(i % 97));
  std::vector<Complex> wh(ps.spectral_size()), out(ps.spectral_size());
  ps.forward(w, wh);
  const auto model = chasym::NonlinearModel::cahn_hilliard();
  const std::vector<double> mult(model.term_count(), 1.0);
  for (auto _ : state) {
    ps.nonlinear(model, mult, wh, out);
    benchmark::DoNotOptimize(out.data());
  }
}

}  // namespace

BENCHMARK(BM_Polynomial<false>)->Arg(1 << 16)->Arg(1 << 21);
BENCHMARK(BM_Polynomial<true>)->Arg(1 << 16)->Arg(1 << 21);
BENCHMARK(BM_Rk4Combine<false>)->Arg(1 << 16)->Arg(1 << 21);
BENCHMARK(BM_Rk4Combine<true>)->Arg(1 << 16)->Arg(1 << 21);
BENCHMARK(BM_Sum<false>)->Arg(1 << 16)->Arg(1 << 21);
BENCHMARK(BM_Sum<true>)->Arg(1 << 16)->Arg(1 << 21);
BENCHMARK(BM_NonlinearCH)->Args({1, 4096})->Args({2, 256})->Args({3, 64});

BENCHMARK_MAIN();
