#include <benchmark/benchmark.h>

#include <cmath>
#include <random>

#include "fdbp/dbp.hpp"
#include "fdbp/fft.hpp"
#include "fdbp/kernel.hpp"
#include "fdbp/signal.hpp"

using namespace fdbp;

namespace {

cvec random_vector(std::size_t n, unsigned seed) {
  std::mt19937 rng(seed);
  std::normal_distribution<double> g;
  cvec v(n);
  for (auto& x : v) x = {g(rng), g(rng)};
  return v;
}

DbpConfig bench_config(int n_sb) {
  DbpConfig cfg;
  cfg.variant = Variant::CB_ESSFM;
  cfg.n_steps = 5;
  cfg.n_subbands = n_sb;
  cfg.block_size = 2048;
  cfg.overlap = 256;
  cfg.link.num_spans = 15;
  return cfg;
}

void BM_fft(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto in = random_vector(n, 1);
  cvec out(n);
  for (auto _ : state) {
    fft::forward(in, out);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<long>(n));
}
BENCHMARK(BM_fft)->RangeMultiplier(4)->Range(256, 65536);

void BM_gvd_step(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  auto spec = random_vector(n, 2);
  const LinkConfig link;
  for (auto _ : state) {
    gvd_step(spec, 80.0, link.beta2(), 104.625e9, 0.0);
    benchmark::DoNotOptimize(spec.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<long>(n));
}
BENCHMARK(BM_gvd_step)->Arg(2048)->Arg(16384);

void BM_nlpr_mimo(benchmark::State& state) {
  const int n_sb = static_cast<int>(state.range(0));
  const auto cfg = bench_config(n_sb);
  const auto coeffs = analytic_dbp_coefficients(cfg, 93e9);
  const std::size_t n = 2048;
  DualPolWaveform w(n, cfg.oversampling * 93e9);
  w.x = random_vector(n, 3);
  w.y = random_vector(n, 4);
  auto bands = subband_split(w, n_sb);
  const auto mimo = build_mimo_transfer(coeffs, n / static_cast<std::size_t>(n_sb));
  for (auto _ : state) {
    nlpr_step(bands, mimo, 1e-3);
    benchmark::DoNotOptimize(bands.data());
  }
}
BENCHMARK(BM_nlpr_mimo)->Arg(1)->Arg(2)->Arg(4)->Arg(8);

void BM_nlpr_time_domain(benchmark::State& state) {
  const int n_sb = static_cast<int>(state.range(0));
  const auto cfg = bench_config(n_sb);
  const auto coeffs = analytic_dbp_coefficients(cfg, 93e9);
  const std::size_t n = 2048;
  DualPolWaveform w(n, cfg.oversampling * 93e9);
  w.x = random_vector(n, 3);
  w.y = random_vector(n, 4);
  auto bands = subband_split(w, n_sb);
  for (auto _ : state) {
    nlpr_time_domain(bands, coeffs, 1e-3);
    benchmark::DoNotOptimize(bands.data());
  }
}
BENCHMARK(BM_nlpr_time_domain)->Arg(1)->Arg(4);

void BM_run_dbp(benchmark::State& state) {
  const int n_sb = static_cast<int>(state.range(0));
  const auto cfg = bench_config(n_sb);
  const auto coeffs = analytic_dbp_coefficients(cfg, 93e9);
  const std::size_t n = 1 << 14;
  DualPolWaveform w(n, cfg.oversampling * 93e9);
  w.x = random_vector(n, 5);
  w.y = random_vector(n, 6);
  for (auto _ : state) {
    auto out = run_dbp(w, cfg, &coeffs);
    benchmark::DoNotOptimize(out.x.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<long>(n));
}
BENCHMARK(BM_run_dbp)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond);

void BM_kernel_closed_form(benchmark::State& state) {
  const LinkConfig link;
  const auto geo = StepGeometry::from_link(link, 240.0);
  double mu = -40e9;
  for (auto _ : state) {
    benchmark::DoNotOptimize(kernel_closed_form(mu, 17e9, geo));
    mu += 1e6;
  }
}
BENCHMARK(BM_kernel_closed_form);

void BM_analytic_coefficients(benchmark::State& state) {
  const LinkConfig link;
  const auto geo = StepGeometry::from_link(link, 240.0);
  for (auto _ : state) {
    auto c = analytic_coefficients(geo, 104.625e9 / 4, 104.625e9 / 4, 1, 20);
    benchmark::DoNotOptimize(c.taps.data());
  }
}
BENCHMARK(BM_analytic_coefficients)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
