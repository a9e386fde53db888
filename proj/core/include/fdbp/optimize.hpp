#pragma once

#include <functional>
#include <string>
#include <vector>

#include "fdbp/coefficients.hpp"
#include "fdbp/dbp.hpp"
#include "fdbp/signal.hpp"

namespace fdbp {

/// DBP-input waveforms (center channel at n samples/symbol) with their
/// transmitted symbols. Train and validation come from different seeds.
struct TrainingSet {
  DualPolWaveform train_rx;
  DualPolSymbols train_tx;
  DualPolWaveform valid_rx;
  DualPolSymbols valid_tx;
  WdmConfig wdm;
};

struct LmOptions {
  int max_iterations = 50;
  double relative_step = 1e-6;  // finite-difference step relative to |p|
  double initial_damping = 1e-3;
  double tolerance = 1e-10;  // relative cost decrease that ends a sub-problem
  int threads = 1;           // parallel Jacobian columns
};

struct OptimizeResult {
  CoefficientSet coeffs;
  double init_valid_mse = 0.0;
  double valid_mse = 0.0;
  bool improved = false;  // false: init returned unchanged
  int iterations = 0;
};

/// Symbols after DBP, matched filter, symbol sampling and power normalization.
DualPolSymbols dbp_symbols(const DualPolWaveform& rx, const WdmConfig& wdm, const DbpConfig& cfg,
                           const CoefficientSet& coeffs, std::size_t num_symbols);

/// MSE after mean-phase removal of the DBP output against tx.
double dbp_mse(const DualPolWaveform& rx, const DualPolSymbols& tx, const WdmConfig& wdm,
               const DbpConfig& cfg, const CoefficientSet& coeffs);

/// SNR in dB after DBP on the given data.
double dbp_snr_db(const DualPolWaveform& rx, const DualPolSymbols& tx, const WdmConfig& wdm,
                  const DbpConfig& cfg, const CoefficientSet& coeffs);

/// Sequential per-separation least squares: c_0 first (others zero), then
/// c_1 holding c_0, and so on. c_0 is parameterized by its free half.
/// Never returns a set worse than init on the validation data.
OptimizeResult optimize_coefficients(const TrainingSet& data, const DbpConfig& cfg,
                                     const CoefficientSet& init, const LmOptions& opt = {});

/// Generic Levenberg-Marquardt with a forward-difference Jacobian.
/// residual(p) must return a vector of fixed length.
struct LmResult {
  std::vector<double> params;
  double cost = 0.0;  // sum of squared residuals
  int iterations = 0;
};
using ResidualFn = std::function<std::vector<double>(const std::vector<double>&)>;
LmResult levenberg_marquardt(const ResidualFn& residual, std::vector<double> p0,
                             const LmOptions& opt = {});

struct SweepResult {
  std::vector<double> x;
  std::vector<double> snr_db;
  double best_x = 0.0;
  double best_snr_db = 0.0;
};

/// How coefficients are obtained at every sweep point.
enum class CoefficientMode { Analytic, Optimized };

/// SNR on the validation data versus splitting ratio.
SweepResult sweep_splitting_ratio(const TrainingSet& data, const DbpConfig& cfg,
                                  const std::vector<double>& rho_grid, CoefficientMode mode,
                                  const LmOptions& opt = {});

/// Data source for a launch power in dBm per channel.
using DatasetFn = std::function<TrainingSet(double launch_dbm)>;

/// SNR on the validation data versus launch power.
SweepResult sweep_launch_power(const std::vector<double>& power_grid_dbm, const DatasetFn& data,
                               const DbpConfig& cfg, CoefficientMode mode,
                               const LmOptions& opt = {});

/// Index of the maximum; ties resolve to the first.
void finalize_sweep(SweepResult& r);

}  // namespace fdbp
