#pragma once

#include <cstddef>

#include "fdbp/signal.hpp"
#include "fdbp/waveform.hpp"

namespace fdbp {

inline constexpr double kSnrCapDb = 100.0;

struct SnrResult {
  double snr_db = 0.0;
  double snr_x_db = 0.0;
  double snr_y_db = 0.0;
  double mean_phase_removed = 0.0;  // rad
  std::size_t num_symbols = 0;
  bool exact_match = false;  // zero error, snr capped
};

/// Rotates rx by exp(-j phi), phi = arg(sum rx conj(tx)) over both
/// polarizations. Throws NumericError if the correlation vanishes.
/// The removed phase is written to *phase if given.
DualPolSymbols remove_mean_phase(const DualPolSymbols& rx, const DualPolSymbols& tx,
                                 double* phase = nullptr);

/// 10 log10(sum |tx|^2 / sum |rx - tx|^2), pooled over polarizations. With
/// remove_phase the mean phase is removed first and reported.
SnrResult snr(const DualPolSymbols& rx, const DualPolSymbols& tx, bool remove_phase = true);

/// Matched filter, symbol sampling and power normalization of a waveform
/// centered on one channel: returns symbols on the unit-energy scale.
DualPolSymbols recover_symbols(const DualPolWaveform& w, const WdmConfig& cfg,
                               std::size_t num_symbols);

/// Mean squared error per 2D symbol after mean-phase removal.
double mse(const DualPolSymbols& rx, const DualPolSymbols& tx);

}  // namespace fdbp
