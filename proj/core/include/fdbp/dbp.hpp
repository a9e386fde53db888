#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "fdbp/channel.hpp"
#include "fdbp/coefficients.hpp"
#include "fdbp/waveform.hpp"

namespace fdbp {

enum class Variant { EDC, OSSFM, ESSFM, CB_ESSFM, IDEAL_SSFM };

std::string to_string(Variant v);
/// Accepts the enumerator names, case-insensitive. Throws ConfigError.
Variant variant_from_string(const std::string& s);

struct DbpConfig {
  Variant variant = Variant::CB_ESSFM;
  int n_steps = 1;
  int n_subbands = 1;
  double splitting_ratio = 0.5;
  /// Block length N for overlap-and-save. 0 processes the whole input as a
  /// single circular block.
  std::size_t block_size = 1024;
  std::size_t overlap = 128;
  double oversampling = 1.125;  // samples per symbol at the DBP input
  std::string coefficient_source = "analytic";  // analytic | file | optimized
  std::string coefficient_file;
  double memory_safety = 1.5;
  LinkConfig link;

  void validate() const;
  double step_length_km() const { return link.total_length_km() / n_steps; }
};

/// Operation counts of a DBP run under the counting conventions of the
/// complexity model (3-RM complex multiply, split-radix FFT, free exponential).
struct OpCounts {
  double fft_rm = 0, fft_ra = 0;
  double gvd_rm = 0, gvd_ra = 0;
  double intensity_rm = 0, intensity_ra = 0;
  double filter_rm = 0, filter_ra = 0;  // MIMO or time-domain filtering
  double phase_rm = 0, phase_ra = 0;
  std::size_t blocks = 0;
  std::size_t output_samples = 0;

  double rm() const { return fft_rm + gvd_rm + intensity_rm + filter_rm + phase_rm; }
  double ra() const { return fft_ra + gvd_ra + intensity_ra + filter_ra + phase_ra; }
  OpCounts& operator+=(const OpCounts& o);
  void add_cfft(std::size_t m, double count = 1.0);
  void add_rfft(std::size_t m, double count = 1.0);
};

struct DbpRunInfo {
  OpCounts counts;
  std::vector<std::string> warnings;
};

/// Per-bin N_sb x N_sb filter bank over the half spectrum of the subband
/// intensity (k = 0..N'/2). Includes phase_scale and the 3/2 XPM factor.
struct MimoTransfer {
  int n_sb = 1;
  std::size_t n_prime = 0;
  std::vector<cd> t;  // [(k * n_sb + i) * n_sb + l]

  cd at(std::size_t k, int i, int l) const {
    return t[(k * static_cast<std::size_t>(n_sb) + static_cast<std::size_t>(i)) *
                 static_cast<std::size_t>(n_sb) +
             static_cast<std::size_t>(l)];
  }
  std::size_t bins() const { return n_prime / 2 + 1; }
};

/// Multiplies a spectrum in FFT order by exp(+j 2 pi^2 beta2 dz f_k^2),
/// f_k = center_freq + signed bin * rate / size.
void gvd_step(std::span<cd> spectrum, double dz_km, double beta2, double rate, double center_freq);

MimoTransfer build_mimo_transfer(const CoefficientSet& coeffs, std::size_t n_prime);

/// Frequency-domain MIMO NLPR on time-domain subband samples, in place.
/// Phases are scaled by step_power_scale.
void nlpr_step(std::vector<DualPolWaveform>& bands, const MimoTransfer& mimo,
               double step_power_scale, OpCounts* counts = nullptr);

/// Direct time-domain circular evaluation of the same phase rotation.
void nlpr_time_domain(std::vector<DualPolWaveform>& bands, const CoefficientSet& coeffs,
                      double step_power_scale, OpCounts* counts = nullptr);

/// Group-delay spread of the whole link across `bandwidth`, in samples at `rate`.
std::size_t channel_memory_samples(const LinkConfig& link, double bandwidth, double rate);

/// Backpropagation of a block-periodic waveform at cfg.oversampling samples
/// per symbol. `coeffs` may be null for EDC and N_st = 0.
DualPolWaveform run_dbp(const DualPolWaveform& w, const DbpConfig& cfg,
                        const CoefficientSet* coeffs, DbpRunInfo* info = nullptr,
                        int threads = 1);

/// Analytic DBP coefficients for cfg at the given baud rate (per watt).
CoefficientSet analytic_dbp_coefficients(const DbpConfig& cfg, double baud_rate);

/// Standard-SSFM start: unit central tap for h = 0, zero elsewhere, with the
/// average per-step nonlinear phase as scale. Taps are sized by
/// coefficient_memory unless n_c_override >= 0.
CoefficientSet ssfm_dbp_coefficients(const DbpConfig& cfg, double baud_rate,
                                     int n_c_override = -1);

/// Exact single-tap coefficients of the lumped SSFM: -gamma times the
/// integral of the power profile over each step.
CoefficientSet ideal_dbp_coefficients(const DbpConfig& cfg, double baud_rate);

/// Picks the coefficient builder matching cfg.variant and coefficient_source
/// ("file" reads cfg.coefficient_file, "optimized" reads it when set and
/// otherwise returns the analytic start). Returns an empty set for EDC.
CoefficientSet default_dbp_coefficients(const DbpConfig& cfg, double baud_rate);

}  // namespace fdbp
