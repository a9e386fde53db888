#pragma once

#include <cstdint>
#include <functional>

#include "fdbp/waveform.hpp"

namespace fdbp {

/// Physical description of a periodically amplified link.
struct LinkConfig {
  int num_spans = 15;
  double span_length_km = 80.0;
  double alpha_db_per_km = 0.2;
  double dispersion_ps_nm_km = 17.0;
  double gamma = 1.27;  // 1/(W km)
  double edfa_noise_figure_db = 4.5;
  double reference_wavelength_nm = 1550.0;

  void validate() const;
  double alpha() const;  // power attenuation, 1/km
  double beta2() const;  // s^2/km
  double total_length_km() const { return num_spans * span_length_km; }
  double span_loss_db() const { return alpha_db_per_km * span_length_km; }
  /// Effective length of one span, (1 - e^{-alpha L_sp}) / alpha.
  double span_effective_length_km() const;
  /// Power profile g(z) along the link normalized to the launch power.
  double power_profile(double z_km) const;
};

struct SimSettings {
  double step_km = 0.1;
  /// When > 0 the step is shortened so that the peak nonlinear phase per
  /// step stays below this bound (and never exceeds step_km).
  double max_phase_rad = 0.0;
  bool noise_enabled = true;
  std::uint64_t noise_seed = 1;

  void validate() const;
};

/// Called after every completed span with the 0-based span index.
using SpanCallback = std::function<void(int span, const DualPolWaveform&)>;

/// Forward Manakov propagation of the full WDM field: symmetric split-step
/// per span, exact loss compensation and optional ASE after every span.
/// `first_span` allows resuming from a span-boundary checkpoint.
DualPolWaveform propagate_link(const DualPolWaveform& w, const LinkConfig& link,
                               const SimSettings& sim, const SpanCallback& on_span = {},
                               int first_span = 0);

/// Propagation through a single span of fiber, no amplifier. With
/// reverse = true the exact inverse of the forward span is applied
/// (sign-flipped beta2, gamma and attenuation, steps in reverse order).
DualPolWaveform propagate_span(const DualPolWaveform& w, const LinkConfig& link,
                               const SimSettings& sim, bool reverse = false);

/// Lumped amplifier: field gain 10^{gain_db/20}; with noise enabled adds
/// circular white Gaussian ASE with per-polarization PSD
/// h nu (G F - 1) / 2 over the full simulation bandwidth.
DualPolWaveform edfa(const DualPolWaveform& w, double gain_db, double nf_db, std::uint64_t seed,
                     bool noise_enabled = true, double wavelength_nm = 1550.0);

/// Per-polarization ASE PSD [W/Hz] of one amplifier.
double ase_psd_per_pol(double gain_db, double nf_db, double wavelength_nm = 1550.0);

}  // namespace fdbp
