#pragma once

#include <cstdint>
#include <vector>

#include "fdbp/channel.hpp"
#include "fdbp/waveform.hpp"

namespace fdbp {

/// One step of the (forward) link as seen by the perturbation model.
/// The step covers [-L/2, L/2] and starts with an amplifier; the power
/// profile repeats every L / spans_in_step. nlpr_offset_km places the
/// lumped phase rotation relative to the step center (0 = symmetric).
struct StepGeometry {
  double length_km = 80.0;
  int spans_in_step = 1;
  double alpha = 0.0;  // power attenuation, 1/km
  double beta2 = 0.0;  // s^2/km
  double gamma = 0.0;  // 1/(W km)
  double input_power_w = 1.0;
  double nlpr_offset_km = 0.0;

  void validate() const;
  double span_length_km() const { return length_km / spans_in_step; }
  /// Integral of the power profile over the step, in km.
  double effective_length_km() const;
  std::uint64_t hash() const;

  /// Geometry of a step of `step_length_km` on `link`. Steps longer than a
  /// span must hold a whole number of spans; shorter steps must divide one.
  static StepGeometry from_link(const LinkConfig& link, double step_length_km,
                                double input_power_w = 1.0);
};

/// Closed-form frequency-domain kernel K(mu, nu) for the step.
cd kernel_closed_form(double mu, double nu, const StepGeometry& geo);

/// Direct Gauss-Legendre integration of the defining integral
///   int gamma g(z) H(z-z0, mu) H*(z-z0, nu) H(-(z-z0), mu-nu) dz
/// over the step. Accuracy needs about 10 points per oscillation of the
/// integrand, i.e. num_points >= 10 * |b| L / pi with b = 2 pi^2 beta2 nu (mu - nu).
cd kernel_quadrature(double mu, double nu, const StepGeometry& geo, int num_points);

/// Memory N_c(h) from pi L |beta2| (n R / N_sb)^2 (h + 1) ~ 2 N_c + 1,
/// multiplied by `safety`. Never below 1.
int coefficient_memory(int h, double step_length_km, double beta2, double n_oversample,
                       double baud_rate, int n_sb, double safety = 1.0);

struct AnalyticCoefficients {
  std::vector<double> taps;   // m = -N_c .. N_c, per watt of input power
  double imag_ratio = 0.0;    // max |imag| / max |real| before discarding
  double grid_change = 0.0;   // max change between the two grids / max |c|
  bool converged = false;     // grid_change below the tolerance
  int grid_points = 0;        // per axis, finest grid
};

/// c[m] = (P / R'^2) int int K(mu, nu) exp(j 2 pi (mu - nu) m / R') over the
/// square of side R' centered on (f, f), f = h * spacing. Evaluated on a
/// midpoint grid with `grid_oversample` * (2 N_c + 1) points per axis and
/// Richardson-extrapolated against the doubled grid. `converged` compares
/// the extrapolated and fine-grid values against `tolerance`.
AnalyticCoefficients analytic_coefficients(const StepGeometry& geo, double subband_rate,
                                           double subband_spacing, int h, int n_c,
                                           int grid_oversample = 8,
                                           double tolerance = 1e-4);

/// Same with an explicit band center f instead of h * spacing.
AnalyticCoefficients analytic_coefficients_centered(const StepGeometry& geo, double subband_rate,
                                                    double center, int n_c,
                                                    int grid_oversample = 8,
                                                    double tolerance = 1e-4);

/// Same as above for the ordered subband pair (i, l) of an N_sb-band split,
/// using the absolute subband centers.
AnalyticCoefficients analytic_coefficients_pair(const StepGeometry& geo, int n_sb,
                                                double subband_rate, double subband_spacing,
                                                int i, int l, int n_c);

/// Dense discrete-time second-order kernel d[m, n] on |m|, |n| <= window,
/// band [center - R/2, center + R/2].
struct VolterraKernelOracle {
  int window = 0;
  std::vector<cd> d;  // row-major (m, n)
  cd at(int m, int n) const {
    const int w = 2 * window + 1;
    return d[static_cast<std::size_t>((m + window) * w + (n + window))];
  }
};

inline constexpr int kMaxOracleWindow = 32;

/// Throws ConfigError if window exceeds kMaxOracleWindow.
VolterraKernelOracle volterra_oracle(const StepGeometry& geo, int window, double rate,
                                     double center = 0.0, int panels = 64);

}  // namespace fdbp
