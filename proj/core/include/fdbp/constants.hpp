#pragma once

#include <cmath>
#include <numbers>

namespace fdbp {

// Internal unit system: time in s, frequency in Hz, distance in km,
// power in W, beta2 in s^2/km, gamma in 1/(W km), alpha in 1/km.

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kSpeedOfLight = 299792458.0;  // m/s
inline constexpr double kPlanck = 6.62607015e-34;     // J s

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double linear_to_db(double lin) { return 10.0 * std::log10(lin); }
inline double dbm_to_watt(double dbm) { return 1e-3 * db_to_linear(dbm); }
inline double watt_to_dbm(double w) { return linear_to_db(w / 1e-3); }

/// Field attenuation constant alpha [1/km] from a dB/km figure (power).
inline double alpha_from_db(double alpha_db_per_km) {
  return alpha_db_per_km * std::log(10.0) / 10.0;
}

/// beta2 [s^2/km] from dispersion D [ps/(nm km)] at wavelength [nm].
inline double beta2_from_dispersion(double d_ps_nm_km, double wavelength_nm) {
  const double lambda = wavelength_nm * 1e-9;  // m
  const double d = d_ps_nm_km * 1e-12 / 1e-9;  // s/(m km)
  return -d * lambda * lambda / (2.0 * kPi * kSpeedOfLight);
}

}  // namespace fdbp
