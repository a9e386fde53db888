#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace fdbp {

/// CB-ESSFM coefficient vectors c_h[m] for h = 0..N_sb-1, stored normalized.
/// The per-watt DBP phase coefficient of tap m at step j is
///   taps[h][m + N_c(h)] * phase_scale * step_power_scale[j],
/// applied to the intensity in W. phase_scale carries the DBP sign.
struct CoefficientSet {
  int n_sb = 1;
  double subband_rate = 0.0;     // R', Hz
  double subband_spacing = 0.0;  // Hz
  std::vector<std::vector<double>> taps;
  double phase_scale = 1.0;
  std::vector<double> step_power_scale;  // DBP processing order
  std::uint64_t geometry_hash = 0;
  std::map<std::string, std::string> meta;

  int n_c(int h) const { return static_cast<int>(taps.at(static_cast<std::size_t>(h)).size() / 2); }
  int num_steps() const { return static_cast<int>(step_power_scale.size()); }
  double tap(int h, int m) const;
  /// Throws ShapeError/NumericError on a broken invariant (odd lengths,
  /// finite entries, even c_0).
  void validate() const;

  std::string to_json() const;
  static CoefficientSet from_json(const std::string& text);
};

void write_coefficients(const std::filesystem::path& path, const CoefficientSet& set);
CoefficientSet read_coefficients(const std::filesystem::path& path);

}  // namespace fdbp
