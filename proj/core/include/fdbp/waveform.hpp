#pragma once

#include <complex>
#include <cstdint>
#include <filesystem>
#include <vector>

namespace fdbp {

using cd = std::complex<double>;
using cvec = std::vector<cd>;

/// Block of dual-polarization complex samples. x and y hold the two
/// polarizations in sqrt(W) so |x|^2 + |y|^2 is instantaneous power.
/// center_freq is the absolute offset of the block center in the WDM grid.
struct DualPolWaveform {
  cvec x;
  cvec y;
  double sample_rate = 0.0;
  double center_freq = 0.0;

  DualPolWaveform() = default;
  DualPolWaveform(std::size_t n, double rate, double center = 0.0)
      : x(n), y(n), sample_rate(rate), center_freq(center) {}

  std::size_t size() const { return x.size(); }

  /// Throws ShapeError / NumericError / ConfigError on a broken invariant.
  void validate() const;

  /// Mean of |x|^2 + |y|^2 over the block.
  double mean_power() const;
  /// Sum of |x|^2 + |y|^2.
  double energy() const;
};

/// Symbol-spaced samples for the two polarizations of one channel.
struct DualPolSymbols {
  cvec x;
  cvec y;
  std::size_t size() const { return x.size(); }
};

/// Relative RMS difference ||a - b|| / ||b|| over both polarizations.
double relative_rms_difference(const DualPolWaveform& a, const DualPolWaveform& b);

// FDBP waveform files: "FDBP", u16 version, f64 sample_rate, f64 center_freq,
// u64 num_samples, then interleaved f64 (xRe, xIm, yRe, yIm). Little-endian.
inline constexpr std::uint16_t kWaveformFileVersion = 1;

void write_waveform(const std::filesystem::path& path, const DualPolWaveform& w);
DualPolWaveform read_waveform(const std::filesystem::path& path);

}  // namespace fdbp
