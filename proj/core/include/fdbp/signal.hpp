#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fdbp/waveform.hpp"

namespace fdbp {

/// Square QAM constellation normalized to unit average energy.
struct Constellation {
  std::string name;
  cvec points;

  /// Accepts "QPSK"/"4QAM", "16QAM", "64QAM", "256QAM" (case-insensitive,
  /// optional dash). Throws ConfigError otherwise.
  static Constellation from_name(const std::string& name);
};

struct WdmConfig {
  int num_channels = 1;
  double spacing = 100e9;   // Hz
  double baud_rate = 93e9;  // symbols/s
  double rolloff = 0.05;
  std::string format = "64QAM";
  double launch_power_dbm_per_channel = 0.0;

  void validate() const;
  double channel_power_watt() const;
  /// Total occupied WDM band, num_channels * spacing.
  double total_bandwidth() const { return num_channels * spacing; }
};

/// Transmitted symbols for every channel (index 0 = lowest frequency).
struct SymbolRecord {
  std::vector<DualPolSymbols> channels;
  std::vector<double> channel_freqs;  // actual (bin-aligned) centers, Hz
  double baud_rate = 0.0;
  std::string format;
  std::uint64_t seed = 0;

  std::size_t num_symbols() const { return channels.empty() ? 0 : channels.front().size(); }
  std::size_t center_channel() const { return channels.size() / 2; }
};

/// Unit-peak root-raised-cosine amplitude response at frequency f.
double rrc_response(double f, double baud_rate, double rolloff);

/// Default forward-simulation rate: smallest power-of-two samples/symbol
/// giving at least `headroom` times the WDM bandwidth.
double default_sim_rate(const WdmConfig& cfg, double headroom = 2.0);

/// Periodic WDM signal of num_symbols symbol periods sampled at sim_rate.
/// Channels are RRC shaped in the frequency domain, centered on the FFT
/// grid nearest to their nominal slot, with the configured per-channel power.
std::pair<DualPolWaveform, SymbolRecord> generate_wdm(const WdmConfig& cfg, std::size_t num_symbols,
                                                      double sim_rate, std::uint64_t seed);

/// Unit-peak RRC matched filter applied around the block center. With the
/// generator's normalization, sampling the output at symbol instants returns
/// sqrt(P_ch / 2) times the transmitted symbols on a back-to-back link.
DualPolWaveform matched_filter(const DualPolWaveform& w, const WdmConfig& cfg);

/// FFT-based rate conversion by zero-padding or truncating the spectrum.
/// Throws AliasingError if truncation would remove more than
/// `alias_tolerance` of the energy, unless allow_truncation is set.
DualPolWaveform resample(const DualPolWaveform& w, double new_rate,
                         bool allow_truncation = false, double alias_tolerance = 1e-9);

/// Brick-wall extraction of [channel_center - bw/2, channel_center + bw/2)
/// (absolute frequencies), re-centered at baseband. The output rate is the
/// bandwidth rounded to a whole number of input bins.
DualPolWaveform demux_channel(const DualPolWaveform& w, double channel_center, double bandwidth);

/// Moves the content up by df (rounded to the bin grid), i.e. multiplies by
/// exp(j 2 pi df t). center_freq is left unchanged.
DualPolWaveform frequency_shift(const DualPolWaveform& w, double df);

/// Splits the block spectrum into n_sb contiguous equal slices.
std::vector<DualPolWaveform> subband_split(const DualPolWaveform& w, int n_sb);
/// Exact inverse of subband_split.
DualPolWaveform subband_merge(const std::vector<DualPolWaveform>& bands);

/// Samples a periodic band-limited block at num_symbols equally spaced
/// instants starting at t = 0 (spectral folding onto the symbol grid).
DualPolSymbols sample_symbols(const DualPolWaveform& w, std::size_t num_symbols);

/// Frequency of the 99%-power occupied band (two-sided width) of a block.
double occupied_bandwidth(const DualPolWaveform& w, double fraction = 0.99);

}  // namespace fdbp
