#include "fdbp/signal.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numeric>
#include <random>

#include "fdbp/constants.hpp"
#include "fdbp/error.hpp"
#include "fdbp/fft.hpp"

namespace fdbp {
namespace {

std::size_t integral_ratio(double num, double den, const char* what) {
  const double r = num / den;
  const double rr = std::round(r);
  if (rr < 1.0 || std::abs(r - rr) > 1e-6 * std::max(1.0, rr))
    throw ConfigError(std::string(what) + ": sample count " + std::to_string(r) +
                      " is not an integer");
  return static_cast<std::size_t>(rr);
}

struct Spectrum {
  cvec x, y;
};

Spectrum spectrum_of(const DualPolWaveform& w) {
  Spectrum s{cvec(w.size()), cvec(w.size())};
  fft::forward(w.x, s.x);
  fft::forward(w.y, s.y);
  return s;
}

DualPolWaveform waveform_of(const Spectrum& s, double rate, double center) {
  DualPolWaveform w(s.x.size(), rate, center);
  fft::inverse(s.x, w.x);
  fft::inverse(s.y, w.y);
  return w;
}

// Lowest signed bin of an n-point grid.
long min_bin(std::size_t n) { return -static_cast<long>(n / 2); }

}  // namespace

Constellation Constellation::from_name(const std::string& name) {
  std::string key;
  for (char c : name)
    if (c != '-' && c != '_' && c != ' ') key += static_cast<char>(std::toupper(c));
  int order = 0;
  if (key == "QPSK" || key == "4QAM") order = 4;
  else if (key == "16QAM") order = 16;
  else if (key == "64QAM") order = 64;
  else if (key == "256QAM") order = 256;
  else throw ConfigError("unknown modulation format '" + name + "'");

  const int side = static_cast<int>(std::lround(std::sqrt(order)));
  Constellation c;
  c.name = key;
  double energy = 0.0;
  for (int i = 0; i < side; ++i) {
    for (int q = 0; q < side; ++q) {
      const cd p(2.0 * i - (side - 1), 2.0 * q - (side - 1));
      c.points.push_back(p);
      energy += std::norm(p);
    }
  }
  const double scale = 1.0 / std::sqrt(energy / order);
  for (auto& p : c.points) p *= scale;
  return c;
}

void WdmConfig::validate() const {
  if (num_channels < 1) throw ConfigError("wdm: num_channels must be >= 1");
  if (!(baud_rate > 0.0)) throw ConfigError("wdm: baud_rate must be positive");
  if (!(rolloff >= 0.0 && rolloff < 1.0)) throw ConfigError("wdm: rolloff must be in [0, 1)");
  if (num_channels > 1 && spacing < baud_rate * (1.0 + rolloff) * (1.0 - 1e-12))
    throw ConfigError("wdm: spacing smaller than the channel bandwidth");
  if (!(spacing > 0.0)) throw ConfigError("wdm: spacing must be positive");
  Constellation::from_name(format);
}

double WdmConfig::channel_power_watt() const { return dbm_to_watt(launch_power_dbm_per_channel); }

double rrc_response(double f, double baud_rate, double rolloff) {
  const double af = std::abs(f);
  const double half = 0.5 * baud_rate;
  if (rolloff <= 0.0) {
    if (std::abs(af - half) <= 1e-12 * half) return std::sqrt(0.5);
    return af < half ? 1.0 : 0.0;
  }
  const double f1 = (1.0 - rolloff) * half;
  const double f2 = (1.0 + rolloff) * half;
  if (af <= f1) return 1.0;
  if (af >= f2) return 0.0;
  const double rc = 0.5 * (1.0 + std::cos(kPi / (rolloff * baud_rate) * (af - f1)));
  return std::sqrt(rc);
}

double default_sim_rate(const WdmConfig& cfg, double headroom) {
  const double needed = headroom * cfg.total_bandwidth();
  double sps = 1.0;
  while (sps * cfg.baud_rate < needed) sps *= 2.0;
  return sps * cfg.baud_rate;
}

std::pair<DualPolWaveform, SymbolRecord> generate_wdm(const WdmConfig& cfg, std::size_t num_symbols,
                                                      double sim_rate, std::uint64_t seed) {
  cfg.validate();
  if (num_symbols < 1) throw ConfigError("generate_wdm: num_symbols must be >= 1");
  if (sim_rate < cfg.total_bandwidth() * (1.0 - 1e-12))
    throw BandwidthError("generate_wdm: sim_rate below num_channels * spacing");

  const std::size_t n = integral_ratio(num_symbols * sim_rate, cfg.baud_rate, "generate_wdm");
  const double df = sim_rate / static_cast<double>(n);
  const auto constellation = Constellation::from_name(cfg.format);
  const double p_ch = cfg.channel_power_watt();

  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, constellation.points.size() - 1);

  SymbolRecord record;
  record.baud_rate = cfg.baud_rate;
  record.format = constellation.name;
  record.seed = seed;

  cvec spec_x(n), spec_y(n);
  const long support = static_cast<long>(std::floor((1.0 + cfg.rolloff) * 0.5 * cfg.baud_rate / df));
  const long lo = min_bin(n);
  const long hi = lo + static_cast<long>(n) - 1;

  for (int c = 0; c < cfg.num_channels; ++c) {
    DualPolSymbols sym{cvec(num_symbols), cvec(num_symbols)};
    for (auto& s : sym.x) s = constellation.points[pick(rng)];
    for (auto& s : sym.y) s = constellation.points[pick(rng)];

    const double nominal = (c - 0.5 * (cfg.num_channels - 1)) * cfg.spacing;
    const long qc = std::lround(nominal / df);
    if (qc - support < lo || qc + support > hi)
      throw BandwidthError("generate_wdm: channel " + std::to_string(c) + " exceeds the grid");

    cvec ax(num_symbols), ay(num_symbols);
    fft::forward(sym.x, ax);
    fft::forward(sym.y, ay);

    double h2 = 0.0;
    std::vector<double> h(2 * support + 1);
    for (long q = -support; q <= support; ++q) {
      h[q + support] = rrc_response(q * df, cfg.baud_rate, cfg.rolloff);
      h2 += h[q + support] * h[q + support];
    }
    const double nd = static_cast<double>(n);
    const double scale = std::sqrt(0.5 * p_ch * nd * nd / (static_cast<double>(num_symbols) * h2));
    for (long q = -support; q <= support; ++q) {
      const double g = scale * h[q + support];
      if (g == 0.0) continue;
      const std::size_t src = fft::bin_index(q, num_symbols);
      const std::size_t dst = fft::bin_index(qc + q, n);
      spec_x[dst] += g * ax[src];
      spec_y[dst] += g * ay[src];
    }
    record.channels.push_back(std::move(sym));
    record.channel_freqs.push_back(qc * df);
  }

  return {waveform_of(Spectrum{std::move(spec_x), std::move(spec_y)}, sim_rate, 0.0),
          std::move(record)};
}

DualPolWaveform matched_filter(const DualPolWaveform& w, const WdmConfig& cfg) {
  w.validate();
  if (w.sample_rate < (1.0 + cfg.rolloff) * cfg.baud_rate * (1.0 - 1e-12))
    throw BandwidthError("matched_filter: sample rate below channel bandwidth, resample first");
  auto s = spectrum_of(w);
  const std::size_t n = w.size();
  const double df = w.sample_rate / static_cast<double>(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double h = rrc_response(fft::signed_bin(k, n) * df, cfg.baud_rate, cfg.rolloff);
    s.x[k] *= h;
    s.y[k] *= h;
  }
  return waveform_of(s, w.sample_rate, w.center_freq);
}

DualPolWaveform resample(const DualPolWaveform& w, double new_rate, bool allow_truncation,
                         double alias_tolerance) {
  w.validate();
  if (!(new_rate > 0.0)) throw ConfigError("resample: new_rate must be positive");
  const std::size_t n = w.size();
  const std::size_t m = integral_ratio(n * new_rate, w.sample_rate, "resample");
  if (m == n) return w;

  const auto s = spectrum_of(w);
  Spectrum out{cvec(m), cvec(m)};
  const double gain = static_cast<double>(m) / static_cast<double>(n);
  const long lo = std::max(min_bin(n), min_bin(m));
  const long hi = std::min(min_bin(n) + static_cast<long>(n), min_bin(m) + static_cast<long>(m));

  double kept = 0.0, total = 0.0;
  for (std::size_t k = 0; k < n; ++k) total += std::norm(s.x[k]) + std::norm(s.y[k]);
  for (long q = lo; q < hi; ++q) {
    const std::size_t src = fft::bin_index(q, n);
    const std::size_t dst = fft::bin_index(q, m);
    kept += std::norm(s.x[src]) + std::norm(s.y[src]);
    out.x[dst] = gain * s.x[src];
    out.y[dst] = gain * s.y[src];
  }
  if (!allow_truncation && total > 0.0 && (total - kept) > alias_tolerance * total)
    throw AliasingError("resample: new rate would discard " +
                        std::to_string((total - kept) / total) + " of the signal energy");
  return waveform_of(out, new_rate, w.center_freq);
}

DualPolWaveform demux_channel(const DualPolWaveform& w, double channel_center, double bandwidth) {
  w.validate();
  const std::size_t n = w.size();
  const double df = w.sample_rate / static_cast<double>(n);
  const long qc = std::lround((channel_center - w.center_freq) / df);
  const long m = std::lround(bandwidth / df);
  if (m < 1) throw BandwidthError("demux_channel: bandwidth below one bin");
  const long first = qc + min_bin(static_cast<std::size_t>(m));
  const long last = first + m - 1;
  if (first < min_bin(n) || last > min_bin(n) + static_cast<long>(n) - 1)
    throw BandwidthError("demux_channel: requested band outside the block");

  const auto s = spectrum_of(w);
  const std::size_t mu = static_cast<std::size_t>(m);
  Spectrum out{cvec(mu), cvec(mu)};
  const double gain = static_cast<double>(m) / static_cast<double>(n);
  for (long q = min_bin(mu); q < min_bin(mu) + m; ++q) {
    const std::size_t src = fft::bin_index(qc + q, n);
    const std::size_t dst = fft::bin_index(q, mu);
    out.x[dst] = gain * s.x[src];
    out.y[dst] = gain * s.y[src];
  }
  return waveform_of(out, static_cast<double>(m) * df, w.center_freq + static_cast<double>(qc) * df);
}

DualPolWaveform frequency_shift(const DualPolWaveform& w, double shift) {
  w.validate();
  const std::size_t n = w.size();
  const double df = w.sample_rate / static_cast<double>(n);
  const long q = std::lround(shift / df);
  const auto s = spectrum_of(w);
  Spectrum out{cvec(n), cvec(n)};
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t dst = fft::bin_index(static_cast<long>(k) + q, n);
    out.x[dst] = s.x[k];
    out.y[dst] = s.y[k];
  }
  return waveform_of(out, w.sample_rate, w.center_freq);
}

std::vector<DualPolWaveform> subband_split(const DualPolWaveform& w, int n_sb) {
  w.validate();
  if (n_sb < 1) throw ConfigError("subband_split: n_sb must be >= 1");
  const std::size_t n = w.size();
  const std::size_t nsb = static_cast<std::size_t>(n_sb);
  if (n % nsb != 0) throw ShapeError("subband_split: block length not divisible by n_sb");
  const std::size_t np = n / nsb;
  const double df = w.sample_rate / static_cast<double>(n);
  const double gain = static_cast<double>(np) / static_cast<double>(n);

  const auto s = spectrum_of(w);
  std::vector<DualPolWaveform> bands;
  bands.reserve(nsb);
  for (std::size_t i = 0; i < nsb; ++i) {
    const long center = min_bin(n) + static_cast<long>(i * np + np / 2);
    Spectrum b{cvec(np), cvec(np)};
    for (long q = min_bin(np); q < min_bin(np) + static_cast<long>(np); ++q) {
      const std::size_t src = fft::bin_index(center + q, n);
      const std::size_t dst = fft::bin_index(q, np);
      b.x[dst] = gain * s.x[src];
      b.y[dst] = gain * s.y[src];
    }
    bands.push_back(waveform_of(b, w.sample_rate / n_sb, w.center_freq + center * df));
  }
  return bands;
}

DualPolWaveform subband_merge(const std::vector<DualPolWaveform>& bands) {
  if (bands.empty()) throw ShapeError("subband_merge: no subbands");
  const std::size_t nsb = bands.size();
  const std::size_t np = bands.front().size();
  const double rate_p = bands.front().sample_rate;
  for (const auto& b : bands) {
    b.validate();
    if (b.size() != np || b.sample_rate != rate_p)
      throw ShapeError("subband_merge: subbands differ in length or rate");
  }
  const std::size_t n = np * nsb;
  const double df = rate_p / static_cast<double>(np);
  const double gain = static_cast<double>(n) / static_cast<double>(np);
  Spectrum out{cvec(n), cvec(n)};
  for (std::size_t i = 0; i < nsb; ++i) {
    const auto s = spectrum_of(bands[i]);
    const long center = min_bin(n) + static_cast<long>(i * np + np / 2);
    for (long q = min_bin(np); q < min_bin(np) + static_cast<long>(np); ++q) {
      const std::size_t src = fft::bin_index(q, np);
      const std::size_t dst = fft::bin_index(center + q, n);
      out.x[dst] = gain * s.x[src];
      out.y[dst] = gain * s.y[src];
    }
  }
  const long center0 = min_bin(n) + static_cast<long>(np / 2);
  return waveform_of(out, rate_p * static_cast<double>(nsb),
                     bands.front().center_freq - static_cast<double>(center0) * df);
}

DualPolSymbols sample_symbols(const DualPolWaveform& w, std::size_t num_symbols) {
  w.validate();
  if (num_symbols < 1) throw ConfigError("sample_symbols: num_symbols must be >= 1");
  const std::size_t n = w.size();
  const auto s = spectrum_of(w);
  cvec fx(num_symbols), fy(num_symbols);
  const double gain = static_cast<double>(num_symbols) / static_cast<double>(n);
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t dst = fft::bin_index(fft::signed_bin(k, n), num_symbols);
    fx[dst] += gain * s.x[k];
    fy[dst] += gain * s.y[k];
  }
  DualPolSymbols out{cvec(num_symbols), cvec(num_symbols)};
  fft::inverse(fx, out.x);
  fft::inverse(fy, out.y);
  return out;
}

double occupied_bandwidth(const DualPolWaveform& w, double fraction) {
  w.validate();
  const std::size_t n = w.size();
  const auto s = spectrum_of(w);
  std::vector<double> psd(n);
  for (long q = min_bin(n); q < min_bin(n) + static_cast<long>(n); ++q) {
    const std::size_t k = fft::bin_index(q, n);
    psd[static_cast<std::size_t>(q - min_bin(n))] = std::norm(s.x[k]) + std::norm(s.y[k]);
  }
  const double total = std::accumulate(psd.begin(), psd.end(), 0.0);
  if (total == 0.0) return 0.0;
  const double tail = 0.5 * (1.0 - fraction) * total;
  double acc = 0.0;
  std::size_t lo = 0;
  while (lo < n && acc + psd[lo] <= tail) acc += psd[lo++];
  acc = 0.0;
  std::size_t hi = n;
  while (hi > 0 && acc + psd[hi - 1] <= tail) acc += psd[--hi];
  const double df = w.sample_rate / static_cast<double>(n);
  return static_cast<double>(hi - lo) * df;
}

}  // namespace fdbp
