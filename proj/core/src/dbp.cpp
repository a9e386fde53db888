#include "fdbp/dbp.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <thread>

#include "fdbp/constants.hpp"
#include "fdbp/error.hpp"
#include "fdbp/fft.hpp"
#include "fdbp/kernel.hpp"

namespace fdbp {

namespace {

std::string upper(std::string s) {
  for (auto& c : s) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return s;
}

double log2d(std::size_t n) { return std::log2(static_cast<double>(n)); }

// Start of forward step k within its span, robust to rounding for steps
// that divide the span.
double step_start_in_span(const LinkConfig& link, double step_km, int k) {
  const double lsp = link.span_length_km;
  if (step_km >= lsp * (1.0 - 1e-9)) {
    const double r = step_km / lsp;
    if (std::abs(r - std::round(r)) < 1e-9 * r) return 0.0;
  } else {
    const double s = lsp / step_km;
    const long si = std::lround(s);
    if (std::abs(s - static_cast<double>(si)) < 1e-9 * s) return static_cast<double>(k % si) * step_km;
  }
  const double z = k * step_km;
  const double zeta = z - std::floor(z / lsp + 1e-12) * lsp;
  return std::max(0.0, zeta);
}

// Integral of the power profile over [z0, z1] in forward coordinates.
double profile_integral(const LinkConfig& link, double z0, double z1) {
  const double lsp = link.span_length_km;
  const double a = link.alpha();
  double total = 0.0;
  const int first = std::max(0, static_cast<int>(std::floor(z0 / lsp)));
  for (int s = first; s * lsp < z1; ++s) {
    const double lo = std::max(z0, s * lsp) - s * lsp;
    const double hi = std::min(z1, (s + 1) * lsp) - s * lsp;
    if (hi <= lo) continue;
    total += a * lsp < 1e-12 ? hi - lo : (std::exp(-a * lo) - std::exp(-a * hi)) / a;
  }
  return total;
}

int engine_subbands(const DbpConfig& cfg) {
  return cfg.variant == Variant::CB_ESSFM ? cfg.n_subbands : 1;
}

}  // namespace

std::string to_string(Variant v) {
  switch (v) {
    case Variant::EDC: return "EDC";
    case Variant::OSSFM: return "OSSFM";
    case Variant::ESSFM: return "ESSFM";
    case Variant::CB_ESSFM: return "CB_ESSFM";
    case Variant::IDEAL_SSFM: return "IDEAL_SSFM";
  }
  return "?";
}

Variant variant_from_string(const std::string& s) {
  std::string u = upper(s);
  std::replace(u.begin(), u.end(), '-', '_');
  if (u == "EDC") return Variant::EDC;
  if (u == "OSSFM") return Variant::OSSFM;
  if (u == "ESSFM") return Variant::ESSFM;
  if (u == "CB_ESSFM" || u == "CBESSFM") return Variant::CB_ESSFM;
  if (u == "IDEAL_SSFM" || u == "SSFM") return Variant::IDEAL_SSFM;
  throw ConfigError("unknown DBP variant '" + s + "'");
}

void DbpConfig::validate() const {
  link.validate();
  if (n_steps < 0) throw ConfigError("dbp: n_steps must be >= 0");
  if (variant == Variant::EDC && n_steps != 0) throw ConfigError("dbp: EDC requires n_steps = 0");
  if (n_subbands < 1) throw ConfigError("dbp: n_subbands must be >= 1");
  if (variant != Variant::CB_ESSFM && n_subbands != 1)
    throw ConfigError("dbp: only CB_ESSFM supports more than one subband");
  if (!(splitting_ratio >= 0.0 && splitting_ratio <= 1.0))
    throw ConfigError("dbp: splitting ratio must lie in [0, 1]");
  if (!(oversampling > 0.0)) throw ConfigError("dbp: oversampling must be positive");
  if (!(memory_safety > 0.0)) throw ConfigError("dbp: memory_safety must be positive");
  if (block_size != 0) {
    if (block_size <= overlap) throw ConfigError("dbp: block size must exceed the overlap");
    if (overlap % 2 != 0) throw ConfigError("dbp: overlap must be even");
    const auto nsb = static_cast<std::size_t>(n_subbands);
    if (block_size % nsb != 0) throw ConfigError("dbp: block size must be divisible by N_sb");
    if (overlap % (2 * nsb) != 0) throw ConfigError("dbp: overlap / (2 N_sb) must be integral");
  }
  if (coefficient_source != "analytic" && coefficient_source != "file" &&
      coefficient_source != "optimized")
    throw ConfigError("dbp: coefficient_source must be analytic, file or optimized");
}

OpCounts& OpCounts::operator+=(const OpCounts& o) {
  fft_rm += o.fft_rm;
  fft_ra += o.fft_ra;
  gvd_rm += o.gvd_rm;
  gvd_ra += o.gvd_ra;
  intensity_rm += o.intensity_rm;
  intensity_ra += o.intensity_ra;
  filter_rm += o.filter_rm;
  filter_ra += o.filter_ra;
  phase_rm += o.phase_rm;
  phase_ra += o.phase_ra;
  blocks += o.blocks;
  output_samples += o.output_samples;
  return *this;
}

void OpCounts::add_cfft(std::size_t m, double count) {
  const double md = static_cast<double>(m);
  fft_rm += count * (md * log2d(m) - 3.0 * md + 4.0);
  fft_ra += count * (3.0 * md * log2d(m) - 3.0 * md + 4.0);
}

void OpCounts::add_rfft(std::size_t m, double count) { add_cfft(m, 0.5 * count); }

void gvd_step(std::span<cd> spectrum, double dz_km, double beta2, double rate, double center_freq) {
  if (dz_km == 0.0) return;
  const std::size_t n = spectrum.size();
  const double df = rate / static_cast<double>(n);
  const double c = 2.0 * kPi * kPi * beta2 * dz_km;
  for (std::size_t k = 0; k < n; ++k) {
    const double f = center_freq + static_cast<double>(fft::signed_bin(k, n)) * df;
    spectrum[k] *= std::polar(1.0, c * f * f);
  }
}

MimoTransfer build_mimo_transfer(const CoefficientSet& coeffs, std::size_t n_prime) {
  coeffs.validate();
  if (n_prime < 2 || n_prime % 2 != 0) throw ShapeError("mimo: N' must be even and >= 2");
  const int nsb = coeffs.n_sb;
  MimoTransfer m;
  m.n_sb = nsb;
  m.n_prime = n_prime;
  const std::size_t bins = m.bins();
  std::vector<std::vector<cd>> spectra(static_cast<std::size_t>(nsb), std::vector<cd>(bins));
  std::vector<double> padded(n_prime);
  for (int h = 0; h < nsb; ++h) {
    const int nc = coeffs.n_c(h);
    if (static_cast<std::size_t>(2 * nc + 1) > n_prime)
      throw ShapeError("mimo: coefficient vector longer than the subband block");
    std::fill(padded.begin(), padded.end(), 0.0);
    for (int k = -nc; k <= nc; ++k) padded[fft::bin_index(k, n_prime)] = coeffs.tap(h, k);
    fft::forward_real(padded, spectra[static_cast<std::size_t>(h)]);
  }
  m.t.assign(bins * static_cast<std::size_t>(nsb * nsb), 0.0);
  for (std::size_t k = 0; k < bins; ++k)
    for (int i = 0; i < nsb; ++i)
      for (int l = 0; l < nsb; ++l) {
        const int h = l - i;
        const double w = h == 0 ? 1.0 : 1.5;
        cd v = spectra[static_cast<std::size_t>(std::abs(h))][k];
        if (h < 0) v = std::conj(v);
        m.t[(k * nsb + i) * nsb + l] = w * coeffs.phase_scale * v;
      }
  return m;
}

namespace {

void apply_phase(DualPolWaveform& band, const std::vector<double>& theta, double scale) {
  for (std::size_t k = 0; k < band.size(); ++k) {
    const cd rot = std::polar(1.0, -scale * theta[k]);
    band.x[k] *= rot;
    band.y[k] *= rot;
  }
}

std::vector<std::vector<double>> intensities(const std::vector<DualPolWaveform>& bands) {
  std::vector<std::vector<double>> out(bands.size());
  for (std::size_t i = 0; i < bands.size(); ++i) {
    const auto& b = bands[i];
    out[i].resize(b.size());
    for (std::size_t k = 0; k < b.size(); ++k) out[i][k] = std::norm(b.x[k]) + std::norm(b.y[k]);
  }
  return out;
}

void check_bands(const std::vector<DualPolWaveform>& bands, std::size_t n_sb, std::size_t n) {
  if (bands.size() != n_sb) throw ShapeError("nlpr: number of subbands does not match");
  for (const auto& b : bands)
    if (b.size() != n || b.y.size() != n) throw ShapeError("nlpr: subband length mismatch");
}

}  // namespace

void nlpr_step(std::vector<DualPolWaveform>& bands, const MimoTransfer& mimo,
               double step_power_scale, OpCounts* counts) {
  const std::size_t nsb = static_cast<std::size_t>(mimo.n_sb);
  const std::size_t np = mimo.n_prime;
  check_bands(bands, nsb, np);
  const std::size_t bins = mimo.bins();
  const auto power = intensities(bands);
  std::vector<std::vector<cd>> spec(nsb, std::vector<cd>(bins));
  for (std::size_t l = 0; l < nsb; ++l) fft::forward_real(power[l], spec[l]);

  std::vector<cd> acc(bins);
  std::vector<double> theta(np);
  for (std::size_t i = 0; i < nsb; ++i) {
    for (std::size_t k = 0; k < bins; ++k) {
      cd s = 0.0;
      for (std::size_t l = 0; l < nsb; ++l) s += mimo.at(k, static_cast<int>(i), static_cast<int>(l)) * spec[l][k];
      acc[k] = s;
    }
    fft::inverse_real(acc, theta);
    apply_phase(bands[i], theta, step_power_scale);
  }

  if (counts) {
    const double n_total = static_cast<double>(np * nsb);
    const double sb = static_cast<double>(nsb);
    counts->intensity_rm += 4.0 * n_total;
    counts->intensity_ra += 3.0 * n_total;
    counts->add_rfft(np, 2.0 * sb);
    // N'/2 matrix-vector products; DC and Nyquist bins are real and free.
    const double matvecs = 0.5 * static_cast<double>(np);
    counts->filter_rm += matvecs * (3.0 * sb * (sb - 1.0) + 2.0 * sb);
    counts->filter_ra += matvecs * (5.0 * sb * (sb - 1.0));
    counts->phase_rm += 6.0 * n_total;
    counts->phase_ra += 8.0 * n_total;
  }
}

void nlpr_time_domain(std::vector<DualPolWaveform>& bands, const CoefficientSet& coeffs,
                      double step_power_scale, OpCounts* counts) {
  const std::size_t nsb = static_cast<std::size_t>(coeffs.n_sb);
  if (bands.empty()) throw ShapeError("nlpr: no subbands");
  const std::size_t n = bands.front().size();
  check_bands(bands, nsb, n);
  const auto power = intensities(bands);
  const long nn = static_cast<long>(n);
  std::vector<double> theta(n);
  for (std::size_t i = 0; i < nsb; ++i) {
    std::fill(theta.begin(), theta.end(), 0.0);
    for (std::size_t l = 0; l < nsb; ++l) {
      const int h = static_cast<int>(l) - static_cast<int>(i);
      const int ah = std::abs(h);
      const int nc = coeffs.n_c(ah);
      if (2 * static_cast<long>(nc) + 1 > nn) throw ShapeError("nlpr: coefficient vector longer than block");
      const double w = (h == 0 ? 1.0 : 1.5) * coeffs.phase_scale;
      const auto& p = power[l];
      for (int m = -nc; m <= nc; ++m) {
        const double c = w * coeffs.tap(ah, h < 0 ? -m : m);
        if (c == 0.0) continue;
        for (long k = 0; k < nn; ++k) {
          long src = k - m;
          if (src < 0) src += nn;
          else if (src >= nn) src -= nn;
          theta[static_cast<std::size_t>(k)] += c * p[static_cast<std::size_t>(src)];
        }
      }
    }
    apply_phase(bands[i], theta, step_power_scale);
  }
  if (counts) {
    const double nt = static_cast<double>(n * nsb);
    const double nc0 = coeffs.n_c(0);
    counts->intensity_rm += 4.0 * nt;
    counts->intensity_ra += 3.0 * nt;
    // Even symmetry folds the 2 N_c + 1 taps into N_c + 1 products.
    counts->filter_rm += (nc0 + 1.0) * nt;
    counts->filter_ra += 2.0 * nc0 * nt;
    counts->phase_rm += 6.0 * nt;
    counts->phase_ra += 8.0 * nt;
  }
}

std::size_t channel_memory_samples(const LinkConfig& link, double bandwidth, double rate) {
  const double spread = 2.0 * kPi * std::abs(link.beta2()) * link.total_length_km() * bandwidth;
  const double samples = spread * rate;
  if (samples <= 0.0) return 0;
  return static_cast<std::size_t>(std::ceil(samples - 1e-9));
}

namespace {

enum class Path { Linear, Mimo, TimeDomain };

// Immutable per-run state; process() is reentrant.
class Engine {
public:
  Engine(const DbpConfig& cfg, const CoefficientSet* coeffs, std::size_t n, double rate,
         double center)
      : n_(n), nsb_(1), coeffs_(coeffs) {
    const bool linear = cfg.variant == Variant::EDC || cfg.n_steps == 0;
    if (linear) {
      path_ = Path::Linear;
      lengths_ = {cfg.link.total_length_km()};
    } else {
      path_ = cfg.variant == Variant::ESSFM || cfg.variant == Variant::OSSFM ? Path::TimeDomain
                                                                              : Path::Mimo;
      nsb_ = static_cast<std::size_t>(engine_subbands(cfg));
      const double l = cfg.step_length_km();
      const double rho = cfg.splitting_ratio;
      lengths_.assign(static_cast<std::size_t>(cfg.n_steps) + 1, l);
      lengths_.front() = (1.0 - rho) * l;
      lengths_.back() = rho * l;
      scales_ = coeffs->step_power_scale;
      if (scales_.empty()) scales_.assign(static_cast<std::size_t>(cfg.n_steps), 1.0);
      if (static_cast<int>(scales_.size()) != cfg.n_steps)
        throw ConfigError("dbp: coefficient set was built for a different number of steps");
    }
    if (n_ % nsb_ != 0) throw ConfigError("dbp: block size must be divisible by N_sb");
    np_ = n_ / nsb_;
    if (path_ == Path::Mimo) mimo_ = build_mimo_transfer(*coeffs, np_);

    // GVD factors in subband layout: bin i * N' + k' holds subband i, FFT order k'.
    const double df = rate / static_cast<double>(n_);
    const double c = 2.0 * kPi * kPi * cfg.link.beta2();
    for (double dz : lengths_) {
      auto it = std::find(distinct_.begin(), distinct_.end(), dz);
      if (it != distinct_.end()) {
        index_.push_back(static_cast<std::size_t>(it - distinct_.begin()));
        continue;
      }
      cvec h(n_);
      for (std::size_t i = 0; i < nsb_; ++i)
        for (std::size_t k = 0; k < np_; ++k) {
          const long q = band_center(i) + fft::signed_bin(k, np_);
          const double f = center + static_cast<double>(q) * df;
          h[i * np_ + k] = std::polar(1.0, c * dz * f * f);
        }
      index_.push_back(distinct_.size());
      distinct_.push_back(dz);
      transfer_.push_back(std::move(h));
    }
  }

  void process(const cvec& in_x, const cvec& in_y, cvec& out_x, cvec& out_y, OpCounts& oc) const {
    cvec sx(n_), sy(n_);
    fft::forward(in_x, sx);
    fft::forward(in_y, sy);
    oc.add_cfft(n_, 2.0);

    // Split into subband layout with gain N'/N.
    cvec bx(n_), by(n_);
    const double g = static_cast<double>(np_) / static_cast<double>(n_);
    for (std::size_t i = 0; i < nsb_; ++i)
      for (std::size_t k = 0; k < np_; ++k) {
        const std::size_t src = fft::bin_index(band_center(i) + fft::signed_bin(k, np_), n_);
        bx[i * np_ + k] = g * sx[src];
        by[i * np_ + k] = g * sy[src];
      }

    std::vector<DualPolWaveform> bands;
    if (path_ != Path::Linear) bands.assign(nsb_, DualPolWaveform(np_, 1.0));
    const std::size_t steps = lengths_.size() - 1;
    for (std::size_t j = 0; j <= steps; ++j) {
      apply_gvd(bx, by, index_[j], oc);
      if (j == steps) break;
      for (std::size_t i = 0; i < nsb_; ++i) {
        fft::inverse(std::span<const cd>(bx).subspan(i * np_, np_), bands[i].x);
        fft::inverse(std::span<const cd>(by).subspan(i * np_, np_), bands[i].y);
      }
      oc.add_cfft(np_, 2.0 * static_cast<double>(nsb_));
      if (path_ == Path::Mimo)
        nlpr_step(bands, mimo_, scales_[j], &oc);
      else
        nlpr_time_domain(bands, *coeffs_, scales_[j], &oc);
      for (std::size_t i = 0; i < nsb_; ++i) {
        fft::forward(bands[i].x, std::span<cd>(bx).subspan(i * np_, np_));
        fft::forward(bands[i].y, std::span<cd>(by).subspan(i * np_, np_));
      }
      oc.add_cfft(np_, 2.0 * static_cast<double>(nsb_));
    }

    std::fill(sx.begin(), sx.end(), 0.0);
    std::fill(sy.begin(), sy.end(), 0.0);
    const double ig = static_cast<double>(n_) / static_cast<double>(np_);
    for (std::size_t i = 0; i < nsb_; ++i)
      for (std::size_t k = 0; k < np_; ++k) {
        const std::size_t dst = fft::bin_index(band_center(i) + fft::signed_bin(k, np_), n_);
        sx[dst] = ig * bx[i * np_ + k];
        sy[dst] = ig * by[i * np_ + k];
      }
    fft::inverse(sx, out_x);
    fft::inverse(sy, out_y);
    oc.add_cfft(n_, 2.0);
    oc.blocks += 1;
  }

private:
  long band_center(std::size_t i) const {
    const long n = static_cast<long>(n_), np = static_cast<long>(np_);
    return -n / 2 + static_cast<long>(i) * np + np / 2;
  }

  void apply_gvd(cvec& bx, cvec& by, std::size_t which, OpCounts& oc) const {
    const cvec& h = transfer_[which];
    for (std::size_t k = 0; k < n_; ++k) {
      bx[k] *= h[k];
      by[k] *= h[k];
    }
    oc.gvd_rm += 6.0 * static_cast<double>(n_);
    oc.gvd_ra += 6.0 * static_cast<double>(n_);
  }

  std::size_t n_, nsb_, np_ = 0;
  Path path_ = Path::Linear;
  const CoefficientSet* coeffs_;
  MimoTransfer mimo_;
  std::vector<double> lengths_, scales_, distinct_;
  std::vector<std::size_t> index_;
  std::vector<cvec> transfer_;
};

void check_coefficients(const DbpConfig& cfg, const CoefficientSet* coeffs, double rate) {
  if (cfg.variant == Variant::EDC || cfg.n_steps == 0) return;
  if (!coeffs) throw ConfigError("dbp: variant " + to_string(cfg.variant) + " needs coefficients");
  coeffs->validate();
  const int nsb = engine_subbands(cfg);
  if (coeffs->n_sb != nsb) throw ConfigError("dbp: coefficient set has the wrong number of subbands");
  if (cfg.variant == Variant::OSSFM && coeffs->n_c(0) != 0)
    throw ConfigError("dbp: OSSFM requires a single coefficient (N_c = 0)");
  bool any_memory = false;
  for (int h = 0; h < nsb; ++h) any_memory = any_memory || coeffs->n_c(h) > 0 || h > 0;
  if (any_memory && coeffs->subband_rate > 0.0) {
    const double expected = rate / nsb;
    if (std::abs(coeffs->subband_rate - expected) > 1e-6 * expected)
      throw ConfigError("dbp: coefficients were computed for a different subband rate");
  }
}

}  // namespace

DualPolWaveform run_dbp(const DualPolWaveform& w, const DbpConfig& cfg,
                        const CoefficientSet* coeffs, DbpRunInfo* info, int threads) {
  cfg.validate();
  w.validate();
  check_coefficients(cfg, coeffs, w.sample_rate);
  const std::size_t len = w.size();
  const bool whole = cfg.block_size == 0;
  const std::size_t n = whole ? len : cfg.block_size;
  const std::size_t ov = whole ? 0 : cfg.overlap;
  if (n > len) throw ConfigError("dbp: block size exceeds the input length; use block_size 0");

  if (info && !whole) {
    const std::size_t mem = channel_memory_samples(cfg.link, w.sample_rate, w.sample_rate);
    if (ov < mem)
      info->warnings.push_back("overlap " + std::to_string(ov) + " is below the channel memory of " +
                               std::to_string(mem) + " samples");
  }

  const Engine engine(cfg, coeffs, n, w.sample_rate, w.center_freq);
  DualPolWaveform out(len, w.sample_rate, w.center_freq);
  const std::size_t hop = n - ov;
  const std::size_t nblocks = (len + hop - 1) / hop;

  auto work = [&](std::size_t b0, std::size_t b1, OpCounts& oc) {
    cvec ix(n), iy(n), ox(n), oy(n);
    for (std::size_t b = b0; b < b1; ++b) {
      const long start = static_cast<long>(b * hop) - static_cast<long>(ov / 2);
      for (std::size_t k = 0; k < n; ++k) {
        const std::size_t src = fft::bin_index(start + static_cast<long>(k), len);
        ix[k] = w.x[src];
        iy[k] = w.y[src];
      }
      engine.process(ix, iy, ox, oy, oc);
      for (std::size_t t = 0; t < hop && b * hop + t < len; ++t) {
        out.x[b * hop + t] = ox[ov / 2 + t];
        out.y[b * hop + t] = oy[ov / 2 + t];
      }
    }
  };

  const std::size_t nthreads =
      std::clamp<std::size_t>(threads < 1 ? 1 : static_cast<std::size_t>(threads), 1, nblocks);
  std::vector<OpCounts> counts(nthreads);
  if (nthreads == 1) {
    work(0, nblocks, counts[0]);
  } else {
    std::vector<std::thread> pool;
    const std::size_t per = (nblocks + nthreads - 1) / nthreads;
    for (std::size_t t = 0; t < nthreads; ++t) {
      const std::size_t b0 = t * per, b1 = std::min(nblocks, b0 + per);
      if (b0 >= b1) continue;
      pool.emplace_back(work, b0, b1, std::ref(counts[t]));
    }
    for (auto& th : pool) th.join();
  }
  if (info) {
    for (const auto& c : counts) info->counts += c;
    info->counts.output_samples += len;
  }
  return out;
}

namespace {

CoefficientSet empty_set(const DbpConfig& cfg, double baud_rate) {
  CoefficientSet s;
  s.n_sb = engine_subbands(cfg);
  s.subband_rate = cfg.oversampling * baud_rate / s.n_sb;
  s.subband_spacing = s.subband_rate;
  s.meta["variant"] = to_string(cfg.variant);
  s.meta["n_steps"] = std::to_string(cfg.n_steps);
  s.meta["splitting_ratio"] = std::to_string(cfg.splitting_ratio);
  return s;
}

std::vector<double> start_power_scales(const DbpConfig& cfg) {
  const double l = cfg.step_length_km();
  std::vector<double> s(static_cast<std::size_t>(cfg.n_steps));
  for (int j = 0; j < cfg.n_steps; ++j) {
    const int k = cfg.n_steps - 1 - j;
    s[static_cast<std::size_t>(j)] = std::exp(-cfg.link.alpha() * step_start_in_span(cfg.link, l, k));
  }
  return s;
}

std::vector<int> memory_sizes(const DbpConfig& cfg, double baud_rate, int nsb) {
  std::vector<int> out;
  for (int h = 0; h < nsb; ++h)
    out.push_back(coefficient_memory(h, cfg.step_length_km(), cfg.link.beta2(), cfg.oversampling,
                                     baud_rate, nsb, cfg.memory_safety));
  return out;
}

}  // namespace

CoefficientSet ssfm_dbp_coefficients(const DbpConfig& cfg, double baud_rate, int n_c_override) {
  cfg.validate();
  if (cfg.n_steps < 1) throw ConfigError("coefficients: n_steps must be >= 1");
  CoefficientSet s = empty_set(cfg, baud_rate);
  const auto geo = StepGeometry::from_link(cfg.link, cfg.step_length_km());
  const auto sizes = memory_sizes(cfg, baud_rate, s.n_sb);
  for (int h = 0; h < s.n_sb; ++h) {
    const int nc = n_c_override >= 0 ? n_c_override : sizes[static_cast<std::size_t>(h)];
    s.taps.emplace_back(static_cast<std::size_t>(2 * nc + 1), 0.0);
  }
  s.phase_scale = -cfg.link.gamma * geo.effective_length_km();
  if (s.phase_scale == 0.0)
    s.phase_scale = 1.0;  // linear link: all taps stay zero
  else
    s.taps[0][s.taps[0].size() / 2] = 1.0;
  s.step_power_scale = start_power_scales(cfg);
  s.geometry_hash = geo.hash();
  s.meta["source"] = "ssfm";
  return s;
}

CoefficientSet analytic_dbp_coefficients(const DbpConfig& cfg, double baud_rate) {
  cfg.validate();
  if (cfg.variant == Variant::OSSFM) return ssfm_dbp_coefficients(cfg, baud_rate, 0);
  if (cfg.variant == Variant::IDEAL_SSFM) return ideal_dbp_coefficients(cfg, baud_rate);
  if (cfg.n_steps < 1) throw ConfigError("coefficients: n_steps must be >= 1");
  CoefficientSet s = empty_set(cfg, baud_rate);
  const double l = cfg.step_length_km();
  auto geo = StepGeometry::from_link(cfg.link, l);
  geo.nlpr_offset_km = (cfg.splitting_ratio - 0.5) * l;
  const double norm = cfg.link.gamma * geo.effective_length_km();
  s.phase_scale = norm == 0.0 ? 1.0 : -norm;
  const auto sizes = memory_sizes(cfg, baud_rate, s.n_sb);
  bool converged = true;
  double imag = 0.0;
  for (int h = 0; h < s.n_sb; ++h) {
    const auto a = analytic_coefficients(geo, s.subband_rate, s.subband_spacing, h,
                                         sizes[static_cast<std::size_t>(h)]);
    std::vector<double> taps(a.taps.size());
    // DBP coefficients are the negated forward ones; phase_scale is negative.
    for (std::size_t m = 0; m < taps.size(); ++m) taps[m] = -a.taps[m] / s.phase_scale;
    s.taps.push_back(std::move(taps));
    converged = converged && a.converged;
    imag = std::max(imag, a.imag_ratio);
  }
  // Remove rounding asymmetry so c_0 is exactly even.
  auto& c0 = s.taps.front();
  for (std::size_t m = 0; m < c0.size() / 2; ++m) {
    const double v = 0.5 * (c0[m] + c0[c0.size() - 1 - m]);
    c0[m] = c0[c0.size() - 1 - m] = v;
  }
  s.step_power_scale = start_power_scales(cfg);
  s.geometry_hash = geo.hash();
  s.meta["source"] = "analytic";
  s.meta["grid_converged"] = converged ? "true" : "false";
  s.meta["max_imag_ratio"] = std::to_string(imag);
  return s;
}

CoefficientSet ideal_dbp_coefficients(const DbpConfig& cfg, double baud_rate) {
  cfg.validate();
  if (cfg.n_steps < 1) throw ConfigError("coefficients: n_steps must be >= 1");
  DbpConfig one = cfg;
  one.n_subbands = 1;
  CoefficientSet s = empty_set(one, baud_rate);
  s.n_sb = 1;
  s.taps = {{cfg.link.gamma == 0.0 ? 0.0 : 1.0}};
  const double l = cfg.step_length_km();
  std::vector<double> per(static_cast<std::size_t>(cfg.n_steps));
  double total = 0.0;
  for (int k = 0; k < cfg.n_steps; ++k) {
    per[static_cast<std::size_t>(k)] = profile_integral(cfg.link, k * l, (k + 1) * l);
    total += per[static_cast<std::size_t>(k)];
  }
  const double avg = total / cfg.n_steps;
  s.phase_scale = cfg.link.gamma * avg == 0.0 ? 1.0 : -cfg.link.gamma * avg;
  for (int j = 0; j < cfg.n_steps; ++j)
    s.step_power_scale.push_back(per[static_cast<std::size_t>(cfg.n_steps - 1 - j)] / avg);
  s.meta["source"] = "ideal";
  return s;
}

CoefficientSet default_dbp_coefficients(const DbpConfig& cfg, double baud_rate) {
  cfg.validate();
  if (cfg.variant == Variant::EDC || cfg.n_steps == 0) {
    CoefficientSet s = empty_set(cfg, baud_rate);
    s.taps.assign(static_cast<std::size_t>(s.n_sb), std::vector<double>{0.0});
    return s;
  }
  // "optimized" without a file is the analytic starting point of the optimizer.
  if (cfg.coefficient_source == "file" ||
      (cfg.coefficient_source == "optimized" && !cfg.coefficient_file.empty())) {
    if (cfg.coefficient_file.empty()) throw ConfigError("dbp: coefficient_file is not set");
    return read_coefficients(cfg.coefficient_file);
  }
  return analytic_dbp_coefficients(cfg, baud_rate);
}

}  // namespace fdbp
