#include "fdbp/channel.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <vector>

#include "fdbp/constants.hpp"
#include "fdbp/error.hpp"
#include "fdbp/fft.hpp"

namespace fdbp {

void LinkConfig::validate() const {
  if (num_spans < 1) throw ConfigError("link: num_spans must be >= 1");
  if (!(span_length_km > 0.0)) throw ConfigError("link: span_length_km must be positive");
  if (alpha_db_per_km < 0.0) throw ConfigError("link: alpha must be non-negative");
  if (gamma < 0.0) throw ConfigError("link: gamma must be non-negative");
  if (!(reference_wavelength_nm > 0.0)) throw ConfigError("link: wavelength must be positive");
}

double LinkConfig::alpha() const { return alpha_from_db(alpha_db_per_km); }

double LinkConfig::beta2() const {
  return beta2_from_dispersion(dispersion_ps_nm_km, reference_wavelength_nm);
}

double LinkConfig::span_effective_length_km() const {
  const double a = alpha();
  if (a * span_length_km < 1e-12) return span_length_km;
  return -std::expm1(-a * span_length_km) / a;
}

double LinkConfig::power_profile(double z_km) const {
  const double zeta = z_km - std::floor(z_km / span_length_km) * span_length_km;
  return std::exp(-alpha() * zeta);
}

void SimSettings::validate() const {
  if (!(step_km > 0.0)) throw ConfigError("sim: step_km must be positive");
  if (max_phase_rad < 0.0) throw ConfigError("sim: max_phase_rad must be non-negative");
}

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Symmetric split-step integrator over one span, working in the frequency
// domain between nonlinear steps. sign = -1 applies the exact inverse.
class SpanStepper {
public:
  SpanStepper(const DualPolWaveform& w, const LinkConfig& link, double sign)
      : n_(w.size()), beta2_(link.beta2()), alpha_(link.alpha()), gamma_(link.gamma), sign_(sign),
        f2_(n_) {
    const double df = w.sample_rate / static_cast<double>(n_);
    for (std::size_t k = 0; k < n_; ++k) {
      const double f = fft::signed_bin(k, n_) * df;
      f2_[k] = f * f;
    }
  }

  void linear(cvec& sx, cvec& sy, double d) {
    if (d == 0.0) return;
    const auto& h = transfer(d);
    for (std::size_t k = 0; k < n_; ++k) {
      sx[k] *= h[k];
      sy[k] *= h[k];
    }
  }

  // Returns the peak power seen by the step.
  double nonlinear(cvec& x, cvec& y, double h) const {
    if (gamma_ == 0.0) return peak(x, y);
    const double leff = alpha_ * h < 1e-12 ? h : 2.0 * std::sinh(0.5 * alpha_ * h) / alpha_;
    const double k = -sign_ * gamma_ * leff;
    double pk = 0.0;
    for (std::size_t i = 0; i < n_; ++i) {
      const double p = std::norm(x[i]) + std::norm(y[i]);
      pk = std::max(pk, p);
      const cd rot = std::polar(1.0, k * p);
      x[i] *= rot;
      y[i] *= rot;
    }
    return pk;
  }

  static double peak(const cvec& x, const cvec& y) {
    double pk = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) pk = std::max(pk, std::norm(x[i]) + std::norm(y[i]));
    return pk;
  }

private:
  const cvec& transfer(double d) {
    auto it = cache_.find(d);
    if (it != cache_.end()) return it->second;
    if (cache_.size() > 8) cache_.clear();
    cvec h(n_);
    const double amp = std::exp(-sign_ * 0.5 * alpha_ * d);
    for (std::size_t k = 0; k < n_; ++k)
      h[k] = std::polar(amp, -sign_ * 2.0 * kPi * kPi * beta2_ * f2_[k] * d);
    return cache_.emplace(d, std::move(h)).first->second;
  }

  std::size_t n_;
  double beta2_, alpha_, gamma_, sign_;
  std::vector<double> f2_;
  std::map<double, cvec> cache_;
};

}  // namespace

DualPolWaveform propagate_span(const DualPolWaveform& w, const LinkConfig& link,
                               const SimSettings& sim, bool reverse) {
  w.validate();
  link.validate();
  sim.validate();
  const double len = link.span_length_km;
  const std::size_t n = w.size();
  SpanStepper stepper(w, link, reverse ? -1.0 : 1.0);

  DualPolWaveform out = w;
  cvec sx(n), sy(n);

  if (reverse || sim.max_phase_rad <= 0.0) {
    if (reverse && sim.max_phase_rad > 0.0)
      throw ConfigError("propagate_span: reverse propagation requires fixed steps");
    const int steps = std::max(1, static_cast<int>(std::ceil(len / sim.step_km - 1e-9)));
    const double h = len / steps;
    fft::forward(out.x, sx);
    fft::forward(out.y, sy);
    stepper.linear(sx, sy, 0.5 * h);
    for (int i = 0; i < steps; ++i) {
      fft::inverse(sx, out.x);
      fft::inverse(sy, out.y);
      stepper.nonlinear(out.x, out.y, h);
      fft::forward(out.x, sx);
      fft::forward(out.y, sy);
      stepper.linear(sx, sy, i + 1 < steps ? h : 0.5 * h);
    }
  } else {
    auto next_step = [&](double peak_power, double remaining) {
      double h = sim.step_km;
      if (link.gamma > 0.0 && peak_power > 0.0)
        h = std::min(h, sim.max_phase_rad / (link.gamma * peak_power));
      h = std::max(h, 1e-6 * len);
      // Avoid a sliver at the end of the span.
      if (remaining - h < 0.05 * h) h = remaining;
      return std::min(h, remaining);
    };
    double remaining = len;
    double h = next_step(SpanStepper::peak(out.x, out.y), remaining);
    fft::forward(out.x, sx);
    fft::forward(out.y, sy);
    stepper.linear(sx, sy, 0.5 * h);
    while (remaining > 0.0) {
      fft::inverse(sx, out.x);
      fft::inverse(sy, out.y);
      const double pk = stepper.nonlinear(out.x, out.y, h);
      fft::forward(out.x, sx);
      fft::forward(out.y, sy);
      remaining -= h;
      if (remaining <= 1e-12 * len) {
        stepper.linear(sx, sy, 0.5 * h);
        break;
      }
      const double attenuation = std::exp(-link.alpha() * h);
      const double h_next = next_step(pk * attenuation, remaining);
      stepper.linear(sx, sy, 0.5 * (h + h_next));
      h = h_next;
    }
  }
  fft::inverse(sx, out.x);
  fft::inverse(sy, out.y);
  return out;
}

double ase_psd_per_pol(double gain_db, double nf_db, double wavelength_nm) {
  const double g = db_to_linear(gain_db);
  const double f = db_to_linear(nf_db);
  const double nu = kSpeedOfLight / (wavelength_nm * 1e-9);
  return 0.5 * kPlanck * nu * std::max(0.0, g * f - 1.0);
}

DualPolWaveform edfa(const DualPolWaveform& w, double gain_db, double nf_db, std::uint64_t seed,
                     bool noise_enabled, double wavelength_nm) {
  w.validate();
  if (gain_db < 0.0) throw ConfigError("edfa: gain must be non-negative");
  DualPolWaveform out = w;
  const double field_gain = std::pow(10.0, gain_db / 20.0);
  for (std::size_t i = 0; i < out.size(); ++i) {
    out.x[i] *= field_gain;
    out.y[i] *= field_gain;
  }
  if (noise_enabled) {
    const double var = ase_psd_per_pol(gain_db, nf_db, wavelength_nm) * w.sample_rate;
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, std::sqrt(0.5 * var));
    for (std::size_t i = 0; i < out.size(); ++i) {
      out.x[i] += cd(gauss(rng), gauss(rng));
      out.y[i] += cd(gauss(rng), gauss(rng));
    }
  }
  return out;
}

DualPolWaveform propagate_link(const DualPolWaveform& w, const LinkConfig& link,
                               const SimSettings& sim, const SpanCallback& on_span,
                               int first_span) {
  link.validate();
  if (first_span < 0 || first_span > link.num_spans)
    throw ConfigError("propagate_link: first_span out of range");
  DualPolWaveform cur = w;
  for (int s = first_span; s < link.num_spans; ++s) {
    cur = propagate_span(cur, link, sim);
    const std::uint64_t seed = splitmix64(sim.noise_seed ^ splitmix64(static_cast<std::uint64_t>(s) + 1));
    cur = edfa(cur, link.span_loss_db(), link.edfa_noise_figure_db, seed, sim.noise_enabled,
               link.reference_wavelength_nm);
    cur.validate();
    if (on_span) on_span(s, cur);
  }
  return cur;
}

}  // namespace fdbp
