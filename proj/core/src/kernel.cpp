#include "fdbp/kernel.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <array>
#include <cmath>
#include <cstring>

#include "fdbp/constants.hpp"
#include "fdbp/error.hpp"

namespace fdbp {

namespace {

constexpr int kPanelOrder = 10;

struct GaussLegendre {
  std::array<double, kPanelOrder> x{};
  std::array<double, kPanelOrder> w{};
};

// Nodes and weights on [-1, 1] by Newton iteration on P_n.
const GaussLegendre& gauss_legendre() {
  static const GaussLegendre rule = [] {
    GaussLegendre r;
    const int n = kPanelOrder;
    for (int i = 0; i < n; ++i) {
      double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
      double dp = 0.0;
      for (int it = 0; it < 100; ++it) {
        double p0 = 1.0, p1 = x;
        for (int k = 2; k <= n; ++k) {
          const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
          p0 = p1;
          p1 = p2;
        }
        dp = n * (x * p1 - p0) / (x * x - 1.0);
        const double dx = p1 / dp;
        x -= dx;
        if (std::abs(dx) < 1e-16) break;
      }
      r.x[i] = x;
      r.w[i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    return r;
  }();
  return rule;
}

double beat(double mu, double nu, double beta2) { return 2.0 * kPi * kPi * beta2 * nu * (mu - nu); }

// sin(n x) / sin(x) through the Chebyshev recurrence U_{n-1}(cos x).
double dirichlet_ratio(int n, double x) {
  const double c = std::cos(x);
  double u_prev = 1.0;
  if (n == 1) return u_prev;
  double u = 2.0 * c;
  for (int k = 2; k < n; ++k) {
    const double next = 2.0 * c * u - u_prev;
    u_prev = u;
    u = next;
  }
  return u;
}

// sinh(s l) / s, continuous through s = 0.
cd sinh_over(cd s, double l) {
  const cd x = s * l;
  if (std::abs(x) < 1e-4) {
    const cd x2 = x * x;
    return l * (1.0 + x2 / 6.0 + x2 * x2 / 120.0);
  }
  return std::sinh(x) / s;
}

std::uint64_t fnv1a(const void* data, std::size_t n, std::uint64_t h) {
  const auto* p = static_cast<const unsigned char*>(data);
  for (std::size_t i = 0; i < n; ++i) {
    h ^= p[i];
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace

void StepGeometry::validate() const {
  if (!(length_km > 0.0)) throw ConfigError("step geometry: length must be positive");
  if (spans_in_step < 1) throw ConfigError("step geometry: spans_in_step must be >= 1");
  if (alpha < 0.0) throw ConfigError("step geometry: alpha must be non-negative");
  if (!std::isfinite(beta2) || !std::isfinite(gamma) || !std::isfinite(input_power_w))
    throw ConfigError("step geometry: non-finite parameter");
}

double StepGeometry::effective_length_km() const {
  const double l = span_length_km();
  if (alpha * l < 1e-12) return length_km;
  return spans_in_step * (-std::expm1(-alpha * l) / alpha);
}

std::uint64_t StepGeometry::hash() const {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (double v : {length_km, alpha, beta2, gamma, input_power_w, nlpr_offset_km})
    h = fnv1a(&v, sizeof v, h);
  return fnv1a(&spans_in_step, sizeof spans_in_step, h);
}

StepGeometry StepGeometry::from_link(const LinkConfig& link, double step_length_km,
                                     double input_power_w) {
  link.validate();
  if (!(step_length_km > 0.0)) throw ConfigError("step length must be positive");
  StepGeometry g;
  g.alpha = link.alpha();
  g.beta2 = link.beta2();
  g.gamma = link.gamma;
  g.input_power_w = input_power_w;
  g.length_km = step_length_km;
  const double ratio = step_length_km / link.span_length_km;
  if (ratio >= 1.0 - 1e-9) {
    const double k = std::round(ratio);
    if (std::abs(ratio - k) > 1e-9 * ratio)
      throw ConfigError("step must contain a whole number of spans");
    g.spans_in_step = static_cast<int>(k);
  } else {
    const double k = std::round(1.0 / ratio);
    if (std::abs(1.0 / ratio - k) > 1e-9 * k)
      throw ConfigError("fractional step must divide the span length");
    g.spans_in_step = 1;
  }
  return g;
}

cd kernel_closed_form(double mu, double nu, const StepGeometry& geo) {
  const double b = beat(mu, nu, geo.beta2);
  const double a = 0.5 * geo.alpha;
  const double lsp = geo.span_length_km();
  const cd s(a, b);
  const cd k = geo.gamma * std::exp(-a * lsp) * sinh_over(s, lsp) *
               dirichlet_ratio(geo.spans_in_step, b * lsp);
  if (geo.nlpr_offset_km == 0.0) return k;
  return k * std::polar(1.0, 2.0 * b * geo.nlpr_offset_km);
}

cd kernel_quadrature(double mu, double nu, const StepGeometry& geo, int num_points) {
  geo.validate();
  if (geo.gamma == 0.0) return 0.0;
  const auto& gl = gauss_legendre();
  const int nsp = geo.spans_in_step;
  const double lsp = geo.span_length_km();
  const int panels = std::max(1, (num_points + kPanelOrder * nsp - 1) / (kPanelOrder * nsp));
  const double hp = lsp / panels;
  const double c = 2.0 * kPi * kPi * geo.beta2;
  const double z0 = geo.nlpr_offset_km;
  cd sum = 0.0;
  for (int s = 0; s < nsp; ++s) {
    const double span_start = -0.5 * geo.length_km + s * lsp;
    for (int p = 0; p < panels; ++p) {
      const double mid = (p + 0.5) * hp;
      cd panel = 0.0;
      for (int i = 0; i < kPanelOrder; ++i) {
        const double zeta = mid + 0.5 * hp * gl.x[i];
        const double dz = span_start + zeta - z0;
        const cd hmu = std::polar(1.0, -c * mu * mu * dz);
        const cd hnu = std::polar(1.0, +c * nu * nu * dz);
        const cd hdiff = std::polar(1.0, +c * (mu - nu) * (mu - nu) * dz);
        panel += gl.w[i] * std::exp(-geo.alpha * zeta) * hmu * hnu * hdiff;
      }
      sum += 0.5 * hp * panel;
    }
  }
  return geo.gamma * sum;
}

int coefficient_memory(int h, double step_length_km, double beta2, double n_oversample,
                       double baud_rate, int n_sb, double safety) {
  if (h < 0 || n_sb < 1 || h >= n_sb) throw ConfigError("coefficient_memory: h out of range");
  const double r = n_oversample * baud_rate / n_sb;
  const double x = kPi * step_length_km * std::abs(beta2) * r * r * (h + 1) * safety;
  const int n_c = static_cast<int>(std::ceil((x - 1.0) / 2.0 - 1e-12));
  return std::max(1, n_c);
}

namespace {

std::vector<cd> coefficients_on_grid(const StepGeometry& geo, double rate, double center, int n_c,
                                     int m_grid) {
  const int m = m_grid;
  std::vector<cd> diag(2 * m - 1, 0.0);  // diag[d + m - 1] = sum_{p - q = d} K_pq
  const double step = rate / m;
  std::vector<double> f(m);
  for (int p = 0; p < m; ++p) f[p] = center - 0.5 * rate + (p + 0.5) * step;
  for (int p = 0; p < m; ++p)
    for (int q = 0; q < m; ++q) diag[p - q + m - 1] += kernel_closed_form(f[p], f[q], geo);

  std::vector<cd> c(2 * n_c + 1);
  const double scale = geo.input_power_w / (static_cast<double>(m) * m);
  for (int k = -n_c; k <= n_c; ++k) {
    cd acc = 0.0;
    for (int d = -(m - 1); d <= m - 1; ++d)
      acc += diag[d + m - 1] * std::polar(1.0, 2.0 * kPi * d * k / m);
    c[k + n_c] = scale * acc;
  }
  return c;
}

}  // namespace

AnalyticCoefficients analytic_coefficients_centered(const StepGeometry& geo, double subband_rate,
                                                    double center, int n_c, int grid_oversample,
                                                    double tolerance) {
  geo.validate();
  if (n_c < 0) throw ConfigError("analytic_coefficients: negative N_c");
  if (!(subband_rate > 0.0)) throw ConfigError("analytic_coefficients: rate must be positive");
  AnalyticCoefficients out;
  out.taps.assign(2 * n_c + 1, 0.0);
  if (geo.gamma == 0.0 || geo.input_power_w == 0.0) {
    out.converged = true;
    return out;
  }
  const int m = std::max(grid_oversample, 2) * (2 * n_c + 1);
  const auto coarse = coefficients_on_grid(geo, subband_rate, center, n_c, m);
  const auto fine = coefficients_on_grid(geo, subband_rate, center, n_c, 2 * m);
  out.grid_points = 2 * m;

  double peak = 0.0, peak_imag = 0.0, change = 0.0;
  std::vector<cd> extrapolated(fine.size());
  for (std::size_t i = 0; i < fine.size(); ++i) {
    extrapolated[i] = (4.0 * fine[i] - coarse[i]) / 3.0;
    change = std::max(change, std::abs(extrapolated[i] - fine[i]));
    peak = std::max(peak, std::abs(extrapolated[i].real()));
    peak_imag = std::max(peak_imag, std::abs(extrapolated[i].imag()));
  }
  for (std::size_t i = 0; i < fine.size(); ++i) out.taps[i] = extrapolated[i].real();
  out.imag_ratio = peak > 0.0 ? peak_imag / peak : 0.0;
  out.grid_change = peak > 0.0 ? change / peak : 0.0;
  out.converged = out.grid_change < tolerance;
  return out;
}

AnalyticCoefficients analytic_coefficients(const StepGeometry& geo, double subband_rate,
                                           double subband_spacing, int h, int n_c,
                                           int grid_oversample, double tolerance) {
  return analytic_coefficients_centered(geo, subband_rate, h * subband_spacing, n_c,
                                        grid_oversample, tolerance);
}

AnalyticCoefficients analytic_coefficients_pair(const StepGeometry& geo, int n_sb,
                                                double subband_rate, double subband_spacing,
                                                int i, int l, int n_c) {
  if (n_sb < 1 || i < 0 || l < 0 || i >= n_sb || l >= n_sb)
    throw ConfigError("analytic_coefficients_pair: subband index out of range");
  const double mid = 0.5 * (n_sb - 1);
  const double fi = (i - mid) * subband_spacing;
  const double fl = (l - mid) * subband_spacing;
  return analytic_coefficients_centered(geo, subband_rate, fl - fi, n_c);
}

VolterraKernelOracle volterra_oracle(const StepGeometry& geo, int window, double rate,
                                     double center, int panels) {
  geo.validate();
  if (window < 0 || window > kMaxOracleWindow)
    throw ConfigError("volterra_oracle: window too large for dense evaluation");
  if (panels < 1) throw ConfigError("volterra_oracle: panels must be >= 1");
  const auto& gl = gauss_legendre();
  const int n = panels * kPanelOrder;
  const int w = 2 * window + 1;
  const double hp = rate / panels;

  std::vector<double> f(n), wt(n);
  for (int p = 0; p < panels; ++p)
    for (int i = 0; i < kPanelOrder; ++i) {
      f[p * kPanelOrder + i] = center - 0.5 * rate + (p + 0.5) * hp + 0.5 * hp * gl.x[i];
      wt[p * kPanelOrder + i] = 0.5 * hp * gl.w[i] / rate;
    }

  Eigen::MatrixXcd k(n, n), a(w, n), b(n, w);
  for (int p = 0; p < n; ++p)
    for (int q = 0; q < n; ++q) k(p, q) = kernel_closed_form(f[p], f[q], geo);
  for (int m = -window; m <= window; ++m)
    for (int p = 0; p < n; ++p) {
      a(m + window, p) = wt[p] * std::polar(1.0, 2.0 * kPi * f[p] * m / rate);
      b(p, m + window) = wt[p] * std::polar(1.0, -2.0 * kPi * f[p] * m / rate);
    }
  const Eigen::MatrixXcd dm = geo.input_power_w * (a * (k * b));

  VolterraKernelOracle out;
  out.window = window;
  out.d.resize(static_cast<std::size_t>(w) * w);
  for (int r = 0; r < w; ++r)
    for (int c = 0; c < w; ++c) out.d[static_cast<std::size_t>(r) * w + c] = dm(r, c);
  return out;
}

}  // namespace fdbp
