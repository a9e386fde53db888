// Acceptance checks. Usage: fdbp_acceptance [criterion ...], where a criterion
// is a number ("7") or a single sub-criterion ("7b").
// Prints one PASS/FAIL/SKIP line per criterion (sub-criteria get a letter).
// Exit status: 0 all pass, 1 any failure, 77 everything skipped.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "fdbp/channel.hpp"
#include "fdbp/complexity.hpp"
#include "fdbp/constants.hpp"
#include "fdbp/dbp.hpp"
#include "fdbp/experiment.hpp"
#include "fdbp/kernel.hpp"
#include "fdbp/metrics.hpp"
#include "fdbp/optimize.hpp"
#include "fdbp/signal.hpp"
#include "oracles.hpp"

using namespace fdbp;

namespace {

// Pinned tolerances.
constexpr double kKernelRelTol = 1e-6;
constexpr double kEvenTol = 1e-10;
constexpr double kLinearityTol = 1e-12;
constexpr double kReversalTol = 1e-10;
constexpr double kVolterraTol = 1e-6;
constexpr double kReductionTol = 1e-12;
constexpr double kLinearSnrDb = 60.0;
constexpr double kIdealSnrDb = 40.0;
constexpr double kNlprTol = 1e-10;
constexpr double kBlockTol = 1e-4;
constexpr double kOrderMarginDb = 0.05;
constexpr double kEstimatorSigmas = 3.0;
constexpr double kFullGainDb = 1.0, kFullGainTolDb = 0.2;
constexpr double kSingleGainDb = 0.34, kSingleGainTolDb = 0.15;

enum class Status { Pass, Fail, Skip };

struct Line {
  std::string id;
  Status status;
  std::string text;
};

std::vector<Line> g_lines;
std::string g_only;  // sub-criterion filter for the running criterion

void report(const std::string& id, Status s, const std::string& name, const std::string& detail) {
  if (!g_only.empty() && id != g_only) return;
  const char* tag = s == Status::Pass ? "PASS" : s == Status::Fail ? "FAIL" : "SKIP";
  std::printf("%s %-3s %s: %s\n", tag, id.c_str(), name.c_str(), detail.c_str());
  std::fflush(stdout);
  g_lines.push_back({id, s, name});
}

void report(const std::string& id, bool ok, const std::string& name, const std::string& detail) {
  report(id, ok ? Status::Pass : Status::Fail, name, detail);
}

template <class... Args>
std::string fmt(const char* f, Args... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

void note(const std::string& s) {
  std::printf("     %s\n", s.c_str());
  std::fflush(stdout);
}

double peak(const std::vector<double>& v) {
  double p = 0.0;
  for (double x : v) p = std::max(p, std::abs(x));
  return p;
}

std::string config_path(const std::string& name) { return std::string(FDBP_CONFIG_DIR) + "/" + name; }

// ---------------------------------------------------------------------------

void complexity_golden() {
  const BlockParams p{16384, 1800, 1.125};
  const double r15 = cb_essfm_cost(p, 15, 2).rm_per_2d;
  const double r1 = cb_essfm_cost(p, 1, 2).rm_per_2d;
  const double r0 = essfm_time_domain_cost(p, 0, 0).rm_per_2d;
  const bool ok = std::lround(r15) == 681 && std::lround(r1) == 75 && std::lround(r0) == 32;
  report("1", ok, "complexity golden values",
         fmt("CB-ESSFM N_st=15 %.3f (681), N_st=1 %.3f (75), EDC %.3f (32) RM/2D", r15, r1, r0));
}

void kernel_oracle() {
  const LinkConfig link;
  std::mt19937_64 rng(2024);
  const double half = 1.125 * 93e9;
  std::uniform_real_distribution<double> f(-half, half);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double worst = 0.0;
  int points = 0, singular = 0;
  for (double len : {26.7, 80.0, 240.0})
    for (int nsp : {1, 2, 3}) {
      StepGeometry g;
      g.length_km = len;
      g.spans_in_step = nsp;
      g.alpha = link.alpha();
      g.beta2 = link.beta2();
      g.gamma = link.gamma;
      const double lsp = g.span_length_km();
      for (int t = 0, done = 0; done < 100; ++t) {
        g.nlpr_offset_km = (u(rng) - 0.5) * len;
        double mu = f(rng), nu = f(rng);
        if (t % 4 == 0) {
          // Within 1e-3 of a removable singularity: b L_sp = k pi, or b = 0.
          const double d = (2.0 * u(rng) - 1.0) * 1e-3;
          const double c = 2 * kPi * kPi * g.beta2;
          const double bmax = std::abs(c) * half * 2.0 * half;
          const int kmax = static_cast<int>(bmax * lsp / kPi);
          const int k = kmax > 0 ? 1 + static_cast<int>(u(rng) * kmax) : 0;
          nu = (0.2 + 0.8 * u(rng)) * half * (u(rng) < 0.5 ? -1.0 : 1.0);
          if (t % 8 == 0 || k == 0) {
            mu = nu * (1.0 + d);  // b -> 0 through mu -> nu
          } else {
            const double b = (k * kPi / lsp) * (1.0 + d);
            mu = nu + b / (c * nu);
            if (std::abs(mu) > half) mu = nu - b / (c * nu);
            if (std::abs(mu) > half) continue;
          }
          ++singular;
        }
        const double b = std::abs(2 * kPi * kPi * g.beta2 * nu * (mu - nu));
        const int n = std::max(2000, static_cast<int>(40.0 * b * len / kPi));
        const cd q = kernel_quadrature(mu, nu, g, n);
        const cd k = kernel_closed_form(mu, nu, g);
        worst = std::max(worst, std::abs(k - q) / std::abs(q));
        ++points;
        ++done;
      }
    }
  report("2", worst <= kKernelRelTol, "kernel closed form vs quadrature",
         fmt("%d points, 100 per (L, N_sp) (%d near singularities), max relative error %.2e (tol %.0e)", points, singular,
             worst, kKernelRelTol));
}

void coefficient_properties() {
  const LinkConfig link;
  const auto g = StepGeometry::from_link(link, 240.0);
  const double rp = 1.125 * 93e9 / 2;

  const auto c0 = analytic_coefficients(g, rp, rp, 0, 30);
  const double p0 = peak(c0.taps);
  double even = 0.0;
  for (int m = 1; m <= 30; ++m) even = std::max(even, std::abs(c0.taps[30 + m] - c0.taps[30 - m]) / p0);

  auto g2 = g;
  g2.gamma *= 2.0;
  g2.input_power_w = 1.5;
  double lin = 0.0;
  for (int h : {0, 1}) {
    const auto a = analytic_coefficients(g, rp, rp, h, 20);
    const auto b = analytic_coefficients(g2, rp, rp, h, 20);
    for (std::size_t i = 0; i < a.taps.size(); ++i)
      lin = std::max(lin, std::abs(b.taps[i] - 3.0 * a.taps[i]) / peak(b.taps));
  }

  const auto fwd = analytic_coefficients_centered(g, rp, rp, 40);
  const auto rev = analytic_coefficients_centered(g, rp, -rp, 40);
  double rv = 0.0;
  for (int m = -40; m <= 40; ++m) rv = std::max(rv, std::abs(fwd.taps[40 + m] - rev.taps[40 - m]) / peak(fwd.taps));

  const auto one = StepGeometry::from_link(link, 80.0);
  const double rate = 60e9;
  const int w = 30;
  const auto d = volterra_oracle(one, w, rate);
  const auto c = analytic_coefficients_centered(one, rate, 0.0, w, 16, 1e-6);
  double dpk = 0.0, diag = 0.0;
  for (int m = -w; m <= w; ++m) dpk = std::max(dpk, std::abs(d.at(m, m)));
  for (int m = -w; m <= w; ++m) diag = std::max(diag, std::abs(d.at(m, m).real() - c.taps[m + w]) / dpk);

  report("3a", even <= kEvenTol, "c_0 even symmetry", fmt("max |c0[m]-c0[-m]|/peak %.2e (tol %.0e)", even, kEvenTol));
  report("3b", lin <= kLinearityTol, "linearity in gamma P",
         fmt("max deviation/peak %.2e (tol %.0e)", lin, kLinearityTol));
  report("3c", rv <= kReversalTol, "time-reversal symmetry",
         fmt("max |c_f[m]-c_-f[-m]|/peak %.2e (tol %.0e)", rv, kReversalTol));
  report("3d", diag <= kVolterraTol, "Volterra diagonal vs c[m]",
         fmt("61x61 window, max deviation/peak %.2e (tol %.0e)", diag, kVolterraTol));
}

// A 3x80 km single-channel 93 GBd link at 6 dBm, noise off.
struct TestSignal {
  WdmConfig wdm;
  LinkConfig link;
  DualPolWaveform dbp;
  DualPolSymbols symbols;
};

TestSignal test_signal(std::size_t ns) {
  TestSignal t;
  t.wdm.num_channels = 1;
  t.wdm.baud_rate = 93e9;
  t.wdm.launch_power_dbm_per_channel = 6.0;
  t.link.num_spans = 3;
  auto [tx, rec] = generate_wdm(t.wdm, ns, 2 * 93e9, 42);
  SimSettings sim;
  sim.step_km = 0.5;
  sim.noise_enabled = false;
  t.dbp = demux_channel(propagate_link(tx, t.link, sim), 0.0, 1.125 * 93e9);
  t.symbols = rec.channels[0];
  return t;
}

DbpConfig dbp_config(Variant v, int steps, int nsb, const LinkConfig& link) {
  DbpConfig c;
  c.variant = v;
  c.n_steps = steps;
  c.n_subbands = nsb;
  c.link = link;
  c.block_size = 4096;
  c.overlap = 1024;
  return c;
}

void reductions() {
  const auto t = test_signal(1 << 14);
  auto cb = dbp_config(Variant::CB_ESSFM, 3, 1, t.link);
  cb.splitting_ratio = 0.5;
  const auto c = analytic_dbp_coefficients(cb, 93e9);
  auto es = cb;
  es.variant = Variant::ESSFM;
  const double d1 = relative_rms_difference(run_dbp(t.dbp, cb, &c), run_dbp(t.dbp, es, &c));

  auto os = dbp_config(Variant::OSSFM, 3, 1, t.link);
  const auto co = ssfm_dbp_coefficients(os, 93e9, 0);
  auto es0 = os;
  es0.variant = Variant::ESSFM;
  const double d2 = relative_rms_difference(run_dbp(t.dbp, es0, &co), run_dbp(t.dbp, os, &co));

  auto z = dbp_config(Variant::CB_ESSFM, 0, 2, t.link);
  const auto edc = dbp_config(Variant::EDC, 0, 1, t.link);
  const double d3 = relative_rms_difference(run_dbp(t.dbp, z, nullptr), run_dbp(t.dbp, edc, nullptr));

  const bool ok = d1 <= kReductionTol && d2 <= kReductionTol && d3 <= kReductionTol;
  report("4", ok, "variant reductions",
         fmt("CB(N_sb=1,rho=.5)-ESSFM %.1e, ESSFM(N_c=0)-OSSFM %.1e, N_st=0-EDC %.1e (tol %.0e)", d1, d2, d3,
             kReductionTol));
}

void round_trips() {
  WdmConfig wdm;
  wdm.num_channels = 1;
  wdm.baud_rate = 93e9;
  const std::size_t ns = 1 << 14;
  {
    LinkConfig link;
    link.gamma = 0.0;
    auto [tx, rec] = generate_wdm(wdm, ns, 2 * 93e9, 7);
    SimSettings sim;
    sim.step_km = link.span_length_km;
    sim.noise_enabled = false;
    const auto rx = demux_channel(propagate_link(tx, link, sim), 0.0, 1.125 * 93e9);
    auto cfg = dbp_config(Variant::EDC, 0, 1, link);
    cfg.block_size = 0;
    const double s = snr(recover_symbols(run_dbp(rx, cfg, nullptr), wdm, ns), rec.channels[0]).snr_db;
    report("5a", s > kLinearSnrDb, "linear round trip (15x80 km, EDC)",
           fmt("SNR %.1f dB (> %.0f dB)", s, kLinearSnrDb));
  }
  {
    // Backpropagation runs at the simulation rate: at 1.125 samples per
    // symbol the spectral broadening aliases and caps the SNR well below 40 dB.
    LinkConfig link;
    wdm.launch_power_dbm_per_channel = 4.0;
    const double rate = default_sim_rate(wdm);
    auto [tx, rec] = generate_wdm(wdm, ns, rate, 8);
    SimSettings sim;
    sim.step_km = 0.1;
    sim.noise_enabled = false;
    const auto rx = propagate_link(tx, link, sim);
    auto cfg = dbp_config(Variant::IDEAL_SSFM, 100 * link.num_spans, 1, link);
    cfg.block_size = 0;
    cfg.oversampling = rate / wdm.baud_rate;
    const auto c = ideal_dbp_coefficients(cfg, wdm.baud_rate);
    const double s = snr(recover_symbols(run_dbp(rx, cfg, &c), wdm, ns), rec.channels[0]).snr_db;
    cfg.variant = Variant::EDC;
    cfg.n_steps = 0;
    const double e = snr(recover_symbols(run_dbp(rx, cfg, nullptr), wdm, ns), rec.channels[0]).snr_db;
    report("5b", s > kIdealSnrDb, "nonlinear round trip (IDEAL_SSFM, 100 steps/span)",
           fmt("15x80 km, 4 dBm, %.0f samples/symbol: SNR %.1f dB (> %.0f dB; EDC %.1f dB)",
               rate / wdm.baud_rate, s, kIdealSnrDb, e));
  }
}

void nlpr_equivalence() {
  std::mt19937 rng(99);
  std::normal_distribution<double> gauss(0.0, 0.03);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  double worst = 0.0;
  for (int nsb : {1, 2, 4, 8}) {
    const std::size_t np = 1024;
    CoefficientSet c;
    c.n_sb = nsb;
    c.phase_scale = -2.3;
    for (int h = 0; h < nsb; ++h) {
      std::vector<double> taps(static_cast<std::size_t>(2 * (12 + 3 * h) + 1));
      for (auto& v : taps) v = unif(rng);
      c.taps.push_back(taps);
    }
    auto& c0 = c.taps[0];
    for (std::size_t m = 0; m < c0.size() / 2; ++m) c0[c0.size() - 1 - m] = c0[m];
    c.step_power_scale = {1.0};
    std::vector<DualPolWaveform> bands(static_cast<std::size_t>(nsb), DualPolWaveform(np, 1e9));
    for (auto& b : bands)
      for (std::size_t k = 0; k < np; ++k) {
        b.x[k] = {gauss(rng), gauss(rng)};
        b.y[k] = {gauss(rng), gauss(rng)};
      }
    const auto ref = oracle::nlpr_direct(bands, c, 0.7);
    nlpr_step(bands, build_mimo_transfer(c, np), 0.7);
    for (int i = 0; i < nsb; ++i) {
      worst = std::max(worst, oracle::rel_rms(bands[i].x, ref[i].x));
      worst = std::max(worst, oracle::rel_rms(bands[i].y, ref[i].y));
    }
  }
  report("6", worst <= kNlprTol, "MIMO NLPR vs direct theta",
         fmt("N_sb 1/2/4/8, max relative RMS %.2e (tol %.0e)", worst, kNlprTol));
}

void block_invariance() {
  const auto t = test_signal(1 << 15);
  const double mem = static_cast<double>(channel_memory_samples(t.link, t.dbp.sample_rate, t.dbp.sample_rate));
  for (int nsb : {1, 2}) {
    auto cfg = dbp_config(Variant::CB_ESSFM, 3, nsb, t.link);
    cfg.overlap = 1800;
    const auto c = analytic_dbp_coefficients(cfg, 93e9);
    cfg.block_size = 8192;
    const auto a = run_dbp(t.dbp, cfg, &c);
    cfg.block_size = 16384;
    const auto b = run_dbp(t.dbp, cfg, &c);
    const double d = relative_rms_difference(a, b);
    report(nsb == 1 ? "7a" : "7b", d <= kBlockTol && cfg.overlap >= 1.5 * mem,
           fmt("block-partition invariance, N_sb=%d", nsb),
           fmt("N=8192 vs 16384, N_ov=1800 (%.1fx memory), relative RMS %.2e (tol %.0e)",
               cfg.overlap / mem, d, kBlockTol));
  }
}

// ---------------------------------------------------------------------------
// Desk-scale system (criteria 8 and 9).

struct Desk {
  ExperimentConfig cfg;
  System sys;
  explicit Desk(ExperimentConfig c) : cfg(c), sys(std::move(c)) {}
  std::map<std::string, double> best_power;
  std::map<std::string, double> best_rho;
  std::map<std::string, double> best_snr;
};

Desk& desk() {
  static Desk d(load_experiment(config_path("desk.json")));
  return d;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

DbpConfig desk_variant(Variant v) {
  DbpConfig c = desk().cfg.dbp;
  c.link = desk().cfg.link;
  c.variant = v;
  if (v == Variant::EDC) c.n_steps = 0;
  if (v != Variant::CB_ESSFM) c.n_subbands = 1;
  // ESSFM and OSSFM are the symmetric-step baselines.
  if (v == Variant::ESSFM || v == Variant::OSSFM) c.splitting_ratio = 0.5;
  return c;
}

// Optimal power over the 5-point grid. Only CB-ESSFM tunes its splitting
// ratio: analytic optimum at the mid power, then refined at the best power.
double desk_best(Variant v) {
  auto& d = desk();
  const std::string name = to_string(v);
  if (d.best_snr.count(name)) return d.best_snr[name];
  const auto t0 = std::chrono::steady_clock::now();
  DbpConfig c = desk_variant(v);
  if (v != Variant::CB_ESSFM) {
    const auto r = d.sys.best_power(c, v == Variant::EDC ? CoefficientMode::Analytic : CoefficientMode::Optimized);
    d.best_power[name] = r.best_x;
    d.best_snr[name] = r.best_snr_db;
  } else {
    // Start the splitting ratio from the analytic optimum at the mid power.
    const auto& grid = d.cfg.sweeps.power_dbm;
    const double mid = grid[grid.size() / 2];
    LmOptions opt = d.cfg.optimizer;
    const auto ar = sweep_splitting_ratio(d.sys.data(mid), c, d.cfg.sweeps.rho, CoefficientMode::Analytic, opt);
    c.splitting_ratio = ar.best_x;
    const auto pr = d.sys.best_power(c, CoefficientMode::Optimized);
    double best_rho = c.splitting_ratio, best = pr.best_snr_db;
    for (double rho : {ar.best_x - 0.1, ar.best_x + 0.1}) {
      if (rho < 0.0 || rho > 1.0) continue;
      DbpConfig r = c;
      r.splitting_ratio = rho;
      const double s = d.sys.snr_db(r, pr.best_x, CoefficientMode::Optimized);
      if (s > best) best = s, best_rho = rho;
    }
    d.best_power[name] = pr.best_x;
    d.best_rho[name] = best_rho;
    d.best_snr[name] = best;
    std::string row;
    for (std::size_t i = 0; i < pr.x.size(); ++i) row += fmt(" %.1f:%.2f", pr.x[i], pr.snr_db[i]);
    note(fmt("%s power sweep (rho %.2f) [dBm:dB]%s", name.c_str(), c.splitting_ratio, row.c_str()));
  }
  note(fmt("%s best %.2f dB at %.1f dBm, rho %.2f (%.0f s)", name.c_str(), d.best_snr[name], d.best_power[name],
           d.best_rho.count(name) ? d.best_rho[name] : 0.0, seconds_since(t0)));
  return d.best_snr[name];
}

void desk_ordering() {
  const double edc = desk_best(Variant::EDC);
  const double os = desk_best(Variant::OSSFM);
  const double es = desk_best(Variant::ESSFM);
  const double cb = desk_best(Variant::CB_ESSFM);
  const bool ordered = cb >= es && es >= os && os >= edc;
  std::string flags;
  if (cb - es < kOrderMarginDb) flags += " CB-ESSFM/ESSFM";
  if (es - os < kOrderMarginDb) flags += " ESSFM/OSSFM";
  if (os - edc < kOrderMarginDb) flags += " OSSFM/EDC";
  report("8", ordered, "desk-scale ordering CB-ESSFM >= ESSFM >= OSSFM >= EDC",
         fmt("%.2f >= %.2f >= %.2f >= %.2f dB", cb, es, os, edc) +
             (flags.empty() ? std::string(", all margins >= 0.05 dB") : ", flagged (margin < 0.05 dB):" + flags));
}

void desk_rho_shape() {
  auto& d = desk();
  desk_best(Variant::CB_ESSFM);
  const double p = d.best_power["CB_ESSFM"];
  const auto& data = d.sys.data(p);
  DbpConfig c = desk_variant(Variant::CB_ESSFM);
  const std::vector<double> grid = {0.0, 0.1, 0.15, 0.2, 0.5, 1.0};
  const auto t0 = std::chrono::steady_clock::now();
  const auto r = sweep_splitting_ratio(data, c, grid, CoefficientMode::Optimized, d.cfg.optimizer);
  std::string row;
  for (std::size_t i = 0; i < r.x.size(); ++i) row += fmt(" %.2f:%.2f", r.x[i], r.snr_db[i]);
  note(fmt("CB-ESSFM rho sweep at %.1f dBm, optimized [rho:dB]%s (%.0f s)", p, row.c_str(), seconds_since(t0)));
  const double s0 = r.snr_db[0], s5 = r.snr_db[4], s1 = r.snr_db[5];
  const double mid = *std::max_element(r.snr_db.begin() + 1, r.snr_db.begin() + 4);
  report("9a", mid > s5, "splitting ratio 0.1-0.2 beats 0.5", fmt("%.2f dB vs %.2f dB", mid, s5));
  // Standard deviation of an SNR estimate from N independent 2D error samples.
  const double n2d = 2.0 * static_cast<double>(data.valid_tx.size());
  const double sigma = 10.0 / std::log(10.0) / std::sqrt(n2d);
  report("9b", std::abs(s0 - s1) <= kEstimatorSigmas * sigma, "rho = 0 and rho = 1 equal to estimator noise",
         fmt("%.3f dB vs %.3f dB, |diff| %.3f dB (tol %.0f sigma = %.3f dB)", s0, s1, std::abs(s0 - s1),
             kEstimatorSigmas, kEstimatorSigmas * sigma));
}

// ---------------------------------------------------------------------------

void full_scale() {
  const char* env = std::getenv("FDBP_FULL_SCALE");
  if (!env || std::string(env) != "1") {
    report("10", Status::Skip, "full-scale reproduction", "optional; set FDBP_FULL_SCALE=1 to run (hours)");
    return;
  }
  auto cfg = load_experiment(config_path("full_scale.json"));
  System sys(cfg);
  const auto t0 = std::chrono::steady_clock::now();
  auto best = [&](Variant v, int steps) {
    DbpConfig c = cfg.dbp;
    c.link = cfg.link;
    c.variant = v;
    c.n_steps = v == Variant::EDC ? 0 : steps;
    const auto r = sys.best_power(c, v == Variant::EDC ? CoefficientMode::Analytic : CoefficientMode::Optimized);
    note(fmt("%s N_st=%d: %.2f dB at %.1f dBm (%.0f s)", to_string(v).c_str(), c.n_steps, r.best_snr_db, r.best_x,
             seconds_since(t0)));
    return r.best_snr_db;
  };
  const double edc = best(Variant::EDC, 0);
  const double g15 = best(Variant::CB_ESSFM, 15) - edc;
  const double g1 = best(Variant::CB_ESSFM, 1) - edc;
  report("10a", std::abs(g15 - kFullGainDb) <= kFullGainTolDb, "full scale, 15-step CB-ESSFM gain over EDC",
         fmt("%.2f dB (%.2f +- %.2f)", g15, kFullGainDb, kFullGainTolDb));
  report("10b", std::abs(g1 - kSingleGainDb) <= kSingleGainTolDb, "full scale, single-step CB-ESSFM gain over EDC",
         fmt("%.2f dB (%.2f +- %.2f)", g1, kSingleGainDb, kSingleGainTolDb));
}

const std::map<int, std::function<void()>>& criteria() {
  static const std::map<int, std::function<void()>> m = {
      {1, complexity_golden}, {2, kernel_oracle},    {3, coefficient_properties}, {4, reductions},
      {5, round_trips},       {6, nlpr_equivalence}, {7, block_invariance},       {8, desk_ordering},
      {9, desk_rho_shape},    {10, full_scale}};
  return m;
}

}  // namespace

int main(int argc, char** argv) {
  std::vector<std::pair<int, std::string>> ids;
  for (int i = 1; i < argc; ++i) {
    const std::string a = argv[i];
    const int n = std::atoi(a.c_str());
    ids.emplace_back(n, a == std::to_string(n) ? std::string() : a);
  }
  if (ids.empty())
    for (const auto& [k, _] : criteria()) ids.emplace_back(k, std::string());
  for (const auto& [id, only] : ids) {
    const auto it = criteria().find(id);
    if (it == criteria().end()) {
      std::fprintf(stderr, "unknown criterion %d\n", id);
      return 2;
    }
    const auto t0 = std::chrono::steady_clock::now();
    g_only = only;
    try {
      it->second();
    } catch (const std::exception& e) {
      g_only.clear();
      report(std::to_string(id), Status::Fail, "criterion threw", e.what());
    }
    g_only.clear();
    note(fmt("criterion %d took %.1f s", id, seconds_since(t0)));
  }
  bool any_fail = false, all_skip = true;
  for (const auto& l : g_lines) {
    any_fail = any_fail || l.status == Status::Fail;
    all_skip = all_skip && l.status == Status::Skip;
  }
  if (any_fail) return 1;
  return all_skip && !g_lines.empty() ? 77 : 0;
}
