#include "fdbp/optimize.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <thread>

#include "fdbp/error.hpp"
#include "fdbp/metrics.hpp"

namespace fdbp {

DualPolSymbols dbp_symbols(const DualPolWaveform& rx, const WdmConfig& wdm, const DbpConfig& cfg,
                           const CoefficientSet& coeffs, std::size_t num_symbols) {
  const auto out = run_dbp(rx, cfg, &coeffs);
  return recover_symbols(out, wdm, num_symbols);
}

double dbp_mse(const DualPolWaveform& rx, const DualPolSymbols& tx, const WdmConfig& wdm,
               const DbpConfig& cfg, const CoefficientSet& coeffs) {
  return mse(dbp_symbols(rx, wdm, cfg, coeffs, tx.size()), tx);
}

double dbp_snr_db(const DualPolWaveform& rx, const DualPolSymbols& tx, const WdmConfig& wdm,
                  const DbpConfig& cfg, const CoefficientSet& coeffs) {
  return snr(dbp_symbols(rx, wdm, cfg, coeffs, tx.size()), tx).snr_db;
}

namespace {

double sum_squares(const std::vector<double>& r) {
  double s = 0.0;
  for (double v : r) s += v * v;
  return s;
}

}  // namespace

LmResult levenberg_marquardt(const ResidualFn& residual, std::vector<double> p,
                             const LmOptions& opt) {
  const std::size_t np = p.size();
  LmResult res;
  std::vector<double> r = residual(p);
  double cost = sum_squares(r);
  const std::size_t nr = r.size();
  double lambda = opt.initial_damping;

  Eigen::MatrixXd jac(static_cast<Eigen::Index>(nr), static_cast<Eigen::Index>(np));
  for (int it = 0; it < opt.max_iterations && np > 0; ++it) {
    res.iterations = it + 1;
    auto column = [&](std::size_t j) {
      std::vector<double> q = p;
      const double h = opt.relative_step * std::max(std::abs(p[j]), 1e-2);
      q[j] += h;
      const auto rq = residual(q);
      if (rq.size() != nr) throw ShapeError("levenberg_marquardt: residual length changed");
      for (std::size_t i = 0; i < nr; ++i)
        jac(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = (rq[i] - r[i]) / h;
    };
    const std::size_t nt = std::clamp<std::size_t>(static_cast<std::size_t>(std::max(1, opt.threads)), 1, np);
    if (nt == 1) {
      for (std::size_t j = 0; j < np; ++j) column(j);
    } else {
      std::vector<std::thread> pool;
      for (std::size_t t = 0; t < nt; ++t)
        pool.emplace_back([&, t] {
          for (std::size_t j = t; j < np; j += nt) column(j);
        });
      for (auto& th : pool) th.join();
    }

    const Eigen::Map<const Eigen::VectorXd> rv(r.data(), static_cast<Eigen::Index>(nr));
    const Eigen::MatrixXd a = jac.transpose() * jac;
    const Eigen::VectorXd g = jac.transpose() * rv;
    bool accepted = false;
    for (int tries = 0; tries < 12 && !accepted; ++tries) {
      Eigen::MatrixXd damped = a;
      for (Eigen::Index k = 0; k < damped.rows(); ++k)
        damped(k, k) += lambda * std::max(a(k, k), 1e-12);
      const Eigen::VectorXd step = damped.ldlt().solve(-g);
      std::vector<double> q = p;
      for (std::size_t j = 0; j < np; ++j) q[j] += step(static_cast<Eigen::Index>(j));
      auto rq = residual(q);
      const double cq = sum_squares(rq);
      if (std::isfinite(cq) && cq < cost) {
        const double rel = (cost - cq) / cost;
        p = std::move(q);
        r = std::move(rq);
        cost = cq;
        lambda = std::max(lambda / 3.0, 1e-12);
        accepted = true;
        if (rel < opt.tolerance) it = opt.max_iterations;
      } else {
        lambda *= 4.0;
      }
    }
    if (!accepted) break;
  }
  res.params = std::move(p);
  res.cost = cost;
  return res;
}

namespace {

// Real residual vector of the symbol error after mean-phase removal.
std::vector<double> symbol_residual(const DualPolWaveform& rx, const DualPolSymbols& tx,
                                    const WdmConfig& wdm, const DbpConfig& cfg,
                                    const CoefficientSet& coeffs) {
  const auto rot = remove_mean_phase(dbp_symbols(rx, wdm, cfg, coeffs, tx.size()), tx);
  const double s = 1.0 / std::sqrt(static_cast<double>(tx.size()));
  std::vector<double> r;
  r.reserve(4 * tx.size());
  for (std::size_t k = 0; k < tx.size(); ++k) {
    const cd ex = rot.x[k] - tx.x[k], ey = rot.y[k] - tx.y[k];
    r.push_back(s * ex.real());
    r.push_back(s * ex.imag());
    r.push_back(s * ey.real());
    r.push_back(s * ey.imag());
  }
  return r;
}

std::vector<double> pack(const CoefficientSet& c, int h) {
  const auto& v = c.taps[static_cast<std::size_t>(h)];
  if (h == 0) return {v.begin() + static_cast<long>(v.size() / 2), v.end()};
  return v;
}

void unpack(CoefficientSet& c, int h, const std::vector<double>& p) {
  auto& v = c.taps[static_cast<std::size_t>(h)];
  if (h != 0) {
    v = p;
    return;
  }
  const std::size_t nc = v.size() / 2;
  for (std::size_t m = 0; m <= nc; ++m) v[nc + m] = v[nc - m] = p[m];
}

}  // namespace

OptimizeResult optimize_coefficients(const TrainingSet& data, const DbpConfig& cfg,
                                     const CoefficientSet& init, const LmOptions& opt) {
  init.validate();
  if (cfg.variant == Variant::EDC || cfg.n_steps == 0)
    throw ConfigError("optimize: nothing to optimize for EDC");
  OptimizeResult out;
  out.init_valid_mse = dbp_mse(data.valid_rx, data.valid_tx, data.wdm, cfg, init);

  CoefficientSet cur = init;
  for (int h = 1; h < cur.n_sb; ++h)
    std::fill(cur.taps[static_cast<std::size_t>(h)].begin(), cur.taps[static_cast<std::size_t>(h)].end(), 0.0);

  for (int h = 0; h < cur.n_sb; ++h) {
    cur.taps[static_cast<std::size_t>(h)] = init.taps[static_cast<std::size_t>(h)];
    auto fn = [&, h](const std::vector<double>& p) {
      CoefficientSet trial = cur;
      unpack(trial, h, p);
      return symbol_residual(data.train_rx, data.train_tx, data.wdm, cfg, trial);
    };
    const auto lm = levenberg_marquardt(fn, pack(cur, h), opt);
    unpack(cur, h, lm.params);
    out.iterations += lm.iterations;
  }

  cur.meta["source"] = "optimized";
  cur.meta["solver"] = "levenberg-marquardt, forward-difference jacobian";
  cur.meta["max_iterations"] = std::to_string(opt.max_iterations);
  cur.meta["relative_step"] = std::to_string(opt.relative_step);
  const double valid = dbp_mse(data.valid_rx, data.valid_tx, data.wdm, cfg, cur);
  if (valid <= out.init_valid_mse) {
    out.coeffs = std::move(cur);
    out.valid_mse = valid;
    out.improved = true;
  } else {
    out.coeffs = init;
    out.coeffs.meta["optimizer"] = "no improvement";
    out.valid_mse = out.init_valid_mse;
    out.improved = false;
  }
  return out;
}

void finalize_sweep(SweepResult& r) {
  if (r.snr_db.empty()) return;
  const auto it = std::max_element(r.snr_db.begin(), r.snr_db.end());
  const auto i = static_cast<std::size_t>(it - r.snr_db.begin());
  r.best_x = r.x[i];
  r.best_snr_db = r.snr_db[i];
}

namespace {

double evaluate(const TrainingSet& data, const DbpConfig& cfg, CoefficientMode mode,
                const LmOptions& opt) {
  if (cfg.variant == Variant::EDC || cfg.n_steps == 0) {
    const auto c = default_dbp_coefficients(cfg, data.wdm.baud_rate);
    return dbp_snr_db(data.valid_rx, data.valid_tx, data.wdm, cfg, c);
  }
  auto c = analytic_dbp_coefficients(cfg, data.wdm.baud_rate);
  if (mode == CoefficientMode::Optimized) c = optimize_coefficients(data, cfg, c, opt).coeffs;
  return dbp_snr_db(data.valid_rx, data.valid_tx, data.wdm, cfg, c);
}

}  // namespace

SweepResult sweep_splitting_ratio(const TrainingSet& data, const DbpConfig& cfg,
                                  const std::vector<double>& rho_grid, CoefficientMode mode,
                                  const LmOptions& opt) {
  SweepResult r;
  for (double rho : rho_grid) {
    DbpConfig c = cfg;
    c.splitting_ratio = rho;
    r.x.push_back(rho);
    r.snr_db.push_back(evaluate(data, c, mode, opt));
  }
  finalize_sweep(r);
  return r;
}

SweepResult sweep_launch_power(const std::vector<double>& power_grid_dbm, const DatasetFn& data,
                               const DbpConfig& cfg, CoefficientMode mode, const LmOptions& opt) {
  SweepResult r;
  for (double p : power_grid_dbm) {
    r.x.push_back(p);
    r.snr_db.push_back(evaluate(data(p), cfg, mode, opt));
  }
  finalize_sweep(r);
  return r;
}

}  // namespace fdbp
