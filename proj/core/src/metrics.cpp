#include "fdbp/metrics.hpp"

#include <cmath>

#include "fdbp/error.hpp"

namespace fdbp {

namespace {

void check_lengths(const DualPolSymbols& rx, const DualPolSymbols& tx) {
  if (rx.x.size() != tx.x.size() || rx.y.size() != tx.y.size() || rx.x.size() != rx.y.size())
    throw ShapeError("metrics: rx and tx lengths differ");
  if (tx.x.empty()) throw ShapeError("metrics: empty symbol sequence");
}

double db_ratio(double signal, double noise) {
  if (noise <= 0.0) return kSnrCapDb;
  return std::min(kSnrCapDb, 10.0 * std::log10(signal / noise));
}

}  // namespace

DualPolSymbols remove_mean_phase(const DualPolSymbols& rx, const DualPolSymbols& tx, double* phase) {
  check_lengths(rx, tx);
  cd corr = 0.0;
  for (std::size_t k = 0; k < rx.size(); ++k) corr += rx.x[k] * std::conj(tx.x[k]) + rx.y[k] * std::conj(tx.y[k]);
  if (std::abs(corr) == 0.0 || !std::isfinite(std::abs(corr)))
    throw NumericError("remove_mean_phase: undefined phase (zero correlation)");
  const double phi = std::arg(corr);
  const cd rot = std::polar(1.0, -phi);
  DualPolSymbols out = rx;
  for (std::size_t k = 0; k < out.size(); ++k) {
    out.x[k] *= rot;
    out.y[k] *= rot;
  }
  if (phase) *phase = phi;
  return out;
}

SnrResult snr(const DualPolSymbols& rx, const DualPolSymbols& tx, bool remove_phase) {
  check_lengths(rx, tx);
  SnrResult r;
  DualPolSymbols rot = remove_phase ? remove_mean_phase(rx, tx, &r.mean_phase_removed) : rx;
  double sx = 0, sy = 0, nx = 0, ny = 0;
  for (std::size_t k = 0; k < tx.size(); ++k) {
    sx += std::norm(tx.x[k]);
    sy += std::norm(tx.y[k]);
    nx += std::norm(rot.x[k] - tx.x[k]);
    ny += std::norm(rot.y[k] - tx.y[k]);
  }
  r.num_symbols = tx.size();
  r.exact_match = nx + ny == 0.0;
  r.snr_db = db_ratio(sx + sy, nx + ny);
  r.snr_x_db = db_ratio(sx, nx);
  r.snr_y_db = db_ratio(sy, ny);
  if (!std::isfinite(r.snr_db)) throw NumericError("snr: non-finite result");
  return r;
}

double mse(const DualPolSymbols& rx, const DualPolSymbols& tx) {
  const auto rot = remove_mean_phase(rx, tx);
  double e = 0.0;
  for (std::size_t k = 0; k < tx.size(); ++k) e += std::norm(rot.x[k] - tx.x[k]) + std::norm(rot.y[k] - tx.y[k]);
  return e / (2.0 * static_cast<double>(tx.size()));
}

DualPolSymbols recover_symbols(const DualPolWaveform& w, const WdmConfig& cfg,
                               std::size_t num_symbols) {
  const auto filtered = matched_filter(w, cfg);
  auto s = sample_symbols(filtered, num_symbols);
  const double g = 1.0 / std::sqrt(0.5 * cfg.channel_power_watt());
  for (std::size_t k = 0; k < s.size(); ++k) {
    s.x[k] *= g;
    s.y[k] *= g;
  }
  return s;
}

}  // namespace fdbp
