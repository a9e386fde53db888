#include "fdbp/complexity.hpp"

#include <cmath>

#include "fdbp/error.hpp"

namespace fdbp {

namespace {

double lg(double x) { return std::log2(x); }

// Per-block counts are turned into per-2D-symbol figures by n / (2 (N - N_ov)).
double per_2d(const BlockParams& p) {
  return p.oversampling / (2.0 * static_cast<double>(p.n - p.n_ov));
}

void add(CostReport& r, const std::string& stage, double rm, double ra) {
  auto& e = r.breakdown[stage];
  e.first += rm;
  e.second += ra;
}

void total_from_breakdown(CostReport& r) {
  r.rm_per_2d = r.ra_per_2d = 0.0;
  for (const auto& [k, v] : r.breakdown) {
    r.rm_per_2d += v.first;
    r.ra_per_2d += v.second;
  }
}

}  // namespace

void BlockParams::validate() const {
  if (n <= n_ov) throw ConfigError("cost: N must exceed N_ov");
  if (!(oversampling > 0.0)) throw ConfigError("cost: oversampling must be positive");
}

double cfft_rm(std::size_t m) {
  const double md = static_cast<double>(m);
  return md * lg(md) - 3.0 * md + 4.0;
}

double cfft_ra(std::size_t m) {
  const double md = static_cast<double>(m);
  return 3.0 * md * lg(md) - 3.0 * md + 4.0;
}

std::pair<double, double> cb_nlpr_cost(std::size_t n, int n_subbands) {
  const double nd = static_cast<double>(n);
  const double sb = n_subbands;
  const double lnp = lg(nd / sb);
  return {nd * lnp + 0.5 * nd * (3.0 * sb + 13.0) + 4.0 * sb,
          3.0 * nd * lnp + 0.5 * nd * (5.0 * sb + 11.0) + 4.0 * sb};
}

CostReport cb_essfm_cost_breakdown(const BlockParams& p, int n_steps, int n_subbands) {
  p.validate();
  if (n_steps < 0 || n_subbands < 1 || p.n % static_cast<std::size_t>(n_subbands) != 0)
    throw ConfigError("cost: invalid N_st / N_sb");
  const double s = per_2d(p);
  const double nd = static_cast<double>(p.n);
  const double sb = n_subbands;
  const double st = n_steps;
  const std::size_t np = p.n / static_cast<std::size_t>(n_subbands);
  const double npd = static_cast<double>(np);
  CostReport r;
  add(r, "fft", s * 4.0 * cfft_rm(p.n), s * 4.0 * cfft_ra(p.n));
  add(r, "subband_fft", s * 4.0 * sb * st * cfft_rm(np), s * 4.0 * sb * st * cfft_ra(np));
  add(r, "gvd", s * 6.0 * nd * (st + 1.0), s * 6.0 * nd * (st + 1.0));
  add(r, "intensity", s * st * 4.0 * nd, s * st * 3.0 * nd);
  // MIMO: 2 N_sb real FFTs of N' plus N'/2 matrix-vector products.
  const double mv_rm = 3.0 * sb * (sb - 1.0) + 2.0 * sb;
  const double mv_ra = 5.0 * sb * (sb - 1.0);
  add(r, "mimo", s * st * (sb * cfft_rm(np) + 0.5 * npd * mv_rm),
      s * st * (sb * cfft_ra(np) + 0.5 * npd * mv_ra));
  add(r, "phase", s * st * 6.0 * nd, s * st * 8.0 * nd);
  total_from_breakdown(r);
  return r;
}

CostReport cb_essfm_cost(const BlockParams& p, int n_steps, int n_subbands) {
  CostReport r = cb_essfm_cost_breakdown(p, n_steps, n_subbands);
  const double nd = static_cast<double>(p.n);
  const double sb = n_subbands;
  const double st = n_steps;
  const double lnp = lg(nd / sb);
  const double pre = 0.5 * p.oversampling * nd / static_cast<double>(p.n - p.n_ov);
  r.rm_per_2d = pre * ((5.0 * st + 4.0) * lnp + st * (3.0 * sb + 1.0) / 2.0 + 4.0 * lg(sb) - 6.0 +
                       (20.0 * sb * st + 16.0) / nd);
  r.ra_per_2d = pre * ((15.0 * st + 12.0) * lnp + st * (5.0 * sb - 1.0) / 2.0 + 12.0 * lg(sb) -
                       6.0 + (20.0 * sb * st + 16.0) / nd);
  return r;
}

CostReport essfm_time_domain_cost(const BlockParams& p, int n_steps, int n_c) {
  p.validate();
  if (n_steps < 0 || n_c < 0) throw ConfigError("cost: invalid N_st / N_c");
  const double nd = static_cast<double>(p.n);
  const double st = n_steps;
  const double nc = n_c;
  const double pre = 0.5 * p.oversampling * nd / static_cast<double>(p.n - p.n_ov);
  CostReport r;
  r.rm_per_2d = pre * ((st + 1.0) * (4.0 * lg(nd) - 6.0 + 16.0 / nd) + st * (11.0 + nc));
  r.ra_per_2d = pre * ((st + 1.0) * (12.0 * lg(nd) - 6.0 + 16.0 / nd) + st * (11.0 + 2.0 * nc));
  const double s = per_2d(p);
  add(r, "fft", s * 4.0 * (st + 1.0) * cfft_rm(p.n), s * 4.0 * (st + 1.0) * cfft_ra(p.n));
  add(r, "gvd", s * 6.0 * nd * (st + 1.0), s * 6.0 * nd * (st + 1.0));
  add(r, "intensity", s * st * 4.0 * nd, s * st * 3.0 * nd);
  add(r, "filter", s * st * (nc + 1.0) * nd, s * st * 2.0 * nc * nd);
  add(r, "phase", s * st * 6.0 * nd, s * st * 8.0 * nd);
  return r;
}

CostReport dbp_cost(const DbpConfig& cfg, int n_c) {
  if (cfg.block_size == 0) throw ConfigError("cost: block_size 0 has no overlap-and-save cost");
  BlockParams p{cfg.block_size, cfg.overlap, cfg.oversampling};
  if (cfg.variant == Variant::EDC || cfg.n_steps == 0) return essfm_time_domain_cost(p, 0, 0);
  switch (cfg.variant) {
    case Variant::OSSFM: return essfm_time_domain_cost(p, cfg.n_steps, 0);
    case Variant::ESSFM: return essfm_time_domain_cost(p, cfg.n_steps, n_c);
    case Variant::IDEAL_SSFM: return cb_essfm_cost(p, cfg.n_steps, 1);
    default: return cb_essfm_cost(p, cfg.n_steps, cfg.n_subbands);
  }
}

CostReport count_runtime_multiplies(const OpCounts& c, double oversampling) {
  if (c.output_samples == 0) throw ConfigError("cost: run produced no output samples");
  const double s = oversampling / (2.0 * static_cast<double>(c.output_samples));
  CostReport r;
  add(r, "fft", s * c.fft_rm, s * c.fft_ra);
  add(r, "gvd", s * c.gvd_rm, s * c.gvd_ra);
  add(r, "intensity", s * c.intensity_rm, s * c.intensity_ra);
  add(r, "filter", s * c.filter_rm, s * c.filter_ra);
  add(r, "phase", s * c.phase_rm, s * c.phase_ra);
  total_from_breakdown(r);
  return r;
}

}  // namespace fdbp
