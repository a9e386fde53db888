#pragma once

#include <cstddef>
#include <map>
#include <string>

#include "fdbp/dbp.hpp"

namespace fdbp {

/// Real multiplications and additions per 2D symbol.
struct CostReport {
  double rm_per_2d = 0.0;
  double ra_per_2d = 0.0;
  /// Per-stage {RM, RA} per 2D symbol; sums to the totals.
  std::map<std::string, std::pair<double, double>> breakdown;
};

struct BlockParams {
  std::size_t n = 16384;
  std::size_t n_ov = 1800;
  double oversampling = 1.125;

  void validate() const;
};

/// Split-radix complex FFT of size m.
double cfft_rm(std::size_t m);
double cfft_ra(std::size_t m);

/// Closed-form cost of the frequency-domain CB-ESSFM.
CostReport cb_essfm_cost(const BlockParams& p, int n_steps, int n_subbands);

/// Time-domain ESSFM with 2 N_c + 1 symmetric taps. N_c = 0 gives the
/// (O)SSFM, N_st = 0 gives EDC.
CostReport essfm_time_domain_cost(const BlockParams& p, int n_steps, int n_c);

/// Stage-by-stage count of the CB-ESSFM block (same conventions as the
/// closed form); used to cross-check it.
CostReport cb_essfm_cost_breakdown(const BlockParams& p, int n_steps, int n_subbands);

/// Cost of the NLPR of one CB-ESSFM step on a block of N samples (RM, RA),
/// excluding the subband FFTs around it.
std::pair<double, double> cb_nlpr_cost(std::size_t n, int n_subbands);

/// Cost of a DBP configuration as the engine would run it.
CostReport dbp_cost(const DbpConfig& cfg, int n_c = 0);

/// Converts instrumented engine counts to per-2D-symbol figures.
CostReport count_runtime_multiplies(const OpCounts& counts, double oversampling);

}  // namespace fdbp
