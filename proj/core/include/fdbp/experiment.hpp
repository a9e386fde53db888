#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "fdbp/channel.hpp"
#include "fdbp/dbp.hpp"
#include "fdbp/optimize.hpp"
#include "fdbp/signal.hpp"

namespace fdbp {

struct SimulationConfig {
  std::size_t num_symbols = 1 << 15;
  double sim_rate = 0.0;  // 0: default_sim_rate(wdm, headroom)
  double headroom = 2.0;
  SimSettings settings;
  bool checkpoint = false;  // write span-boundary checkpoints in cmd_simulate
};

struct SweepGrids {
  std::vector<double> rho;
  std::vector<double> power_dbm;
  std::vector<int> n_steps;
  std::vector<int> n_subbands;
  std::vector<int> n_spans;
  std::vector<std::string> variants;
};

/// One file fully determines an experiment.
struct ExperimentConfig {
  WdmConfig wdm;
  LinkConfig link;
  DbpConfig dbp;  // dbp.link mirrors link
  SimulationConfig simulation;
  SweepGrids sweeps;
  LmOptions optimizer;
  std::uint64_t seed = 1;
  std::string output_dir = "out";
  int threads = 1;

  /// Cross-module checks: rates, divisibility, variant constraints.
  void validate() const;
  CoefficientMode coefficient_mode() const;
  double sim_rate() const;
  double dbp_rate() const { return dbp.oversampling * wdm.baud_rate; }
  std::string to_json() const;
  static ExperimentConfig from_json(const std::string& text);
  /// FNV-1a of the canonical JSON, as 16 hex digits.
  std::string hash() const;
};

ExperimentConfig load_experiment(const std::filesystem::path& path);

/// Forward simulation and receiver front end for an experiment.
class System {
public:
  explicit System(ExperimentConfig cfg);

  const ExperimentConfig& config() const { return cfg_; }

  struct Simulated {
    DualPolWaveform tx;
    DualPolWaveform rx;
    SymbolRecord symbols;
  };
  /// Full WDM field before and after the link at a launch power.
  Simulated simulate(double launch_dbm, std::uint64_t data_seed, std::uint64_t noise_seed,
                     const SpanCallback& on_span = {}) const;
  /// Center channel at the DBP rate, re-centered at baseband.
  DualPolWaveform dbp_input(const DualPolWaveform& rx, const SymbolRecord& symbols) const;
  /// Training and validation data at a launch power (cached).
  const TrainingSet& data(double launch_dbm);
  DatasetFn dataset_fn();

  /// Coefficients for cfg on the data at `launch_dbm`, analytic or optimized.
  CoefficientSet coefficients(const DbpConfig& cfg, double launch_dbm, CoefficientMode mode);
  double snr_db(const DbpConfig& cfg, double launch_dbm, CoefficientMode mode);
  /// Power sweep over sweeps.power_dbm (or the configured power if empty).
  SweepResult best_power(const DbpConfig& cfg, CoefficientMode mode);

private:
  ExperimentConfig cfg_;
  std::map<double, TrainingSet> cache_;
};

/// CSV helper: "# config_hash: <hash>" line, header, rows.
void write_csv(const std::filesystem::path& path, const std::string& config_hash,
               const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows);
std::string format_number(double v);

// Command implementations behind the CLI. Each returns the files it wrote.
std::vector<std::filesystem::path> cmd_simulate(const ExperimentConfig& cfg, bool resume = false);
std::vector<std::filesystem::path> cmd_coeffs(const ExperimentConfig& cfg);
std::vector<std::filesystem::path> cmd_optimize(const ExperimentConfig& cfg);
std::vector<std::filesystem::path> cmd_dbp(const ExperimentConfig& cfg,
                                           const std::filesystem::path& input = {},
                                           const std::filesystem::path& coeff_file = {});
std::vector<std::filesystem::path> cmd_sweep(const ExperimentConfig& cfg, const std::string& kind);
std::vector<std::filesystem::path> cmd_cost(const ExperimentConfig& cfg);
std::vector<std::filesystem::path> cmd_figure(const ExperimentConfig& cfg, const std::string& id);

/// Symbol files reuse the waveform format with sample_rate = baud rate.
void write_symbols(const std::filesystem::path& path, const DualPolSymbols& s, double baud_rate);
DualPolSymbols read_symbols(const std::filesystem::path& path);

}  // namespace fdbp
