#include <cstdio>
#include <exception>
#include <filesystem>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "fdbp/error.hpp"
#include "fdbp/experiment.hpp"

namespace fs = std::filesystem;

int main(int argc, char** argv) {
  CLI::App app{"fdbp: coupled-band ESSFM digital backpropagation toolkit"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  std::uint64_t seed = 0;
  bool seed_set = false;
  int threads = 0;
  app.add_option("--config", config_path, "Experiment config (JSON)")->required()->check(CLI::ExistingFile);
  app.add_option("--out", out_dir, "Output directory (overrides output_dir)");
  app.add_option_function<std::uint64_t>(
      "--seed", [&](const std::uint64_t& s) { seed = s, seed_set = true; }, "Data seed (overrides seed)");
  app.add_option("--threads", threads, "Worker threads")->check(CLI::PositiveNumber);

  auto* simulate = app.add_subcommand("simulate", "Forward-simulate the link and write waveforms");
  bool resume = false;
  simulate->add_flag("--resume", resume, "Resume from the last span checkpoint");

  app.add_subcommand("coeffs", "Write the coefficient set of the configured DBP");
  app.add_subcommand("optimize", "Optimize the coefficients on simulated training data");

  auto* dbp = app.add_subcommand("dbp", "Run backpropagation and report SNR");
  std::string input, coeffs;
  dbp->add_option("--input", input, "DBP input waveform (default: simulate)")->check(CLI::ExistingFile);
  dbp->add_option("--coeffs", coeffs, "Coefficient file")->check(CLI::ExistingFile);

  auto* sweep = app.add_subcommand("sweep", "SNR sweep over splitting ratio or launch power");
  std::string kind;
  sweep->add_option("kind", kind, "rho | power")->required()->check(CLI::IsMember({"rho", "power"}));

  app.add_subcommand("cost", "Complexity table (RM/RA per 2D symbol)");

  auto* figure = app.add_subcommand("figure", "Reproduce a figure as CSV");
  std::string figure_id;
  figure
      ->add_option("id", figure_id, "snr_vs_nsb | snr_vs_rho | snr_vs_steps | snr_vs_complexity | snr_vs_length")
      ->required()
      ->check(CLI::IsMember({"snr_vs_nsb", "snr_vs_rho", "snr_vs_steps", "snr_vs_complexity", "snr_vs_length"}));

  CLI11_PARSE(app, argc, argv);

  try {
    auto cfg = fdbp::load_experiment(config_path);
    if (!out_dir.empty()) cfg.output_dir = out_dir;
    if (seed_set) cfg.seed = seed;
    if (threads > 0) cfg.threads = cfg.optimizer.threads = threads;
    cfg.validate();

    std::vector<fs::path> files;
    const auto* sub = app.get_subcommands().front();
    const std::string name = sub->get_name();
    if (name == "simulate") files = fdbp::cmd_simulate(cfg, resume);
    else if (name == "coeffs") files = fdbp::cmd_coeffs(cfg);
    else if (name == "optimize") files = fdbp::cmd_optimize(cfg);
    else if (name == "dbp") files = fdbp::cmd_dbp(cfg, input, coeffs);
    else if (name == "sweep") files = fdbp::cmd_sweep(cfg, kind);
    else if (name == "cost") files = fdbp::cmd_cost(cfg);
    else if (name == "figure") files = fdbp::cmd_figure(cfg, figure_id);

    std::cout << "config_hash " << cfg.hash() << '\n';
    for (const auto& f : files) std::cout << f.string() << '\n';
  } catch (const fdbp::Error& e) {
    std::cerr << "fdbp: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "fdbp: unexpected error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
