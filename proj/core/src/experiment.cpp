#include "fdbp/experiment.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "fdbp/complexity.hpp"
#include "fdbp/constants.hpp"
#include "fdbp/error.hpp"
#include "fdbp/kernel.hpp"
#include "fdbp/metrics.hpp"
#include "json.hpp"

namespace fdbp {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t noise_seed_for(std::uint64_t data_seed) { return splitmix64(data_seed ^ 0x6e6f697365ULL); }

template <class T>
void read_opt(const json& j, const char* key, T& dst) {
  if (j.contains(key)) dst = j.at(key).get<T>();
}

json config_json(const ExperimentConfig& c, bool canonical) {
  json j;
  j["wdm"] = {{"num_channels", c.wdm.num_channels},
              {"spacing_hz", c.wdm.spacing},
              {"baud_rate", c.wdm.baud_rate},
              {"rolloff", c.wdm.rolloff},
              {"format", c.wdm.format},
              {"launch_power_dbm", c.wdm.launch_power_dbm_per_channel}};
  j["link"] = {{"num_spans", c.link.num_spans},
               {"span_length_km", c.link.span_length_km},
               {"alpha_db_per_km", c.link.alpha_db_per_km},
               {"dispersion_ps_nm_km", c.link.dispersion_ps_nm_km},
               {"gamma", c.link.gamma},
               {"noise_figure_db", c.link.edfa_noise_figure_db},
               {"wavelength_nm", c.link.reference_wavelength_nm}};
  j["simulation"] = {{"num_symbols", c.simulation.num_symbols},
                     {"sim_rate_hz", c.simulation.sim_rate},
                     {"headroom", c.simulation.headroom},
                     {"step_km", c.simulation.settings.step_km},
                     {"max_phase_rad", c.simulation.settings.max_phase_rad},
                     {"noise", c.simulation.settings.noise_enabled},
                     {"checkpoint", c.simulation.checkpoint}};
  j["dbp"] = {{"variant", to_string(c.dbp.variant)},
              {"n_steps", c.dbp.n_steps},
              {"n_subbands", c.dbp.n_subbands},
              {"splitting_ratio", c.dbp.splitting_ratio},
              {"block_size", c.dbp.block_size},
              {"overlap", c.dbp.overlap},
              {"oversampling", c.dbp.oversampling},
              {"coefficient_source", c.dbp.coefficient_source},
              {"coefficient_file", c.dbp.coefficient_file},
              {"memory_safety", c.dbp.memory_safety}};
  j["optimizer"] = {{"max_iterations", c.optimizer.max_iterations},
                    {"relative_step", c.optimizer.relative_step},
                    {"initial_damping", c.optimizer.initial_damping},
                    {"tolerance", c.optimizer.tolerance}};
  j["sweeps"] = {{"rho", c.sweeps.rho},
                 {"power_dbm", c.sweeps.power_dbm},
                 {"n_steps", c.sweeps.n_steps},
                 {"n_subbands", c.sweeps.n_subbands},
                 {"n_spans", c.sweeps.n_spans},
                 {"variants", c.sweeps.variants}};
  j["seed"] = c.seed;
  if (!canonical) {
    j["output_dir"] = c.output_dir;
    j["threads"] = c.threads;
  }
  return j;
}

bool near_integer(double v) { return std::abs(v - std::round(v)) < 1e-6; }

}  // namespace

void ExperimentConfig::validate() const {
  wdm.validate();
  link.validate();
  simulation.settings.validate();
  dbp.validate();
  if (simulation.num_symbols < 1) throw ConfigError("simulation: num_symbols must be >= 1");
  const double rate = sim_rate();
  if (rate < wdm.num_channels * wdm.spacing * (1.0 - 1e-12))
    throw BandwidthError("simulation rate does not cover the WDM band");
  const double ns = static_cast<double>(simulation.num_symbols);
  if (!near_integer(ns * rate / wdm.baud_rate))
    throw ConfigError("simulation: num_symbols * sim_rate / baud_rate must be integral");
  if (!near_integer(ns * dbp.oversampling))
    throw ConfigError("dbp: num_symbols * oversampling must be integral");
  if (dbp.oversampling < 1.0 + wdm.rolloff)
    throw BandwidthError("dbp: oversampling must be at least 1 + rolloff");
  if (dbp.block_size > 0 && dbp.block_size > static_cast<std::size_t>(std::llround(ns * dbp.oversampling)))
    throw ConfigError("dbp: block size exceeds the DBP input length");
  if (threads < 1) throw ConfigError("threads must be >= 1");
}

CoefficientMode ExperimentConfig::coefficient_mode() const {
  return dbp.coefficient_source == "optimized" && dbp.coefficient_file.empty()
             ? CoefficientMode::Optimized
             : CoefficientMode::Analytic;
}

double ExperimentConfig::sim_rate() const {
  return simulation.sim_rate > 0.0 ? simulation.sim_rate : default_sim_rate(wdm, simulation.headroom);
}

std::string ExperimentConfig::to_json() const { return config_json(*this, false).dump(2); }

std::string ExperimentConfig::hash() const {
  const std::string s = config_json(*this, true).dump();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : s) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

ExperimentConfig ExperimentConfig::from_json(const std::string& text) {
  ExperimentConfig c;
  try {
    const json j = json::parse(text, nullptr, true, true);
    if (j.contains("wdm")) {
      const auto& w = j["wdm"];
      read_opt(w, "num_channels", c.wdm.num_channels);
      read_opt(w, "spacing_hz", c.wdm.spacing);
      read_opt(w, "baud_rate", c.wdm.baud_rate);
      read_opt(w, "rolloff", c.wdm.rolloff);
      read_opt(w, "format", c.wdm.format);
      read_opt(w, "launch_power_dbm", c.wdm.launch_power_dbm_per_channel);
    }
    if (j.contains("link")) {
      const auto& l = j["link"];
      read_opt(l, "num_spans", c.link.num_spans);
      read_opt(l, "span_length_km", c.link.span_length_km);
      read_opt(l, "alpha_db_per_km", c.link.alpha_db_per_km);
      read_opt(l, "dispersion_ps_nm_km", c.link.dispersion_ps_nm_km);
      read_opt(l, "gamma", c.link.gamma);
      read_opt(l, "noise_figure_db", c.link.edfa_noise_figure_db);
      read_opt(l, "wavelength_nm", c.link.reference_wavelength_nm);
    }
    if (j.contains("simulation")) {
      const auto& s = j["simulation"];
      read_opt(s, "num_symbols", c.simulation.num_symbols);
      read_opt(s, "sim_rate_hz", c.simulation.sim_rate);
      read_opt(s, "headroom", c.simulation.headroom);
      read_opt(s, "step_km", c.simulation.settings.step_km);
      read_opt(s, "max_phase_rad", c.simulation.settings.max_phase_rad);
      read_opt(s, "noise", c.simulation.settings.noise_enabled);
      read_opt(s, "checkpoint", c.simulation.checkpoint);
    }
    if (j.contains("dbp")) {
      const auto& d = j["dbp"];
      if (d.contains("variant")) c.dbp.variant = variant_from_string(d["variant"].get<std::string>());
      read_opt(d, "n_steps", c.dbp.n_steps);
      read_opt(d, "n_subbands", c.dbp.n_subbands);
      read_opt(d, "splitting_ratio", c.dbp.splitting_ratio);
      read_opt(d, "block_size", c.dbp.block_size);
      read_opt(d, "overlap", c.dbp.overlap);
      read_opt(d, "oversampling", c.dbp.oversampling);
      read_opt(d, "coefficient_source", c.dbp.coefficient_source);
      read_opt(d, "coefficient_file", c.dbp.coefficient_file);
      read_opt(d, "memory_safety", c.dbp.memory_safety);
    }
    if (j.contains("optimizer")) {
      const auto& o = j["optimizer"];
      read_opt(o, "max_iterations", c.optimizer.max_iterations);
      read_opt(o, "relative_step", c.optimizer.relative_step);
      read_opt(o, "initial_damping", c.optimizer.initial_damping);
      read_opt(o, "tolerance", c.optimizer.tolerance);
    }
    if (j.contains("sweeps")) {
      const auto& s = j["sweeps"];
      read_opt(s, "rho", c.sweeps.rho);
      read_opt(s, "power_dbm", c.sweeps.power_dbm);
      read_opt(s, "n_steps", c.sweeps.n_steps);
      read_opt(s, "n_subbands", c.sweeps.n_subbands);
      read_opt(s, "n_spans", c.sweeps.n_spans);
      read_opt(s, "variants", c.sweeps.variants);
    }
    read_opt(j, "seed", c.seed);
    read_opt(j, "output_dir", c.output_dir);
    read_opt(j, "threads", c.threads);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  c.dbp.link = c.link;
  c.optimizer.threads = c.threads;
  return c;
}

ExperimentConfig load_experiment(const fs::path& path) {
  std::ifstream f(path);
  if (!f) throw IoError("cannot open config " + path.string());
  std::ostringstream ss;
  ss << f.rdbuf();
  auto c = ExperimentConfig::from_json(ss.str());
  c.validate();
  return c;
}

System::System(ExperimentConfig cfg) : cfg_(std::move(cfg)) {
  cfg_.dbp.link = cfg_.link;
  cfg_.validate();
}

System::Simulated System::simulate(double launch_dbm, std::uint64_t data_seed,
                                   std::uint64_t noise_seed, const SpanCallback& on_span) const {
  WdmConfig w = cfg_.wdm;
  w.launch_power_dbm_per_channel = launch_dbm;
  auto [tx, symbols] = generate_wdm(w, cfg_.simulation.num_symbols, cfg_.sim_rate(), data_seed);
  SimSettings sim = cfg_.simulation.settings;
  sim.noise_seed = noise_seed;
  auto rx = propagate_link(tx, cfg_.link, sim, on_span);
  return {std::move(tx), std::move(rx), std::move(symbols)};
}

DualPolWaveform System::dbp_input(const DualPolWaveform& rx, const SymbolRecord& symbols) const {
  const double center = symbols.channel_freqs.at(symbols.center_channel());
  auto d = demux_channel(rx, center, cfg_.dbp_rate());
  if (std::abs(d.sample_rate - cfg_.dbp_rate()) > 1e-9 * cfg_.dbp_rate())
    throw ConfigError("DBP rate is not a whole number of simulation bins");
  return d;
}

const TrainingSet& System::data(double launch_dbm) {
  auto it = cache_.find(launch_dbm);
  if (it != cache_.end()) return it->second;
  TrainingSet t;
  t.wdm = cfg_.wdm;
  t.wdm.launch_power_dbm_per_channel = launch_dbm;
  const std::uint64_t train_seed = cfg_.seed;
  const std::uint64_t valid_seed = cfg_.seed + 1;
  {
    auto s = simulate(launch_dbm, train_seed, noise_seed_for(train_seed));
    t.train_rx = dbp_input(s.rx, s.symbols);
    t.train_tx = s.symbols.channels[s.symbols.center_channel()];
  }
  {
    auto s = simulate(launch_dbm, valid_seed, noise_seed_for(valid_seed));
    t.valid_rx = dbp_input(s.rx, s.symbols);
    t.valid_tx = s.symbols.channels[s.symbols.center_channel()];
  }
  return cache_.emplace(launch_dbm, std::move(t)).first->second;
}

DatasetFn System::dataset_fn() {
  return [this](double p) { return data(p); };
}

CoefficientSet System::coefficients(const DbpConfig& cfg, double launch_dbm, CoefficientMode mode) {
  auto c = default_dbp_coefficients(cfg, cfg_.wdm.baud_rate);
  if (mode == CoefficientMode::Optimized && cfg.variant != Variant::EDC && cfg.n_steps > 0 &&
      cfg.coefficient_file.empty()) {
    LmOptions opt = cfg_.optimizer;
    opt.threads = cfg_.threads;
    c = optimize_coefficients(data(launch_dbm), cfg, c, opt).coeffs;
  }
  return c;
}

double System::snr_db(const DbpConfig& cfg, double launch_dbm, CoefficientMode mode) {
  const auto c = coefficients(cfg, launch_dbm, mode);
  const auto& d = data(launch_dbm);
  return dbp_snr_db(d.valid_rx, d.valid_tx, d.wdm, cfg, c);
}

SweepResult System::best_power(const DbpConfig& cfg, CoefficientMode mode) {
  std::vector<double> grid = cfg_.sweeps.power_dbm;
  if (grid.empty()) grid = {cfg_.wdm.launch_power_dbm_per_channel};
  SweepResult r;
  for (double p : grid) {
    r.x.push_back(p);
    r.snr_db.push_back(snr_db(cfg, p, mode));
  }
  finalize_sweep(r);
  return r;
}

std::string format_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

void write_csv(const fs::path& path, const std::string& config_hash,
               const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream f(path);
  if (!f) throw IoError("cannot write " + path.string());
  f << "# config_hash: " << config_hash << '\n';
  auto line = [&f](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) f << (i ? "," : "") << cells[i];
    f << '\n';
  };
  line(header);
  for (const auto& r : rows) line(r);
  if (!f) throw IoError("write failed: " + path.string());
}

void write_symbols(const fs::path& path, const DualPolSymbols& s, double baud_rate) {
  DualPolWaveform w;
  w.x = s.x;
  w.y = s.y;
  w.sample_rate = baud_rate;
  write_waveform(path, w);
}

DualPolSymbols read_symbols(const fs::path& path) {
  auto w = read_waveform(path);
  return {std::move(w.x), std::move(w.y)};
}

namespace {

fs::path out_dir(const ExperimentConfig& cfg) {
  fs::path p(cfg.output_dir);
  fs::create_directories(p);
  return p;
}

void write_json(const fs::path& p, const json& j) {
  std::ofstream f(p);
  if (!f) throw IoError("cannot write " + p.string());
  f << j.dump(2) << '\n';
}

std::vector<Variant> variant_list(const ExperimentConfig& cfg) {
  std::vector<Variant> v;
  for (const auto& s : cfg.sweeps.variants) v.push_back(variant_from_string(s));
  if (v.empty()) v = {Variant::EDC, Variant::OSSFM, Variant::ESSFM, Variant::CB_ESSFM};
  return v;
}

std::vector<int> steps_list(const ExperimentConfig& cfg) {
  return cfg.sweeps.n_steps.empty() ? std::vector<int>{cfg.dbp.n_steps} : cfg.sweeps.n_steps;
}

DbpConfig variant_config(const DbpConfig& base, Variant v, int n_steps) {
  DbpConfig c = base;
  c.variant = v;
  c.n_steps = v == Variant::EDC ? 0 : n_steps;
  if (v != Variant::CB_ESSFM) c.n_subbands = 1;
  // ESSFM and OSSFM are the symmetric-step baselines.
  if (v == Variant::ESSFM || v == Variant::OSSFM) c.splitting_ratio = 0.5;
  return c;
}

int essfm_memory(const ExperimentConfig& cfg, const DbpConfig& c) {
  if (c.n_steps == 0) return 0;
  return coefficient_memory(0, c.step_length_km(), cfg.link.beta2(), c.oversampling,
                            cfg.wdm.baud_rate, 1, c.memory_safety);
}

}  // namespace

std::vector<fs::path> cmd_simulate(const ExperimentConfig& cfg, bool resume) {
  cfg.validate();
  const auto dir = out_dir(cfg);
  const std::string hash = cfg.hash();
  System sys(cfg);
  const std::uint64_t data_seed = cfg.seed;
  const std::uint64_t noise_seed = noise_seed_for(data_seed);
  const double launch = cfg.wdm.launch_power_dbm_per_channel;

  WdmConfig w = cfg.wdm;
  auto [tx, symbols] = generate_wdm(w, cfg.simulation.num_symbols, cfg.sim_rate(), data_seed);
  SimSettings sim = cfg.simulation.settings;
  sim.noise_seed = noise_seed;

  const fs::path ckpt = dir / "checkpoint.fdbp";
  const fs::path ckpt_meta = dir / "checkpoint.json";
  DualPolWaveform start = tx;
  int first_span = 0;
  if (resume && fs::exists(ckpt_meta)) {
    std::ifstream f(ckpt_meta);
    const json m = json::parse(f);
    if (m.at("config_hash").get<std::string>() == hash) {
      start = read_waveform(ckpt);
      first_span = m.at("span").get<int>() + 1;
    }
  }
  SpanCallback on_span;
  if (cfg.simulation.checkpoint)
    on_span = [&](int span, const DualPolWaveform& cur) {
      write_waveform(ckpt, cur);
      write_json(ckpt_meta, {{"config_hash", hash}, {"span", span}});
    };
  const auto rx = propagate_link(start, cfg.link, sim, on_span, first_span);

  std::vector<fs::path> files = {dir / "tx_field.fdbp", dir / "rx_field.fdbp", dir / "dbp_input.fdbp"};
  write_waveform(files[0], tx);
  write_waveform(files[1], rx);
  write_waveform(files[2], sys.dbp_input(rx, symbols));
  json powers = json::array();
  for (std::size_t i = 0; i < symbols.channels.size(); ++i) {
    const fs::path p = dir / ("symbols_ch" + std::to_string(i) + ".fdbp");
    write_symbols(p, symbols.channels[i], cfg.wdm.baud_rate);
    files.push_back(p);
    const auto ch = demux_channel(tx, symbols.channel_freqs[i], cfg.wdm.spacing);
    powers.push_back(watt_to_dbm(ch.mean_power()));
  }
  json manifest = {{"config_hash", hash},
                   {"data_seed", data_seed},
                   {"noise_seed", noise_seed},
                   {"launch_power_dbm", launch},
                   {"sim_rate_hz", cfg.sim_rate()},
                   {"dbp_rate_hz", cfg.dbp_rate()},
                   {"center_channel", symbols.center_channel()},
                   {"channel_freqs_hz", symbols.channel_freqs},
                   {"channel_power_dbm", powers},
                   {"files", json::array()}};
  for (const auto& f : files) manifest["files"].push_back(f.filename().string());
  files.push_back(dir / "manifest.json");
  write_json(files.back(), manifest);
  return files;
}

std::vector<fs::path> cmd_coeffs(const ExperimentConfig& cfg) {
  cfg.validate();
  const auto dir = out_dir(cfg);
  auto c = default_dbp_coefficients(cfg.dbp, cfg.wdm.baud_rate);
  c.meta["config_hash"] = cfg.hash();
  const fs::path p = dir / "coeffs.json";
  write_coefficients(p, c);
  return {p};
}

std::vector<fs::path> cmd_optimize(const ExperimentConfig& cfg) {
  cfg.validate();
  const auto dir = out_dir(cfg);
  System sys(cfg);
  const double launch = cfg.wdm.launch_power_dbm_per_channel;
  const auto& data = sys.data(launch);
  const auto init = default_dbp_coefficients(cfg.dbp, cfg.wdm.baud_rate);
  LmOptions opt = cfg.optimizer;
  opt.threads = cfg.threads;
  auto res = optimize_coefficients(data, cfg.dbp, init, opt);
  res.coeffs.meta["config_hash"] = cfg.hash();
  const fs::path p = dir / "coeffs_optimized.json";
  write_coefficients(p, res.coeffs);
  const fs::path r = dir / "optimize_report.json";
  write_json(r, {{"config_hash", cfg.hash()},
                 {"init_valid_mse", res.init_valid_mse},
                 {"valid_mse", res.valid_mse},
                 {"init_valid_snr_db", -10.0 * std::log10(res.init_valid_mse)},
                 {"valid_snr_db", -10.0 * std::log10(res.valid_mse)},
                 {"improved", res.improved},
                 {"iterations", res.iterations}});
  return {p, r};
}

std::vector<fs::path> cmd_dbp(const ExperimentConfig& cfg, const fs::path& input,
                              const fs::path& coeff_file) {
  cfg.validate();
  const auto dir = out_dir(cfg);
  System sys(cfg);
  DualPolWaveform rx;
  DualPolSymbols tx;
  bool have_tx = false;
  if (!input.empty()) {
    rx = read_waveform(input);
    const fs::path manifest = input.parent_path() / "manifest.json";
    if (fs::exists(manifest)) {
      std::ifstream f(manifest);
      const json m = json::parse(f);
      const fs::path sym = input.parent_path() /
                           ("symbols_ch" + std::to_string(m.at("center_channel").get<int>()) + ".fdbp");
      if (fs::exists(sym)) {
        tx = read_symbols(sym);
        have_tx = true;
      }
    }
  } else {
    const auto& d = sys.data(cfg.wdm.launch_power_dbm_per_channel);
    rx = d.valid_rx;
    tx = d.valid_tx;
    have_tx = true;
  }
  const auto coeffs = coeff_file.empty()
                          ? sys.coefficients(cfg.dbp, cfg.wdm.launch_power_dbm_per_channel, cfg.coefficient_mode())
                          : read_coefficients(coeff_file);
  DbpRunInfo info;
  const auto out = run_dbp(rx, cfg.dbp, &coeffs, &info, cfg.threads);
  std::vector<fs::path> files = {dir / "dbp_output.fdbp", dir / "dbp_report.json"};
  write_waveform(files[0], out);
  json report = {{"config_hash", cfg.hash()},
                 {"variant", to_string(cfg.dbp.variant)},
                 {"warnings", info.warnings}};
  if (cfg.dbp.block_size > 0)
    report["counted_rm_per_2d"] = count_runtime_multiplies(info.counts, cfg.dbp.oversampling).rm_per_2d;
  if (have_tx) report["snr_db"] = snr(recover_symbols(out, cfg.wdm, tx.size()), tx).snr_db;
  write_json(files[1], report);
  return files;
}

std::vector<fs::path> cmd_sweep(const ExperimentConfig& cfg, const std::string& kind) {
  cfg.validate();
  const auto dir = out_dir(cfg);
  System sys(cfg);
  const auto mode = cfg.coefficient_mode();
  if (kind == "rho") {
    std::vector<double> grid = cfg.sweeps.rho;
    if (grid.empty())
      for (int i = 0; i <= 10; ++i) grid.push_back(0.1 * i);
    LmOptions opt = cfg.optimizer;
    opt.threads = cfg.threads;
    const auto r = sweep_splitting_ratio(sys.data(cfg.wdm.launch_power_dbm_per_channel), cfg.dbp, grid, mode, opt);
    std::vector<std::vector<std::string>> rows;
    for (std::size_t i = 0; i < r.x.size(); ++i) rows.push_back({format_number(r.x[i]), format_number(r.snr_db[i])});
    const fs::path p = dir / "sweep_rho.csv";
    write_csv(p, cfg.hash(), {"rho", "snr_db"}, rows);
    return {p};
  }
  if (kind == "power") {
    const auto r = sys.best_power(cfg.dbp, mode);
    std::vector<std::vector<std::string>> rows;
    for (std::size_t i = 0; i < r.x.size(); ++i) rows.push_back({format_number(r.x[i]), format_number(r.snr_db[i])});
    const fs::path p = dir / "sweep_power.csv";
    write_csv(p, cfg.hash(), {"power_dbm", "snr_db"}, rows);
    return {p};
  }
  throw ConfigError("sweep: kind must be 'rho' or 'power'");
}

std::vector<fs::path> cmd_cost(const ExperimentConfig& cfg) {
  cfg.validate();
  const auto dir = out_dir(cfg);
  std::vector<std::vector<std::string>> rows;
  const std::vector<int> nsb_grid = cfg.sweeps.n_subbands.empty() ? std::vector<int>{cfg.dbp.n_subbands}
                                                                  : cfg.sweeps.n_subbands;
  bool edc_done = false;
  for (Variant v : variant_list(cfg)) {
    for (int st : steps_list(cfg)) {
      if (v == Variant::EDC && edc_done) continue;
      for (int nsb : v == Variant::CB_ESSFM ? nsb_grid : std::vector<int>{1}) {
        DbpConfig c = variant_config(cfg.dbp, v, st);
        c.n_subbands = nsb;
        const auto r = dbp_cost(c, essfm_memory(cfg, c));
        rows.push_back({to_string(v), std::to_string(c.n_steps), std::to_string(c.n_subbands),
                        std::to_string(c.block_size), std::to_string(c.overlap),
                        format_number(c.oversampling), format_number(r.rm_per_2d),
                        format_number(r.ra_per_2d)});
      }
      edc_done = edc_done || v == Variant::EDC;
    }
  }
  const fs::path p = dir / "cost.csv";
  write_csv(p, cfg.hash(), {"variant", "N_st", "N_sb", "N", "N_ov", "n", "RM_per_2D", "RA_per_2D"}, rows);
  return {p};
}

std::vector<fs::path> cmd_figure(const ExperimentConfig& cfg, const std::string& id) {
  cfg.validate();
  const auto dir = out_dir(cfg);
  const std::string hash = cfg.hash();
  const auto mode = cfg.coefficient_mode();
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> header;

  if (id == "snr_vs_rho") {
    return {cmd_sweep(cfg, "rho").front()};
  } else if (id == "snr_vs_nsb") {
    System sys(cfg);
    header = {"n_subbands", "best_power_dbm", "snr_db"};
    const std::vector<int> grid = cfg.sweeps.n_subbands.empty() ? std::vector<int>{1, 2, 4} : cfg.sweeps.n_subbands;
    for (int nsb : grid) {
      DbpConfig c = variant_config(cfg.dbp, Variant::CB_ESSFM, cfg.dbp.n_steps);
      c.n_subbands = nsb;
      const auto r = sys.best_power(c, mode);
      rows.push_back({std::to_string(nsb), format_number(r.best_x), format_number(r.best_snr_db)});
    }
  } else if (id == "snr_vs_steps" || id == "snr_vs_complexity") {
    System sys(cfg);
    header = {"variant", "n_steps", "n_subbands", "best_power_dbm", "snr_db", "RM_per_2D", "RA_per_2D"};
    bool edc_done = false;
    for (Variant v : variant_list(cfg))
      for (int st : steps_list(cfg)) {
        if (v == Variant::EDC && edc_done) continue;
        edc_done = edc_done || v == Variant::EDC;
        const DbpConfig c = variant_config(cfg.dbp, v, st);
        const auto r = sys.best_power(c, mode);
        // A single circular block has no overlap-and-save cost: leave the cells empty.
        std::string rm, ra;
        if (c.block_size > 0) {
          const auto cost = dbp_cost(c, essfm_memory(cfg, c));
          rm = format_number(cost.rm_per_2d);
          ra = format_number(cost.ra_per_2d);
        }
        rows.push_back({to_string(v), std::to_string(c.n_steps), std::to_string(c.n_subbands),
                        format_number(r.best_x), format_number(r.best_snr_db), rm, ra});
      }
  } else if (id == "snr_vs_length") {
    header = {"num_spans", "length_km", "variant", "n_steps", "best_power_dbm", "snr_db"};
    const std::vector<int> grid = cfg.sweeps.n_spans.empty() ? std::vector<int>{cfg.link.num_spans} : cfg.sweeps.n_spans;
    const bool per_span = cfg.dbp.n_steps % cfg.link.num_spans == 0;
    for (int spans : grid) {
      ExperimentConfig e = cfg;
      e.link.num_spans = spans;
      e.dbp.link = e.link;
      const int st = per_span ? cfg.dbp.n_steps / cfg.link.num_spans * spans : cfg.dbp.n_steps;
      System sys(e);
      for (Variant v : {Variant::EDC, cfg.dbp.variant}) {
        const DbpConfig c = variant_config(e.dbp, v, st);
        const auto r = sys.best_power(c, mode);
        rows.push_back({std::to_string(spans), format_number(e.link.total_length_km()), to_string(v),
                        std::to_string(c.n_steps), format_number(r.best_x), format_number(r.best_snr_db)});
        if (v == cfg.dbp.variant) break;
      }
    }
  } else {
    throw ConfigError("figure: unknown id '" + id + "'");
  }
  const fs::path p = dir / (id + ".csv");
  write_csv(p, hash, header, rows);
  return {p};
}

}  // namespace fdbp
