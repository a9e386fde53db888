#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "approx.hpp"
#include "doctest.h"
#include "fdbp/complexity.hpp"
#include "fdbp/error.hpp"
#include "fdbp/experiment.hpp"
#include "fdbp/waveform.hpp"

using namespace fdbp;
namespace fs = std::filesystem;

namespace {

ExperimentConfig small_config(const std::string& out) {
  ExperimentConfig c;
  c.wdm.num_channels = 3;
  c.wdm.spacing = 37.5e9;
  c.wdm.baud_rate = 32e9;
  c.wdm.format = "16QAM";
  c.wdm.launch_power_dbm_per_channel = 4.0;
  c.link.num_spans = 2;
  c.simulation.num_symbols = 1 << 10;
  c.simulation.settings.step_km = 2.0;
  c.dbp.variant = Variant::ESSFM;
  c.dbp.n_steps = 2;
  c.dbp.block_size = 0;
  c.dbp.link = c.link;
  c.output_dir = out;
  return c;
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("fdbp_test_experiment_" + name);
  fs::remove_all(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p);
  std::ostringstream s;
  s << f.rdbuf();
  return s.str();
}

}  // namespace

TEST_CASE("config JSON round trip and hash") {
  const auto c = small_config("a");
  const auto back = ExperimentConfig::from_json(c.to_json());
  CHECK(back.to_json() == c.to_json());
  CHECK(back.hash() == c.hash());
  CHECK(c.hash().size() == 16);

  auto d = c;
  d.output_dir = "elsewhere";
  d.threads = 4;
  CHECK(d.hash() == c.hash());
  d.seed = 2;
  CHECK(d.hash() != c.hash());
  d = c;
  d.dbp.splitting_ratio = 0.12;
  CHECK(d.hash() != c.hash());

  // Missing sections take defaults.
  const auto e = ExperimentConfig::from_json(R"({"link": {"num_spans": 3}})");
  CHECK(e.link.num_spans == 3);
  CHECK(e.wdm.baud_rate == ExperimentConfig{}.wdm.baud_rate);
  CHECK_THROWS_AS(ExperimentConfig::from_json("{not json"), ConfigError);
  CHECK_THROWS_AS(ExperimentConfig::from_json(R"({"dbp": {"variant": "FOO"}})"), ConfigError);
  CHECK_THROWS_AS(load_experiment("/nonexistent/cfg.json"), IoError);
}

TEST_CASE("config validation") {
  auto c = small_config("a");
  CHECK_NOTHROW(c.validate());
  auto bad = c;
  bad.simulation.sim_rate = 100e9;
  CHECK_THROWS_AS(bad.validate(), BandwidthError);
  bad = c;
  bad.dbp.oversampling = 1.0;
  CHECK_THROWS_AS(bad.validate(), BandwidthError);
  bad = c;
  bad.simulation.num_symbols = 1001;
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  bad = c;
  bad.dbp.block_size = 1 << 12;
  bad.dbp.overlap = 128;
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  bad = c;
  bad.threads = 0;
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  CHECK(c.dbp_rate() == approx(36e9));
  CHECK(c.sim_rate() == approx(256e9));
  CHECK(c.coefficient_mode() == CoefficientMode::Analytic);
  c.dbp.coefficient_source = "optimized";
  CHECK(c.coefficient_mode() == CoefficientMode::Optimized);
}

TEST_CASE("csv carries the config hash") {
  const auto dir = scratch("csv");
  write_csv(dir / "t.csv", "0123456789abcdef", {"a", "b"}, {{"1", "2"}, {"3", "4"}});
  CHECK(slurp(dir / "t.csv") == "# config_hash: 0123456789abcdef\na,b\n1,2\n3,4\n");
  CHECK(format_number(0.125) == "0.125");
  fs::remove_all(dir);
}

TEST_CASE("symbol files round trip") {
  const auto dir = scratch("sym");
  fs::create_directories(dir);
  DualPolSymbols s{{{1.0, -1.0}, {0.5, 0.25}}, {{-3.0, 1.0}, {0.0, 2.0}}};
  write_symbols(dir / "s.fdbp", s, 32e9);
  const auto back = read_symbols(dir / "s.fdbp");
  CHECK(back.x == s.x);
  CHECK(back.y == s.y);
  fs::remove_all(dir);
}

TEST_CASE("simulate writes a consistent data set and resumes from checkpoints") {
  const auto dir = scratch("sim");
  auto c = small_config(dir.string());
  c.simulation.checkpoint = true;
  const auto files = cmd_simulate(c);
  for (const auto& f : files) CHECK(fs::exists(f));
  CHECK(fs::exists(dir / "symbols_ch2.fdbp"));
  const std::string manifest = slurp(dir / "manifest.json");
  CHECK(manifest.find(c.hash()) != std::string::npos);
  CHECK(manifest.find("\"center_channel\": 1") != std::string::npos);

  const auto rx = read_waveform(dir / "rx_field.fdbp");
  const auto in = read_waveform(dir / "dbp_input.fdbp");
  CHECK(in.sample_rate == approx(c.dbp_rate()));
  CHECK(in.size() == 1152);

  // The last checkpoint is the final span: resuming reproduces the output.
  CHECK(slurp(dir / "checkpoint.json").find("\"span\": 1") != std::string::npos);
  cmd_simulate(c, true);
  const auto rx2 = read_waveform(dir / "rx_field.fdbp");
  CHECK(rx2.x == rx.x);

  // Resume from the first span: same result as a fresh run.
  const auto tx = read_waveform(dir / "tx_field.fdbp");
  LinkConfig one = c.link;
  one.num_spans = 1;
  auto s = c.simulation.settings;
  s.noise_enabled = false;
  auto noiseless = c;
  noiseless.simulation.settings.noise_enabled = false;
  noiseless.simulation.checkpoint = false;
  cmd_simulate(noiseless);
  const auto full = read_waveform(dir / "rx_field.fdbp");
  write_waveform(dir / "checkpoint.fdbp", propagate_link(tx, one, s));
  {
    std::ofstream f(dir / "checkpoint.json");
    f << "{\"config_hash\": \"" << noiseless.hash() << "\", \"span\": 0}";
  }
  cmd_simulate(noiseless, true);
  const auto resumed = read_waveform(dir / "rx_field.fdbp");
  double err = 0.0;
  for (std::size_t i = 0; i < full.size(); ++i) err = std::max(err, std::abs(resumed.x[i] - full.x[i]));
  CHECK(err < 1e-12 * std::sqrt(full.mean_power()) + 1e-18);

  // A checkpoint of a different config is ignored.
  {
    std::ofstream f(dir / "checkpoint.json");
    f << "{\"config_hash\": \"ffffffffffffffff\", \"span\": 1}";
  }
  cmd_simulate(noiseless, true);
  CHECK(read_waveform(dir / "rx_field.fdbp").x == full.x);
  fs::remove_all(dir);
}

TEST_CASE("dbp on simulated files matches the in-memory path") {
  const auto dir = scratch("dbp");
  auto c = small_config(dir.string());
  cmd_simulate(c);
  const auto coeffs = cmd_coeffs(c);
  REQUIRE(fs::exists(coeffs.front()));
  CHECK(slurp(coeffs.front()).find(c.hash()) != std::string::npos);
  cmd_dbp(c, dir / "dbp_input.fdbp", coeffs.front());
  const std::string report = slurp(dir / "dbp_report.json");
  CHECK(report.find("snr_db") != std::string::npos);

  // Same seed and config: the System path produces the same input.
  System sys(c);
  auto s = sys.simulate(c.wdm.launch_power_dbm_per_channel, c.seed, 0);
  CHECK(sys.dbp_input(s.rx, s.symbols).size() == 1152);
  fs::remove_all(dir);
}

TEST_CASE("cost table has the EDC row at the block reference") {
  const auto dir = scratch("cost");
  ExperimentConfig c;
  c.simulation.num_symbols = 1 << 15;
  c.dbp.block_size = 16384;
  c.dbp.overlap = 1800;
  c.dbp.n_subbands = 2;
  c.dbp.link = c.link;
  c.sweeps.n_steps = {1, 15};
  c.output_dir = dir.string();
  const auto p = cmd_cost(c).front();
  const std::string t = slurp(p);
  CHECK(t.rfind("# config_hash: " + c.hash(), 0) == 0);
  const auto edc = t.find("EDC,0,1,16384,1800,1.125,");
  REQUIRE(edc != std::string::npos);
  CHECK(std::round(std::stod(t.substr(edc + 25))) == 32.0);
  int edc_rows = 0;
  for (std::size_t i = t.find("EDC,"); i != std::string::npos; i = t.find("EDC,", i + 1)) ++edc_rows;
  CHECK(edc_rows == 1);
  fs::remove_all(dir);
}

TEST_CASE("sweeps and figures") {
  const auto dir = scratch("fig");
  auto c = small_config(dir.string());
  c.simulation.settings.noise_enabled = false;
  c.dbp.n_steps = 2;
  c.sweeps.rho = {0.0, 0.5, 1.0};
  const auto rho = cmd_figure(c, "snr_vs_rho").front();
  const std::string t = slurp(rho);
  CHECK(t.find("rho,snr_db\n0,") != std::string::npos);
  CHECK(t.find("\n1,") != std::string::npos);

  c.sweeps.power_dbm = {0.0, 4.0};
  c.sweeps.variants = {"EDC", "ESSFM"};
  c.sweeps.n_steps = {2};
  const std::string s = slurp(cmd_figure(c, "snr_vs_steps").front());
  CHECK(s.find("variant,n_steps,n_subbands,best_power_dbm,snr_db,RM_per_2D,RA_per_2D") != std::string::npos);
  CHECK(s.find("\nEDC,0,1,") != std::string::npos);
  CHECK(s.find(",,\n") != std::string::npos);
  CHECK(s.find("\nESSFM,2,1,") != std::string::npos);

  CHECK_THROWS_AS(cmd_figure(c, "nope"), ConfigError);
  CHECK_THROWS_AS(cmd_sweep(c, "nope"), ConfigError);
  fs::remove_all(dir);
}
