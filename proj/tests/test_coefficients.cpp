#include <cmath>
#include <filesystem>
#include <fstream>
#include <numeric>

#include "approx.hpp"
#include "doctest.h"
#include "fdbp/dbp.hpp"
#include "fdbp/error.hpp"

using namespace fdbp;

namespace {

CoefficientSet sample_set() {
  CoefficientSet s;
  s.n_sb = 2;
  s.subband_rate = 52.3125e9;
  s.subband_spacing = 52.3125e9;
  s.taps = {{0.1, 0.7, 0.1}, {0.05, 0.2, 0.4, 0.2, 0.01}};
  s.phase_scale = -27.3;
  s.step_power_scale = {1.0, 0.9, 1.1};
  s.geometry_hash = 0xfeedbeefcafe1234ULL;
  s.meta["source"] = "test";
  return s;
}

DbpConfig cb_config(int n_steps, int n_sb, double rho = 0.5) {
  DbpConfig c;
  c.variant = Variant::CB_ESSFM;
  c.n_steps = n_steps;
  c.n_subbands = n_sb;
  c.splitting_ratio = rho;
  return c;
}

}  // namespace

TEST_CASE("CoefficientSet accessors and validation") {
  auto s = sample_set();
  CHECK_NOTHROW(s.validate());
  CHECK(s.n_c(0) == 1);
  CHECK(s.n_c(1) == 2);
  CHECK(s.num_steps() == 3);
  CHECK(s.tap(1, -2) == 0.05);
  CHECK(s.tap(1, 2) == 0.01);
  CHECK(s.tap(0, 5) == 0.0);

  auto even = s;
  even.taps[0] = {0.1, 0.7, 0.2};
  CHECK_THROWS_AS(even.validate(), ShapeError);
  auto odd = s;
  odd.taps[1] = {0.1, 0.2};
  CHECK_THROWS_AS(odd.validate(), ShapeError);
  auto count = s;
  count.taps.pop_back();
  CHECK_THROWS_AS(count.validate(), ShapeError);
  auto nan = s;
  nan.taps[1][0] = std::nan("");
  CHECK_THROWS_AS(nan.validate(), NumericError);
}

TEST_CASE("CoefficientSet JSON and file round trip") {
  const auto s = sample_set();
  const auto r = CoefficientSet::from_json(s.to_json());
  CHECK(r.n_sb == s.n_sb);
  CHECK(r.taps == s.taps);
  CHECK(r.phase_scale == s.phase_scale);
  CHECK(r.step_power_scale == s.step_power_scale);
  CHECK(r.geometry_hash == s.geometry_hash);
  CHECK(r.subband_rate == s.subband_rate);
  CHECK(r.meta == s.meta);

  const auto path = std::filesystem::temp_directory_path() / "fdbp_test_coeffs.json";
  write_coefficients(path, s);
  CHECK(read_coefficients(path).taps == s.taps);
  {
    std::ofstream f(path);
    f << "{\"format\": \"something-else\"}";
  }
  CHECK_THROWS_AS(read_coefficients(path), IoError);
  {
    std::ofstream f(path);
    f << "not json";
  }
  CHECK_THROWS_AS(read_coefficients(path), IoError);
  std::filesystem::remove(path);
  CHECK_THROWS_AS(read_coefficients(path), IoError);
}

TEST_CASE("analytic DBP coefficients") {
  const double baud = 93e9;
  SUBCASE("layout and normalization") {
    const auto c = analytic_dbp_coefficients(cb_config(5, 2), baud);
    CHECK(c.n_sb == 2);
    CHECK(c.subband_rate == approx(1.125 * 93e9 / 2));
    CHECK(c.num_steps() == 5);
    CHECK_NOTHROW(c.validate());
    CHECK(c.phase_scale < 0.0);
    // One step of three spans: every step starts right after an amplifier.
    for (double s : c.step_power_scale) CHECK(s == approx(1.0).epsilon(1e-12));
    // Unit-normalized SPM response: the taps sum to about one.
    const double sum0 = std::accumulate(c.taps[0].begin(), c.taps[0].end(), 0.0);
    CHECK(sum0 == approx(1.0).epsilon(0.05));
    const int nc0 = c.n_c(0);
    for (int m = 1; m <= nc0; ++m) CHECK(c.tap(0, m) == c.tap(0, -m));
    CHECK(c.n_c(1) > c.n_c(0));
    CHECK(c.meta.at("grid_converged") == "true");
  }
  SUBCASE("fractional steps scale by the power at the step input") {
    const auto c = analytic_dbp_coefficients(cb_config(30, 1), baud);
    REQUIRE(c.num_steps() == 30);
    const double a = LinkConfig{}.alpha();
    // DBP processes the last forward step (second half of a span) first.
    CHECK(c.step_power_scale[0] == approx(std::exp(-a * 40.0)).epsilon(1e-12));
    CHECK(c.step_power_scale[1] == approx(1.0).epsilon(1e-12));
  }
  SUBCASE("linear link gives zero taps") {
    auto cfg = cb_config(3, 2);
    cfg.link.gamma = 0.0;
    const auto c = analytic_dbp_coefficients(cfg, baud);
    for (const auto& v : c.taps)
      for (double t : v) CHECK(t == 0.0);
  }
  SUBCASE("OSSFM is a single tap") {
    auto cfg = cb_config(15, 1);
    cfg.variant = Variant::OSSFM;
    const auto c = analytic_dbp_coefficients(cfg, baud);
    CHECK(c.n_c(0) == 0);
    CHECK(c.taps[0][0] == 1.0);
  }
  SUBCASE("ideal SSFM phases integrate the power profile") {
    auto cfg = cb_config(30, 1);
    cfg.variant = Variant::IDEAL_SSFM;
    const auto c = ideal_dbp_coefficients(cfg, baud);
    const auto link = cfg.link;
    const double a = link.alpha();
    // First forward half-span integrates from 0 to 40 km, second from 40 to 80.
    const double first = (1 - std::exp(-a * 40)) / a;
    const double second = std::exp(-a * 40) * first;
    const double avg = 0.5 * (first + second);
    CHECK(c.phase_scale == approx(-link.gamma * avg).epsilon(1e-12));
    CHECK(c.step_power_scale[0] == approx(second / avg).epsilon(1e-12));
    CHECK(c.step_power_scale[1] == approx(first / avg).epsilon(1e-12));
    double total = 0.0;
    for (double s : c.step_power_scale) total += s;
    CHECK(total == approx(30.0).epsilon(1e-12));
  }
  SUBCASE("SSFM start") {
    const auto c = ssfm_dbp_coefficients(cb_config(5, 2), baud);
    CHECK(c.taps[0][static_cast<std::size_t>(c.n_c(0))] == 1.0);
    double others = 0.0;
    for (const auto& v : c.taps)
      for (double t : v) others += std::abs(t);
    CHECK(others == 1.0);
    CHECK(ssfm_dbp_coefficients(cb_config(5, 2), baud, 3).n_c(1) == 3);
  }
  SUBCASE("EDC and file sources") {
    DbpConfig edc;
    edc.variant = Variant::EDC;
    edc.n_steps = 0;
    const auto e = default_dbp_coefficients(edc, baud);
    CHECK(e.taps[0] == std::vector<double>{0.0});
    auto f = cb_config(5, 1);
    f.coefficient_source = "file";
    CHECK_THROWS_AS(default_dbp_coefficients(f, baud), ConfigError);
    const auto path = std::filesystem::temp_directory_path() / "fdbp_test_coeffs2.json";
    const auto a = analytic_dbp_coefficients(cb_config(5, 1), baud);
    write_coefficients(path, a);
    f.coefficient_file = path.string();
    CHECK(default_dbp_coefficients(f, baud).taps == a.taps);
    // "optimized" reads a file when given one and starts from the analytic set otherwise.
    auto o = cb_config(5, 1);
    o.coefficient_source = "optimized";
    CHECK(default_dbp_coefficients(o, baud).taps == a.taps);
    o.coefficient_file = path.string();
    CHECK(default_dbp_coefficients(o, baud).taps == a.taps);
    std::filesystem::remove(path);
  }
}
