#include "fdbp/coefficients.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "fdbp/error.hpp"
#include "json.hpp"

namespace fdbp {

using nlohmann::json;

double CoefficientSet::tap(int h, int m) const {
  const auto& v = taps.at(static_cast<std::size_t>(h));
  const int nc = static_cast<int>(v.size() / 2);
  if (m < -nc || m > nc) return 0.0;
  return v[static_cast<std::size_t>(m + nc)];
}

void CoefficientSet::validate() const {
  if (n_sb < 1) throw ShapeError("coefficients: n_sb must be >= 1");
  if (static_cast<int>(taps.size()) != n_sb)
    throw ShapeError("coefficients: expected one tap vector per subband separation");
  for (const auto& v : taps) {
    if (v.size() % 2 != 1) throw ShapeError("coefficients: tap vectors must have odd length");
    for (double c : v)
      if (!std::isfinite(c)) throw NumericError("coefficients: non-finite tap");
  }
  if (!std::isfinite(phase_scale)) throw NumericError("coefficients: non-finite phase scale");
  for (double s : step_power_scale)
    if (!std::isfinite(s)) throw NumericError("coefficients: non-finite step scale");
  const auto& c0 = taps.front();
  const int nc = static_cast<int>(c0.size() / 2);
  double peak = 0.0;
  for (double c : c0) peak = std::max(peak, std::abs(c));
  for (int m = 1; m <= nc; ++m)
    if (std::abs(c0[nc + m] - c0[nc - m]) > 1e-8 * peak)
      throw ShapeError("coefficients: c_0 must be even-symmetric");
}

std::string CoefficientSet::to_json() const {
  json j;
  j["format"] = "fdbp-coefficients";
  j["version"] = 1;
  j["n_sb"] = n_sb;
  j["subband_rate_hz"] = subband_rate;
  j["subband_spacing_hz"] = subband_spacing;
  j["geometry_hash"] = geometry_hash;
  j["phase_scale"] = phase_scale;
  j["step_power_scale"] = step_power_scale;
  j["taps"] = json::array();
  for (std::size_t h = 0; h < taps.size(); ++h)
    j["taps"].push_back({{"h", h}, {"n_c", taps[h].size() / 2}, {"values", taps[h]}});
  j["meta"] = meta;
  return j.dump(2);
}

CoefficientSet CoefficientSet::from_json(const std::string& text) {
  CoefficientSet s;
  try {
    const json j = json::parse(text);
    if (j.value("format", "") != "fdbp-coefficients")
      throw IoError("coefficients: not an fdbp coefficient file");
    s.n_sb = j.at("n_sb").get<int>();
    s.subband_rate = j.at("subband_rate_hz").get<double>();
    s.subband_spacing = j.at("subband_spacing_hz").get<double>();
    s.geometry_hash = j.at("geometry_hash").get<std::uint64_t>();
    s.phase_scale = j.at("phase_scale").get<double>();
    s.step_power_scale = j.at("step_power_scale").get<std::vector<double>>();
    s.taps.assign(static_cast<std::size_t>(s.n_sb), {});
    for (const auto& t : j.at("taps")) {
      const auto h = t.at("h").get<std::size_t>();
      if (h >= s.taps.size()) throw ShapeError("coefficients: separation out of range");
      s.taps[h] = t.at("values").get<std::vector<double>>();
    }
    if (j.contains("meta")) s.meta = j.at("meta").get<std::map<std::string, std::string>>();
  } catch (const json::exception& e) {
    throw IoError(std::string("coefficients: malformed file: ") + e.what());
  }
  s.validate();
  return s;
}

void write_coefficients(const std::filesystem::path& path, const CoefficientSet& set) {
  set.validate();
  std::ofstream f(path);
  if (!f) throw IoError("cannot open " + path.string() + " for writing");
  f << set.to_json() << '\n';
  if (!f) throw IoError("write failed: " + path.string());
}

CoefficientSet read_coefficients(const std::filesystem::path& path) {
  std::ifstream f(path);
  if (!f) throw IoError("cannot open " + path.string());
  std::ostringstream ss;
  ss << f.rdbuf();
  return CoefficientSet::from_json(ss.str());
}

}  // namespace fdbp
