#include "fdbp/waveform.hpp"

#include <array>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>

#include "fdbp/error.hpp"

namespace fdbp {
namespace {

static_assert(std::endian::native == std::endian::little,
              "waveform I/O assumes a little-endian host");

constexpr std::array<char, 4> kMagic{'F', 'D', 'B', 'P'};

template <typename T>
void put(std::ostream& os, T v) {
  os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T get(std::istream& is) {
  T v{};
  is.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (!is) throw IoError("truncated waveform file");
  return v;
}

}  // namespace

void DualPolWaveform::validate() const {
  if (x.size() != y.size()) throw ShapeError("waveform: polarizations differ in length");
  if (!(sample_rate > 0.0) || !std::isfinite(sample_rate))
    throw ConfigError("waveform: sample rate must be positive");
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!std::isfinite(x[i].real()) || !std::isfinite(x[i].imag()) ||
        !std::isfinite(y[i].real()) || !std::isfinite(y[i].imag()))
      throw NumericError("waveform: non-finite sample at index " + std::to_string(i));
  }
}

double DualPolWaveform::energy() const {
  double e = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) e += std::norm(x[i]) + std::norm(y[i]);
  return e;
}

double DualPolWaveform::mean_power() const {
  return x.empty() ? 0.0 : energy() / static_cast<double>(x.size());
}

double relative_rms_difference(const DualPolWaveform& a, const DualPolWaveform& b) {
  if (a.size() != b.size()) throw ShapeError("relative_rms_difference: size mismatch");
  double num = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    num += std::norm(a.x[i] - b.x[i]) + std::norm(a.y[i] - b.y[i]);
  const double den = b.energy();
  if (den == 0.0) return num == 0.0 ? 0.0 : INFINITY;
  return std::sqrt(num / den);
}

void write_waveform(const std::filesystem::path& path, const DualPolWaveform& w) {
  w.validate();
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw IoError("cannot open " + path.string() + " for writing");
  os.write(kMagic.data(), kMagic.size());
  put<std::uint16_t>(os, kWaveformFileVersion);
  put<double>(os, w.sample_rate);
  put<double>(os, w.center_freq);
  put<std::uint64_t>(os, w.size());
  std::vector<double> buf(4 * w.size());
  for (std::size_t i = 0; i < w.size(); ++i) {
    buf[4 * i + 0] = w.x[i].real();
    buf[4 * i + 1] = w.x[i].imag();
    buf[4 * i + 2] = w.y[i].real();
    buf[4 * i + 3] = w.y[i].imag();
  }
  os.write(reinterpret_cast<const char*>(buf.data()),
           static_cast<std::streamsize>(buf.size() * sizeof(double)));
  if (!os) throw IoError("write failed: " + path.string());
}

DualPolWaveform read_waveform(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("cannot open " + path.string());
  std::array<char, 4> magic{};
  is.read(magic.data(), magic.size());
  if (!is || magic != kMagic) throw IoError(path.string() + ": not an FDBP waveform file");
  const auto version = get<std::uint16_t>(is);
  if (version != kWaveformFileVersion)
    throw IoError(path.string() + ": unsupported version " + std::to_string(version));
  DualPolWaveform w;
  w.sample_rate = get<double>(is);
  w.center_freq = get<double>(is);
  const auto n = get<std::uint64_t>(is);
  std::vector<double> buf(4 * n);
  is.read(reinterpret_cast<char*>(buf.data()),
          static_cast<std::streamsize>(buf.size() * sizeof(double)));
  if (!is) throw IoError(path.string() + ": truncated payload");
  w.x.resize(n);
  w.y.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    w.x[i] = {buf[4 * i + 0], buf[4 * i + 1]};
    w.y[i] = {buf[4 * i + 2], buf[4 * i + 3]};
  }
  w.validate();
  return w;
}

}  // namespace fdbp
