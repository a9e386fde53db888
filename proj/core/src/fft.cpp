#include "fdbp/fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <tuple>
#include <vector>

#include "fdbp/error.hpp"

namespace fdbp::fft {
namespace {

enum class Kind { Forward, Inverse, RealForward, RealInverse };

class PlanCache {
public:
  ~PlanCache() {
    for (auto& [key, plan] : plans_) fftw_destroy_plan(plan);
  }

  fftw_plan get(Kind kind, std::size_t n) {
    std::lock_guard lock(mutex_);
    auto key = std::make_tuple(kind, n);
    if (auto it = plans_.find(key); it != plans_.end()) return it->second;

    // Plans are made on scratch buffers and executed later through the
    // new-array interface, hence FFTW_UNALIGNED.
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    const int ni = static_cast<int>(n);
    fftw_plan plan = nullptr;
    switch (kind) {
      case Kind::Forward:
      case Kind::Inverse: {
        std::vector<cd> a(n), b(n);
        plan = fftw_plan_dft_1d(ni, reinterpret_cast<fftw_complex*>(a.data()),
                                reinterpret_cast<fftw_complex*>(b.data()),
                                kind == Kind::Forward ? FFTW_FORWARD : FFTW_BACKWARD, flags);
        break;
      }
      case Kind::RealForward: {
        std::vector<double> a(n);
        std::vector<cd> b(n / 2 + 1);
        plan = fftw_plan_dft_r2c_1d(ni, a.data(), reinterpret_cast<fftw_complex*>(b.data()), flags);
        break;
      }
      case Kind::RealInverse: {
        std::vector<cd> a(n / 2 + 1);
        std::vector<double> b(n);
        plan = fftw_plan_dft_c2r_1d(ni, reinterpret_cast<fftw_complex*>(a.data()), b.data(),
                                    flags | FFTW_DESTROY_INPUT);
        break;
      }
    }
    if (plan == nullptr) throw Error("FFTW plan creation failed");
    plans_.emplace(key, plan);
    return plan;
  }

private:
  std::mutex mutex_;
  std::map<std::tuple<Kind, std::size_t>, fftw_plan> plans_;
};

PlanCache& cache() {
  static PlanCache instance;
  return instance;
}

void check_sizes(std::size_t a, std::size_t b) {
  if (a != b) throw ShapeError("fft: input/output size mismatch");
  if (a == 0) throw ShapeError("fft: empty transform");
}

}  // namespace

void forward(std::span<const cd> in, std::span<cd> out) {
  check_sizes(in.size(), out.size());
  fftw_plan p = cache().get(Kind::Forward, in.size());
  fftw_execute_dft(p, reinterpret_cast<fftw_complex*>(const_cast<cd*>(in.data())),
                   reinterpret_cast<fftw_complex*>(out.data()));
}

void inverse(std::span<const cd> in, std::span<cd> out) {
  check_sizes(in.size(), out.size());
  fftw_plan p = cache().get(Kind::Inverse, in.size());
  fftw_execute_dft(p, reinterpret_cast<fftw_complex*>(const_cast<cd*>(in.data())),
                   reinterpret_cast<fftw_complex*>(out.data()));
  const double scale = 1.0 / static_cast<double>(out.size());
  for (auto& v : out) v *= scale;
}

void forward_real(std::span<const double> in, std::span<cd> out) {
  if (in.empty() || out.size() != in.size() / 2 + 1)
    throw ShapeError("fft: real transform size mismatch");
  fftw_plan p = cache().get(Kind::RealForward, in.size());
  fftw_execute_dft_r2c(p, const_cast<double*>(in.data()),
                       reinterpret_cast<fftw_complex*>(out.data()));
}

void inverse_real(std::span<const cd> in, std::span<double> out) {
  if (out.empty() || in.size() != out.size() / 2 + 1)
    throw ShapeError("fft: real transform size mismatch");
  // c2r destroys its input.
  std::vector<cd> tmp(in.begin(), in.end());
  fftw_plan p = cache().get(Kind::RealInverse, out.size());
  fftw_execute_dft_c2r(p, reinterpret_cast<fftw_complex*>(tmp.data()), out.data());
  const double scale = 1.0 / static_cast<double>(out.size());
  for (auto& v : out) v *= scale;
}

}  // namespace fdbp::fft
