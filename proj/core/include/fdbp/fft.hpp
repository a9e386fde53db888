#pragma once

#include <complex>
#include <cstddef>
#include <span>

namespace fdbp::fft {

using cd = std::complex<double>;

// Thin wrappers over FFTW with a process-wide, mutex-guarded plan cache.
// Execution is reentrant; in and out must not alias.
//
// Conventions: forward X[k] = sum_n x[n] e^{-j 2 pi k n / N} (unnormalized);
// inverse x[n] = (1/N) sum_k X[k] e^{+j 2 pi k n / N}.

void forward(std::span<const cd> in, std::span<cd> out);
void inverse(std::span<const cd> in, std::span<cd> out);

/// Real-to-half-complex transform, out.size() == in.size()/2 + 1.
void forward_real(std::span<const double> in, std::span<cd> out);
/// Inverse of forward_real including the 1/N factor; out.size() is N.
void inverse_real(std::span<const cd> in, std::span<double> out);

/// Signed frequency index of DFT bin k on an N-point grid, in [-N/2, N/2).
inline long signed_bin(std::size_t k, std::size_t n) {
  const long kk = static_cast<long>(k);
  const long nn = static_cast<long>(n);
  return kk < (nn + 1) / 2 ? kk : kk - nn;
}

/// DFT array position of a signed frequency index q on an N-point grid.
inline std::size_t bin_index(long q, std::size_t n) {
  const long nn = static_cast<long>(n);
  long r = q % nn;
  if (r < 0) r += nn;
  return static_cast<std::size_t>(r);
}

}  // namespace fdbp::fft
