#pragma once

#include <fftw3.h>

#include <complex>
#include <mutex>
#include <vector>

#include "cardinal/common.hpp"

namespace cardinal {

// FFTW plan creation is not thread-safe; execution on distinct buffers is.
inline std::mutex& fftw_planner_mutex() {
  static std::mutex m;
  return m;
}

inline void fft_1d(std::vector<std::complex<double>>& data, int sign) {
  const int n = static_cast<int>(data.size());
  require(n > 0, "fft_1d: empty input");
  auto* ptr = reinterpret_cast<fftw_complex*>(data.data());
  fftw_plan plan;
  {
    std::lock_guard<std::mutex> lock(fftw_planner_mutex());
    plan = fftw_plan_dft_1d(n, ptr, ptr, sign, FFTW_ESTIMATE);
  }
  fftw_execute(plan);
  {
    std::lock_guard<std::mutex> lock(fftw_planner_mutex());
    fftw_destroy_plan(plan);
  }
}

inline void fft_forward(std::vector<std::complex<double>>& data) {
  fft_1d(data, FFTW_FORWARD);
}

inline void fft_backward(std::vector<std::complex<double>>& data) {
  fft_1d(data, FFTW_BACKWARD);
}

// Row-major n0 x n1 transform, in place.
inline void fft_2d(std::vector<std::complex<double>>& data, int n0, int n1,
                   int sign) {
  require(static_cast<size_t>(n0) * n1 == data.size(),
          "fft_2d: shape mismatch");
  auto* ptr = reinterpret_cast<fftw_complex*>(data.data());
  fftw_plan plan;
  {
    std::lock_guard<std::mutex> lock(fftw_planner_mutex());
    plan = fftw_plan_dft_2d(n0, n1, ptr, ptr, sign, FFTW_ESTIMATE);
  }
  fftw_execute(plan);
  {
    std::lock_guard<std::mutex> lock(fftw_planner_mutex());
    fftw_destroy_plan(plan);
  }
}

// Index of signed position l in a length-n DFT array.
inline int wrap_index(long l, int n) {
  long r = l % n;
  if (r < 0) r += n;
  return static_cast<int>(r);
}

// Signed frequency index of DFT bin q (q in [0, n)).
inline long signed_bin(int q, int n) { return q <= n / 2 ? q : q - n; }

inline int next_pow2(long n) {
  int p = 1;
  while (p < n) p <<= 1;
  return p;
}

}  // namespace cardinal
