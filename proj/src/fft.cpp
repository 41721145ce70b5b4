#include "fft.hpp"

#include <fftw3.h>

#include <mutex>

namespace bilinop::detail {
namespace {

// The FFTW planner is not thread-safe; execution of distinct plans is.
std::mutex& plannerMutex() {
  static std::mutex m;
  return m;
}

void transformInPlace(std::vector<std::complex<double>>& buffer, int sign) {
  const int n = static_cast<int>(buffer.size());
  if (n == 0) return;
  auto* data = reinterpret_cast<fftw_complex*>(buffer.data());
  fftw_plan plan;
  {
    std::lock_guard<std::mutex> lock(plannerMutex());
    plan = fftw_plan_dft_1d(n, data, data, sign, FFTW_ESTIMATE);
  }
  fftw_execute(plan);
  {
    std::lock_guard<std::mutex> lock(plannerMutex());
    fftw_destroy_plan(plan);
  }
}

}  // namespace

void dftForwardInPlace(std::vector<std::complex<double>>& buffer) {
  transformInPlace(buffer, FFTW_FORWARD);
}

void dftBackwardInPlace(std::vector<std::complex<double>>& buffer) {
  transformInPlace(buffer, FFTW_BACKWARD);
}

}  // namespace bilinop::detail
