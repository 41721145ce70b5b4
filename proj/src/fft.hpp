#pragma once

#include <complex>
#include <vector>

namespace bilinop::detail {

/// X_k = sum_n x_n e^{-2 pi i k n / N}, in place.
void dftForwardInPlace(std::vector<std::complex<double>>& buffer);

/// x_n = sum_k X_k e^{+2 pi i k n / N}, in place, unscaled.
void dftBackwardInPlace(std::vector<std::complex<double>>& buffer);

}  // namespace bilinop::detail
