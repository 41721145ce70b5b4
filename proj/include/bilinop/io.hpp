#pragma once

#include <string>

#include "bilinop/grid.hpp"

namespace bilinop {

/// Columnar sample file: header "# bilinop-grid N=<int> L=<float>" followed
/// by "index,re,im" rows, one per grid point.
void writeSampledFunction(const SampledFunction& f, const std::string& path);
SampledFunction readSampledFunction(const std::string& path);

/// Spectral file: header "# bilinop-spec N=<int> L=<float>" followed by
/// "index,re,im" rows over nonzero lattice indices.
void writeSpectralCoefficients(const SpectralCoefficients& coeffs, const std::string& path);
SpectralCoefficients readSpectralCoefficients(const std::string& path);

}  // namespace bilinop
