#pragma once

#include <cmath>
#include <complex>
#include <cstdint>

namespace bilinop {

/// Counter-based generator (splitmix64). Streams derived from (seed, index)
/// are independent, so per-trial streams can run in any order and still give
/// run-to-run identical results.
class TrialRng {
public:
  explicit TrialRng(std::uint64_t seed) : state_(seed) {}

  static TrialRng forTrial(std::uint64_t seed, std::uint64_t trialIndex) {
    TrialRng mixer(seed);
    std::uint64_t derived = mixer.nextU64() ^ (0x9e3779b97f4a7c15ULL * (trialIndex + 1));
    return TrialRng(derived);
  }

  std::uint64_t nextU64() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  /// Uniform in (0, 1].
  double uniform() {
    return (static_cast<double>(nextU64() >> 11) + 1.0) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  std::int64_t uniformInt(std::int64_t lo, std::int64_t hi) {
    return lo + static_cast<std::int64_t>(nextU64() % static_cast<std::uint64_t>(hi - lo + 1));
  }

  /// Standard normal via Box-Muller; platform independent.
  double normal() {
    double u1 = uniform();
    double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925286766559 * u2);
  }

  std::complex<double> complexNormal() { return {normal(), normal()}; }

private:
  std::uint64_t state_;
};

}  // namespace bilinop
