#pragma once

#include <cmath>
#include <cstdint>

#include "lawnsim/units.hpp"

namespace lawnsim {

// Deterministic, platform-independent generator. std::normal_distribution is
// implementation-defined, so Gaussian draws are produced by Box-Muller on top
// of a splitmix64 stream; identical seeds give identical streams everywhere.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // uniform in (0,1); never returns 0 so log() in Box-Muller stays finite
  double uniform01() {
    return (static_cast<double>(next() >> 11) + 0.5) * 0x1.0p-53;
  }

  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    const double u1 = uniform01();
    const double u2 = uniform01();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * pi * u2;
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
  }

 private:
  std::uint64_t state_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

// Derives an independent substream seed (worker index, trial index, ...).
// Results are scheduling-independent because each unit of work reseeds from
// its own index rather than sharing a stream.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
  SplitMix64 mix(seed ^ (0x517cc1b727220a95ULL * (index + 1)));
  return mix.next();
}

}  // namespace lawnsim
