#include "freqmon/rng.hpp"

namespace freqmon {

std::size_t Rng::categorical(std::span<const double> cumulative) {
  const double u = uniform();
  const std::size_t last = cumulative.size() - 1;
  for (std::size_t k = 0; k < last; ++k) {
    if (u < cumulative[k]) return k;
  }
  return last;
}

}  // namespace freqmon
