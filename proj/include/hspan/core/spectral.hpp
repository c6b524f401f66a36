#pragma once

#include <cmath>
#include <cstddef>

#include "hspan/core/types.hpp"

namespace hspan {

/// Index of the band nearest to `target_nm`; ties go to the lower index.
inline std::size_t band_at_wavelength(const RasterMeta& meta, double target_nm) {
  detail::require(!meta.wavelengths.empty(), "band_at_wavelength: no wavelength metadata");
  std::size_t best = 0;
  double best_dist = std::abs(meta.wavelengths[0] - target_nm);
  for (std::size_t b = 1; b < meta.wavelengths.size(); ++b) {
    const double d = std::abs(meta.wavelengths[b] - target_nm);
    if (d < best_dist) {
      best = b;
      best_dist = d;
    }
  }
  return best;
}

inline std::size_t band_at_wavelength(const HyperCube& cube, double target_nm) {
  return band_at_wavelength(cube.meta(), target_nm);
}

}  // namespace hspan
