#pragma once

#include "hspan/core/grid.hpp"
#include "hspan/raster/stats.hpp"

namespace hspan {

/// Affine map of `src` onto the target mean and (population) standard
/// deviation.
template <class T>
Grid<T> histogram_match_linear(GridView<const T> src, double ref_mean, double ref_std) {
  const Moments m = moments<T>(src.data);
  if (!(m.variance > 0.0)) throw ValidationError("histogram_match_linear: zero variance source");
  const double gain = ref_std / m.stddev();
  Grid<T> out(src.width, src.height);
  auto& dst = out.samples();
  for (std::size_t i = 0; i < dst.size(); ++i)
    dst[i] = static_cast<T>((static_cast<double>(src.data[i]) - m.mean) * gain + ref_mean);
  return out;
}

}  // namespace hspan
