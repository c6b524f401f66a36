#pragma once

#include "hspan/sharpen/request.hpp"

namespace hspan {

/// Interpolation-only baseline: every band upsampled independently, PAN
/// ignored.
inline FusedCube sharpen_exp(const SharpenRequest& req) {
  req.validate();
  const auto geom = FusedGeometry::of(req);
  return HyperCube::from_bands(geom.meta(req.hs.meta()), detail::upsample_bands(req.hs, req.ratio));
}

}  // namespace hspan
