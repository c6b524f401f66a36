#pragma once

#include <vector>

#include "hspan/core/types.hpp"
#include "hspan/metrics/no_reference.hpp"
#include "hspan/raster/resample.hpp"

namespace hspan {

/// Pixel footprint of one tile on both grids.
struct TileRect {
  std::size_t row = 0;
  std::size_t col = 0;
  std::size_t hs_x = 0;
  std::size_t hs_y = 0;
  std::size_t hs_size = 0;
  std::size_t pan_x = 0;
  std::size_t pan_y = 0;
  std::size_t pan_size = 0;
};

/// Non-overlapping grid anchored at the top-left; partial edge tiles are
/// discarded.
inline std::vector<TileRect> tile_grid(std::size_t hs_width, std::size_t hs_height,
                                       std::size_t hs_tile, std::size_t pan_tile, int ratio) {
  detail::require(hs_tile > 0, "tile: hs_tile must be > 0");
  detail::require(pan_tile == static_cast<std::size_t>(ratio) * hs_tile,
                  "tile: pan_tile != ratio * hs_tile");
  if (hs_width < hs_tile || hs_height < hs_tile)
    throw ValidationError("tile: scene smaller than one tile");
  std::vector<TileRect> rects;
  for (std::size_t r = 0; (r + 1) * hs_tile <= hs_height; ++r) {
    for (std::size_t c = 0; (c + 1) * hs_tile <= hs_width; ++c) {
      TileRect t;
      t.row = r;
      t.col = c;
      t.hs_x = c * hs_tile;
      t.hs_y = r * hs_tile;
      t.hs_size = hs_tile;
      t.pan_x = t.hs_x * static_cast<std::size_t>(ratio);
      t.pan_y = t.hs_y * static_cast<std::size_t>(ratio);
      t.pan_size = pan_tile;
      rects.push_back(t);
    }
  }
  return rects;
}

inline HyperCube crop(const HyperCube& cube, std::size_t x, std::size_t y, std::size_t w,
                      std::size_t h) {
  detail::require(x + w <= cube.width() && y + h <= cube.height() && w > 0 && h > 0,
                  "crop: window outside cube");
  RasterMeta meta = cube.meta();
  meta.width = w;
  meta.height = h;
  std::vector<float> samples;
  samples.reserve(w * h * cube.bands());
  for (std::size_t b = 0; b < cube.bands(); ++b) {
    const auto band = cube.band(b);
    for (std::size_t r = 0; r < h; ++r) {
      const float* row = band.data.data() + (y + r) * band.width + x;
      samples.insert(samples.end(), row, row + w);
    }
  }
  return HyperCube(std::move(meta), std::move(samples));
}

inline PanImage crop(const PanImage& pan, std::size_t x, std::size_t y, std::size_t w,
                     std::size_t h) {
  detail::require(x + w <= pan.width() && y + h <= pan.height() && w > 0 && h > 0,
                  "crop: window outside pan");
  RasterMeta meta = pan.meta();
  meta.width = w;
  meta.height = h;
  std::vector<float> samples;
  samples.reserve(w * h);
  for (std::size_t r = 0; r < h; ++r) {
    const float* row = pan.samples().data() + (y + r) * pan.width() + x;
    samples.insert(samples.end(), row, row + w);
  }
  return PanImage(std::move(meta), std::move(samples));
}

inline FrPair extract_fr(const PanImage& pan, const HyperCube& hs, const TileRect& t, int ratio) {
  return FrPair(crop(pan, t.pan_x, t.pan_y, t.pan_size, t.pan_size),
                crop(hs, t.hs_x, t.hs_y, t.hs_size, t.hs_size), ratio);
}

/// Cuts a cleaned scene into full-resolution <PAN, HS> tiles.
inline std::vector<FrPair> tile_fr(const PanImage& pan, const HyperCube& hs,
                                   std::size_t pan_tile = 2304, std::size_t hs_tile = 384) {
  detail::require(hs_tile > 0 && pan_tile % hs_tile == 0, "tile: pan_tile must be a multiple of hs_tile");
  const auto ratio = static_cast<int>(pan_tile / hs_tile);
  detail::require(pan.width() == hs.width() * ratio && pan.height() == hs.height() * ratio,
                  "tile: pan/hs size ratio != pan_tile/hs_tile");
  std::vector<FrPair> out;
  for (const auto& t : tile_grid(hs.width(), hs.height(), hs_tile, pan_tile, ratio))
    out.push_back(extract_fr(pan, hs, t, ratio));
  return out;
}

/// Reduced-resolution triplet: both PAN and HS degraded by the MTF model and
/// decimated by the ratio; the original HS becomes the reference.
inline RrTriplet make_rr(const FrPair& fr, const MtfSpec& spec) {
  detail::require(spec.ratio == fr.ratio, "make_rr: spec ratio != pair ratio");
  const Kernel2D kernel = mtf_gaussian_kernel(spec);
  RasterMeta pan_meta = fr.pan.meta();
  auto pan_lo = degrade(fr.pan.view(), kernel, spec.ratio);
  pan_meta.width = pan_lo.width();
  pan_meta.height = pan_lo.height();
  pan_meta.gsd *= spec.ratio;
  return RrTriplet(PanImage::from_grid(std::move(pan_meta), pan_lo), degrade_cube(fr.hs, spec),
                   fr.hs, spec.ratio);
}

}  // namespace hspan
