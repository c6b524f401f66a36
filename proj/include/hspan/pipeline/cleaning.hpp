#pragma once

#include <algorithm>
#include <numeric>
#include <utility>
#include <vector>

#include "hspan/core/types.hpp"

namespace hspan {

/// Fraction of pixels in `band` whose code is in the invalid set.
inline double invalid_fraction(const ErrorCube& err, std::size_t band) {
  const auto codes = err.band(band);
  const auto bad = std::count_if(codes.begin(), codes.end(),
                                 [&](std::uint8_t c) { return err.is_invalid(c); });
  return static_cast<double>(bad) / static_cast<double>(codes.size());
}

/// VNIR and SWIR error cubes of one scene.
struct SceneErrors {
  ErrorCube vnir;
  ErrorCube swir;
};

/// Dataset-wide band mask over the concatenated [VNIR..., SWIR...] band
/// order. A band is dropped when its invalid fraction reaches `threshold` in
/// at least one scene.
inline BandMask clean_bands(std::span<const SceneErrors> scenes, double threshold = 0.05) {
  detail::require(!scenes.empty(), "clean_bands: no scenes");
  const std::size_t nv = scenes.front().vnir.bands();
  const std::size_t ns = scenes.front().swir.bands();
  std::vector<bool> keep(nv + ns, true);
  for (const auto& s : scenes) {
    detail::require(s.vnir.bands() == nv && s.swir.bands() == ns,
                    "clean_bands: scenes disagree on band count");
    for (std::size_t b = 0; b < nv; ++b)
      if (invalid_fraction(s.vnir, b) >= threshold) keep[b] = false;
    for (std::size_t b = 0; b < ns; ++b)
      if (invalid_fraction(s.swir, b) >= threshold) keep[nv + b] = false;
  }
  if (std::find(keep.begin(), keep.end(), true) == keep.end())
    throw ValidationError("clean_bands: all bands removed");
  return BandMask(std::move(keep));
}

/// Concatenates the unmasked VNIR and SWIR bands, ordered by ascending
/// wavelength. Overlapping wavelengths from both detectors are all kept;
/// each output band is tagged with its source detector.
inline HyperCube concat_cubes(const HyperCube& vnir, const HyperCube& swir, const BandMask& mask) {
  detail::require(vnir.width() == swir.width() && vnir.height() == swir.height(),
                  "concat: vnir/swir grid mismatch");
  detail::require(detail::gsd_equal(vnir.meta().gsd, swir.meta().gsd), "concat: vnir/swir gsd mismatch");
  detail::require(mask.size() == vnir.bands() + swir.bands(),
                  "concat: mask length != vnir.bands + swir.bands");

  struct Pick {
    double wavelength;
    const HyperCube* cube;
    std::size_t band;
    const char* source;
  };
  std::vector<Pick> picks;
  for (std::size_t b = 0; b < vnir.bands(); ++b)
    if (mask.keep()[b]) picks.push_back({vnir.meta().wavelengths[b], &vnir, b, "vnir"});
  for (std::size_t b = 0; b < swir.bands(); ++b)
    if (mask.keep()[vnir.bands() + b])
      picks.push_back({swir.meta().wavelengths[b], &swir, b, "swir"});
  std::stable_sort(picks.begin(), picks.end(),
                   [](const Pick& a, const Pick& b) { return a.wavelength < b.wavelength; });

  RasterMeta meta = vnir.meta();
  meta.bands = picks.size();
  meta.wavelengths.clear();
  meta.band_sources.clear();
  std::vector<float> samples;
  samples.reserve(meta.pixels() * picks.size());
  for (const auto& p : picks) {
    meta.wavelengths.push_back(p.wavelength);
    meta.band_sources.emplace_back(p.source);
    const auto band = p.cube->band(p.band).data;
    samples.insert(samples.end(), band.begin(), band.end());
  }
  return HyperCube(std::move(meta), std::move(samples));
}

}  // namespace hspan
