#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hspan/core/error.hpp"
#include "hspan/core/grid.hpp"

namespace hspan {

/// Geometry and spectral metadata shared by every raster kind.
struct RasterMeta {
  std::size_t width = 0;
  std::size_t height = 0;
  std::size_t bands = 0;
  double gsd = 0.0;  // meters per pixel
  std::vector<double> wavelengths;  // nanometers, one per band
  std::optional<float> nodata;
  // Optional per-band provenance tag ("vnir"/"swir"); empty or one per band.
  std::vector<std::string> band_sources;

  std::size_t pixels() const { return width * height; }

  void validate() const {
    detail::require(width > 0 && height > 0, "meta: width and height must be > 0");
    detail::require(bands >= 1, "meta: bands must be >= 1");
    detail::require(std::isfinite(gsd) && gsd > 0.0, "meta: gsd must be > 0");
    detail::require(wavelengths.size() == bands,
                    "meta: wavelength count " + std::to_string(wavelengths.size()) +
                        " != bands " + std::to_string(bands));
    for (std::size_t b = 1; b < wavelengths.size(); ++b)
      detail::require(wavelengths[b] > wavelengths[b - 1],
                      "meta: wavelengths must be strictly increasing");
    detail::require(band_sources.empty() || band_sources.size() == bands,
                    "meta: band_sources length != bands");
  }

  friend bool operator==(const RasterMeta&, const RasterMeta&) = default;
};

inline RasterMeta make_meta(std::size_t width, std::size_t height,
                            std::vector<double> wavelengths, double gsd) {
  RasterMeta m;
  m.width = width;
  m.height = height;
  m.bands = wavelengths.size();
  m.gsd = gsd;
  m.wavelengths = std::move(wavelengths);
  return m;
}

namespace detail {

inline void require_finite(std::span<const float> samples, const char* what) {
  for (std::size_t i = 0; i < samples.size(); ++i) {
    if (!std::isfinite(samples[i]))
      throw ValidationError(std::string(what) + ": non-finite sample at index " +
                            std::to_string(i));
  }
}

}  // namespace detail

/// Band-sequential cube of finite float32 reflectance samples.
class HyperCube {
 public:
  HyperCube(RasterMeta meta, std::vector<float> samples)
      : meta_(std::move(meta)), samples_(std::move(samples)) {
    meta_.validate();
    detail::require(samples_.size() == meta_.pixels() * meta_.bands,
                    "hypercube: payload size mismatch");
    detail::require_finite(samples_, "hypercube");
  }

  /// Assembles a cube from per-band grids, converting to float32.
  template <class T>
  static HyperCube from_bands(RasterMeta meta, const std::vector<Grid<T>>& bands) {
    detail::require(bands.size() == meta.bands, "hypercube: band grid count != meta.bands");
    std::vector<float> samples;
    samples.reserve(meta.pixels() * meta.bands);
    for (const auto& g : bands) {
      detail::require(g.width() == meta.width && g.height() == meta.height,
                      "hypercube: band grid size mismatch");
      for (const T v : g.samples()) samples.push_back(static_cast<float>(v));
    }
    return HyperCube(std::move(meta), std::move(samples));
  }

  const RasterMeta& meta() const { return meta_; }
  std::size_t width() const { return meta_.width; }
  std::size_t height() const { return meta_.height; }
  std::size_t bands() const { return meta_.bands; }
  std::span<const float> samples() const { return samples_; }

  GridView<const float> band(std::size_t b) const {
    detail::require(b < meta_.bands, "hypercube: band index out of range");
    const std::size_t n = meta_.pixels();
    return {std::span<const float>(samples_).subspan(b * n, n), meta_.width, meta_.height};
  }

  friend bool operator==(const HyperCube&, const HyperCube&) = default;

 private:
  RasterMeta meta_;
  std::vector<float> samples_;
};

/// Single-band high-resolution panchromatic raster.
class PanImage {
 public:
  PanImage(RasterMeta meta, std::vector<float> samples)
      : meta_(std::move(meta)), samples_(std::move(samples)) {
    meta_.validate();
    detail::require(meta_.bands == 1, "pan: bands must be 1");
    detail::require(samples_.size() == meta_.pixels(), "pan: payload size mismatch");
    detail::require_finite(samples_, "pan");
  }

  template <class T>
  static PanImage from_grid(RasterMeta meta, const Grid<T>& grid) {
    detail::require(grid.width() == meta.width && grid.height() == meta.height,
                    "pan: grid size mismatch");
    std::vector<float> samples(grid.samples().begin(), grid.samples().end());
    return PanImage(std::move(meta), std::move(samples));
  }

  const RasterMeta& meta() const { return meta_; }
  std::size_t width() const { return meta_.width; }
  std::size_t height() const { return meta_.height; }
  std::span<const float> samples() const { return samples_; }
  GridView<const float> view() const { return {samples_, meta_.width, meta_.height}; }

  friend bool operator==(const PanImage&, const PanImage&) = default;

 private:
  RasterMeta meta_;
  std::vector<float> samples_;
};

/// Per-pixel per-band L2 status codes.
class ErrorCube {
 public:
  ErrorCube(RasterMeta meta, std::vector<std::uint8_t> codes,
            std::vector<std::uint8_t> invalid_codes)
      : meta_(std::move(meta)), codes_(std::move(codes)), invalid_(std::move(invalid_codes)) {
    meta_.validate();
    detail::require(codes_.size() == meta_.pixels() * meta_.bands,
                    "errorcube: payload size mismatch");
    std::sort(invalid_.begin(), invalid_.end());
    invalid_.erase(std::unique(invalid_.begin(), invalid_.end()), invalid_.end());
    for (auto c : invalid_) is_invalid_[c] = true;
  }

  const RasterMeta& meta() const { return meta_; }
  std::size_t width() const { return meta_.width; }
  std::size_t height() const { return meta_.height; }
  std::size_t bands() const { return meta_.bands; }
  std::span<const std::uint8_t> codes() const { return codes_; }
  const std::vector<std::uint8_t>& invalid_codes() const { return invalid_; }
  bool is_invalid(std::uint8_t code) const { return is_invalid_[code]; }

  std::span<const std::uint8_t> band(std::size_t b) const {
    detail::require(b < meta_.bands, "errorcube: band index out of range");
    return std::span<const std::uint8_t>(codes_).subspan(b * meta_.pixels(), meta_.pixels());
  }

  friend bool operator==(const ErrorCube& a, const ErrorCube& b) {
    return a.meta_ == b.meta_ && a.codes_ == b.codes_ && a.invalid_ == b.invalid_;
  }

 private:
  RasterMeta meta_;
  std::vector<std::uint8_t> codes_;
  std::vector<std::uint8_t> invalid_;
  std::array<bool, 256> is_invalid_{};
};

/// Dataset-wide band selection.
class BandMask {
 public:
  explicit BandMask(std::vector<bool> keep) : keep_(std::move(keep)) {
    detail::require(std::find(keep_.begin(), keep_.end(), true) != keep_.end(),
                    "band mask: all bands removed");
  }
  const std::vector<bool>& keep() const { return keep_; }
  std::size_t size() const { return keep_.size(); }
  std::size_t kept() const {
    return static_cast<std::size_t>(std::count(keep_.begin(), keep_.end(), true));
  }

  friend bool operator==(const BandMask&, const BandMask&) = default;

 private:
  std::vector<bool> keep_;
};

namespace detail {

inline bool gsd_equal(double a, double b) {
  return std::abs(a - b) <= 1e-9 * std::max(std::abs(a), std::abs(b));
}

}  // namespace detail

/// Full-resolution evaluation pair <PAN, HS>.
struct FrPair {
  PanImage pan;
  HyperCube hs;
  int ratio = 6;

  FrPair(PanImage p, HyperCube h, int r = 6) : pan(std::move(p)), hs(std::move(h)), ratio(r) {
    const auto ur = static_cast<std::size_t>(ratio);
    detail::require(ratio >= 1, "fr pair: ratio must be >= 1");
    detail::require(pan.width() == ur * hs.width() && pan.height() == ur * hs.height(),
                    "fr pair: pan dimensions != ratio * hs dimensions");
    detail::require(detail::gsd_equal(hs.meta().gsd, ratio * pan.meta().gsd),
                    "fr pair: hs gsd != ratio * pan gsd");
  }
};

/// Reduced-resolution evaluation triplet <PAN_lo, HS_lo, HS_ref>.
struct RrTriplet {
  PanImage pan_lo;
  HyperCube hs_lo;
  HyperCube hs_ref;
  int ratio = 6;

  RrTriplet(PanImage p, HyperCube lo, HyperCube ref, int r = 6)
      : pan_lo(std::move(p)), hs_lo(std::move(lo)), hs_ref(std::move(ref)), ratio(r) {
    const auto ur = static_cast<std::size_t>(ratio);
    detail::require(pan_lo.width() == hs_ref.width() && pan_lo.height() == hs_ref.height(),
                    "rr triplet: pan_lo dimensions != hs_ref dimensions");
    detail::require(hs_lo.width() * ur == hs_ref.width() &&
                        hs_lo.height() * ur == hs_ref.height(),
                    "rr triplet: hs_lo dimensions != hs_ref dimensions / ratio");
    detail::require(hs_lo.bands() == hs_ref.bands(), "rr triplet: band count mismatch");
    detail::require(detail::gsd_equal(hs_ref.meta().gsd, pan_lo.meta().gsd),
                    "rr triplet: hs_ref gsd != pan_lo gsd");
    detail::require(detail::gsd_equal(hs_lo.meta().gsd, ratio * hs_ref.meta().gsd),
                    "rr triplet: hs_lo gsd != ratio * hs_ref gsd");
  }
};

}  // namespace hspan
