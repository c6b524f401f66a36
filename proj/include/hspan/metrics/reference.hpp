#pragma once

// Reduced-resolution (with reference) quality indices.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "hspan/core/types.hpp"
#include "hspan/raster/convolve.hpp"
#include "hspan/raster/kernel.hpp"
#include "hspan/raster/stats.hpp"

namespace hspan {
namespace detail {

template <class A, class B>
void require_same_size(GridView<const A> x, GridView<const B> y, const char* what) {
  require(x.width == y.width && x.height == y.height,
          std::string(what) + ": dimension mismatch");
}

inline void require_same_geometry(const HyperCube& x, const HyperCube& y, const char* what) {
  require(x.width() == y.width() && x.height() == y.height() && x.bands() == y.bands(),
          std::string(what) + ": geometry mismatch (" + std::to_string(x.width()) + "x" +
              std::to_string(x.height()) + "x" + std::to_string(x.bands()) + " vs " +
              std::to_string(y.width()) + "x" + std::to_string(y.height()) + "x" +
              std::to_string(y.bands()) + ")");
}

}  // namespace detail

template <class A, class B>
double rmse(GridView<const A> x, GridView<const B> y) {
  detail::require_same_size(x, y, "rmse");
  double acc = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double d = static_cast<double>(x.data[i]) - static_cast<double>(y.data[i]);
    acc += d * d;
  }
  return std::sqrt(acc / static_cast<double>(x.size()));
}

/// ERGAS of fused `x` against reference `y`; `h_over_l` is the PAN/HS
/// resolution ratio (1/6 for 5 m over 30 m).
inline double ergas(const HyperCube& x, const HyperCube& y, double h_over_l = 1.0 / 6.0) {
  detail::require_same_geometry(x, y, "ergas");
  double acc = 0.0;
  for (std::size_t b = 0; b < x.bands(); ++b) {
    const double mu = moments<float>(y.band(b).data).mean;
    if (mu == 0.0) throw ValidationError("ergas: zero-mean reference band " + std::to_string(b));
    const double rel = rmse(x.band(b), y.band(b)) / mu;
    acc += rel * rel;
  }
  return 100.0 * h_over_l * std::sqrt(acc / static_cast<double>(x.bands()));
}

struct SpectralAngle {
  double degrees = 0.0;   // mean over valid pixels
  std::size_t valid = 0;
  std::size_t excluded = 0;  // zero-norm spectra
};

inline SpectralAngle spectral_angle(const HyperCube& x, const HyperCube& y) {
  detail::require_same_geometry(x, y, "sam");
  const std::size_t n = x.width() * x.height();
  std::vector<double> dot(n, 0.0), nx(n, 0.0), ny(n, 0.0);
  for (std::size_t b = 0; b < x.bands(); ++b) {
    const auto xb = x.band(b).data;
    const auto yb = y.band(b).data;
    for (std::size_t i = 0; i < n; ++i) {
      const double a = xb[i];
      const double c = yb[i];
      dot[i] += a * c;
      nx[i] += a * a;
      ny[i] += c * c;
    }
  }
  SpectralAngle out;
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (nx[i] == 0.0 || ny[i] == 0.0) {
      ++out.excluded;
      continue;
    }
    const double cosine = std::clamp(dot[i] / std::sqrt(nx[i] * ny[i]), -1.0, 1.0);
    sum += std::acos(cosine);
    ++out.valid;
  }
  if (out.valid == 0) throw DegenerateError("sam: every pixel has a zero-norm spectrum");
  out.degrees = sum / static_cast<double>(out.valid) * 180.0 / std::numbers::pi;
  return out;
}

/// Mean spectral angle in degrees.
inline double sam(const HyperCube& x, const HyperCube& y) { return spectral_angle(x, y).degrees; }

namespace detail {

// Pearson correlation of the high-pass details of two bands; nullopt when
// either filtered band is constant.
template <class A, class B>
std::optional<double> detail_correlation(GridView<const A> x, GridView<const B> y) {
  static const Kernel2D f = scc_highpass_kernel();
  const auto fx = convolve_reflect(grid_cast<double>(x).view(), f);
  const auto fy = convolve_reflect(grid_cast<double>(y).view(), f);
  const Moments mx = moments<double>(fx.samples());
  const Moments my = moments<double>(fy.samples());
  if (mx.variance == 0.0 || my.variance == 0.0) return std::nullopt;
  const double cxy = covariance(std::span<const double>(fx.samples()),
                                std::span<const double>(fy.samples()), mx.mean, my.mean);
  return cxy / std::sqrt(mx.variance * my.variance);
}

}  // namespace detail

/// Spatial correlation coefficient averaged over bands.
inline double scc(const HyperCube& x, const HyperCube& y) {
  detail::require_same_geometry(x, y, "scc");
  double sum = 0.0;
  std::size_t used = 0;
  for (std::size_t b = 0; b < x.bands(); ++b) {
    if (const auto c = detail::detail_correlation(x.band(b), y.band(b))) {
      sum += *c;
      ++used;
    }
  }
  if (used == 0) throw DegenerateError("scc: every filtered band is constant");
  return sum / static_cast<double>(used);
}

enum class UqiMode { global, block };

struct UqiOptions {
  UqiMode mode = UqiMode::block;
  std::size_t block = 32;  // block edge and stride
};

namespace detail {

// UQI of two equally sized sample sets; nullopt on a zero denominator.
inline std::optional<double> uqi_samples(std::span<const double> x, std::span<const double> y) {
  const Moments mx = moments<double>(x);
  const Moments my = moments<double>(y);
  const double sxsy = std::sqrt(mx.variance * my.variance);
  const double lum_den = mx.mean * mx.mean + my.mean * my.mean;
  if (sxsy == 0.0 || lum_den == 0.0) return std::nullopt;
  const double cxy = covariance(x, y, mx.mean, my.mean);
  return (cxy / sxsy) * (2.0 * mx.mean * my.mean / lum_den) *
         (2.0 * sxsy / (mx.variance + my.variance));
}

}  // namespace detail

/// Universal quality index. Block mode averages non-overlapping blocks
/// (partial edge blocks dropped; a block edge larger than the image is
/// clamped to the image edge) and skips blocks with a zero denominator.
template <class A, class B>
double uqi(GridView<const A> x, GridView<const B> y, UqiOptions opt = {}) {
  detail::require_same_size(x, y, "uqi");
  if (opt.mode == UqiMode::global) {
    const auto gx = grid_cast<double>(x);
    const auto gy = grid_cast<double>(y);
    if (auto q = detail::uqi_samples(gx.samples(), gy.samples())) return *q;
    throw DegenerateError("uqi: no valid blocks");
  }
  detail::require(opt.block >= 1, "uqi: block size must be >= 1");
  const std::size_t bw = std::min(opt.block, x.width);
  const std::size_t bh = std::min(opt.block, x.height);
  std::vector<double> bx(bw * bh), by(bw * bh);
  double sum = 0.0;
  std::size_t used = 0;
  for (std::size_t r0 = 0; r0 + bh <= x.height; r0 += bh) {
    for (std::size_t c0 = 0; c0 + bw <= x.width; c0 += bw) {
      for (std::size_t r = 0; r < bh; ++r)
        for (std::size_t c = 0; c < bw; ++c) {
          bx[r * bw + c] = static_cast<double>(x(r0 + r, c0 + c));
          by[r * bw + c] = static_cast<double>(y(r0 + r, c0 + c));
        }
      if (auto q = detail::uqi_samples(bx, by)) {
        sum += *q;
        ++used;
      }
    }
  }
  if (used == 0) throw DegenerateError("uqi: no valid blocks");
  return sum / static_cast<double>(used);
}

/// Mean per-band block UQI; bands without a valid block are skipped.
inline double q_avg(const HyperCube& x, const HyperCube& y, UqiOptions opt = {}) {
  detail::require_same_geometry(x, y, "q_avg");
  double sum = 0.0;
  std::size_t used = 0;
  for (std::size_t b = 0; b < x.bands(); ++b) {
    try {
      sum += uqi(x.band(b), y.band(b), opt);
      ++used;
    } catch (const DegenerateError&) {
    }
  }
  if (used == 0) throw DegenerateError("q_avg: no band has a valid block");
  return sum / static_cast<double>(used);
}

}  // namespace hspan
