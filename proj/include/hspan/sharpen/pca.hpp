#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include <Eigen/Dense>

#include "hspan/raster/histogram.hpp"
#include "hspan/raster/stats.hpp"
#include "hspan/sharpen/request.hpp"

namespace hspan {

/// Principal-component decomposition of the upsampled cube.
struct PcaComponents {
  std::vector<Grid<float>> upsampled;
  Eigen::VectorXd means;         // per band
  Eigen::VectorXd variances;     // eigenvalues, descending
  Eigen::MatrixXd loadings;      // columns are components, same order
  Grid<double> pc1;              // first-component scores per pixel
};

/// Pixels are observations, bands are variables, population covariance.
/// Each component's largest-magnitude loading is made positive.
inline PcaComponents pca_components(const HyperCube& hs, int ratio) {
  PcaComponents pc;
  pc.upsampled = detail::upsample_bands(hs, ratio);
  const auto bands = static_cast<Eigen::Index>(pc.upsampled.size());
  const std::size_t w = pc.upsampled[0].width();
  const std::size_t h = pc.upsampled[0].height();
  const std::size_t n = w * h;

  pc.means.resize(bands);
  for (Eigen::Index b = 0; b < bands; ++b)
    pc.means[b] = moments<float>(pc.upsampled[static_cast<std::size_t>(b)].samples()).mean;

  // Covariance accumulated over fixed-size pixel chunks.
  constexpr std::size_t chunk = 4096;
  Eigen::MatrixXd cov = Eigen::MatrixXd::Zero(bands, bands);
  Eigen::MatrixXd block;
  for (std::size_t start = 0; start < n; start += chunk) {
    const std::size_t len = std::min(chunk, n - start);
    block.resize(static_cast<Eigen::Index>(len), bands);
    for (Eigen::Index b = 0; b < bands; ++b) {
      const auto& s = pc.upsampled[static_cast<std::size_t>(b)].samples();
      for (std::size_t i = 0; i < len; ++i)
        block(static_cast<Eigen::Index>(i), b) = static_cast<double>(s[start + i]) - pc.means[b];
    }
    cov.noalias() += block.transpose() * block;
  }
  cov /= static_cast<double>(n);

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(cov);
  if (eig.info() != Eigen::Success) throw Error("pca: eigendecomposition failed");
  // Eigen returns ascending eigenvalues.
  pc.variances = eig.eigenvalues().reverse();
  pc.loadings = eig.eigenvectors().rowwise().reverse();
  for (Eigen::Index c = 0; c < bands; ++c) {
    Eigen::Index arg = 0;
    pc.loadings.col(c).cwiseAbs().maxCoeff(&arg);
    if (pc.loadings(arg, c) < 0.0) pc.loadings.col(c) *= -1.0;
  }

  pc.pc1 = Grid<double>(w, h);
  auto& s1 = pc.pc1.samples();
  for (Eigen::Index b = 0; b < bands; ++b) {
    const double v = pc.loadings(b, 0);
    const double mu = pc.means[b];
    const auto& s = pc.upsampled[static_cast<std::size_t>(b)].samples();
    for (std::size_t i = 0; i < n; ++i) s1[i] += v * (static_cast<double>(s[i]) - mu);
  }
  return pc;
}

/// Replaces PC1 with `substitute` and maps back to band space. Only the first
/// score changes, so the inverse projection reduces to adding the PC1 loading
/// times the score difference to every band.
inline FusedCube pca_substitute(const RasterMeta& fused_meta, const PcaComponents& pc,
                                const Grid<double>& substitute) {
  detail::require(substitute.width() == pc.pc1.width() && substitute.height() == pc.pc1.height(),
                  "pca: substitute size mismatch");
  std::vector<Grid<float>> out;
  out.reserve(pc.upsampled.size());
  const auto& s1 = pc.pc1.samples();
  const auto& sub = substitute.samples();
  for (std::size_t b = 0; b < pc.upsampled.size(); ++b) {
    const double v = pc.loadings(static_cast<Eigen::Index>(b), 0);
    Grid<float> band(pc.pc1.width(), pc.pc1.height());
    const auto& src = pc.upsampled[b].samples();
    auto& dst = band.samples();
    for (std::size_t i = 0; i < dst.size(); ++i)
      dst[i] = static_cast<float>(static_cast<double>(src[i]) + v * (sub[i] - s1[i]));
    out.push_back(std::move(band));
  }
  return HyperCube::from_bands(fused_meta, out);
}

inline FusedCube sharpen_pca(const SharpenRequest& req) {
  req.validate();
  detail::require(req.hs.bands() >= 2, "pca: needs at least 2 bands");
  const auto pc = pca_components(req.hs, req.ratio);
  if (!(pc.variances[0] > 0.0)) throw DegenerateError("pca: zero-variance cube");

  const Moments target = moments<double>(pc.pc1.samples());
  const auto pan = grid_cast<double>(req.pan.view());
  Grid<double> matched;
  if (moments<double>(pan.samples()).variance > 0.0) {
    matched = histogram_match_linear(pan.view(), target.mean, target.stddev());
  } else {
    // A flat PAN carries no detail: PC1 becomes its own mean.
    matched = Grid<double>(pan.width(), pan.height(), target.mean);
  }
  return pca_substitute(FusedGeometry::of(req).meta(req.hs.meta()), pc, matched);
}

}  // namespace hspan
