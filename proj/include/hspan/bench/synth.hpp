#pragma once

// Desk-scale synthetic scenes: smooth random abundance maps mixing a few
// positive endmember spectra, observed by a PAN band and an MTF-degraded HS
// cube.

#include <cmath>
#include <cstdio>
#include <cstdint>
#include <filesystem>
#include <random>
#include <vector>

#include "hspan/core/container.hpp"
#include "hspan/core/parallel.hpp"
#include "hspan/metrics/no_reference.hpp"
#include "hspan/pipeline/dataset.hpp"
#include "hspan/raster/convolve.hpp"
#include "hspan/raster/kernel.hpp"

namespace hspan {

struct SynthParams {
  std::uint64_t seed = 0;
  std::size_t hs_width = 64;
  std::size_t hs_height = 64;
  std::size_t bands = 16;
  int ratio = 6;
  std::size_t endmembers = 4;
  double pan_gsd = 5.0;
  MtfSpec mtf{};
};

struct SynthScene {
  FrPair fr;
  HyperCube truth;  // ground truth at PAN resolution
};

/// Evenly spaced band centers over 400-2500 nm.
inline std::vector<double> synth_wavelengths(std::size_t bands) {
  std::vector<double> w(bands);
  for (std::size_t b = 0; b < bands; ++b)
    w[b] = 400.0 + 2100.0 * static_cast<double>(b) / static_cast<double>(bands - 1);
  return w;
}

inline SynthScene gen_synth(const SynthParams& p) {
  detail::require(p.bands >= 2, "synth: bands must be >= 2");
  detail::require(p.endmembers >= 1, "synth: need at least one endmember");
  std::mt19937_64 rng(p.seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> uniform(0.0, 1.0);

  const auto wavelengths = synth_wavelengths(p.bands);
  const std::size_t w = p.hs_width * static_cast<std::size_t>(p.ratio);
  const std::size_t h = p.hs_height * static_cast<std::size_t>(p.ratio);
  const std::size_t k = p.endmembers;

  // Endmember spectra: positive floor plus three Gaussian bumps.
  std::vector<std::vector<double>> spectra(k, std::vector<double>(p.bands));
  for (auto& s : spectra) {
    std::vector<double> amp(3), center(3), width(3);
    for (int m = 0; m < 3; ++m) {
      amp[m] = 0.05 + 0.35 * uniform(rng);
      center[m] = 400.0 + 2100.0 * uniform(rng);
      width[m] = 100.0 + 400.0 * uniform(rng);
    }
    for (std::size_t b = 0; b < p.bands; ++b) {
      double v = 0.05;
      for (int m = 0; m < 3; ++m) {
        const double d = (wavelengths[b] - center[m]) / width[m];
        v += amp[m] * std::exp(-0.5 * d * d);
      }
      s[b] = v;
    }
  }

  // Smooth fields: white noise low-passed at a scale finer than the HS grid so
  // that the PAN carries detail the HS cube has lost.
  const double sigma = 0.5 * p.ratio;
  const int size = 2 * static_cast<int>(std::ceil(3.0 * sigma)) + 1;
  const Kernel2D blur = Kernel2D::separable(detail::gaussian_factor(sigma, size));
  std::vector<Grid<double>> fields;
  for (std::size_t e = 0; e < k; ++e) {
    Grid<double> noise(w, h);
    for (double& v : noise.samples()) v = normal(rng);
    fields.push_back(convolve_reflect(noise.view(), blur));
  }
  // Softmax across endmembers gives positive abundances summing to one.
  std::vector<Grid<double>> abundance(k, Grid<double>(w, h));
  for (std::size_t i = 0; i < w * h; ++i) {
    double total = 0.0;
    for (std::size_t e = 0; e < k; ++e) {
      const double a = std::exp(4.0 * fields[e].samples()[i]);
      abundance[e].samples()[i] = a;
      total += a;
    }
    for (std::size_t e = 0; e < k; ++e) abundance[e].samples()[i] /= total;
  }

  std::vector<Grid<float>> truth_bands;
  for (std::size_t b = 0; b < p.bands; ++b) {
    Grid<float> band(w, h);
    for (std::size_t i = 0; i < w * h; ++i) {
      double v = 0.0;
      for (std::size_t e = 0; e < k; ++e) v += abundance[e].samples()[i] * spectra[e][b];
      band.samples()[i] = static_cast<float>(v);
    }
    truth_bands.push_back(std::move(band));
  }
  HyperCube truth = HyperCube::from_bands(make_meta(w, h, wavelengths, p.pan_gsd), truth_bands);

  // PAN: equal-weight mean of the truth bands inside 400-700 nm.
  std::vector<std::size_t> pan_bands;
  for (std::size_t b = 0; b < p.bands; ++b)
    if (wavelengths[b] >= 400.0 && wavelengths[b] <= 700.0) pan_bands.push_back(b);
  Grid<double> pan(w, h);
  for (const auto b : pan_bands) {
    const auto src = truth.band(b).data;
    for (std::size_t i = 0; i < w * h; ++i)
      pan.samples()[i] += static_cast<double>(src[i]) / static_cast<double>(pan_bands.size());
  }
  PanImage pan_image = PanImage::from_grid(make_meta(w, h, {550.0}, p.pan_gsd), grid_cast<float>(pan.view()));

  MtfSpec spec = p.mtf;
  spec.ratio = p.ratio;
  HyperCube hs = degrade_cube(truth, spec);
  return SynthScene{FrPair(std::move(pan_image), std::move(hs), p.ratio), std::move(truth)};
}

/// Writes `tiles` synthetic scenes (seeds seed, seed+1, ...) as a dataset
/// in which every tile is in the test split. The RR triplet of a synthetic
/// tile is <PAN, HS, ground truth>: the known truth is the reference, so the
/// FR containers are shared and no further degradation is applied.
inline DatasetManifest write_synth_dataset(const SynthParams& base, std::size_t tiles,
                                           const std::filesystem::path& out_dir,
                                           std::size_t workers = 1) {
  detail::require(tiles >= 1, "synth: tiles must be >= 1");
  std::vector<TileRecord> records(tiles);
  parallel_for(tiles, workers, [&](std::size_t t) {
    SynthParams p = base;
    p.seed = base.seed + t;
    const SynthScene scene = gen_synth(p);
    const RrTriplet rr(scene.fr.pan, scene.fr.hs, scene.truth, base.ratio);
    char name[32];
    std::snprintf(name, sizeof(name), "synth%04zu", t);
    TileRecord& rec = records[t];
    rec.scene = name;
    rec.split = "test";
    const std::string dir = "tiles/" + rec.id() + "/";
    rec.fr_pan = rec.rr_pan_lo = dir + "pan";
    rec.fr_hs = rec.rr_hs_lo = dir + "hs";
    rec.truth = rec.rr_hs_ref = dir + "truth";
    store_container(rr.pan_lo, out_dir / rec.fr_pan);
    store_container(rr.hs_lo, out_dir / rec.fr_hs);
    store_container(rr.hs_ref, out_dir / rec.truth);
  });

  DatasetManifest m;
  m.root = out_dir;
  m.params = {{"source", "synth"},
              {"seed", base.seed},
              {"hs_size", {base.hs_height, base.hs_width}},
              {"bands", base.bands},
              {"ratio", base.ratio},
              {"tiles", tiles},
              {"mtf", {{"nyquist_gain", base.mtf.nyquist_gain}, {"kernel_size", base.mtf.kernel_size}}}};
  m.band_mask.assign(base.bands, true);
  m.tiles = std::move(records);
  std::filesystem::create_directories(out_dir);
  write_manifest(m, out_dir / "manifest.json");
  return m;
}

}  // namespace hspan
