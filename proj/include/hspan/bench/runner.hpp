#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "hspan/bench/report.hpp"
#include "hspan/core/container.hpp"
#include "hspan/core/parallel.hpp"
#include "hspan/metrics/scores.hpp"
#include "hspan/pipeline/dataset.hpp"
#include "hspan/sharpen.hpp"

namespace hspan {

/// A built-in sharpener, or externally fused results read from
/// `<import_dir>/<tile id>/`.
struct MethodSpec {
  std::string name;
  std::optional<std::filesystem::path> import_dir;

  static MethodSpec builtin(std::string name) {
    detail::require(is_builtin_method(name), "unknown method '" + name + "'");
    return {std::move(name), std::nullopt};
  }
  static MethodSpec imported(const std::filesystem::path& dir, std::string name = {}) {
    if (name.empty()) name = std::filesystem::path(dir).lexically_normal().filename().string();
    if (name.empty()) name = dir.parent_path().filename().string();
    return {std::move(name), dir};
  }
};

struct RunConfig {
  std::filesystem::path manifest;
  Protocol protocol = Protocol::rr;
  std::vector<MethodSpec> methods;
  double h_over_l = 1.0 / 6.0;
  MtfSpec mtf{};
  double alpha = 1.0;
  double beta = 1.0;
  std::size_t workers = 1;
  std::string split = "test";  // "all" scores every tile

  // Parameter echo for reports. Worker count is left out: reports must not
  // depend on it.
  nlohmann::json echo() const {
    nlohmann::json methods_json = nlohmann::json::array();
    for (const auto& m : methods)
      methods_json.push_back({{"name", m.name},
                              {"import", m.import_dir ? m.import_dir->string() : std::string()}});
    nlohmann::json j = {{"protocol", to_string(protocol)},
                        {"manifest", manifest.string()},
                        {"methods", methods_json},
                        {"gnyq", mtf.nyquist_gain},
                        {"kernel_size", mtf.kernel_size},
                        {"mtf_shape", mtf.shape == MtfShape::gaussian ? "gaussian" : "ideal"},
                        {"split", split}};
    if (protocol == Protocol::rr) {
      j["h_over_l"] = h_over_l;
    } else {
      j["alpha"] = alpha;
      j["beta"] = beta;
    }
    return j;
  }
};

namespace detail {

inline int manifest_ratio(const DatasetManifest& m, int fallback) {
  if (m.params.contains("ratio") && m.params["ratio"].is_number_integer())
    return m.params["ratio"].get<int>();
  return fallback;
}

inline std::vector<const TileRecord*> selected_tiles(const DatasetManifest& m, const std::string& split) {
  std::vector<const TileRecord*> out;
  for (const auto& t : m.tiles)
    if (split == "all" || t.split == split) out.push_back(&t);
  return out;
}

inline FusedCube produce_fused(const MethodSpec& method, const TileRecord& tile,
                               const SharpenRequest& req) {
  if (method.import_dir) return import_fused(*method.import_dir / tile.id(), FusedGeometry::of(req));
  return sharpen(method.name, req);
}

inline std::vector<double> score_item(Protocol protocol, const RunConfig& cfg,
                                      const DatasetManifest& manifest, const TileRecord& tile,
                                      const MethodSpec& method, const MtfSpec& spec) {
  if (protocol == Protocol::rr) {
    detail::require(!tile.rr_pan_lo.empty() && !tile.rr_hs_lo.empty() && !tile.rr_hs_ref.empty(),
                    "tile " + tile.id() + " has no RR triplet");
    const PanImage pan_lo = load_pan(manifest.resolve(tile.rr_pan_lo));
    const HyperCube hs_lo = load_hypercube(manifest.resolve(tile.rr_hs_lo));
    const HyperCube hs_ref = load_hypercube(manifest.resolve(tile.rr_hs_ref));
    const RrTriplet triplet(pan_lo, hs_lo, hs_ref, spec.ratio);
    const SharpenRequest req{triplet.pan_lo, triplet.hs_lo, spec.ratio, spec};
    const FusedCube fused = produce_fused(method, tile, req);
    const RrScores s = score_rr(fused, triplet.hs_ref, cfg.h_over_l);
    return {s.ergas, s.sam_deg, s.scc, s.q_avg};
  }
  detail::require(!tile.fr_pan.empty() && !tile.fr_hs.empty(), "tile " + tile.id() + " has no FR pair");
  const FrPair fr(load_pan(manifest.resolve(tile.fr_pan)), load_hypercube(manifest.resolve(tile.fr_hs)),
                  spec.ratio);
  const SharpenRequest req{fr.pan, fr.hs, spec.ratio, spec};
  const FusedCube fused = produce_fused(method, tile, req);
  const FrScores s = score_fr(fused, fr.pan, fr.hs, spec, cfg.alpha, cfg.beta);
  return {s.d_lambda(), s.d_s(), s.qnr()};
}

}  // namespace detail

/// Scores every selected tile with every method. Work items run on up to
/// `cfg.workers` threads; rows are assembled in tile-then-method order so
/// the report does not depend on scheduling. Item failures become error rows.
inline MetricReport run_eval(const RunConfig& cfg) {
  detail::require(!cfg.methods.empty(), "eval: no methods");
  const DatasetManifest manifest = read_manifest(cfg.manifest);
  MtfSpec spec = cfg.mtf;
  spec.ratio = detail::manifest_ratio(manifest, spec.ratio);
  spec.validate();

  const auto tiles = detail::selected_tiles(manifest, cfg.split);
  detail::require(!tiles.empty(), "eval: manifest has no '" + cfg.split + "' tiles");

  MetricReport report;
  report.protocol = cfg.protocol;
  report.params = cfg.echo();
  for (const auto& m : cfg.methods) report.methods.push_back(m.name);

  const std::size_t nm = cfg.methods.size();
  report.rows.resize(tiles.size() * nm);
  parallel_for(report.rows.size(), cfg.workers, [&](std::size_t i) {
    const TileRecord& tile = *tiles[i / nm];
    const MethodSpec& method = cfg.methods[i % nm];
    ReportRow& row = report.rows[i];
    row.tile = tile.id();
    row.method = method.name;
    try {
      row.values = detail::score_item(cfg.protocol, cfg, manifest, tile, method, spec);
    } catch (const std::exception& e) {
      row.values.clear();
      row.error = e.what();
    }
  });
  report.aggregates = aggregate(cfg.protocol, report.methods, report.rows);
  return report;
}

inline MetricReport run_rr(RunConfig cfg) {
  cfg.protocol = Protocol::rr;
  return run_eval(cfg);
}

inline MetricReport run_fr(RunConfig cfg) {
  cfg.protocol = Protocol::fr;
  return run_eval(cfg);
}

}  // namespace hspan
