#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <memory>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "hspan/core/container.hpp"
#include "hspan/core/parallel.hpp"
#include "hspan/core/types.hpp"
#include "hspan/pipeline/cleaning.hpp"
#include "hspan/pipeline/tiling.hpp"

namespace hspan {

/// One acquisition: PAN plus the VNIR/SWIR cubes and their error matrices.
struct SceneBundle {
  std::string id;
  PanImage pan;
  HyperCube vnir;
  HyperCube swir;
  ErrorCube vnir_err;
  ErrorCube swir_err;

  void validate(int ratio) const {
    const auto r = static_cast<std::size_t>(ratio);
    detail::require(vnir.width() == swir.width() && vnir.height() == swir.height(),
                    id + ": vnir and swir grids differ");
    detail::require(pan.width() == r * vnir.width() && pan.height() == r * vnir.height(),
                    id + ": pan/hs size ratio != " + std::to_string(ratio));
    detail::require(vnir_err.width() == vnir.width() && vnir_err.height() == vnir.height() &&
                        vnir_err.bands() == vnir.bands(),
                    id + ": vnir error cube does not match vnir cube");
    detail::require(swir_err.width() == swir.width() && swir_err.height() == swir.height() &&
                        swir_err.bands() == swir.bands(),
                    id + ": swir error cube does not match swir cube");
  }
};

/// Lazily loaded scene. Error cubes are loaded separately because band
/// cleaning needs every scene's errors before any raster is processed.
struct SceneSource {
  std::string id;
  std::function<SceneErrors()> load_errors;
  std::function<SceneBundle()> load;
};

inline SceneSource scene_from_memory(std::shared_ptr<const SceneBundle> scene) {
  SceneSource s;
  s.id = scene->id;
  s.load_errors = [scene] { return SceneErrors{scene->vnir_err, scene->swir_err}; };
  s.load = [scene] { return *scene; };
  return s;
}

/// Writes a scene as <dir>/<id>/{pan,vnir,swir,vnir_err,swir_err}.
inline void store_scene(const SceneBundle& scene, const std::filesystem::path& dir) {
  const auto root = dir / scene.id;
  store_container(scene.pan, root / "pan");
  store_container(scene.vnir, root / "vnir");
  store_container(scene.swir, root / "swir");
  store_container(scene.vnir_err, root / "vnir_err");
  store_container(scene.swir_err, root / "swir_err");
}

/// Every subdirectory of `dir` is one scene laid out as by store_scene().
inline std::vector<SceneSource> scenes_from_directory(const std::filesystem::path& dir) {
  namespace fs = std::filesystem;
  if (!fs::is_directory(dir)) throw IoError("scene directory not found: " + dir.string());
  std::vector<fs::path> roots;
  for (const auto& e : fs::directory_iterator(dir))
    if (e.is_directory()) roots.push_back(e.path());
  std::sort(roots.begin(), roots.end());
  std::vector<SceneSource> out;
  for (const auto& root : roots) {
    SceneSource s;
    s.id = root.filename().string();
    s.load_errors = [root] {
      return SceneErrors{load_errorcube(root / "vnir_err"), load_errorcube(root / "swir_err")};
    };
    s.load = [root, id = s.id] {
      return SceneBundle{id,
                         load_pan(root / "pan"),
                         load_hypercube(root / "vnir"),
                         load_hypercube(root / "swir"),
                         load_errorcube(root / "vnir_err"),
                         load_errorcube(root / "swir_err")};
    };
    out.push_back(std::move(s));
  }
  return out;
}

struct DatasetParams {
  double invalid_threshold = 0.05;
  std::size_t hs_tile = 384;
  std::size_t pan_tile = 2304;
  int ratio = 6;
  bool rr = true;
  MtfSpec mtf{};
  std::uint64_t split_seed = 0;
  double test_fraction = 0.2;
  // Tiles whose fraction of fully valid HS pixels is below this are dropped.
  std::optional<double> min_valid_fraction;
  std::size_t workers = 1;

  nlohmann::json to_json() const {
    nlohmann::json j;
    j["invalid_threshold"] = invalid_threshold;
    j["hs_tile"] = hs_tile;
    j["pan_tile"] = pan_tile;
    j["ratio"] = ratio;
    j["rr"] = rr;
    j["mtf"] = {{"shape", mtf.shape == MtfShape::gaussian ? "gaussian" : "ideal"},
                {"nyquist_gain", mtf.nyquist_gain},
                {"kernel_size", mtf.kernel_size}};
    j["split_seed"] = split_seed;
    j["test_fraction"] = test_fraction;
    j["min_valid_fraction"] =
        min_valid_fraction ? nlohmann::json(*min_valid_fraction) : nlohmann::json(nullptr);
    return j;
  }
};

struct TileRecord {
  std::string scene;
  std::size_t row = 0;
  std::size_t col = 0;
  std::size_t hs_x = 0;
  std::size_t hs_y = 0;
  std::size_t pan_x = 0;
  std::size_t pan_y = 0;
  std::string split = "test";
  // Container paths relative to the manifest; empty when absent.
  std::string fr_pan;
  std::string fr_hs;
  std::string rr_pan_lo;
  std::string rr_hs_lo;
  std::string rr_hs_ref;
  std::string truth;  // synthetic datasets only

  std::string id() const {
    return scene + "_r" + std::to_string(row) + "_c" + std::to_string(col);
  }
};

struct DatasetManifest {
  nlohmann::json params = nlohmann::json::object();
  std::vector<bool> band_mask;
  std::vector<TileRecord> tiles;
  // Directory the relative container paths resolve against (not serialized).
  std::filesystem::path root;

  std::filesystem::path resolve(const std::string& rel) const { return root / rel; }
};

inline nlohmann::json to_json(const DatasetManifest& m) {
  nlohmann::json tiles = nlohmann::json::array();
  for (const auto& t : m.tiles) {
    nlohmann::json j = {{"scene", t.scene},       {"row", t.row},
                        {"col", t.col},           {"hs_x", t.hs_x},
                        {"hs_y", t.hs_y},         {"pan_x", t.pan_x},
                        {"pan_y", t.pan_y},       {"split", t.split},
                        {"fr_pan", t.fr_pan},     {"fr_hs", t.fr_hs},
                        {"rr_pan_lo", t.rr_pan_lo}, {"rr_hs_lo", t.rr_hs_lo},
                        {"rr_hs_ref", t.rr_hs_ref}};
    if (!t.truth.empty()) j["truth"] = t.truth;
    tiles.push_back(std::move(j));
  }
  return {{"params", m.params}, {"band_mask", m.band_mask}, {"tiles", tiles}};
}

inline DatasetManifest manifest_from_json(const nlohmann::json& j, std::filesystem::path root) {
  DatasetManifest m;
  m.root = std::move(root);
  try {
    m.params = j.value("params", nlohmann::json::object());
    m.band_mask = j.value("band_mask", std::vector<bool>{});
    for (const auto& t : j.at("tiles")) {
      TileRecord r;
      r.scene = t.at("scene").get<std::string>();
      r.row = t.at("row").get<std::size_t>();
      r.col = t.at("col").get<std::size_t>();
      r.hs_x = t.value("hs_x", std::size_t{0});
      r.hs_y = t.value("hs_y", std::size_t{0});
      r.pan_x = t.value("pan_x", std::size_t{0});
      r.pan_y = t.value("pan_y", std::size_t{0});
      r.split = t.value("split", std::string("test"));
      r.fr_pan = t.value("fr_pan", std::string());
      r.fr_hs = t.value("fr_hs", std::string());
      r.rr_pan_lo = t.value("rr_pan_lo", std::string());
      r.rr_hs_lo = t.value("rr_hs_lo", std::string());
      r.rr_hs_ref = t.value("rr_hs_ref", std::string());
      r.truth = t.value("truth", std::string());
      m.tiles.push_back(std::move(r));
    }
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("manifest: ") + e.what());
  }
  return m;
}

inline void write_manifest(const DatasetManifest& m, const std::filesystem::path& file) {
  std::ofstream out(file, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + file.string());
  out << to_json(m).dump(2) << "\n";
  if (!out) throw IoError("write failed on " + file.string());
}

inline DatasetManifest read_manifest(const std::filesystem::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw IoError("cannot open manifest " + file.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::parse_error& e) {
    throw ValidationError("manifest: " + std::string(e.what()));
  }
  return manifest_from_json(j, file.parent_path());
}

/// Scene-level train/test split: a seeded Fisher-Yates shuffle of the sorted
/// ids, the first round(n * test_fraction) (at least one) go to test.
inline std::vector<std::string> assign_splits(const std::vector<std::string>& ids,
                                              std::uint64_t seed, double test_fraction) {
  std::vector<std::size_t> order(ids.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](auto a, auto b) { return ids[a] < ids[b]; });
  std::mt19937_64 rng(seed);
  for (std::size_t i = order.size(); i > 1; --i) std::swap(order[i - 1], order[rng() % i]);
  const auto n = static_cast<long>(ids.size());
  const long n_test = std::clamp(std::lround(static_cast<double>(n) * test_fraction), 1L, n);
  std::vector<std::string> split(ids.size(), "train");
  for (long k = 0; k < n_test; ++k) split[order[static_cast<std::size_t>(k)]] = "test";
  return split;
}

namespace detail {

// Per-pixel validity on the HS grid: valid when no kept band is invalid.
inline Grid<std::uint8_t> valid_pixels(const SceneBundle& scene, const BandMask& mask) {
  Grid<std::uint8_t> valid(scene.vnir.width(), scene.vnir.height(), 1);
  auto apply = [&](const ErrorCube& err, std::size_t offset) {
    for (std::size_t b = 0; b < err.bands(); ++b) {
      if (!mask.keep()[offset + b]) continue;
      const auto codes = err.band(b);
      for (std::size_t i = 0; i < codes.size(); ++i)
        if (err.is_invalid(codes[i])) valid.samples()[i] = 0;
    }
  };
  apply(scene.vnir_err, 0);
  apply(scene.swir_err, scene.vnir_err.bands());
  return valid;
}

inline double valid_fraction(const Grid<std::uint8_t>& valid, const TileRect& t) {
  std::size_t count = 0;
  for (std::size_t r = 0; r < t.hs_size; ++r)
    for (std::size_t c = 0; c < t.hs_size; ++c) count += valid(t.hs_y + r, t.hs_x + c);
  return static_cast<double>(count) / static_cast<double>(t.hs_size * t.hs_size);
}

}  // namespace detail

/// Writes the FR pair (and RR triplet) of one tile under `out_dir` and fills
/// the record's container paths.
inline void store_tile(const FrPair& fr, const DatasetParams& params, const std::filesystem::path& out_dir,
                       TileRecord& rec) {
  const std::string base = "tiles/" + rec.id() + "/";
  rec.fr_pan = base + "fr_pan";
  rec.fr_hs = base + "fr_hs";
  store_container(fr.pan, out_dir / rec.fr_pan);
  store_container(fr.hs, out_dir / rec.fr_hs);
  if (params.rr) {
    MtfSpec spec = params.mtf;
    spec.ratio = params.ratio;
    const RrTriplet rr = make_rr(fr, spec);
    rec.rr_pan_lo = base + "rr_pan_lo";
    rec.rr_hs_lo = base + "rr_hs_lo";
    rec.rr_hs_ref = base + "rr_hs_ref";
    store_container(rr.pan_lo, out_dir / rec.rr_pan_lo);
    store_container(rr.hs_lo, out_dir / rec.rr_hs_lo);
    store_container(rr.hs_ref, out_dir / rec.rr_hs_ref);
  }
}

/// Band cleaning, VNIR+SWIR concatenation, FR tiling and RR simulation for
/// every scene; writes all tile containers and `manifest.json` under
/// `out_dir`.
inline DatasetManifest build_dataset(std::span<const SceneSource> scenes_in,
                                     const DatasetParams& params,
                                     const std::filesystem::path& out_dir) {
  detail::require(!scenes_in.empty(), "build_dataset: no scenes");
  std::vector<SceneSource> scenes(scenes_in.begin(), scenes_in.end());
  std::sort(scenes.begin(), scenes.end(), [](const auto& a, const auto& b) { return a.id < b.id; });
  for (std::size_t i = 1; i < scenes.size(); ++i)
    detail::require(scenes[i].id != scenes[i - 1].id,
                    "build_dataset: duplicate scene id '" + scenes[i].id + "'");

  std::vector<SceneErrors> errors;
  errors.reserve(scenes.size());
  for (const auto& s : scenes) errors.push_back(s.load_errors());
  const BandMask mask = clean_bands(errors, params.invalid_threshold);
  errors.clear();

  std::vector<std::string> ids;
  for (const auto& s : scenes) ids.push_back(s.id);
  const auto splits = assign_splits(ids, params.split_seed, params.test_fraction);

  std::vector<std::vector<TileRecord>> per_scene(scenes.size());
  parallel_for(scenes.size(), params.workers, [&](std::size_t i) {
    const SceneBundle scene = scenes[i].load();
    detail::require(scene.id == scenes[i].id, "build_dataset: scene id mismatch");
    scene.validate(params.ratio);
    const HyperCube hs = concat_cubes(scene.vnir, scene.swir, mask);
    std::optional<Grid<std::uint8_t>> valid;
    if (params.min_valid_fraction) valid = detail::valid_pixels(scene, mask);
    for (const auto& rect : tile_grid(hs.width(), hs.height(), params.hs_tile, params.pan_tile,
                                      params.ratio)) {
      if (valid && detail::valid_fraction(*valid, rect) < *params.min_valid_fraction) continue;
      TileRecord rec;
      rec.scene = scene.id;
      rec.row = rect.row;
      rec.col = rect.col;
      rec.hs_x = rect.hs_x;
      rec.hs_y = rect.hs_y;
      rec.pan_x = rect.pan_x;
      rec.pan_y = rect.pan_y;
      rec.split = splits[i];
      store_tile(extract_fr(scene.pan, hs, rect, params.ratio), params, out_dir, rec);
      per_scene[i].push_back(std::move(rec));
    }
  });

  DatasetManifest manifest;
  manifest.root = out_dir;
  manifest.params = params.to_json();
  manifest.band_mask = mask.keep();
  for (auto& v : per_scene)
    for (auto& r : v) manifest.tiles.push_back(std::move(r));
  std::filesystem::create_directories(out_dir);
  write_manifest(manifest, out_dir / "manifest.json");
  return manifest;
}

}  // namespace hspan
