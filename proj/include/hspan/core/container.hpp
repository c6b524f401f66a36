#pragma once

// On-disk raster container: a directory holding meta.json and data.bin.
// data.bin is raw little-endian samples, row-major within each band, bands
// concatenated (BSQ). Rasters use float32, error cubes uint8.

#include <bit>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "hspan/core/error.hpp"
#include "hspan/core/types.hpp"

namespace hspan {

enum class RasterKind { hypercube, pan, errorcube };

inline const char* to_string(RasterKind k) {
  switch (k) {
    case RasterKind::hypercube: return "hypercube";
    case RasterKind::pan: return "pan";
    case RasterKind::errorcube: return "errorcube";
  }
  return "?";
}

using Raster = std::variant<HyperCube, PanImage, ErrorCube>;

namespace detail {

namespace fs = std::filesystem;

inline nlohmann::json meta_to_json(const RasterMeta& m, RasterKind kind) {
  nlohmann::json j;
  j["width"] = m.width;
  j["height"] = m.height;
  j["bands"] = m.bands;
  j["dtype"] = kind == RasterKind::errorcube ? "u8" : "f32le";
  j["layout"] = "bsq";
  j["gsd_m"] = m.gsd;
  j["wavelengths_nm"] = m.wavelengths;
  j["kind"] = to_string(kind);
  if (m.nodata) j["nodata"] = *m.nodata;
  if (!m.band_sources.empty()) j["band_sources"] = m.band_sources;
  return j;
}

inline RasterMeta meta_from_json(const nlohmann::json& j) {
  RasterMeta m;
  try {
    m.width = j.at("width").get<std::size_t>();
    m.height = j.at("height").get<std::size_t>();
    m.bands = j.at("bands").get<std::size_t>();
    m.gsd = j.at("gsd_m").get<double>();
    m.wavelengths = j.at("wavelengths_nm").get<std::vector<double>>();
    if (j.contains("nodata") && !j["nodata"].is_null()) m.nodata = j["nodata"].get<float>();
    if (j.contains("band_sources"))
      m.band_sources = j["band_sources"].get<std::vector<std::string>>();
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("meta.json: ") + e.what());
  }
  const auto layout = j.value("layout", std::string("bsq"));
  require(layout == "bsq", "meta.json: unsupported layout '" + layout + "'");
  m.validate();
  return m;
}

inline RasterKind kind_from_string(const std::string& s) {
  if (s == "hypercube") return RasterKind::hypercube;
  if (s == "pan") return RasterKind::pan;
  if (s == "errorcube") return RasterKind::errorcube;
  throw ValidationError("meta.json: unknown kind '" + s + "'");
}

inline std::vector<char> read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw IoError("cannot open " + p.string());
  in.seekg(0, std::ios::end);
  const auto size = static_cast<std::size_t>(in.tellg());
  in.seekg(0);
  std::vector<char> buf(size);
  in.read(buf.data(), static_cast<std::streamsize>(size));
  if (!in) throw IoError("short read on " + p.string());
  return buf;
}

inline void write_file(const fs::path& p, std::span<const char> bytes) {
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + p.string());
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("write failed on " + p.string());
}

inline std::vector<char> encode_f32le(std::span<const float> samples) {
  std::vector<char> bytes(samples.size() * 4);
  for (std::size_t i = 0; i < samples.size(); ++i) {
    auto bits = std::bit_cast<std::uint32_t>(samples[i]);
    if constexpr (std::endian::native == std::endian::big) bits = __builtin_bswap32(bits);
    std::memcpy(bytes.data() + 4 * i, &bits, 4);
  }
  return bytes;
}

inline std::vector<float> decode_f32le(std::span<const char> bytes) {
  std::vector<float> samples(bytes.size() / 4);
  for (std::size_t i = 0; i < samples.size(); ++i) {
    std::uint32_t bits;
    std::memcpy(&bits, bytes.data() + 4 * i, 4);
    if constexpr (std::endian::native == std::endian::big) bits = __builtin_bswap32(bits);
    samples[i] = std::bit_cast<float>(bits);
  }
  return samples;
}

inline void write_container(const fs::path& dir, const nlohmann::json& meta,
                            std::span<const char> payload) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());
  const std::string text = meta.dump(2) + "\n";
  write_file(dir / "meta.json", text);
  write_file(dir / "data.bin", payload);
}

}  // namespace detail

/// Validates and writes a float raster. Nothing is written if validation fails.
inline void store_raster(const RasterMeta& meta, std::span<const float> samples,
                         RasterKind kind, const std::filesystem::path& dir) {
  detail::require(kind != RasterKind::errorcube, "store_raster: use the ErrorCube overload");
  meta.validate();
  detail::require(kind != RasterKind::pan || meta.bands == 1, "pan: bands must be 1");
  detail::require(samples.size() == meta.pixels() * meta.bands, "payload size mismatch");
  detail::require_finite(samples, to_string(kind));
  detail::write_container(dir, detail::meta_to_json(meta, kind), detail::encode_f32le(samples));
}

inline void store_container(const HyperCube& cube, const std::filesystem::path& dir) {
  store_raster(cube.meta(), cube.samples(), RasterKind::hypercube, dir);
}

inline void store_container(const PanImage& pan, const std::filesystem::path& dir) {
  store_raster(pan.meta(), pan.samples(), RasterKind::pan, dir);
}

inline void store_container(const ErrorCube& err, const std::filesystem::path& dir) {
  auto meta = detail::meta_to_json(err.meta(), RasterKind::errorcube);
  meta["invalid_codes"] = err.invalid_codes();
  const auto codes = err.codes();
  detail::write_container(
      dir, meta, std::span<const char>(reinterpret_cast<const char*>(codes.data()), codes.size()));
}

inline Raster load_container(const std::filesystem::path& dir) {
  namespace fs = std::filesystem;
  const fs::path meta_path = dir / "meta.json";
  const fs::path data_path = dir / "data.bin";
  if (!fs::exists(meta_path)) throw IoError("missing file " + meta_path.string());
  if (!fs::exists(data_path)) throw IoError("missing file " + data_path.string());

  nlohmann::json j;
  try {
    j = nlohmann::json::parse(detail::read_file(meta_path));
  } catch (const nlohmann::json::parse_error& e) {
    throw ValidationError("meta.json: " + std::string(e.what()));
  }
  const RasterKind kind = detail::kind_from_string(j.value("kind", std::string("hypercube")));
  RasterMeta meta = detail::meta_from_json(j);
  const auto payload = detail::read_file(data_path);
  const std::size_t count = meta.pixels() * meta.bands;

  if (kind == RasterKind::errorcube) {
    const auto dtype = j.value("dtype", std::string("u8"));
    detail::require(dtype == "u8" || dtype == "uint8", "errorcube: unsupported dtype " + dtype);
    detail::require(payload.size() == count, "payload size mismatch");
    std::vector<std::uint8_t> codes(payload.begin(), payload.end());
    auto invalid = j.value("invalid_codes", std::vector<std::uint8_t>{});
    return ErrorCube(std::move(meta), std::move(codes), std::move(invalid));
  }

  const auto dtype = j.value("dtype", std::string("f32le"));
  detail::require(dtype == "f32le", "unsupported dtype " + dtype);
  detail::require(payload.size() == count * 4, "payload size mismatch");
  auto samples = detail::decode_f32le(payload);
  if (kind == RasterKind::pan) return PanImage(std::move(meta), std::move(samples));
  return HyperCube(std::move(meta), std::move(samples));
}

namespace detail {

template <class T>
T load_as(const std::filesystem::path& dir, const char* expected) {
  auto r = load_container(dir);
  if (auto* p = std::get_if<T>(&r)) return std::move(*p);
  throw ValidationError(dir.string() + ": expected a " + expected + " container");
}

}  // namespace detail

inline HyperCube load_hypercube(const std::filesystem::path& dir) {
  return detail::load_as<HyperCube>(dir, "hypercube");
}
inline PanImage load_pan(const std::filesystem::path& dir) {
  return detail::load_as<PanImage>(dir, "pan");
}
inline ErrorCube load_errorcube(const std::filesystem::path& dir) {
  return detail::load_as<ErrorCube>(dir, "errorcube");
}

}  // namespace hspan
