#pragma once

#include <filesystem>
#include <string>

#include "hspan/core/container.hpp"
#include "hspan/sharpen/request.hpp"

namespace hspan {

/// Loads an externally produced fused cube and checks it against the
/// expected geometry. The error lists every mismatching field.
inline FusedCube import_fused(const std::filesystem::path& dir, const FusedGeometry& expected) {
  HyperCube cube = load_hypercube(dir);
  const auto problems = geometry_mismatches(cube.meta(), expected);
  if (!problems.empty()) {
    std::string msg = "import " + dir.string() + ": geometry mismatch (";
    for (std::size_t i = 0; i < problems.size(); ++i) msg += (i ? "; " : "") + problems[i];
    throw ValidationError(msg + ")");
  }
  return cube;
}

}  // namespace hspan
