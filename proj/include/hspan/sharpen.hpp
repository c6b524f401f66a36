#pragma once

#include <string>

#include "hspan/sharpen/exp.hpp"
#include "hspan/sharpen/gsa.hpp"
#include "hspan/sharpen/import.hpp"
#include "hspan/sharpen/pca.hpp"
#include "hspan/sharpen/request.hpp"

namespace hspan {

inline bool is_builtin_method(const std::string& name) {
  return name == "exp" || name == "pca" || name == "gsa";
}

/// Dispatches a built-in method by name.
inline FusedCube sharpen(const std::string& method, const SharpenRequest& req) {
  if (method == "exp") return sharpen_exp(req);
  if (method == "pca") return sharpen_pca(req);
  if (method == "gsa") return sharpen_gsa(req);
  throw ValidationError("unknown method '" + method + "'");
}

}  // namespace hspan
