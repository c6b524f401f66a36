#pragma once

#include <cstddef>
#include <span>
#include <type_traits>
#include <vector>

#include "hspan/core/error.hpp"

namespace hspan {

/// Non-owning row-major view of a 2-D sample grid.
template <class T>
struct GridView {
  std::span<T> data;
  std::size_t width = 0;
  std::size_t height = 0;

  GridView() = default;
  GridView(std::span<T> d, std::size_t w, std::size_t h)
      : data(d), width(w), height(h) {
    detail::require(d.size() == w * h, "grid view: span size != width*height");
  }
  // Mutable -> const conversion.
  template <class U>
    requires(std::is_same_v<const U, T> && !std::is_same_v<U, T>)
  GridView(GridView<U> other)  // NOLINT(google-explicit-constructor)
      : data(other.data), width(other.width), height(other.height) {}

  T& operator()(std::size_t row, std::size_t col) const {
    return data[row * width + col];
  }
  std::size_t size() const { return data.size(); }
};

/// Owning row-major 2-D grid.
template <class T>
class Grid {
 public:
  using value_type = T;

  Grid() = default;
  Grid(std::size_t width, std::size_t height, T fill = T{})
      : width_(width), height_(height), data_(width * height, fill) {}
  Grid(std::size_t width, std::size_t height, std::vector<T> data)
      : width_(width), height_(height), data_(std::move(data)) {
    detail::require(data_.size() == width_ * height_,
                    "grid: sample count != width*height");
  }
  explicit Grid(GridView<const T> view)
      : width_(view.width),
        height_(view.height),
        data_(view.data.begin(), view.data.end()) {}

  std::size_t width() const { return width_; }
  std::size_t height() const { return height_; }
  std::size_t size() const { return data_.size(); }

  T& operator()(std::size_t row, std::size_t col) {
    return data_[row * width_ + col];
  }
  const T& operator()(std::size_t row, std::size_t col) const {
    return data_[row * width_ + col];
  }

  std::vector<T>& samples() { return data_; }
  const std::vector<T>& samples() const { return data_; }

  GridView<const T> view() const { return {data_, width_, height_}; }
  GridView<T> mutable_view() { return {data_, width_, height_}; }

  friend bool operator==(const Grid&, const Grid&) = default;

 private:
  std::size_t width_ = 0;
  std::size_t height_ = 0;
  std::vector<T> data_;
};

/// Converts a grid view to another sample type.
template <class To, class From>
Grid<To> grid_cast(GridView<const From> in) {
  std::vector<To> out(in.data.size());
  for (std::size_t i = 0; i < out.size(); ++i)
    out[i] = static_cast<To>(in.data[i]);
  return Grid<To>(in.width, in.height, std::move(out));
}

/// Half-sample symmetric mirror (d c b a | a b c d | d c b a), valid for any
/// integer index and any n >= 1.
inline std::size_t reflect_index(std::ptrdiff_t i, std::size_t n) {
  const auto period = static_cast<std::ptrdiff_t>(2 * n);
  std::ptrdiff_t m = i % period;
  if (m < 0) m += period;
  if (m >= static_cast<std::ptrdiff_t>(n)) m = period - 1 - m;
  return static_cast<std::size_t>(m);
}

}  // namespace hspan
