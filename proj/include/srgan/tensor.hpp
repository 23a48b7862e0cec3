#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "srgan/error.hpp"

namespace sr {

// Dense NCHW shape. All activation and parameter tensors are carried in this
// layout; parameters with fewer natural dimensions use size-1 axes.
struct Shape {
  int n = 0, c = 0, h = 0, w = 0;

  size_t count() const {
    return static_cast<size_t>(n) * c * h * w;
  }
  bool operator==(const Shape& o) const = default;

  std::string str() const {
    return "(" + std::to_string(n) + "," + std::to_string(c) + "," +
           std::to_string(h) + "," + std::to_string(w) + ")";
  }
};

template <typename T>
struct Tensor {
  Shape shape;
  std::vector<T> data;

  Tensor() = default;
  explicit Tensor(Shape s, T fill = T(0)) : shape(s), data(s.count(), fill) {}
  Tensor(int n, int c, int h, int w, T fill = T(0))
      : Tensor(Shape{n, c, h, w}, fill) {}

  size_t count() const { return data.size(); }
  bool empty() const { return data.empty(); }

  T* ptr() { return data.data(); }
  const T* ptr() const { return data.data(); }

  size_t index(int n, int c, int y, int x) const {
    return ((static_cast<size_t>(n) * shape.c + c) * shape.h + y) * shape.w + x;
  }
  T& at(int n, int c, int y, int x) { return data[index(n, c, y, x)]; }
  const T& at(int n, int c, int y, int x) const {
    return data[index(n, c, y, x)];
  }

  // pointer to the start of one (n, c) plane
  T* plane(int n, int c) { return data.data() + index(n, c, 0, 0); }
  const T* plane(int n, int c) const { return data.data() + index(n, c, 0, 0); }

  void fill(T v) { std::fill(data.begin(), data.end(), v); }

  template <typename U>
  Tensor<U> cast() const {
    Tensor<U> out(shape);
    for (size_t i = 0; i < data.size(); ++i)
      out.data[i] = static_cast<U>(data[i]);
    return out;
  }

  bool all_finite() const {
    for (T v : data)
      if (!std::isfinite(static_cast<double>(v))) return false;
    return true;
  }
};

template <typename T>
inline void require_same_shape(const Tensor<T>& a, const Tensor<T>& b,
                               const char* where) {
  if (!(a.shape == b.shape))
    fail(ErrorCode::ShapeMismatch, std::string(where) + ": " + a.shape.str() +
                                       " vs " + b.shape.str());
}

// Learnable tensor paired with same-shape gradient storage.
template <typename T>
struct Param {
  std::string name;
  Tensor<T> value;
  Tensor<T> grad;

  Param() = default;
  Param(std::string n, Shape s) : name(std::move(n)), value(s), grad(s) {}
  void zero_grad() { grad.fill(T(0)); }
};

}  // namespace sr
