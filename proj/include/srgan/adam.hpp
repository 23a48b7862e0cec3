#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "srgan/tensor.hpp"

namespace sr {

// Bias-corrected Adam. Moment buffers are allocated on first use and run
// parallel to the parameter list; gradients are zeroed after each step.
template <typename T>
struct AdamState {
  T learning_rate = static_cast<T>(1e-4);
  T beta1 = static_cast<T>(0.9);
  T beta2 = static_cast<T>(0.999);
  T epsilon = static_cast<T>(1e-8);
  uint64_t t = 0;
  std::vector<Tensor<T>> m, v;
};

template <typename T>
void adam_step(const std::vector<Param<T>*>& params, AdamState<T>& st) {
  if (st.m.empty()) {
    st.m.reserve(params.size());
    st.v.reserve(params.size());
    for (const auto* p : params) {
      st.m.emplace_back(p->value.shape);
      st.v.emplace_back(p->value.shape);
    }
  }
  if (st.m.size() != params.size())
    fail(ErrorCode::InvalidArgument, "adam state does not match param list");
  for (size_t i = 0; i < params.size(); ++i) {
    const auto* p = params[i];
    if (p->grad.count() != p->value.count())
      fail(ErrorCode::MissingGradient,
           "parameter '" + p->name + "' has no gradient buffer");
    if (!(st.m[i].shape == p->value.shape))
      fail(ErrorCode::MissingGradient,
           "adam moments for '" + p->name + "' have wrong shape");
  }

  st.t += 1;
  const T bc1 = T(1) - std::pow(st.beta1, static_cast<T>(st.t));
  const T bc2 = T(1) - std::pow(st.beta2, static_cast<T>(st.t));
  for (size_t i = 0; i < params.size(); ++i) {
    Param<T>& p = *params[i];
    T* m = st.m[i].ptr();
    T* v = st.v[i].ptr();
    T* w = p.value.ptr();
    T* g = p.grad.ptr();
    const size_t n = p.value.count();
    for (size_t k = 0; k < n; ++k) {
      m[k] = st.beta1 * m[k] + (T(1) - st.beta1) * g[k];
      v[k] = st.beta2 * v[k] + (T(1) - st.beta2) * g[k] * g[k];
      T mhat = m[k] / bc1;
      T vhat = v[k] / bc2;
      w[k] -= st.learning_rate * mhat / (std::sqrt(vhat) + st.epsilon);
      g[k] = T(0);
    }
  }
}

}  // namespace sr
