#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "srgan/rng.hpp"

// Central-difference gradient oracle. Perturbs chosen scalar slots of the
// inputs, re-evaluates a loss closure, and compares with analytic gradients.
// Runs at 64-bit; callers instantiate their ops with T = double.

namespace sr::nn {

struct FdInput {
  std::string name;
  double* data = nullptr;
  const double* analytic = nullptr;
  size_t count = 0;
};

struct FdOptions {
  double step = 1e-5;
  double tolerance = 1e-4;
  // relative error denominator floor; gradients below this magnitude are
  // compared against it instead of each other
  double denom_floor = 1e-3;
  // entries checked per input; all of them when 0
  size_t sample_per_input = 0;
  uint64_t sample_seed = 17;
};

struct FdReport {
  bool pass = true;
  double max_rel_error = 0.0;
  std::string worst_input;
  size_t worst_index = 0;
  double worst_analytic = 0.0;
  double worst_numeric = 0.0;
  size_t entries_checked = 0;
};

// loss: callable () -> double, pure in the perturbed inputs
template <typename LossFn>
FdReport finite_difference_check(LossFn&& loss, const std::vector<FdInput>& inputs,
                                 const FdOptions& opt = {}) {
  FdReport rep;
  Rng rng(opt.sample_seed);
  for (const auto& in : inputs) {
    std::vector<size_t> idx;
    if (opt.sample_per_input == 0 || in.count <= opt.sample_per_input) {
      idx.resize(in.count);
      for (size_t i = 0; i < in.count; ++i) idx[i] = i;
    } else {
      for (size_t i = 0; i < opt.sample_per_input; ++i)
        idx.push_back(static_cast<size_t>(
            rng.uniform_int(0, static_cast<int64_t>(in.count) - 1)));
    }
    for (size_t i : idx) {
      double orig = in.data[i];
      in.data[i] = orig + opt.step;
      double fp = loss();
      in.data[i] = orig - opt.step;
      double fm = loss();
      in.data[i] = orig;
      double numeric = (fp - fm) / (2.0 * opt.step);
      double analytic = in.analytic[i];
      double denom = std::max({std::fabs(numeric), std::fabs(analytic),
                               opt.denom_floor});
      double rel = std::fabs(numeric - analytic) / denom;
      ++rep.entries_checked;
      if (rel > rep.max_rel_error) {
        rep.max_rel_error = rel;
        rep.worst_input = in.name;
        rep.worst_index = i;
        rep.worst_analytic = analytic;
        rep.worst_numeric = numeric;
      }
    }
  }
  rep.pass = rep.max_rel_error < opt.tolerance;
  return rep;
}

}  // namespace sr::nn
