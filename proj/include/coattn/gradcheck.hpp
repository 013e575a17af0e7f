#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "coattn/tensor.hpp"

namespace coattn {

struct GradSample {
  std::size_t index = 0;
  double analytic = 0.0;
  double numeric = 0.0;
  double rel_error = 0.0;
};

/// Result of checking one named parameter: the worst relative error over the
/// coordinates probed, plus a few sample pairs for reporting.
struct GradCheckReport {
  std::string param;
  double max_rel_error = 0.0;
  std::size_t coords_checked = 0;
  std::vector<GradSample> worst;
};

struct GradCheckOptions {
  double step = 1e-5;
  // Parameters with more coordinates than this get a seeded random
  // subsample instead of an exhaustive sweep.
  std::size_t max_coords = 200;
  std::uint64_t seed = 0x9c0ffee5;
  std::size_t keep_worst = 3;
};

using GradMap = std::unordered_map<std::string, Tensor>;

/// Central-difference check of analytic gradients.
///
/// `loss` evaluates the scalar objective at the current parameter values
/// (the tensors behind `params` are perturbed in place between calls).
/// `analytic` returns the gradients of `loss` with respect to each named
/// parameter at the unperturbed point. Relative error per coordinate is
/// |a - n| / max(|a|, |n|, 1e-8).
///
/// Throws EvaluationAbortError if `loss` returns a non-finite value.
std::vector<GradCheckReport> check_gradients(
    const std::function<double()>& loss,
    const std::function<GradMap()>& analytic,
    const std::vector<std::pair<std::string, Tensor*>>& params,
    const GradCheckOptions& opts = {});

double max_rel_error(const std::vector<GradCheckReport>& reports);

}  // namespace coattn
