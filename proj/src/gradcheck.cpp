#include "coattn/gradcheck.hpp"

#include <algorithm>
#include <cmath>

#include "coattn/errors.hpp"
#include "coattn/rng.hpp"

namespace coattn {

namespace {

double eval_checked(const std::function<double()>& loss) {
  double v = loss();
  if (!std::isfinite(v))
    throw EvaluationAbortError(
        "gradient check: objective evaluated to a non-finite value");
  return v;
}

}  // namespace

std::vector<GradCheckReport> check_gradients(
    const std::function<double()>& loss,
    const std::function<GradMap()>& analytic,
    const std::vector<std::pair<std::string, Tensor*>>& params,
    const GradCheckOptions& opts) {
  eval_checked(loss);
  GradMap grads = analytic();

  std::vector<GradCheckReport> reports;
  reports.reserve(params.size());

  for (const auto& [name, tensor] : params) {
    auto it = grads.find(name);
    if (it == grads.end())
      throw EvaluationAbortError("gradient check: no analytic gradient for '" +
                                 name + "'");
    const Tensor& g = it->second;
    if (!g.same_shape(*tensor))
      throw DimensionError("gradient check: gradient shape " + g.shape_str() +
                           " does not match parameter '" + name + "' " +
                           tensor->shape_str());

    std::vector<std::size_t> coords;
    std::size_t n = tensor->size();
    if (n <= opts.max_coords) {
      coords.resize(n);
      for (std::size_t i = 0; i < n; ++i) coords[i] = i;
    } else {
      // seeded subsample of distinct coordinates
      Rng rng(mix_seed(opts.seed, fnv1a(name)));
      std::vector<std::size_t> all(n);
      for (std::size_t i = 0; i < n; ++i) all[i] = i;
      for (std::size_t i = 0; i < opts.max_coords; ++i) {
        std::size_t j = i + static_cast<std::size_t>(rng.below(n - i));
        std::swap(all[i], all[j]);
      }
      coords.assign(all.begin(), all.begin() + opts.max_coords);
      std::sort(coords.begin(), coords.end());
    }

    GradCheckReport rep;
    rep.param = name;
    rep.coords_checked = coords.size();

    for (std::size_t idx : coords) {
      double orig = (*tensor)[idx];
      (*tensor)[idx] = orig + opts.step;
      double fp = eval_checked(loss);
      (*tensor)[idx] = orig - opts.step;
      double fm = eval_checked(loss);
      (*tensor)[idx] = orig;

      double numeric = (fp - fm) / (2.0 * opts.step);
      double a = g[idx];
      double rel = std::abs(a - numeric) /
                   std::max({std::abs(a), std::abs(numeric), 1e-8});

      if (rel > rep.max_rel_error) rep.max_rel_error = rel;
      GradSample s{idx, a, numeric, rel};
      rep.worst.push_back(s);
      std::sort(rep.worst.begin(), rep.worst.end(),
                [](const GradSample& x, const GradSample& y) {
                  return x.rel_error > y.rel_error;
                });
      if (rep.worst.size() > opts.keep_worst) rep.worst.resize(opts.keep_worst);
    }
    reports.push_back(std::move(rep));
  }
  return reports;
}

double max_rel_error(const std::vector<GradCheckReport>& reports) {
  double m = 0.0;
  for (const auto& r : reports) m = std::max(m, r.max_rel_error);
  return m;
}

}  // namespace coattn
