#include "sbflow/langevin.hpp"

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "sbflow/rng.hpp"

namespace sbflow {

ParticleCloud euler_maruyama(const DriftSpec& drift, const ParticleCloud& start,
                             double duration, int substeps, std::uint64_t seed) {
  if (!drift.grad_g) {
    throw std::invalid_argument("euler_maruyama: drift.grad_g is empty");
  }
  if (!(duration > 0.0) || !std::isfinite(duration)) {
    throw std::invalid_argument("euler_maruyama: duration must be finite and > 0");
  }
  if (substeps < 1) {
    throw std::invalid_argument("euler_maruyama: substeps must be >= 1");
  }
  const int n = start.size();
  const int dim = start.dim;
  if (n == 0) {
    throw std::invalid_argument("euler_maruyama: empty cloud");
  }

  const double dt = duration / substeps;
  const double root_dt = std::sqrt(dt);
  Rng rng(seed);

  ParticleCloud cloud = start;
  std::vector<double> grad(dim);
  for (int step = 0; step < substeps; ++step) {
    for (int i = 0; i < n; ++i) {
      double* xi = cloud.points.data() + static_cast<std::size_t>(i) * dim;
      drift.grad_g(std::span<const double>(xi, dim), std::span<double>(grad));
      for (int k = 0; k < dim; ++k) {
        if (!std::isfinite(grad[k])) {
          throw std::runtime_error(
              "euler_maruyama: non-finite drift for particle " + std::to_string(i) +
              " at substep " + std::to_string(step) +
              (drift.description.empty() ? "" : " (" + drift.description + ")"));
        }
        xi[k] += -0.5 * dt * grad[k] + root_dt * rng.normal();
      }
    }
  }
  return cloud;
}

GaussianState ld_step_gaussian(const GaussianState& state, double eps) {
  state.validate();
  if (!(eps > 0.0) || !std::isfinite(eps)) {
    throw std::invalid_argument("ld_step_gaussian: eps must be finite and > 0");
  }
  GaussianState out = state;
  double factor = 2.0 - std::exp(-eps / (2.0 * state.var));
  out.var = factor * factor * state.var;
  return out;
}

double fitted_slope(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) {
    throw std::invalid_argument("fitted_slope: size mismatch");
  }
  if (x.empty()) {
    throw std::invalid_argument("fitted_slope: empty input");
  }
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += x[i] * y[i];
    sxx += x[i] * x[i];
  }
  if (sxx == 0.0) {
    throw std::invalid_argument("fitted_slope: regressor is identically zero");
  }
  return sxy / sxx;
}

}  // namespace sbflow
