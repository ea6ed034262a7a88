#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>

#include "sbflow/cloud.hpp"
#include "sbflow/gaussian.hpp"

namespace sbflow {

// Drift for the overdamped Langevin dynamics dX = -1/2 grad g(X) dt + dB.
// grad_g writes grad g(x) into `out` (both of the cloud's dimension).
struct DriftSpec {
  std::function<void(std::span<const double> x, std::span<double> out)> grad_g;
  std::string description;
};

// Euler-Maruyama over one window of length `duration` split into `substeps`
// equal steps of size dt = duration / substeps:
//   x <- x - (dt/2) grad_g(x) + sqrt(dt) xi,   xi ~ N(0, I).
// Noise is drawn particle-major, coordinate-minor, one fixed stream from
// `seed`, so runs are reproducible. A non-finite drift value aborts with the
// particle index and substep in the message.
ParticleCloud euler_maruyama(const DriftSpec& drift, const ParticleCloud& start,
                             double duration, int substeps, std::uint64_t seed);

// Closed-form heat-flow analogue of one Langevin window at temperature eps
// on N(mean, var I): the Ornstein-Uhlenbeck coupling with correlation
// e^{-eps/(2 var)} replaces the Schrodinger-bridge coupling, giving
//   var' = (2 - e^{-eps/(2 var)})^2 var,  mean unchanged.
GaussianState ld_step_gaussian(const GaussianState& state, double eps);

// Least-squares slope through the origin, sum(x y) / sum(x^2). Rejects
// empty input and an all-zero regressor.
double fitted_slope(std::span<const double> x, std::span<const double> y);

}  // namespace sbflow
