#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <vector>

#include "sbflow/cloud.hpp"
#include "sbflow/gaussian.hpp"

namespace sbflow {

enum class SchemeMethod { SchrodingerBridge, ExplicitEuler, Langevin };

// One flow discretization run: N = floor(horizon / epsilon) steps of size
// epsilon (N >= 1 required). tol / max_iter configure the inner transport
// solve in particle mode and are ignored in closed form.
struct SchemeConfig {
  double epsilon = 0.1;
  double horizon = 1.0;
  Functional functional;
  SchemeMethod method = SchemeMethod::SchrodingerBridge;
  double sinkhorn_tol = 1e-9;
  int sinkhorn_max_iter = 10000;

  int n_steps() const;
  void validate() const;
};

// States recorded at times k * epsilon, k = 0..N. eval_at uses the
// left-closed convention: t maps to the state with the largest grid time
// <= t; any t in [0, horizon] is valid.
template <typename State>
struct FlowTrajectory {
  double epsilon = 0.0;
  double horizon = 0.0;
  std::vector<double> times;
  std::vector<State> states;

  const State& eval_at(double t) const {
    if (!(t >= 0.0) || !(t <= horizon)) {
      throw std::invalid_argument("FlowTrajectory::eval_at: t outside [0, horizon]");
    }
    auto it = std::upper_bound(times.begin(), times.end(), t);
    std::size_t k = static_cast<std::size_t>(it - times.begin());
    return states[k > 0 ? k - 1 : 0];
  }
};

// One Schrodinger-bridge step of size eps on an isotropic Gaussian, in
// closed form. With C_s = c_eps(s, eps) evaluated at the surrogate
// variance s of the functional:
//   Entropy          var' = (2 - C_var)^2 var                  (s = var)
//   ReverseEntropy   var' = C_var^2 var,       needs eps < 4 var
//   KL               var < 1: var' = (2 - C_s)^2 var, s = var/(1-var)
//                    var > 1: var' = C_s^2 var,       s = var/(var-1)
//                    var = 1: fixed point
//   ReverseKL        mirrored branches,        needs eps < 4 s
// The reverse guards are the validity region of the shrinking step; past
// them the discretization no longer tracks the reverse flow, so the step
// refuses loudly instead of returning garbage. KL variants are defined for
// centered states only (the closed form drives variances; means have no
// discrete law here) and reject a nonzero mean.
GaussianState sb_step_gaussian(const GaussianState& state, double eps,
                               const Functional& functional);

// Explicit Euler discretization of the same flows:
//   Entropy          var' = (1 + eps/(2 var))^2 var
//   KL               var' = (1 + eps (1 - var)/(2 var))^2 var
//   ReverseEntropy   var' = (1 - eps/(2 var))^2 var
//   ReverseKL        var' = (1 - eps (1 - var)/(2 var))^2 var
// Steps whose linear factor would hit <= 0 (Euler overshoot) throw.
GaussianState euler_step_gaussian(const GaussianState& state, double eps,
                                  const Functional& functional);

// One heat-flow bridge step on particles: solve the symmetric self-transport
// problem at temperature eps, take the barycentric projection b, move every
// point to 2 x - b(x).
ParticleCloud sb_step_particles_heat(const ParticleCloud& cloud, double eps,
                                     double sinkhorn_tol = 1e-9,
                                     int sinkhorn_max_iter = 10000);

// Reverse-heat counterpart: move every point to b(x).
ParticleCloud sb_step_particles_reverse_heat(const ParticleCloud& cloud, double eps,
                                             double sinkhorn_tol = 1e-9,
                                             int sinkhorn_max_iter = 10000);

// Explicit Euler transport step x <- x + eps * v(x) with v = -1/2 score(x),
// score being (an estimate of) grad log density of the current law.
ParticleCloud euler_step_particles(
    const ParticleCloud& cloud,
    const std::function<void(std::span<const double> x, std::span<double> out)>& score,
    double eps);

// Full closed-form run. Step failures are rethrown with the step index and
// grid time attached.
FlowTrajectory<GaussianState> run_scheme_gaussian(const SchemeConfig& config,
                                                  const GaussianState& initial);

// Full particle run. Only the bridge method for the heat functionals has a
// particle implementation (Entropy / ReverseEntropy); other combinations are
// rejected up front.
FlowTrajectory<ParticleCloud> run_scheme_particles(const SchemeConfig& config,
                                                   const ParticleCloud& initial);

// CSV layout: header "k,time,var", one row per recorded state.
void write_gaussian_trajectory_csv(const FlowTrajectory<GaussianState>& trajectory,
                                   std::ostream& out);

}  // namespace sbflow
