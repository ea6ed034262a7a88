#include "sbflow/scheme.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <string>

#include "sbflow/langevin.hpp"
#include "sbflow/sinkhorn.hpp"

namespace sbflow {

namespace {

void require_eps(double eps, const char* where) {
  if (!(eps > 0.0) || !std::isfinite(eps)) {
    throw std::invalid_argument(std::string(where) + ": eps must be finite and > 0");
  }
}

void require_centered_for_kl(const GaussianState& state, const Functional& f,
                             const char* where) {
  if ((f.kind == FunctionalKind::KLtoStandardNormal ||
       f.kind == FunctionalKind::ReverseKL) &&
      !state.is_centered()) {
    throw std::invalid_argument(std::string(where) +
                                ": KL-variant closed-form steps are defined for "
                                "centered states (mean must be zero)");
  }
}

// Surrogate variance through which the KL flow borrows the heat-step
// formulas: s = var / |1 - var|.
double kl_surrogate(double var) { return var / std::abs(1.0 - var); }

void require_reverse_region(double eps, double surrogate, double var,
                            const char* what) {
  if (!(eps < 4.0 * surrogate)) {
    char buf[160];
    std::snprintf(buf, sizeof buf,
                  "%s: outside stability region, needs eps < 4 * %.6g "
                  "(eps=%.6g, var=%.6g)",
                  what, surrogate, eps, var);
    throw std::runtime_error(buf);
  }
}

}  // namespace

int SchemeConfig::n_steps() const {
  // Small forward nudge so horizons that are exact multiples of epsilon in
  // real arithmetic are not floored one short by rounding (1.0 / 0.1 etc).
  return static_cast<int>(std::floor(horizon / epsilon + 1e-9));
}

void SchemeConfig::validate() const {
  require_eps(epsilon, "SchemeConfig");
  if (!(horizon > 0.0) || !std::isfinite(horizon)) {
    throw std::invalid_argument("SchemeConfig: horizon must be finite and > 0");
  }
  if (n_steps() < 1) {
    throw std::invalid_argument(
        "SchemeConfig: horizon shorter than one step (floor(horizon/eps) < 1)");
  }
  functional.validate();
  if (functional.is_reverse() && functional.horizon != horizon) {
    throw std::invalid_argument(
        "SchemeConfig: reverse functional horizon must equal the scheme horizon");
  }
  if (!(sinkhorn_tol > 0.0) || sinkhorn_max_iter < 1) {
    throw std::invalid_argument("SchemeConfig: bad sinkhorn options");
  }
}

GaussianState sb_step_gaussian(const GaussianState& state, double eps,
                               const Functional& functional) {
  state.validate();
  functional.validate();
  require_eps(eps, "sb_step_gaussian");
  require_centered_for_kl(state, functional, "sb_step_gaussian");

  GaussianState out = state;
  const double var = state.var;
  switch (functional.kind) {
    case FunctionalKind::Entropy: {
      double f = 2.0 - c_eps(var, eps);
      out.var = f * f * var;
      break;
    }
    case FunctionalKind::ReverseEntropy: {
      require_reverse_region(eps, var, var, "sb_step_gaussian: reverse heat step");
      double f = c_eps(var, eps);
      out.var = f * f * var;
      break;
    }
    case FunctionalKind::KLtoStandardNormal: {
      if (var == 1.0) break;  // stationary point of the flow
      double s = kl_surrogate(var);
      double c = c_eps(s, eps);
      double f = var < 1.0 ? 2.0 - c : c;
      out.var = f * f * var;
      break;
    }
    case FunctionalKind::ReverseKL: {
      if (var == 1.0) break;
      double s = kl_surrogate(var);
      require_reverse_region(eps, s, var, "sb_step_gaussian: reverse KL step");
      double c = c_eps(s, eps);
      double f = var < 1.0 ? c : 2.0 - c;
      out.var = f * f * var;
      break;
    }
  }
  return out;
}

GaussianState euler_step_gaussian(const GaussianState& state, double eps,
                                  const Functional& functional) {
  state.validate();
  functional.validate();
  require_eps(eps, "euler_step_gaussian");
  require_centered_for_kl(state, functional, "euler_step_gaussian");

  const double var = state.var;
  double factor = 0.0;
  switch (functional.kind) {
    case FunctionalKind::Entropy:
      factor = 1.0 + eps / (2.0 * var);
      break;
    case FunctionalKind::ReverseEntropy:
      factor = 1.0 - eps / (2.0 * var);
      break;
    case FunctionalKind::KLtoStandardNormal:
      factor = 1.0 + eps * (1.0 - var) / (2.0 * var);
      break;
    case FunctionalKind::ReverseKL:
      factor = 1.0 - eps * (1.0 - var) / (2.0 * var);
      break;
  }
  if (!(factor > 0.0)) {
    char buf[128];
    std::snprintf(buf, sizeof buf,
                  "euler_step_gaussian: step overshoots to factor %.6g <= 0 "
                  "(eps=%.6g, var=%.6g)",
                  factor, eps, var);
    throw std::runtime_error(buf);
  }
  GaussianState out = state;
  out.var = factor * factor * var;
  return out;
}

ParticleCloud sb_step_particles_heat(const ParticleCloud& cloud, double eps,
                                     double sinkhorn_tol, int sinkhorn_max_iter) {
  SinkhornSolution sol = solve_symmetric(cloud, eps, sinkhorn_tol, sinkhorn_max_iter);
  ParticleCloud b = barycentric_projection(sol);
  ParticleCloud out = cloud;
  for (std::size_t i = 0; i < out.points.size(); ++i) {
    out.points[i] = 2.0 * cloud.points[i] - b.points[i];
  }
  return out;
}

ParticleCloud sb_step_particles_reverse_heat(const ParticleCloud& cloud, double eps,
                                             double sinkhorn_tol,
                                             int sinkhorn_max_iter) {
  SinkhornSolution sol = solve_symmetric(cloud, eps, sinkhorn_tol, sinkhorn_max_iter);
  return barycentric_projection(sol);
}

ParticleCloud euler_step_particles(
    const ParticleCloud& cloud,
    const std::function<void(std::span<const double> x, std::span<double> out)>& score,
    double eps) {
  require_eps(eps, "euler_step_particles");
  if (!score) {
    throw std::invalid_argument("euler_step_particles: empty score callback");
  }
  const int n = cloud.size();
  const int dim = cloud.dim;
  ParticleCloud out = cloud;
  std::vector<double> s(dim);
  for (int i = 0; i < n; ++i) {
    const double* xi = cloud.points.data() + static_cast<std::size_t>(i) * dim;
    score(std::span<const double>(xi, dim), std::span<double>(s));
    for (int k = 0; k < dim; ++k) {
      if (!std::isfinite(s[k])) {
        throw std::runtime_error("euler_step_particles: non-finite score for particle " +
                                 std::to_string(i));
      }
      out.points[static_cast<std::size_t>(i) * dim + k] += eps * (-0.5 * s[k]);
    }
  }
  return out;
}

namespace {

template <typename State, typename StepFn>
FlowTrajectory<State> run_recorded(const SchemeConfig& config, const State& initial,
                                   StepFn step) {
  const int n = config.n_steps();
  FlowTrajectory<State> traj;
  traj.epsilon = config.epsilon;
  traj.horizon = config.horizon;
  traj.times.reserve(n + 1);
  traj.states.reserve(n + 1);
  traj.times.push_back(0.0);
  traj.states.push_back(initial);
  for (int k = 0; k < n; ++k) {
    try {
      traj.states.push_back(step(traj.states.back()));
    } catch (const std::exception& e) {
      throw std::runtime_error("run_scheme: step " + std::to_string(k + 1) + " (t=" +
                               std::to_string((k + 1) * config.epsilon) +
                               ") failed: " + e.what());
    }
    traj.times.push_back((k + 1) * config.epsilon);
  }
  return traj;
}

}  // namespace

FlowTrajectory<GaussianState> run_scheme_gaussian(const SchemeConfig& config,
                                                  const GaussianState& initial) {
  config.validate();
  initial.validate();
  switch (config.method) {
    case SchemeMethod::SchrodingerBridge:
      return run_recorded(config, initial, [&](const GaussianState& s) {
        return sb_step_gaussian(s, config.epsilon, config.functional);
      });
    case SchemeMethod::ExplicitEuler:
      return run_recorded(config, initial, [&](const GaussianState& s) {
        return euler_step_gaussian(s, config.epsilon, config.functional);
      });
    case SchemeMethod::Langevin:
      if (config.functional.kind != FunctionalKind::Entropy) {
        throw std::invalid_argument(
            "run_scheme_gaussian: the Langevin closed form covers the heat flow "
            "(entropy functional) only");
      }
      return run_recorded(config, initial, [&](const GaussianState& s) {
        return ld_step_gaussian(s, config.epsilon);
      });
  }
  throw std::logic_error("run_scheme_gaussian: bad method enum");
}

FlowTrajectory<ParticleCloud> run_scheme_particles(const SchemeConfig& config,
                                                   const ParticleCloud& initial) {
  config.validate();
  if (config.method != SchemeMethod::SchrodingerBridge) {
    throw std::invalid_argument(
        "run_scheme_particles: only the bridge method has a particle implementation");
  }
  if (config.functional.kind == FunctionalKind::Entropy) {
    return run_recorded(config, initial, [&](const ParticleCloud& c) {
      return sb_step_particles_heat(c, config.epsilon, config.sinkhorn_tol,
                                    config.sinkhorn_max_iter);
    });
  }
  if (config.functional.kind == FunctionalKind::ReverseEntropy) {
    return run_recorded(config, initial, [&](const ParticleCloud& c) {
      return sb_step_particles_reverse_heat(c, config.epsilon, config.sinkhorn_tol,
                                            config.sinkhorn_max_iter);
    });
  }
  throw std::invalid_argument(
      "run_scheme_particles: particle steps exist for entropy / reverse-entropy only");
}

void write_gaussian_trajectory_csv(const FlowTrajectory<GaussianState>& trajectory,
                                   std::ostream& out) {
  std::string s = "k,time,var\n";
  char buf[80];
  for (std::size_t k = 0; k < trajectory.states.size(); ++k) {
    std::snprintf(buf, sizeof buf, "%zu,%.17g,%.17g\n", k, trajectory.times[k],
                  trajectory.states[k].var);
    s += buf;
  }
  out << s;
}

}  // namespace sbflow
