#include "sbflow/gaussian.hpp"

#include <cmath>
#include <stdexcept>

#include "sbflow/quadrature.hpp"

namespace sbflow {

namespace {

void require_var(double var, const char* where) {
  if (!(var > 0.0) || !std::isfinite(var)) {
    throw std::invalid_argument(std::string(where) + ": var must be finite and > 0");
  }
}

void require_eps(double eps, const char* where) {
  if (!(eps >= 0.0) || !std::isfinite(eps)) {
    throw std::invalid_argument(std::string(where) + ": eps must be finite and >= 0");
  }
}

void require_dim(int dim, const char* where) {
  if (dim <= 0) {
    throw std::invalid_argument(std::string(where) + ": dim must be >= 1");
  }
}

}  // namespace

GaussianState GaussianState::centered(double var, int dim) {
  GaussianState s;
  s.mean.assign(static_cast<std::size_t>(dim), 0.0);
  s.var = var;
  s.dim = dim;
  s.validate();
  return s;
}

void GaussianState::validate() const {
  require_dim(dim, "GaussianState");
  require_var(var, "GaussianState");
  if (mean.size() != static_cast<std::size_t>(dim)) {
    throw std::invalid_argument("GaussianState: mean size does not match dim");
  }
}

bool GaussianState::is_centered() const {
  for (double m : mean) {
    if (m != 0.0) return false;
  }
  return true;
}

void Functional::validate() const {
  if (is_reverse() && !(horizon > 0.0)) {
    throw std::invalid_argument(
        "Functional: reverse kinds need horizon > 0 (the reverse-time window)");
  }
}

FunctionalKind parse_functional_kind(const std::string& name) {
  if (name == "entropy") return FunctionalKind::Entropy;
  if (name == "kl") return FunctionalKind::KLtoStandardNormal;
  if (name == "reverse-entropy") return FunctionalKind::ReverseEntropy;
  if (name == "reverse-kl") return FunctionalKind::ReverseKL;
  throw std::invalid_argument("unknown functional '" + name +
                              "' (expected entropy|kl|reverse-entropy|reverse-kl)");
}

std::string to_string(FunctionalKind kind) {
  switch (kind) {
    case FunctionalKind::Entropy: return "entropy";
    case FunctionalKind::KLtoStandardNormal: return "kl";
    case FunctionalKind::ReverseEntropy: return "reverse-entropy";
    case FunctionalKind::ReverseKL: return "reverse-kl";
  }
  throw std::logic_error("to_string(FunctionalKind): bad enum value");
}

double c_eps(double var, double eps) {
  require_var(var, "c_eps");
  require_eps(eps, "c_eps");
  double half = 0.5 * eps;
  return var / (std::sqrt(var * var + half * half) + half);
}

CouplingPair couplings(double var, double eps) {
  require_var(var, "couplings");
  require_eps(eps, "couplings");
  CouplingPair p;
  p.ou.corr = std::exp(-eps / (2.0 * var));
  p.sb.corr = c_eps(var, eps);
  return p;
}

double sym_kl(const Coupling2x2& a, const Coupling2x2& b) {
  double c1 = a.corr;
  double c2 = b.corr;
  if (!(std::abs(c1) < 1.0 - 1e-12) || !(std::abs(c2) < 1.0 - 1e-12)) {
    throw std::invalid_argument("sym_kl: |corr| must stay below 1 - 1e-12");
  }
  double d = c1 - c2;
  return d * d * (1.0 + c1 * c2) / ((1.0 - c1 * c1) * (1.0 - c2 * c2));
}

double entropic_var(double var, double eps, double t) {
  require_var(var, "entropic_var");
  require_eps(eps, "entropic_var");
  if (!(t >= 0.0 && t <= 1.0)) {
    throw std::invalid_argument("entropic_var: t must lie in [0, 1]");
  }
  double c = c_eps(var, eps);
  double s = 1.0 - t;
  return var * (s * s + t * t + 2.0 * t * s * c) + eps * t * s;
}

double entropic_var_midpoint(double var, double eps) {
  require_var(var, "entropic_var_midpoint");
  require_eps(eps, "entropic_var_midpoint");
  double e = eps / var;
  double delta = 0.5 * (e - 2.0 + std::sqrt(4.0 + e * e));
  return (delta * delta / (4.0 * (1.0 + delta)) + 1.0) * var;
}

double fisher(double var, int dim) {
  require_var(var, "fisher");
  require_dim(dim, "fisher");
  return static_cast<double>(dim) / var;
}

double delta_fisher(double var, double eps, int dim) {
  require_var(var, "delta_fisher");
  require_eps(eps, "delta_fisher");
  require_dim(dim, "delta_fisher");
  double integral = integrate_adaptive_simpson(
      [var, eps](double t) { return 1.0 / entropic_var(var, eps, t); }, 0.0, 1.0,
      1e-12);
  return static_cast<double>(dim) * (1.0 / var - integral);
}

double grad_u_moment(double var, int dim, double under_var) {
  require_var(var, "grad_u_moment");
  require_dim(dim, "grad_u_moment");
  if (!(under_var >= 0.0)) {
    throw std::invalid_argument("grad_u_moment: under_var must be >= 0");
  }
  double v2 = var * var;
  return static_cast<double>(dim) * under_var / (16.0 * v2 * v2);
}

double thm31_rhs(double var, double eps, int dim) {
  require_var(var, "thm31_rhs");
  require_eps(eps, "thm31_rhs");
  require_dim(dim, "thm31_rhs");
  double moment_integral = integrate_adaptive_simpson(
      [var, eps, dim](double t) {
        return grad_u_moment(var, dim, entropic_var(var, eps, t));
      },
      0.0, 1.0, 1e-12);
  return 0.5 * eps * eps * std::sqrt(delta_fisher(var, eps, dim)) *
         std::sqrt(moment_integral);
}

GaussianState exact_flow(const Functional& functional, const GaussianState& start,
                         double t) {
  functional.validate();
  start.validate();
  if (!(t >= 0.0) || !std::isfinite(t)) {
    throw std::invalid_argument("exact_flow: t must be finite and >= 0");
  }
  if (functional.is_reverse() && t > functional.horizon) {
    throw std::invalid_argument(
        "exact_flow: reverse flow queried past its horizon");
  }
  GaussianState out = start;
  switch (functional.kind) {
    case FunctionalKind::Entropy:
      out.var = start.var + t;
      break;
    case FunctionalKind::KLtoStandardNormal: {
      double decay = std::exp(-t);
      out.var = start.var * decay + 1.0 - decay;
      double mean_decay = std::exp(-0.5 * t);
      for (double& m : out.mean) m *= mean_decay;
      break;
    }
    case FunctionalKind::ReverseEntropy:
      out.var = start.var - t;
      if (!(out.var > 0.0)) {
        throw std::invalid_argument(
            "exact_flow: reverse heat flow exhausts its variance before t");
      }
      break;
    case FunctionalKind::ReverseKL: {
      double grow = std::exp(t);
      out.var = 1.0 + (start.var - 1.0) * grow;
      if (!(out.var > 0.0)) {
        throw std::invalid_argument(
            "exact_flow: reverse KL flow leaves the admissible variance range");
      }
      double mean_grow = std::exp(0.5 * t);
      for (double& m : out.mean) m *= mean_grow;
      break;
    }
  }
  return out;
}

double w2_isotropic(const GaussianState& a, const GaussianState& b) {
  a.validate();
  b.validate();
  if (a.dim != b.dim) {
    throw std::invalid_argument("w2_isotropic: dimension mismatch");
  }
  double mean_sq = 0.0;
  for (int k = 0; k < a.dim; ++k) {
    double z = a.mean[k] - b.mean[k];
    mean_sq += z * z;
  }
  double ds = std::sqrt(a.var) - std::sqrt(b.var);
  return std::sqrt(mean_sq + a.dim * ds * ds);
}

}  // namespace sbflow
