#pragma once

#include <string>
#include <vector>

namespace sbflow {

// Isotropic Gaussian N(mean, var * I_dim). Mean always has size dim.
struct GaussianState {
  std::vector<double> mean;
  double var = 1.0;
  int dim = 1;

  static GaussianState centered(double var, int dim = 1);
  void validate() const;
  bool is_centered() const;
};

// Gaussian coupling of two equal-variance marginals, identified by its
// correlation; sym_kl between two such couplings is scale-free, so the
// common marginal variance is not stored.
struct Coupling2x2 {
  double corr = 0.0;
};

enum class FunctionalKind { Entropy, KLtoStandardNormal, ReverseEntropy, ReverseKL };

// Energy functional driving a flow. Reverse kinds run a forward flow
// backwards over a fixed window and therefore require horizon > 0; forward
// kinds ignore it.
struct Functional {
  FunctionalKind kind = FunctionalKind::Entropy;
  double horizon = 0.0;

  bool is_reverse() const {
    return kind == FunctionalKind::ReverseEntropy || kind == FunctionalKind::ReverseKL;
  }
  void validate() const;
};

FunctionalKind parse_functional_kind(const std::string& name);
std::string to_string(FunctionalKind kind);

// Correlation of the static Schrodinger bridge between two copies of
// N(0, var) at temperature eps (cost 0.5|x-y|^2):
//   c = (sqrt(var^2 + eps^2/4) - eps/2) / var,
// evaluated in the cancellation-free form var / (sqrt(var^2+eps^2/4)+eps/2).
// Satisfies (c*var)^2 + eps*(c*var) = var^2, decreases from 1 to 0 in eps.
double c_eps(double var, double eps);

// The two stationary couplings compared by the main inequality: the
// time-eps Ornstein-Uhlenbeck (Langevin) coupling with corr e^{-eps/(2var)}
// and the Schrodinger-bridge coupling with corr c_eps(var, eps).
struct CouplingPair {
  Coupling2x2 ou;
  Coupling2x2 sb;
};
CouplingPair couplings(double var, double eps);

// Symmetrized KL divergence 0.5 tr(S1^-1 S2) + 0.5 tr(S2^-1 S1) - 2 between
// equal-scale 2x2 couplings, computed in the algebraically identical form
//   (c1 - c2)^2 (1 + c1 c2) / ((1 - c1^2)(1 - c2^2)),
// which avoids the catastrophic cancellation the trace form hits once the
// value drops toward eps^4/1152. Correlations with |corr| >= 1 - 1e-12 are
// rejected (coupling degenerates).
double sym_kl(const Coupling2x2& a, const Coupling2x2& b);

// Variance of the entropic interpolation between two copies of N(0, var)
// at time t in [0, 1]:
//   v_t = var [(1-t)^2 + t^2 + 2 t (1-t) c] + eps t (1-t),  c = c_eps(var, eps).
double entropic_var(double var, double eps, double t);

// Independent evaluation of v_{1/2} through the delta parameterization
//   delta = 0.5 (e' - 2 + sqrt(4 + e'^2)),  e' = eps / var (reduced
//   temperature; the identity v_t(var, eps) = var * v_t(1, eps/var) makes
//   this exact for every var),
//   v_{1/2} = (delta^2 / (4 (1 + delta)) + 1) * var.
// Used as a cross-check route against entropic_var(var, eps, 0.5).
double entropic_var_midpoint(double var, double eps);

// Fisher information of N(m, var I_d) relative to Lebesgue: d / var.
double fisher(double var, int dim);

// Fisher-information defect of the entropic interpolation:
//   delta_fisher = fisher(var) - \int_0^1 fisher(v_t) dt  >= 0,
// the integral evaluated by adaptive Simpson (absolute tolerance 1e-12,
// tighter than the 1e-10 the downstream checks need).
double delta_fisher(double var, double eps, int dim);

// E ||grad U(X)||^2 for U(x) = |x|^2 / (8 var^2) (the potential whose
// Langevin diffusion is stationary at N(0, var I)) with X ~ N(0, under_var I):
//   d * under_var / (16 var^4).
double grad_u_moment(double var, int dim, double under_var);

// Right-hand side of the coupling comparison bound:
//   0.5 eps^2 sqrt(delta_fisher) sqrt(\int_0^1 grad_u_moment(var, d, v_t) dt).
double thm31_rhs(double var, double eps, int dim);

// Exact law of the flow started at `start` after time t.
//   Entropy          var + t                      (t >= 0)
//   KL               var e^{-t} + 1 - e^{-t}, mean e^{-t/2}
//   ReverseEntropy   var - t                      (0 <= t <= horizon < var)
//   ReverseKL        1 + (var - 1) e^{t}, mean e^{t/2}  (0 <= t <= horizon)
// Reverse kinds reject t past the horizon and any t where the variance
// would leave (0, inf).
GaussianState exact_flow(const Functional& functional, const GaussianState& start,
                         double t);

// 2-Wasserstein distance between isotropic Gaussians:
//   sqrt( |mean_a - mean_b|^2 + d (sqrt(var_a) - sqrt(var_b))^2 ).
double w2_isotropic(const GaussianState& a, const GaussianState& b);

}  // namespace sbflow
