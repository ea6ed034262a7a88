#pragma once

#include <iosfwd>
#include <stdexcept>
#include <vector>

#include "sbflow/cloud.hpp"

namespace sbflow {

// Solution of the symmetric entropic self-transport problem on a cloud:
// both marginals are the uniform measure on the points, cost is
// 0.5 |x_i - x_j|^2, temperature epsilon. By symmetry one potential f
// serves both sides; the primal plan is
//   pi_ij = exp((f_i + f_j - 0.5|x_i - x_j|^2) / epsilon) / n^2.
struct SinkhornSolution {
  ParticleCloud cloud;  // snapshot of the input points; keeps the solution usable on its own
  std::vector<double> potential;
  double epsilon = 0.0;
  int iterations = 0;        // number of half-averaging updates applied
  double marginal_error = 0.0;  // max_i |row_sum_i(pi) - 1/n| at the returned potential

  double plan_entry(int i, int j) const;
};

// Raised when the fixed-point iteration fails to reach tol within max_iter
// updates; carries the last measured marginal error so callers can report
// how far the run got.
class SinkhornError : public std::runtime_error {
 public:
  SinkhornError(const std::string& msg, double marginal_error, int iterations)
      : std::runtime_error(msg),
        marginal_error(marginal_error),
        iterations(iterations) {}
  double marginal_error;
  int iterations;
};

// Log-domain symmetric Sinkhorn. Iterates the softmin map
//   (Tf)_i = -eps * log( (1/n) sum_j exp((f_j - c_ij)/eps) )
// with the damped update f <- (f + Tf)/2 until the plan's row sums match
// 1/n to within tol in the max norm. All sums use max-subtracted
// log-sum-exp, so any epsilon > 0 is safe. Throws SinkhornError when
// max_iter updates are not enough.
SinkhornSolution solve_symmetric(const ParticleCloud& cloud, double epsilon,
                                 double tol = 1e-9, int max_iter = 10000);

// Barycentric projection b(x_i) = sum_j pi_ij x_j / sum_j pi_ij, with the
// actual row sums (not the nominal 1/n) as normalizer, so b is a proper
// conditional mean even at loose convergence.
ParticleCloud barycentric_projection(const SinkhornSolution& solution);

// Row i of the plan, all n entries (entries far off the diagonal underflow
// to 0 at small epsilon; that is the true magnitude, not an error).
std::vector<double> plan_row(const SinkhornSolution& solution, int i);

// CSV layout: header "index,potential", one row per point.
void write_potentials_csv(const SinkhornSolution& solution, std::ostream& out);

}  // namespace sbflow
