#pragma once

#include <functional>

namespace sbflow {

// Adaptive Simpson integration of f over [a, b] to absolute tolerance
// abs_tol, using the standard S(a,b) vs S(a,m)+S(m,b) Richardson estimate
// (|S2 - S1| <= 15 * tol split criterion, with the S2 + (S2 - S1)/15
// correction on accept). Recursion depth is capped; hitting the cap throws.
double integrate_adaptive_simpson(const std::function<double(double)>& f,
                                  double a, double b, double abs_tol);

}  // namespace sbflow
