#include "sbflow/quadrature.hpp"

#include <cmath>
#include <stdexcept>

namespace sbflow {

namespace {

double simpson(double fa, double fm, double fb, double h) {
  return h / 6.0 * (fa + 4.0 * fm + fb);
}

double adapt(const std::function<double(double)>& f, double a, double b,
             double fa, double fm, double fb, double whole, double tol,
             int depth) {
  if (depth > 60) {
    throw std::runtime_error(
        "integrate_adaptive_simpson: recursion depth exceeded "
        "(integrand too rough for requested tolerance)");
  }
  double m = 0.5 * (a + b);
  double lm = 0.5 * (a + m);
  double rm = 0.5 * (m + b);
  double flm = f(lm);
  double frm = f(rm);
  double left = simpson(fa, flm, fm, m - a);
  double right = simpson(fm, frm, fb, b - m);
  double s2 = left + right;
  if (std::abs(s2 - whole) <= 15.0 * tol) {
    return s2 + (s2 - whole) / 15.0;
  }
  return adapt(f, a, m, fa, flm, fm, left, 0.5 * tol, depth + 1) +
         adapt(f, m, b, fm, frm, fb, right, 0.5 * tol, depth + 1);
}

}  // namespace

double integrate_adaptive_simpson(const std::function<double(double)>& f,
                                  double a, double b, double abs_tol) {
  if (!(abs_tol > 0.0)) {
    throw std::invalid_argument("integrate_adaptive_simpson: abs_tol must be > 0");
  }
  if (a == b) return 0.0;
  double fa = f(a);
  double fb = f(b);
  double fm = f(0.5 * (a + b));
  double whole = simpson(fa, fm, fb, b - a);
  return adapt(f, a, b, fa, fm, fb, whole, abs_tol, 0);
}

}  // namespace sbflow
