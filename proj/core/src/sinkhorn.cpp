#include "sbflow/sinkhorn.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>
#include <ostream>
#include <string>

namespace sbflow {

namespace {

constexpr int kWindowedMinN = 64;  // below this the dense path is just as fast

// Tail cutoff for the 1-d window, in log units relative to the row maximum.
// Every excluded term satisfies (f_j - c_ij)/eps < rowmax - kLogCut (proof:
// c_ij/eps > (max_f - f_i)/eps + kLogCut implies a_j < (f_i/eps) - kLogCut
// <= rowmax - kLogCut), so the excluded mass is below n * e^{-50} ~ 4e-18
// of the kept sum: smaller than one ulp of the result for every n used here.
constexpr double kLogCut = 50.0;

double sqdist(const double* a, const double* b, int dim) {
  double s = 0.0;
  for (int k = 0; k < dim; ++k) {
    double z = a[k] - b[k];
    s += z * z;
  }
  return s;
}

void require_finite_cloud(const ParticleCloud& cloud, const char* where) {
  if (cloud.dim <= 0 || cloud.points.empty() ||
      cloud.points.size() % static_cast<std::size_t>(cloud.dim) != 0) {
    throw std::invalid_argument(std::string(where) + ": malformed cloud");
  }
  for (double v : cloud.points) {
    if (!std::isfinite(v)) {
      throw std::invalid_argument(std::string(where) + ": non-finite coordinate");
    }
  }
}

// Scratch shared by the solver passes. For the windowed 1-d path, all work
// happens on points sorted ascending; `order[s]` is the original index of
// sorted slot s.
struct SolverGrid {
  bool windowed = false;
  int n = 0;
  int dim = 1;
  std::vector<int> order;
  std::vector<double> x;  // sorted coordinates when windowed
  const ParticleCloud* cloud = nullptr;

  static SolverGrid build(const ParticleCloud& cloud) {
    SolverGrid g;
    g.cloud = &cloud;
    g.n = cloud.size();
    g.dim = cloud.dim;
    g.windowed = (cloud.dim == 1 && g.n >= kWindowedMinN);
    if (g.windowed) {
      g.order.resize(g.n);
      std::iota(g.order.begin(), g.order.end(), 0);
      std::sort(g.order.begin(), g.order.end(), [&](int a, int b) {
        return cloud.points[a] < cloud.points[b];
      });
      g.x.resize(g.n);
      for (int s = 0; s < g.n; ++s) g.x[s] = cloud.points[g.order[s]];
    }
    return g;
  }

  // Contiguous sorted range within distance r of x[i].
  std::pair<int, int> window(int i, double r) const {
    auto lo = std::lower_bound(x.begin(), x.end(), x[i] - r);
    auto hi = std::upper_bound(x.begin(), x.end(), x[i] + r);
    return {static_cast<int>(lo - x.begin()), static_cast<int>(hi - x.begin())};
  }
};

// One softmin pass: T_i = -eps * log((1/n) sum_j exp((f_j - c_ij)/eps)),
// max-subtracted. f and T are in grid order (sorted order when windowed).
void softmin_pass(const SolverGrid& g, double eps, const std::vector<double>& f,
                  std::vector<double>& T) {
  const int n = g.n;
  const double inv_eps = 1.0 / eps;
  const double log_n = std::log(static_cast<double>(n));
  if (g.windowed) {
    const double f_max = *std::max_element(f.begin(), f.end());
    for (int i = 0; i < n; ++i) {
      double r = std::sqrt(2.0 * (f_max - f[i]) + 2.0 * kLogCut * eps);
      auto [lo, hi] = g.window(i, r);
      double m = -std::numeric_limits<double>::infinity();
      for (int j = lo; j < hi; ++j) {
        double dx = g.x[i] - g.x[j];
        double a = (f[j] - 0.5 * dx * dx) * inv_eps;
        if (a > m) m = a;
      }
      double s = 0.0;
      for (int j = lo; j < hi; ++j) {
        double dx = g.x[i] - g.x[j];
        s += std::exp((f[j] - 0.5 * dx * dx) * inv_eps - m);
      }
      T[i] = -eps * (m + std::log(s) - log_n);
    }
    return;
  }
  const ParticleCloud& cloud = *g.cloud;
  const int dim = g.dim;
  for (int i = 0; i < n; ++i) {
    const double* xi = cloud.points.data() + static_cast<std::size_t>(i) * dim;
    double m = -std::numeric_limits<double>::infinity();
    for (int j = 0; j < n; ++j) {
      const double* xj = cloud.points.data() + static_cast<std::size_t>(j) * dim;
      double a = (f[j] - 0.5 * sqdist(xi, xj, dim)) * inv_eps;
      if (a > m) m = a;
    }
    double s = 0.0;
    for (int j = 0; j < n; ++j) {
      const double* xj = cloud.points.data() + static_cast<std::size_t>(j) * dim;
      s += std::exp((f[j] - 0.5 * sqdist(xi, xj, dim)) * inv_eps - m);
    }
    T[i] = -eps * (m + std::log(s) - log_n);
  }
}

// max_i |row_sum_i - 1/n| given f and T = softmin(f): the row sum equals
// (1/n) exp((f_i - T_i)/eps).
double marginal_error_of(const std::vector<double>& f, const std::vector<double>& T,
                         double eps, int n) {
  double worst = 0.0;
  for (int i = 0; i < n; ++i) {
    double dev = std::abs(std::expm1((f[i] - T[i]) / eps));
    if (dev > worst) worst = dev;
  }
  return worst / static_cast<double>(n);
}

}  // namespace

double SinkhornSolution::plan_entry(int i, int j) const {
  const int n = cloud.size();
  if (i < 0 || i >= n || j < 0 || j >= n) {
    throw std::out_of_range("plan_entry: index out of range");
  }
  const int dim = cloud.dim;
  double c = 0.5 * sqdist(cloud.points.data() + static_cast<std::size_t>(i) * dim,
                          cloud.points.data() + static_cast<std::size_t>(j) * dim,
                          dim);
  double nn = static_cast<double>(n) * static_cast<double>(n);
  return std::exp((potential[i] + potential[j] - c) / epsilon) / nn;
}

SinkhornSolution solve_symmetric(const ParticleCloud& cloud, double epsilon,
                                 double tol, int max_iter) {
  require_finite_cloud(cloud, "solve_symmetric");
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) {
    throw std::invalid_argument("solve_symmetric: epsilon must be finite and > 0");
  }
  if (!(tol > 0.0)) {
    throw std::invalid_argument("solve_symmetric: tol must be > 0");
  }
  if (max_iter < 1) {
    throw std::invalid_argument("solve_symmetric: max_iter must be >= 1");
  }

  const SolverGrid grid = SolverGrid::build(cloud);
  const int n = grid.n;
  std::vector<double> f(n, 0.0);
  std::vector<double> T(n, 0.0);

  softmin_pass(grid, epsilon, f, T);
  double err = marginal_error_of(f, T, epsilon, n);
  int updates = 0;
  while (err > tol) {
    if (updates >= max_iter) {
      throw SinkhornError(
          "solve_symmetric: no convergence after " + std::to_string(max_iter) +
              " updates (marginal error " + std::to_string(err) + ", tol " +
              std::to_string(tol) + ")",
          err, updates);
    }
    for (int i = 0; i < n; ++i) f[i] = 0.5 * (f[i] + T[i]);
    ++updates;
    softmin_pass(grid, epsilon, f, T);
    err = marginal_error_of(f, T, epsilon, n);
  }

  SinkhornSolution sol;
  sol.cloud = cloud;
  sol.epsilon = epsilon;
  sol.iterations = updates;
  sol.marginal_error = err;
  sol.potential.resize(n);
  if (grid.windowed) {
    for (int s = 0; s < n; ++s) sol.potential[grid.order[s]] = f[s];
  } else {
    sol.potential = std::move(f);
  }
  return sol;
}

ParticleCloud barycentric_projection(const SinkhornSolution& solution) {
  const ParticleCloud& cloud = solution.cloud;
  require_finite_cloud(cloud, "barycentric_projection");
  const int n = cloud.size();
  const int dim = cloud.dim;
  const double eps = solution.epsilon;
  if (solution.potential.size() != static_cast<std::size_t>(n)) {
    throw std::invalid_argument("barycentric_projection: potential/cloud size mismatch");
  }
  const double inv_eps = 1.0 / eps;

  ParticleCloud out;
  out.dim = dim;
  out.points.resize(cloud.points.size());

  const SolverGrid grid = SolverGrid::build(cloud);
  if (grid.windowed) {
    std::vector<double> f(n);
    for (int s = 0; s < n; ++s) f[s] = solution.potential[grid.order[s]];
    const double f_max = *std::max_element(f.begin(), f.end());
    for (int i = 0; i < n; ++i) {
      double r = std::sqrt(2.0 * (f_max - f[i]) + 2.0 * kLogCut * eps);
      auto [lo, hi] = grid.window(i, r);
      double m = -std::numeric_limits<double>::infinity();
      for (int j = lo; j < hi; ++j) {
        double dx = grid.x[i] - grid.x[j];
        double a = (f[j] - 0.5 * dx * dx) * inv_eps;
        if (a > m) m = a;
      }
      double s0 = 0.0, s1 = 0.0;
      for (int j = lo; j < hi; ++j) {
        double dx = grid.x[i] - grid.x[j];
        double w = std::exp((f[j] - 0.5 * dx * dx) * inv_eps - m);
        s0 += w;
        s1 += w * grid.x[j];
      }
      out.points[grid.order[i]] = s1 / s0;
    }
    return out;
  }

  std::vector<double> acc(dim);
  for (int i = 0; i < n; ++i) {
    const double* xi = cloud.points.data() + static_cast<std::size_t>(i) * dim;
    double m = -std::numeric_limits<double>::infinity();
    for (int j = 0; j < n; ++j) {
      const double* xj = cloud.points.data() + static_cast<std::size_t>(j) * dim;
      double a = (solution.potential[j] - 0.5 * sqdist(xi, xj, dim)) * inv_eps;
      if (a > m) m = a;
    }
    double s0 = 0.0;
    std::fill(acc.begin(), acc.end(), 0.0);
    for (int j = 0; j < n; ++j) {
      const double* xj = cloud.points.data() + static_cast<std::size_t>(j) * dim;
      double w =
          std::exp((solution.potential[j] - 0.5 * sqdist(xi, xj, dim)) * inv_eps - m);
      s0 += w;
      for (int k = 0; k < dim; ++k) acc[k] += w * xj[k];
    }
    for (int k = 0; k < dim; ++k) {
      out.points[static_cast<std::size_t>(i) * dim + k] = acc[k] / s0;
    }
  }
  return out;
}

std::vector<double> plan_row(const SinkhornSolution& solution, int i) {
  const int n = solution.cloud.size();
  if (i < 0 || i >= n) {
    throw std::out_of_range("plan_row: index out of range");
  }
  std::vector<double> row(n);
  for (int j = 0; j < n; ++j) row[j] = solution.plan_entry(i, j);
  return row;
}

void write_potentials_csv(const SinkhornSolution& solution, std::ostream& out) {
  std::string s = "index,potential\n";
  char buf[48];
  for (std::size_t i = 0; i < solution.potential.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%zu,%.17g\n", i, solution.potential[i]);
    s += buf;
  }
  out << s;
}

}  // namespace sbflow
