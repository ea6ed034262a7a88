#include "sbflow/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>

#include <json.hpp>

#include "sbflow/rng.hpp"

namespace sbflow {

namespace {

std::vector<double> sorted_points_1d(const ParticleCloud& c, const char* where) {
  if (c.dim != 1) {
    throw std::invalid_argument(std::string(where) + ": cloud must be 1-d");
  }
  if (c.size() == 0) {
    throw std::invalid_argument(std::string(where) + ": empty cloud");
  }
  std::vector<double> x = c.points;
  std::sort(x.begin(), x.end());
  return x;
}

double quantile_of_sorted(const std::vector<double>& x, double u) {
  auto n = static_cast<std::ptrdiff_t>(x.size());
  auto k = static_cast<std::ptrdiff_t>(std::floor(u * static_cast<double>(n)));
  if (k < 0) k = 0;
  if (k >= n) k = n - 1;
  return x[static_cast<std::size_t>(k)];
}

}  // namespace

double w2_empirical_1d(const ParticleCloud& a, const ParticleCloud& b) {
  std::vector<double> xa = sorted_points_1d(a, "w2_empirical_1d");
  std::vector<double> xb = sorted_points_1d(b, "w2_empirical_1d");
  double acc = 0.0;
  if (xa.size() == xb.size()) {
    for (std::size_t i = 0; i < xa.size(); ++i) {
      double z = xa[i] - xb[i];
      acc += z * z;
    }
    return std::sqrt(acc / static_cast<double>(xa.size()));
  }
  // Unequal sizes: match the two empirical quantile functions on the finer
  // uniform grid; with equal sizes this degenerates to the pairing above.
  std::size_t m = std::max(xa.size(), xb.size());
  for (std::size_t k = 0; k < m; ++k) {
    double u = (static_cast<double>(k) + 0.5) / static_cast<double>(m);
    double z = quantile_of_sorted(xa, u) - quantile_of_sorted(xb, u);
    acc += z * z;
  }
  return std::sqrt(acc / static_cast<double>(m));
}

double noise_floor(const MixtureSpec& spec, double t, int n, int trials,
                   std::uint64_t seed) {
  if (trials < 2) {
    throw std::invalid_argument("noise_floor: trials must be >= 2");
  }
  double acc = 0.0;
  for (int k = 0; k < trials; ++k) {
    ParticleCloud a = sample_exact_heat(spec, t, n, derive_seed(seed, 2 * k));
    ParticleCloud b = sample_exact_heat(spec, t, n, derive_seed(seed, 2 * k + 1));
    acc += w2_empirical_1d(a, b);
  }
  return acc / trials;
}

ErrorReport compare_trajectories(const FlowTrajectory<GaussianState>& trajectory,
                                 const Functional& functional,
                                 const GaussianState& initial,
                                 const std::vector<double>& times) {
  if (times.empty()) {
    throw std::invalid_argument("compare_trajectories: no times given");
  }
  ErrorReport report;
  report.times = times;
  report.errors.reserve(times.size());
  for (double t : times) {
    GaussianState exact = exact_flow(functional, initial, t);
    double err = w2_isotropic(trajectory.eval_at(t), exact);
    report.errors.push_back(err);
    report.sup_error = std::max(report.sup_error, err);
  }
  return report;
}

ErrorReport compare_trajectories(const FlowTrajectory<ParticleCloud>& trajectory,
                                 const MixtureSpec& spec, const Functional& functional,
                                 const std::vector<double>& times, int floor_trials,
                                 std::uint64_t seed) {
  if (times.empty()) {
    throw std::invalid_argument("compare_trajectories: no times given");
  }
  functional.validate();
  const bool reverse = functional.kind == FunctionalKind::ReverseEntropy;
  if (!reverse && functional.kind != FunctionalKind::Entropy) {
    throw std::invalid_argument(
        "compare_trajectories: exact particle references exist for the heat "
        "functionals only (entropy / reverse-entropy)");
  }
  ErrorReport report;
  report.times = times;
  for (std::size_t i = 0; i < times.size(); ++i) {
    double t = times[i];
    double law_time = reverse ? functional.horizon - t : t;
    const ParticleCloud& state = trajectory.eval_at(t);
    std::uint64_t ref_seed = derive_seed(seed, 2 * i);
    std::uint64_t floor_seed = derive_seed(seed, 2 * i + 1);
    ParticleCloud ref = sample_exact_heat(spec, law_time, state.size(), ref_seed);
    double err = w2_empirical_1d(state, ref);
    report.errors.push_back(err);
    report.noise_floors.push_back(
        noise_floor(spec, law_time, state.size(), floor_trials, floor_seed));
    report.seeds_used.push_back(ref_seed);
    report.seeds_used.push_back(floor_seed);
    report.sup_error = std::max(report.sup_error, err);
  }
  return report;
}

void write_error_report_csv(const ErrorReport& report, std::ostream& out) {
  std::string s = "time,w2,noise_floor\n";
  char buf[96];
  for (std::size_t i = 0; i < report.times.size(); ++i) {
    double floor_i = i < report.noise_floors.size() ? report.noise_floors[i] : 0.0;
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", report.times[i],
                  report.errors[i], floor_i);
    s += buf;
  }
  out << s;
}

std::string error_report_json(const ErrorReport& report) {
  nlohmann::json j;
  j["times"] = report.times;
  j["w2"] = report.errors;
  j["noise_floor"] = report.noise_floors;
  j["sup_error"] = report.sup_error;
  j["seeds_used"] = report.seeds_used;
  return j.dump(2) + "\n";
}

}  // namespace sbflow
