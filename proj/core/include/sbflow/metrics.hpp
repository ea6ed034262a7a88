#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "sbflow/cloud.hpp"
#include "sbflow/gaussian.hpp"
#include "sbflow/scheme.hpp"

namespace sbflow {

// Trajectory-vs-reference error table. noise_floors and seeds_used stay
// empty for closed-form references (there is no sampling noise to floor).
struct ErrorReport {
  std::vector<double> times;
  std::vector<double> errors;
  std::vector<double> noise_floors;
  double sup_error = 0.0;
  std::vector<std::uint64_t> seeds_used;
};

// 2-Wasserstein distance between 1-d empirical measures by quantile
// matching: equal sizes pair sorted samples directly; unequal sizes
// evaluate both empirical quantile functions on the uniform grid
// u_k = (k - 1/2)/m, m = max(n_a, n_b). Rejects dim != 1.
double w2_empirical_1d(const ParticleCloud& a, const ParticleCloud& b);

// Average W2 between two fresh n-point samples of the same law (the mixture
// evolved to time t), over `trials` independent pairs: the resolution limit
// below which empirical W2 comparisons are noise. trials >= 2. Deterministic
// in (seed, trials); pair k uses child seeds (2k, 2k+1) of `seed`.
double noise_floor(const MixtureSpec& spec, double t, int n, int trials,
                   std::uint64_t seed);

// Closed-form trajectory against the exact flow from `initial`.
ErrorReport compare_trajectories(const FlowTrajectory<GaussianState>& trajectory,
                                 const Functional& functional,
                                 const GaussianState& initial,
                                 const std::vector<double>& times);

// Particle trajectory against fresh exact-flow samples of the mixture's
// heat evolution (forward: law at t is spec heated by t; reverse: spec is
// the law at the horizon's end, so the law at t is spec heated by
// horizon - t). Each requested time consumes two child seed streams: one
// for the reference sample, one for its noise floor (floor_trials pairs).
ErrorReport compare_trajectories(const FlowTrajectory<ParticleCloud>& trajectory,
                                 const MixtureSpec& spec, const Functional& functional,
                                 const std::vector<double>& times, int floor_trials,
                                 std::uint64_t seed);

// CSV layout: header "time,w2,noise_floor", one row per time (noise_floor 0
// when floors were not computed).
void write_error_report_csv(const ErrorReport& report, std::ostream& out);

// The same table as a JSON object (arrays per column plus sup_error and
// seeds_used), serialized deterministically.
std::string error_report_json(const ErrorReport& report);

}  // namespace sbflow
