#include <doctest.h>

#include <cmath>
#include <sstream>
#include <stdexcept>
#include <vector>

#include <json.hpp>

#include "sbflow/cloud.hpp"
#include "sbflow/gaussian.hpp"
#include "sbflow/metrics.hpp"
#include "sbflow/scheme.hpp"

using namespace sbflow;

namespace {

ParticleCloud cloud1d(std::vector<double> xs) {
  ParticleCloud c;
  c.dim = 1;
  c.points = std::move(xs);
  return c;
}

MixtureSpec std_normal() { return MixtureSpec{{{1.0, {0.0}, 1.0}}}; }

}  // namespace

TEST_SUITE("metrics") {

TEST_CASE("w2 between equal-size samples is the sorted rms") {
  CHECK(w2_empirical_1d(cloud1d({0.0, 2.0}), cloud1d({1.0, 3.0})) == 1.0);
  CHECK(w2_empirical_1d(cloud1d({2.0, 0.0}), cloud1d({3.0, 1.0})) == 1.0);  // order free
  CHECK(w2_empirical_1d(cloud1d({-1.0, 1.0}), cloud1d({-1.0, 1.0})) == 0.0);
  // Mean shift by c moves W2 by exactly |c|.
  CHECK(w2_empirical_1d(cloud1d({0.0, 1.0, 2.0}), cloud1d({0.5, 1.5, 2.5})) ==
        doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("w2 between unequal sizes matches the quantile-grid value") {
  // m = 3 grid: u = 1/6, 1/2, 5/6; the two-point sample reads 0, 1, 1 and
  // the three-point one 0, 0.5, 1, so W2 = sqrt(1/12).
  double got = w2_empirical_1d(cloud1d({0.0, 1.0}), cloud1d({0.0, 0.5, 1.0}));
  CHECK(got == doctest::Approx(0.28867513459481287).epsilon(1e-15));
  // Symmetric in its arguments.
  double flipped = w2_empirical_1d(cloud1d({0.0, 0.5, 1.0}), cloud1d({0.0, 1.0}));
  CHECK(flipped == got);
}

TEST_CASE("w2 rejects non-1d and empty input") {
  ParticleCloud flat;
  flat.dim = 2;
  flat.points = {0.0, 0.0, 1.0, 1.0};
  CHECK_THROWS_AS(w2_empirical_1d(flat, flat), std::invalid_argument);
  ParticleCloud empty;
  CHECK_THROWS_AS(w2_empirical_1d(empty, empty), std::invalid_argument);
}

TEST_CASE("noise floor is deterministic and shrinks with n") {
  double f1 = noise_floor(std_normal(), 1.0, 500, 6, 99);
  double f2 = noise_floor(std_normal(), 1.0, 500, 6, 99);
  CHECK(f1 == f2);
  CHECK(f1 > 0.0);
  double big = noise_floor(std_normal(), 1.0, 4000, 6, 99);
  CHECK(big < f1);
  CHECK_THROWS_AS(noise_floor(std_normal(), 1.0, 500, 1, 99), std::invalid_argument);
}

TEST_CASE("gaussian trajectory report against the exact flow") {
  SchemeConfig config;
  config.epsilon = 0.1;
  config.horizon = 1.0;
  config.functional = Functional{FunctionalKind::Entropy, 0.0};
  GaussianState start = GaussianState::centered(1.0);
  FlowTrajectory<GaussianState> traj = run_scheme_gaussian(config, start);

  std::vector<double> times{0.0, 0.5, 1.0};
  ErrorReport report =
      compare_trajectories(traj, config.functional, start, times);
  CHECK(report.times == times);
  CHECK(report.errors.size() == 3);
  CHECK(report.noise_floors.empty());
  CHECK(report.seeds_used.empty());
  CHECK(report.errors[0] == 0.0);  // same start
  double sup = std::max({report.errors[0], report.errors[1], report.errors[2]});
  CHECK(report.sup_error == sup);
  // The scheme variance superconverges; errors stay tiny but positive.
  CHECK(report.errors[2] > 0.0);
  CHECK(report.errors[2] < 1e-3);
}

TEST_CASE("particle trajectory report records floors and seeds") {
  SchemeConfig config;
  config.epsilon = 0.25;
  config.horizon = 0.5;
  config.functional = Functional{FunctionalKind::Entropy, 0.0};
  ParticleCloud start = sample_mixture(std_normal(), 400, 7);
  FlowTrajectory<ParticleCloud> traj = run_scheme_particles(config, start);

  std::vector<double> times{0.25, 0.5};
  ErrorReport a = compare_trajectories(traj, std_normal(), config.functional,
                                       times, 4, 1234);
  ErrorReport b = compare_trajectories(traj, std_normal(), config.functional,
                                       times, 4, 1234);
  CHECK(a.errors == b.errors);  // reference draws are seed stable
  CHECK(a.noise_floors == b.noise_floors);
  CHECK(a.noise_floors.size() == 2);
  CHECK(a.seeds_used.size() == 4);  // one reference + one floor stream per time
  CHECK(a.noise_floors[0] > 0.0);
  CHECK(a.sup_error >= a.errors[0]);
  // A 400-point scheme at eps=0.25 stays within a few floors of the truth.
  for (std::size_t i = 0; i < times.size(); ++i)
    CHECK(a.errors[i] < 6.0 * a.noise_floors[i]);
}

TEST_CASE("error report csv and json agree with the struct") {
  ErrorReport report;
  report.times = {0.5, 1.0};
  report.errors = {0.125, 0.25};
  report.noise_floors = {0.1, 0.2};
  report.sup_error = 0.25;
  report.seeds_used = {11, 12};

  std::stringstream buf;
  write_error_report_csv(report, buf);
  std::string line;
  std::getline(buf, line);
  CHECK(line == "time,w2,noise_floor");
  int rows = 0;
  while (std::getline(buf, line))
    if (!line.empty()) ++rows;
  CHECK(rows == 2);

  nlohmann::json parsed = nlohmann::json::parse(error_report_json(report));
  CHECK(parsed["times"].size() == 2);
  CHECK(parsed["w2"][1].get<double>() == 0.25);
  CHECK(parsed["noise_floor"][0].get<double>() == 0.1);
  CHECK(parsed["sup_error"].get<double>() == 0.25);
  CHECK(parsed["seeds_used"][0].get<std::uint64_t>() == 11);
}

TEST_CASE("reverse particle comparison reads the law backwards") {
  // Start from the heat-1.0 law and flow back half way: at t the reference
  // is the mixture heated by horizon - t.
  MixtureSpec base = std_normal();
  SchemeConfig config;
  config.epsilon = 0.25;
  config.horizon = 0.5;
  config.functional = Functional{FunctionalKind::ReverseEntropy, 0.5};
  ParticleCloud start = sample_exact_heat(base, 0.5, 400, 8);
  FlowTrajectory<ParticleCloud> traj = run_scheme_particles(config, start);
  std::vector<double> times{0.25, 0.5};
  ErrorReport report =
      compare_trajectories(traj, base, config.functional, times, 4, 4321);
  CHECK(report.errors.size() == 2);
  for (std::size_t i = 0; i < times.size(); ++i)
    CHECK(report.errors[i] < 6.0 * report.noise_floors[i]);
}

}  // TEST_SUITE("metrics")
