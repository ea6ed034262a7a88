#include <doctest.h>

#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include "sbflow/cloud.hpp"
#include "sbflow/gaussian.hpp"
#include "sbflow/langevin.hpp"
#include "sbflow/scheme.hpp"

using namespace sbflow;

namespace {

Functional make(FunctionalKind kind, double horizon = 0.0) {
  return Functional{kind, horizon};
}

GaussianState centered(double var) { return GaussianState::centered(var); }

}  // namespace

TEST_SUITE("scheme") {

TEST_CASE("step counts and config validation") {
  SchemeConfig c;
  c.epsilon = 0.1;
  c.horizon = 1.0;
  CHECK(c.n_steps() == 10);
  c.epsilon = 0.3;
  CHECK(c.n_steps() == 3);
  c.epsilon = 0.05;
  c.horizon = 2.0;
  CHECK(c.n_steps() == 40);
  CHECK_NOTHROW(c.validate());

  SchemeConfig bad;
  bad.epsilon = 0.1;
  bad.horizon = 0.05;  // shorter than one step
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad.horizon = 1.0;
  bad.epsilon = -0.1;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);

  SchemeConfig rev;
  rev.epsilon = 0.1;
  rev.horizon = 1.0;
  rev.functional = make(FunctionalKind::ReverseEntropy, 2.0);  // mismatch
  CHECK_THROWS_AS(rev.validate(), std::invalid_argument);
  rev.functional.horizon = 1.0;
  CHECK_NOTHROW(rev.validate());
}

TEST_CASE("bridge step frozen values") {
  GaussianState heat = sb_step_gaussian(centered(1.0), 0.1, make(FunctionalKind::Entropy));
  CHECK(heat.var == doctest::Approx(1.099878199127339).epsilon(1e-13));

  GaussianState rev =
      sb_step_gaussian(centered(1.0), 0.1, make(FunctionalKind::ReverseEntropy, 1.0));
  CHECK(rev.var == doctest::Approx(0.9048750780274959).epsilon(1e-13));

  // KL from var = 1/2: the surrogate variance is s = v/(1-v) = 1, so the
  // step factor matches the heat one.
  GaussianState kl =
      sb_step_gaussian(centered(0.5), 0.1, make(FunctionalKind::KLtoStandardNormal));
  CHECK(kl.var == doctest::Approx(0.5499390995636695).epsilon(1e-13));

  // var = 1 is the KL fixed point, exactly.
  GaussianState fix =
      sb_step_gaussian(centered(1.0), 0.1, make(FunctionalKind::KLtoStandardNormal));
  CHECK(fix.var == 1.0);

  // KL from var > 1 contracts with the conjugate branch.
  GaussianState above =
      sb_step_gaussian(centered(2.0), 0.1, make(FunctionalKind::KLtoStandardNormal));
  double s = 2.0 / (2.0 - 1.0);
  CHECK(above.var == doctest::Approx(c_eps(s, 0.1) * c_eps(s, 0.1) * 2.0).epsilon(1e-13));
}

TEST_CASE("reverse guards trip exactly where the step loses validity") {
  // ReverseEntropy needs eps < 4 var.
  CHECK_THROWS_AS(
      sb_step_gaussian(centered(0.02), 0.1, make(FunctionalKind::ReverseEntropy, 1.0)),
      std::runtime_error);
  CHECK_NOTHROW(
      sb_step_gaussian(centered(0.03), 0.1, make(FunctionalKind::ReverseEntropy, 1.0)));

  // ReverseKL needs eps < 4 s with s the surrogate variance.
  GaussianState near_one = centered(0.98);  // s = 49, plenty of room
  CHECK_NOTHROW(
      sb_step_gaussian(near_one, 0.1, make(FunctionalKind::ReverseKL, 1.0)));
  GaussianState low = centered(0.02);  // s ~ 0.0204, 4s ~ 0.082 < 0.1
  CHECK_THROWS_AS(sb_step_gaussian(low, 0.1, make(FunctionalKind::ReverseKL, 1.0)),
                  std::runtime_error);
}

TEST_CASE("KL variants require centered states") {
  GaussianState off;
  off.mean = {0.5};
  off.var = 0.8;
  off.dim = 1;
  CHECK_THROWS_AS(
      sb_step_gaussian(off, 0.1, make(FunctionalKind::KLtoStandardNormal)),
      std::invalid_argument);
  CHECK_THROWS_AS(sb_step_gaussian(off, 0.1, make(FunctionalKind::ReverseKL, 1.0)),
                  std::invalid_argument);
  // Heat steps carry the mean along untouched.
  GaussianState moved = sb_step_gaussian(off, 0.1, make(FunctionalKind::Entropy));
  CHECK(moved.mean[0] == 0.5);
}

TEST_CASE("euler step values and overshoot") {
  GaussianState heat =
      euler_step_gaussian(centered(1.0), 0.1, make(FunctionalKind::Entropy));
  CHECK(heat.var == doctest::Approx(1.1025).epsilon(1e-15));

  GaussianState kl = euler_step_gaussian(centered(0.5), 0.1,
                                         make(FunctionalKind::KLtoStandardNormal));
  CHECK(kl.var == doctest::Approx(0.5 * std::pow(1.0 + 0.1 * 0.5 / 1.0, 2)).epsilon(1e-14));

  CHECK_THROWS_WITH_AS(
      euler_step_gaussian(centered(0.04), 0.1, make(FunctionalKind::ReverseEntropy, 1.0)),
      doctest::Contains("overshoot"), std::runtime_error);
}

TEST_CASE("gaussian run matches manual step composition") {
  SchemeConfig config;
  config.epsilon = 0.1;
  config.horizon = 1.0;
  config.functional = make(FunctionalKind::Entropy);
  FlowTrajectory<GaussianState> traj = run_scheme_gaussian(config, centered(1.0));
  CHECK(traj.states.size() == 11);
  CHECK(traj.times.size() == 11);
  for (int k = 0; k <= 10; ++k)
    CHECK(traj.times[k] == doctest::Approx(0.1 * k).epsilon(1e-12));

  GaussianState manual = centered(1.0);
  for (int k = 0; k < 10; ++k)
    manual = sb_step_gaussian(manual, 0.1, config.functional);
  CHECK(traj.states.back().var == doctest::Approx(manual.var).epsilon(1e-14));

  // Left-closed lookup: t = 0.25 reads the k = 2 state.
  CHECK(traj.eval_at(0.25).var == traj.states[2].var);
  CHECK(traj.eval_at(0.0).var == 1.0);
  CHECK(traj.eval_at(1.0).var == traj.states[10].var);
  CHECK_THROWS_AS(traj.eval_at(-0.01), std::invalid_argument);
  CHECK_THROWS_AS(traj.eval_at(1.01), std::invalid_argument);
}

TEST_CASE("designed reverse-heat failure reports the offending step") {
  // From var 1.0 at eps = 0.1 the reverse-heat recursion stays valid for
  // 12 steps (var 0.0054564...) and violates eps < 4 var on the 13th.
  SchemeConfig ok;
  ok.epsilon = 0.1;
  ok.horizon = 1.2;
  ok.functional = make(FunctionalKind::ReverseEntropy, 1.2);
  FlowTrajectory<GaussianState> traj = run_scheme_gaussian(ok, centered(1.0));
  CHECK(traj.states.back().var == doctest::Approx(0.005456409995682169).epsilon(1e-12));

  SchemeConfig doomed;
  doomed.epsilon = 0.1;
  doomed.horizon = 1.4;
  doomed.functional = make(FunctionalKind::ReverseEntropy, 1.4);
  try {
    run_scheme_gaussian(doomed, centered(1.0));
    FAIL("expected the step-13 guard to throw");
  } catch (const std::runtime_error& e) {
    CHECK(std::string(e.what()).find("step 13") != std::string::npos);
  }
}

TEST_CASE("scheme grid variance error shrinks superlinearly") {
  // Sup over the scheme's own grid of |var_scheme - var_exact|, horizon 1.
  auto sup_err = [](FunctionalKind kind, double v0, double eps) {
    Functional fn = make(kind);
    SchemeConfig config;
    config.epsilon = eps;
    config.horizon = 1.0;
    config.functional = fn;
    FlowTrajectory<GaussianState> traj = run_scheme_gaussian(config, centered(v0));
    double sup = 0.0;
    GaussianState start = centered(v0);
    for (std::size_t k = 0; k < traj.times.size(); ++k) {
      double exact = exact_flow(fn, start, traj.times[k]).var;
      sup = std::max(sup, std::abs(traj.states[k].var - exact));
    }
    return sup;
  };

  // Heat flow: the O(eps^2) superconvergence band, frozen from the closed
  // recursions.
  double h1 = sup_err(FunctionalKind::Entropy, 1.0, 0.1);
  double h2 = sup_err(FunctionalKind::Entropy, 1.0, 0.05);
  double h3 = sup_err(FunctionalKind::Entropy, 1.0, 0.025);
  CHECK(h1 == doctest::Approx(6.605362789e-4).epsilon(1e-6));
  CHECK(h2 == doctest::Approx(1.606717807e-4).epsilon(1e-6));
  CHECK(h3 == doctest::Approx(3.961362350e-5).epsilon(1e-6));
  CHECK(h2 / h1 == doctest::Approx(0.243244).epsilon(1e-4));
  CHECK(h3 / h2 == doctest::Approx(0.246550).epsilon(1e-4));

  // KL flow: first-order band.
  double k1 = sup_err(FunctionalKind::KLtoStandardNormal, 0.5, 0.1);
  double k2 = sup_err(FunctionalKind::KLtoStandardNormal, 0.5, 0.05);
  double k3 = sup_err(FunctionalKind::KLtoStandardNormal, 0.5, 0.025);
  CHECK(k1 == doctest::Approx(9.523486474e-3).epsilon(1e-6));
  CHECK(k2 / k1 == doctest::Approx(0.491314).epsilon(1e-4));
  CHECK(k3 / k2 == doctest::Approx(0.495668).epsilon(1e-4));
}

TEST_CASE("particle bridge step expands variance by the closed-form factor") {
  MixtureSpec gauss{{{1.0, {0.0}, 1.0}}};
  ParticleCloud cloud = sample_mixture(gauss, 2000, 314);
  double v0 = moments(cloud).var;

  ParticleCloud heat = sb_step_particles_heat(cloud, 0.1);
  CHECK(heat.size() == 2000);
  CHECK(moments(heat).var / v0 == doctest::Approx(1.099878199127339).epsilon(0.01));

  ParticleCloud rheat = sb_step_particles_reverse_heat(cloud, 0.1);
  CHECK(moments(rheat).var / v0 == doctest::Approx(0.9048750780274959).epsilon(0.01));
}

TEST_CASE("particle euler step with the exact Gaussian score") {
  MixtureSpec gauss{{{1.0, {0.0}, 1.0}}};
  ParticleCloud cloud = sample_mixture(gauss, 2000, 159);
  double v0 = moments(cloud).var;
  auto score = [v0](std::span<const double> x, std::span<double> out) {
    out[0] = -x[0] / v0;
  };
  ParticleCloud stepped = euler_step_particles(cloud, score, 0.1);
  double factor = std::pow(1.0 + 0.1 / (2.0 * v0), 2);
  CHECK(moments(stepped).var / v0 == doctest::Approx(factor).epsilon(1e-12));

  auto bad = [](std::span<const double>, std::span<double> out) {
    out[0] = std::nan("");
  };
  CHECK_THROWS_AS(euler_step_particles(cloud, bad, 0.1), std::runtime_error);
}

TEST_CASE("particle scheme runs end to end and tracks the heat law") {
  MixtureSpec gauss{{{1.0, {0.0}, 1.0}}};
  SchemeConfig config;
  config.epsilon = 0.25;
  config.horizon = 1.0;
  config.functional = make(FunctionalKind::Entropy);
  ParticleCloud start = sample_mixture(gauss, 1500, 2025);
  FlowTrajectory<ParticleCloud> traj = run_scheme_particles(config, start);
  CHECK(traj.states.size() == 5);
  CHECK(traj.states.back().size() == 1500);
  // Final law is N(0, ~2); the scheme variance should land within a few
  // percent (O(eps^2) scheme error ~0.004 plus MC noise ~0.07 at 3 sigma).
  CHECK(moments(traj.states.back()).var == doctest::Approx(2.0).epsilon(0.11));

  SchemeConfig unsupported = config;
  unsupported.functional = make(FunctionalKind::KLtoStandardNormal);
  CHECK_THROWS_AS(run_scheme_particles(unsupported, start), std::invalid_argument);
  unsupported.method = SchemeMethod::ExplicitEuler;
  unsupported.functional = make(FunctionalKind::Entropy);
  CHECK_THROWS_AS(run_scheme_particles(unsupported, start), std::invalid_argument);
}

TEST_CASE("langevin method runs the OU window factor") {
  SchemeConfig config;
  config.epsilon = 0.1;
  config.horizon = 0.1;
  config.functional = make(FunctionalKind::Entropy);
  config.method = SchemeMethod::Langevin;
  FlowTrajectory<GaussianState> traj = run_scheme_gaussian(config, centered(1.0));
  CHECK(traj.states.back().var == doctest::Approx(1.0999197200331035).epsilon(1e-14));

  config.functional = make(FunctionalKind::KLtoStandardNormal);
  CHECK_THROWS_AS(run_scheme_gaussian(config, centered(1.0)), std::invalid_argument);
}

TEST_CASE("trajectory csv layout") {
  SchemeConfig config;
  config.epsilon = 0.5;
  config.horizon = 1.0;
  config.functional = make(FunctionalKind::Entropy);
  FlowTrajectory<GaussianState> traj = run_scheme_gaussian(config, centered(1.0));
  std::stringstream buf;
  write_gaussian_trajectory_csv(traj, buf);
  std::string line;
  std::getline(buf, line);
  CHECK(line == "k,time,var");
  int rows = 0;
  while (std::getline(buf, line))
    if (!line.empty()) ++rows;
  CHECK(rows == 3);
}

}  // TEST_SUITE("scheme")
