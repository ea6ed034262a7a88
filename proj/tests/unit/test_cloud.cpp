#include <doctest.h>

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "sbflow/cloud.hpp"

using namespace sbflow;

namespace {

MixtureSpec std_normal() {
  MixtureSpec spec;
  spec.components.push_back({1.0, {0.0}, 1.0});
  return spec;
}

MixtureSpec two_bumps() {
  MixtureSpec spec;
  spec.components.push_back({0.5, {-2.0}, 1.0});
  spec.components.push_back({0.5, {2.0}, 1.0});
  return spec;
}

}  // namespace

TEST_SUITE("cloud") {

TEST_CASE("mixture validation rejects malformed specs") {
  MixtureSpec empty;
  CHECK_THROWS_AS(empty.validate(), std::invalid_argument);

  MixtureSpec bad_sum = std_normal();
  bad_sum.components[0].weight = 0.9;
  CHECK_THROWS_AS(bad_sum.validate(), std::invalid_argument);

  MixtureSpec neg = two_bumps();
  neg.components[0].weight = -0.5;
  neg.components[1].weight = 1.5;
  CHECK_THROWS_AS(neg.validate(), std::invalid_argument);

  MixtureSpec flat = std_normal();
  flat.components[0].var = 0.0;
  CHECK_THROWS_AS(flat.validate(), std::invalid_argument);

  MixtureSpec ragged = two_bumps();
  ragged.components[1].mean = {2.0, 0.0};
  CHECK_THROWS_AS(ragged.validate(), std::invalid_argument);

  CHECK_NOTHROW(two_bumps().validate());
}

TEST_CASE("density1d matches hand values") {
  double inv_sqrt_2pi = 0.3989422804014327;
  CHECK(std::abs(std_normal().density1d(0.0) - inv_sqrt_2pi) < 1e-15);
  // At the symmetry point of the two-bump mixture both components
  // contribute the same N(2,1) tail value.
  double want = inv_sqrt_2pi * std::exp(-2.0);
  CHECK(std::abs(two_bumps().density1d(0.0) - want) < 1e-15);
  // Extra variance widens each component: density at a mean drops to the
  // N(0, 1 + 3) peak height plus the other bump's tail.
  double widened = two_bumps().density1d(2.0, 3.0);
  double expect = 0.5 * (inv_sqrt_2pi / 2.0) * (1.0 + std::exp(-2.0));
  CHECK(std::abs(widened - expect) < 1e-15);
}

TEST_CASE("sampling is seed deterministic") {
  ParticleCloud a = sample_mixture(two_bumps(), 100, 9001);
  ParticleCloud b = sample_mixture(two_bumps(), 100, 9001);
  ParticleCloud c = sample_mixture(two_bumps(), 100, 9002);
  CHECK(a.points == b.points);
  CHECK(a.points != c.points);
  CHECK(a.size() == 100);
  CHECK(a.dim == 1);
}

TEST_CASE("sample moments match the mixture") {
  const int n = 200000;
  Moments m1 = moments(sample_mixture(std_normal(), n, 5));
  CHECK(std::abs(m1.mean[0]) < 4.0 / std::sqrt(double(n)));
  CHECK(std::abs(m1.var - 1.0) < 4.0 * std::sqrt(2.0 / double(n)));

  // Two-bump mixture: mean 0, var 5, E[x^4] = 43 so sd(var_hat) =
  // sqrt((43 - 25)/n).
  Moments m2 = moments(sample_mixture(two_bumps(), n, 6));
  CHECK(std::abs(m2.mean[0]) < 4.0 * std::sqrt(5.0 / double(n)));
  CHECK(std::abs(m2.var - 5.0) < 4.0 * std::sqrt(18.0 / double(n)));
}

TEST_CASE("heat sampling at t=0 equals plain sampling") {
  ParticleCloud a = sample_mixture(two_bumps(), 64, 77);
  ParticleCloud b = sample_exact_heat(two_bumps(), 0.0, 64, 77);
  CHECK(a.points == b.points);
  CHECK_THROWS_AS(sample_exact_heat(two_bumps(), -0.1, 8, 1), std::invalid_argument);
}

TEST_CASE("heat sampling adds t to every component variance") {
  const int n = 200000;
  Moments m = moments(sample_exact_heat(std_normal(), 1.0, n, 8));
  CHECK(std::abs(m.var - 2.0) < 4.0 * std::sqrt(2.0 * 4.0 / double(n)));
}

TEST_CASE("cloud csv round trip is bit exact") {
  ParticleCloud cloud = sample_mixture(two_bumps(), 37, 123);
  std::stringstream buf;
  write_cloud_csv(cloud, buf);
  ParticleCloud back = read_cloud_csv(buf);
  CHECK(back.dim == cloud.dim);
  CHECK(back.points == cloud.points);

  std::string text = buf.str();
  CHECK(text.rfind("dim,n\n", 0) == 0);
}

}  // TEST_SUITE("cloud")
