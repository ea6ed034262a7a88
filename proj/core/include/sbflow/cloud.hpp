#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

namespace sbflow {

// Uniformly weighted particle cloud in R^dim, points stored row-major
// (point i occupies [i*dim, (i+1)*dim)). Clouds are value types and treated
// as immutable snapshots: operations return new clouds instead of mutating.
struct ParticleCloud {
  int dim = 1;
  std::vector<double> points;

  int size() const { return dim > 0 ? static_cast<int>(points.size()) / dim : 0; }

  std::span<const double> point(int i) const {
    return {points.data() + static_cast<std::size_t>(i) * dim,
            static_cast<std::size_t>(dim)};
  }
};

// Isotropic Gaussian mixture: sum_c weight_c * N(mean_c, var_c * I_dim).
struct MixtureSpec {
  struct Component {
    double weight = 1.0;
    std::vector<double> mean;
    double var = 1.0;
  };
  std::vector<Component> components;

  int dim() const;
  // Enforces: at least one component, weights nonnegative summing to 1
  // within 1e-12, variances > 0, equal mean dimensions. Throws otherwise.
  void validate() const;
  // Mixture density at a scalar point (dim must be 1).
  double density1d(double x, double extra_var = 0.0) const;
};

// n i.i.d. draws from the mixture. Component choice and coordinates all come
// from one Rng stream seeded with `seed`.
ParticleCloud sample_mixture(const MixtureSpec& spec, int n, std::uint64_t seed);

// n i.i.d. draws from the mixture evolved for time t under the heat
// semigroup: component variances become var_c + t, means and weights stay.
// t < 0 is rejected.
ParticleCloud sample_exact_heat(const MixtureSpec& spec, double t, int n,
                                std::uint64_t seed);

struct Moments {
  std::vector<double> mean;
  double var = 0.0;  // population (1/n) variance, averaged over coordinates
};

Moments moments(const ParticleCloud& cloud);

// CSV layout: literal header "dim,n", one line with the two values, then one
// comma-separated coordinate row per particle.
void write_cloud_csv(const ParticleCloud& cloud, std::ostream& out);
ParticleCloud read_cloud_csv(std::istream& in);

}  // namespace sbflow
