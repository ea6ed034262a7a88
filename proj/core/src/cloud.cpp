#include "sbflow/cloud.hpp"

#include <cmath>
#include <cstdio>
#include <istream>
#include <numbers>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "sbflow/rng.hpp"

namespace sbflow {

namespace {

// Shortest decimal that round-trips a double, so CSV output is bit-stable.
void append_double(std::string& s, double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  s += buf;
}

}  // namespace

int MixtureSpec::dim() const {
  if (components.empty()) {
    throw std::invalid_argument("MixtureSpec: no components");
  }
  return static_cast<int>(components.front().mean.size());
}

void MixtureSpec::validate() const {
  if (components.empty()) {
    throw std::invalid_argument("MixtureSpec: no components");
  }
  const std::size_t d = components.front().mean.size();
  if (d == 0) {
    throw std::invalid_argument("MixtureSpec: component mean has dimension 0");
  }
  double total = 0.0;
  for (const auto& c : components) {
    if (!(c.weight >= 0.0)) {
      throw std::invalid_argument("MixtureSpec: negative component weight");
    }
    if (!(c.var > 0.0)) {
      throw std::invalid_argument("MixtureSpec: component variance must be > 0");
    }
    if (c.mean.size() != d) {
      throw std::invalid_argument("MixtureSpec: inconsistent mean dimensions");
    }
    total += c.weight;
  }
  if (std::abs(total - 1.0) > 1e-12) {
    throw std::invalid_argument("MixtureSpec: weights must sum to 1 (within 1e-12)");
  }
}

double MixtureSpec::density1d(double x, double extra_var) const {
  validate();
  if (dim() != 1) {
    throw std::invalid_argument("MixtureSpec::density1d: dim must be 1");
  }
  double p = 0.0;
  for (const auto& c : components) {
    double v = c.var + extra_var;
    double z = x - c.mean[0];
    p += c.weight * std::exp(-0.5 * z * z / v) /
         std::sqrt(2.0 * std::numbers::pi * v);
  }
  return p;
}

namespace {

ParticleCloud sample_shifted_mixture(const MixtureSpec& spec, double extra_var,
                                     int n, std::uint64_t seed) {
  spec.validate();
  if (n <= 0) {
    throw std::invalid_argument("sample_mixture: n must be > 0");
  }
  const int d = spec.dim();
  Rng rng(seed);
  ParticleCloud cloud;
  cloud.dim = d;
  cloud.points.resize(static_cast<std::size_t>(n) * d);
  for (int i = 0; i < n; ++i) {
    double u = rng.uniform();
    double acc = 0.0;
    const MixtureSpec::Component* chosen = &spec.components.back();
    for (const auto& c : spec.components) {
      acc += c.weight;
      if (u < acc) {
        chosen = &c;
        break;
      }
    }
    double sd = std::sqrt(chosen->var + extra_var);
    for (int k = 0; k < d; ++k) {
      cloud.points[static_cast<std::size_t>(i) * d + k] =
          chosen->mean[k] + sd * rng.normal();
    }
  }
  return cloud;
}

}  // namespace

ParticleCloud sample_mixture(const MixtureSpec& spec, int n, std::uint64_t seed) {
  return sample_shifted_mixture(spec, 0.0, n, seed);
}

ParticleCloud sample_exact_heat(const MixtureSpec& spec, double t, int n,
                                std::uint64_t seed) {
  if (!(t >= 0.0)) {
    throw std::invalid_argument("sample_exact_heat: t must be >= 0");
  }
  return sample_shifted_mixture(spec, t, n, seed);
}

Moments moments(const ParticleCloud& cloud) {
  const int n = cloud.size();
  const int d = cloud.dim;
  if (n == 0) {
    throw std::invalid_argument("moments: empty cloud");
  }
  Moments m;
  m.mean.assign(d, 0.0);
  for (int i = 0; i < n; ++i) {
    for (int k = 0; k < d; ++k) {
      m.mean[k] += cloud.points[static_cast<std::size_t>(i) * d + k];
    }
  }
  for (int k = 0; k < d; ++k) m.mean[k] /= n;
  double ss = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int k = 0; k < d; ++k) {
      double z = cloud.points[static_cast<std::size_t>(i) * d + k] - m.mean[k];
      ss += z * z;
    }
  }
  m.var = ss / (static_cast<double>(n) * d);
  return m;
}

void write_cloud_csv(const ParticleCloud& cloud, std::ostream& out) {
  std::string s;
  s.reserve(cloud.points.size() * 20 + 32);
  s += "dim,n\n";
  s += std::to_string(cloud.dim);
  s += ',';
  s += std::to_string(cloud.size());
  s += '\n';
  const int n = cloud.size();
  for (int i = 0; i < n; ++i) {
    for (int k = 0; k < cloud.dim; ++k) {
      if (k) s += ',';
      append_double(s, cloud.points[static_cast<std::size_t>(i) * cloud.dim + k]);
    }
    s += '\n';
  }
  out << s;
}

ParticleCloud read_cloud_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != "dim,n") {
    throw std::runtime_error("read_cloud_csv: missing 'dim,n' header");
  }
  if (!std::getline(in, line)) {
    throw std::runtime_error("read_cloud_csv: missing size row");
  }
  int dim = 0, n = 0;
  if (std::sscanf(line.c_str(), "%d,%d", &dim, &n) != 2 || dim <= 0 || n < 0) {
    throw std::runtime_error("read_cloud_csv: bad size row: " + line);
  }
  ParticleCloud cloud;
  cloud.dim = dim;
  cloud.points.reserve(static_cast<std::size_t>(n) * dim);
  for (int i = 0; i < n; ++i) {
    if (!std::getline(in, line)) {
      throw std::runtime_error("read_cloud_csv: truncated after " +
                               std::to_string(i) + " rows");
    }
    std::stringstream row(line);
    std::string cell;
    for (int k = 0; k < dim; ++k) {
      if (!std::getline(row, cell, ',')) {
        throw std::runtime_error("read_cloud_csv: short row " + std::to_string(i));
      }
      cloud.points.push_back(std::stod(cell));
    }
  }
  return cloud;
}

}  // namespace sbflow
