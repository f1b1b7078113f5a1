#pragma once
// Independent reference computations shared by the unit tests.

#include <cmath>
#include <functional>
#include <random>

#include "thinobs/homog.hpp"

namespace oracle {

using thinobs::Vec3;
using Field = std::function<double(const Vec3&)>;

// Integral over B_1 of grad F . grad G by a product rule (64 Gauss-Legendre
// radial nodes times a hemisphere product rule on the sphere) with Cartesian
// central differences for the gradients.
inline double volume_dirichlet(int n, const Field& f, const Field& g, int radial = 64) {
  const auto line = thinobs::gauss_legendre(radial, 0.0, 1.0);
  const auto sphere = n == 1 ? thinobs::hemisphere_rule(1, 160, 0, false) : thinobs::hemisphere_rule(2, 24, 48, false);
  const double h = 1e-6;
  double sum = 0.0;
#pragma omp parallel for reduction(+ : sum) schedule(dynamic)
  for (std::size_t a = 0; a < line.nodes.size(); ++a) {
    const double r = line.nodes[a];
    const double wr = line.weights[a] * std::pow(r, n);
    for (std::size_t b = 0; b < sphere.size(); ++b) {
      const Vec3& w = sphere.nodes[b];
      const Vec3 x{r * w[0], r * w[1], r * w[2]};
      double dot = 0.0;
      for (int d = 0; d <= n; ++d) {
        Vec3 xp = x, xm = x;
        xp[d] += h;
        xm[d] -= h;
        dot += (f(xp) - f(xm)) * (g(xp) - g(xm)) / (4 * h * h);
      }
      sum += wr * sphere.weights[b] * dot;
    }
  }
  return sum;
}

// Integral over the unit sphere of F G.
inline double sphere_mass(int n, const Field& f, const Field& g) {
  const auto sphere = n == 1 ? thinobs::hemisphere_rule(1, 160, 0, false) : thinobs::hemisphere_rule(2, 48, 96, false);
  double sum = 0.0;
  for (std::size_t b = 0; b < sphere.size(); ++b) sum += sphere.weights[b] * f(sphere.nodes[b]) * g(sphere.nodes[b]);
  return sum;
}

inline Field homogeneous(double alpha, const thinobs::Trace& c) {
  return [alpha, c](const Vec3& x) {
    const double r = thinobs::norm(x);
    if (r == 0.0) return 0.0;
    return std::pow(r, alpha) * c.value({x[0] / r, x[1] / r, x[2] / r});
  };
}

// Random even band-limited trace of degree <= max_degree.
inline thinobs::Trace random_even_trace(const thinobs::BasisPtr& basis, int max_degree, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  std::vector<double> coeffs(basis->count_up_to(max_degree), 0.0);
  for (std::size_t k = 0; k < coeffs.size(); ++k)
    if (basis->mode(k).parity == thinobs::Parity::even) coeffs[k] = g(rng) / (1.0 + basis->mode(k).degree);
  return thinobs::synthesize(coeffs, basis);
}

}  // namespace oracle
