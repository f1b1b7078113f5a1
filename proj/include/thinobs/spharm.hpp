#pragma once

#include <memory>
#include <span>
#include <vector>

#include "thinobs/quadrature.hpp"

namespace thinobs {

enum class Parity { even, odd };

/// One L^2-normalised eigenfunction of the spherical Laplacian.
///
/// Conventions: for n = 1 the modes are 1/sqrt(2 pi), cos(d t)/sqrt(pi),
/// sin(d t)/sqrt(pi) with t the angle from +x_1 towards +x_2. For n = 2 they
/// are real spherical harmonics about the x_3 axis without the Condon-Shortley
/// phase; order m > 0 carries cos(m psi), m < 0 carries sin(|m| psi), so the
/// degree-1 modes are positive multiples of x_2, x_3, x_1 (m = -1, 0, 1).
struct EigenMode {
  int index = 0;
  int degree = 0;
  int order = 0;  // n = 1: +d for cos, -d for sin; n = 2: m
  double eigenvalue = 0.0;
  Parity parity = Parity::even;  // under x_{n+1} -> -x_{n+1}
};

/// lambda(alpha) = alpha (alpha + n - 1), the eigenvalue whose eigenfunctions
/// have harmonic alpha-homogeneous extensions.
double lambda_of(double alpha, int n);

/// Truncated orthonormal eigenbasis on the unit sphere of R^{n+1}, n in {1, 2},
/// with the sample rule used by every Trace built on it.
class EigenBasis {
 public:
  static std::shared_ptr<const EigenBasis> build(int n, int cutoff_degree);

  int ambient_n() const { return n_; }
  int cutoff_degree() const { return cutoff_; }
  std::size_t size() const { return modes_.size(); }
  std::span<const EigenMode> modes() const { return modes_; }
  const EigenMode& mode(std::size_t k) const { return modes_.at(k); }

  /// Number of modes with degree <= d.
  std::size_t count_up_to(int degree) const;

  /// Sample rule: hemisphere-exact product rule plus zero-weight equator nodes.
  const SphereRule& rule() const { return rule_; }
  /// Indices of the equator nodes inside rule().
  std::span<const std::size_t> equator_nodes() const { return equator_nodes_; }
  /// Index of the mirror image of node i under x_{n+1} -> -x_{n+1}.
  std::size_t mirror(std::size_t i) const { return mirror_[i]; }

  /// Value of mode k at sample node i.
  double sample(std::size_t k, std::size_t i) const { return samples_[k * rule_.size() + i]; }

  /// Values (and tangential gradients, if `grads` is non-empty) of modes with
  /// degree <= max_degree at an arbitrary unit vector p.
  void evaluate(const Vec3& p, int max_degree, std::span<double> values, std::span<Vec3> grads) const;

  /// Laplace-Beltrami of mode k at p, by a sixth-order central stencil along
  /// two orthogonal great circles through p. Used to check the eigen-relation.
  double discrete_laplacian(std::size_t k, const Vec3& p, double step = 2e-3) const;

 private:
  EigenBasis() = default;

  int n_ = 1;
  int cutoff_ = 2;
  std::vector<EigenMode> modes_;
  SphereRule rule_;
  std::vector<std::size_t> equator_nodes_;
  std::vector<std::size_t> mirror_;
  std::vector<double> samples_;
};

using BasisPtr = std::shared_ptr<const EigenBasis>;

/// Default cutoff degree.
inline constexpr int default_cutoff = 24;

}  // namespace thinobs
