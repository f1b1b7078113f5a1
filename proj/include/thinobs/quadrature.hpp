#pragma once

#include <array>
#include <optional>
#include <vector>

namespace thinobs {

/// Cartesian point or tangent vector. For ambient R^2 (n = 1) the third
/// component is unused and stays zero.
using Vec3 = std::array<double, 3>;

inline double dot(const Vec3& a, const Vec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }
double norm(const Vec3& a);

/// Index of the x_{n+1} coordinate (the coordinate normal to the thin obstacle).
constexpr int normal_axis(int n) { return n; }

/// Gauss-Legendre nodes and weights on [a, b].
struct LineRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};
LineRule gauss_legendre(int count, double a = -1.0, double b = 1.0);

/// Node/weight set on the unit sphere of R^{n+1}.
struct SphereRule {
  int ambient_n = 1;
  std::vector<Vec3> nodes;
  std::vector<double> weights;

  std::size_t size() const { return nodes.size(); }
};

/// Product rule that is exact hemisphere by hemisphere: Gauss-Legendre in the
/// normal direction on each side of the equator, uniform in azimuth (n = 2).
/// Functions that are smooth on each closed hemisphere (|x_{n+1}|, kinks on the
/// equator) are integrated to spectral accuracy.
///
/// n = 1: `normal_count` nodes in theta on (0, pi), mirrored to (pi, 2 pi).
/// n = 2: `normal_count` nodes in mu = x_3 on (0, 1), mirrored, times
///        `azimuth_count` uniform azimuth nodes.
/// When `with_equator` is set, zero-weight nodes are appended on the equator
/// (n = 1: the two points x_1 = +-1; n = 2: `azimuth_count` points).
SphereRule hemisphere_rule(int n, int normal_count, int azimuth_count, bool with_equator);

/// Rule adapted to h_e for a unit equatorial direction e (n = 2). Spherical
/// coordinates take the polar axis along e-perp, where h_e has its two
/// branch points; the polar angle is reparametrised so that the rule sees
/// r^{3/2} branch behaviour as a smooth integrand. Halves {x_3 > 0} and
/// {x_3 < 0} are integrated separately.
/// For n = 1 this is hemisphere_rule(1, polar_count, 0, false).
SphereRule adapted_rule(int n, const Vec3& e, int polar_count, int azimuth_count);

/// Quadrature on the equator S^{n-1} = {x_{n+1} = 0} of the unit sphere.
/// n = 1: the two points +-e_1 with unit weights (counting measure).
/// n = 2: two half circles split at +-axis_perp, each with a Gauss rule in a
/// variable that clusters quadratically at the endpoints, so integrands
/// carrying |omega . axis|^{1/2} or (omega . axis)_+^{3/2} factors converge
/// spectrally.
struct EquatorRule {
  std::vector<Vec3> nodes;
  std::vector<double> weights;
};
EquatorRule equator_rule(int n, const Vec3& axis, int count_per_half);

/// Equator rule restricted to the open half {omega . axis < 0}.
EquatorRule contact_half_rule(int n, const Vec3& axis, int count);

}  // namespace thinobs
