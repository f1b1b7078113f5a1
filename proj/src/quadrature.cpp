#include "thinobs/quadrature.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace thinobs {

namespace {

constexpr double pi = std::numbers::pi;

Vec3 equatorial_perp(const Vec3& e) { return {-e[1], e[0], 0.0}; }

void check_equatorial_unit(const Vec3& e) {
  if (std::abs(e[2]) > 1e-12 || std::abs(norm(e) - 1.0) > 1e-12)
    throw std::invalid_argument("direction must be a unit vector in the equatorial plane");
}

}  // namespace

double norm(const Vec3& a) { return std::sqrt(dot(a, a)); }

LineRule gauss_legendre(int count, double a, double b) {
  if (count < 1) throw std::invalid_argument("gauss_legendre: count must be positive");
  // P_count(x) and its derivative by the three-term recurrence
  auto legendre = [count](double x) {
    double p0 = 1.0, p1 = x;
    for (int k = 2; k <= count; ++k) {
      const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = pk;
    }
    return std::array<double, 2>{p1, count * (x * p1 - p0) / (x * x - 1.0)};
  };
  LineRule rule;
  rule.nodes.resize(count);
  rule.weights.resize(count);
  const double mid = 0.5 * (a + b);
  const double len = 0.5 * (b - a);
  for (int i = 0; i < (count + 1) / 2; ++i) {
    double x = std::cos(pi * (i + 0.75) / (count + 0.5));
    for (int it = 0; it < 100; ++it) {
      const auto [p, dp] = legendre(x);
      const double dx = p / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    const double dp = legendre(x)[1];
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[i] = mid - len * x;
    rule.nodes[count - 1 - i] = mid + len * x;
    rule.weights[i] = rule.weights[count - 1 - i] = len * w;
  }
  return rule;
}

SphereRule hemisphere_rule(int n, int normal_count, int azimuth_count, bool with_equator) {
  SphereRule rule;
  rule.ambient_n = n;
  if (n == 1) {
    const LineRule line = gauss_legendre(normal_count, 0.0, pi);
    for (int side : {1, -1}) {
      for (std::size_t i = 0; i < line.nodes.size(); ++i) {
        const double t = line.nodes[i];
        rule.nodes.push_back({std::cos(t), side * std::sin(t), 0.0});
        rule.weights.push_back(line.weights[i]);
      }
    }
    if (with_equator) {
      rule.nodes.push_back({1.0, 0.0, 0.0});
      rule.nodes.push_back({-1.0, 0.0, 0.0});
      rule.weights.insert(rule.weights.end(), {0.0, 0.0});
    }
    return rule;
  }
  if (n != 2) throw std::invalid_argument("hemisphere_rule: only n = 1 and n = 2 are supported");
  if (azimuth_count < 1) throw std::invalid_argument("hemisphere_rule: azimuth_count must be positive");
  const LineRule line = gauss_legendre(normal_count, 0.0, 1.0);
  const double dpsi = 2.0 * pi / azimuth_count;
  for (int side : {1, -1}) {
    for (std::size_t i = 0; i < line.nodes.size(); ++i) {
      const double mu = line.nodes[i];
      const double s = std::sqrt(1.0 - mu * mu);
      for (int k = 0; k < azimuth_count; ++k) {
        const double psi = k * dpsi;
        rule.nodes.push_back({s * std::cos(psi), s * std::sin(psi), side * mu});
        rule.weights.push_back(line.weights[i] * dpsi);
      }
    }
  }
  if (with_equator) {
    for (int k = 0; k < azimuth_count; ++k) {
      const double psi = k * dpsi;
      rule.nodes.push_back({std::cos(psi), std::sin(psi), 0.0});
      rule.weights.push_back(0.0);
    }
  }
  return rule;
}

SphereRule adapted_rule(int n, const Vec3& e, int polar_count, int azimuth_count) {
  if (n == 1) return hemisphere_rule(1, polar_count, 0, false);
  if (n != 2) throw std::invalid_argument("adapted_rule: only n = 1 and n = 2 are supported");
  check_equatorial_unit(e);
  const Vec3 a = equatorial_perp(e);
  const LineRule srule = gauss_legendre(polar_count, 0.0, 1.0);
  const LineRule grule = gauss_legendre(azimuth_count, 0.0, pi);
  SphereRule rule;
  rule.ambient_n = 2;
  rule.nodes.reserve(2 * srule.nodes.size() * grule.nodes.size());
  for (std::size_t i = 0; i < srule.nodes.size(); ++i) {
    const double s = srule.nodes[i];
    const double beta = 0.5 * pi * (1.0 - std::cos(pi * s));
    const double jac = 0.5 * pi * pi * std::sin(pi * s);
    const double cb = std::cos(beta), sb = std::sin(beta);
    for (int side : {1, -1}) {
      for (std::size_t j = 0; j < grule.nodes.size(); ++j) {
        const double g = grule.nodes[j];
        const double cg = std::cos(g), sg = side * std::sin(g);
        rule.nodes.push_back({cb * a[0] + sb * cg * e[0], cb * a[1] + sb * cg * e[1], sb * sg});
        rule.weights.push_back(srule.weights[i] * jac * sb * grule.weights[j]);
      }
    }
  }
  return rule;
}

namespace {

void append_half_circle(EquatorRule& rule, const Vec3& axis, double center, int count) {
  const Vec3 perp = equatorial_perp(axis);
  const LineRule v = gauss_legendre(count, -1.0, 1.0);
  for (std::size_t i = 0; i < v.nodes.size(); ++i) {
    const double psi = center + 0.5 * pi * std::sin(0.5 * pi * v.nodes[i]);
    const double jac = 0.25 * pi * pi * std::cos(0.5 * pi * v.nodes[i]);
    const double c = std::cos(psi), s = std::sin(psi);
    rule.nodes.push_back({c * axis[0] + s * perp[0], c * axis[1] + s * perp[1], 0.0});
    rule.weights.push_back(v.weights[i] * jac);
  }
}

}  // namespace

EquatorRule equator_rule(int n, const Vec3& axis, int count_per_half) {
  EquatorRule rule;
  if (n == 1) {
    rule.nodes = {{1.0, 0.0, 0.0}, {-1.0, 0.0, 0.0}};
    rule.weights = {1.0, 1.0};
    return rule;
  }
  check_equatorial_unit(axis);
  append_half_circle(rule, axis, 0.0, count_per_half);
  append_half_circle(rule, axis, pi, count_per_half);
  return rule;
}

EquatorRule contact_half_rule(int n, const Vec3& axis, int count) {
  EquatorRule rule;
  if (n == 1) {
    if (std::abs(std::abs(axis[0]) - 1.0) > 1e-12) throw std::invalid_argument("n = 1 axis must be +-e_1");
    rule.nodes = {{-axis[0], 0.0, 0.0}};
    rule.weights = {1.0};
    return rule;
  }
  check_equatorial_unit(axis);
  append_half_circle(rule, axis, pi, count);
  return rule;
}

}  // namespace thinobs
