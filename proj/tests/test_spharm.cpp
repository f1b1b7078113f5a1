#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "thinobs/trace.hpp"

using namespace thinobs;

namespace {

constexpr double pi = std::numbers::pi;

Vec3 random_unit(std::mt19937_64& rng, int n) {
  std::normal_distribution<double> g;
  Vec3 p{g(rng), g(rng), n == 2 ? g(rng) : 0.0};
  const double r = norm(p);
  return {p[0] / r, p[1] / r, p[2] / r};
}

}  // namespace

TEST_CASE("gauss_legendre integrates polynomials exactly") {
  const LineRule rule = gauss_legendre(7, 0.0, 2.0);
  for (int d = 0; d <= 13; ++d) {
    double sum = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) sum += rule.weights[i] * std::pow(rule.nodes[i], d);
    CHECK(sum == doctest::Approx(std::pow(2.0, d + 1) / (d + 1)).epsilon(1e-13));
  }
}

TEST_CASE("mode counts and eigenvalues") {
  auto b1 = EigenBasis::build(1, 4);
  REQUIRE(b1->size() == 9);
  const double want1[] = {0, 1, 1, 4, 4, 9, 9, 16, 16};
  for (std::size_t k = 0; k < 9; ++k) CHECK(b1->mode(k).eigenvalue == want1[k]);

  auto b2 = EigenBasis::build(2, 2);
  REQUIRE(b2->size() == 9);
  const double want2[] = {0, 2, 2, 2, 6, 6, 6, 6, 6};
  for (std::size_t k = 0; k < 9; ++k) CHECK(b2->mode(k).eigenvalue == want2[k]);

  CHECK_THROWS_AS(EigenBasis::build(1, 0), std::invalid_argument);
  CHECK_THROWS_AS(EigenBasis::build(3, 4), std::invalid_argument);
  CHECK(lambda_of(1.5, 1) == 2.25);
  for (int n : {1, 2}) CHECK(lambda_of(1.5, n) == doctest::Approx(1.5 * n + 0.75));
  CHECK(lambda_of(0.0, 2) == 0.0);
}

TEST_CASE("gram matrix is the identity") {
  for (int n : {1, 2}) {
    auto b = EigenBasis::build(n, default_cutoff);
    const auto& w = b->rule().weights;
    double worst = 0.0;
    for (std::size_t j = 0; j < b->size(); ++j)
      for (std::size_t k = j; k < b->size(); ++k) {
        double s = 0.0;
        for (std::size_t i = 0; i < w.size(); ++i) s += w[i] * b->sample(j, i) * b->sample(k, i);
        worst = std::max(worst, std::abs(s - (j == k ? 1.0 : 0.0)));
      }
    CAPTURE(n);
    CHECK(worst < 1e-10);
  }
}

TEST_CASE("degree-one modes and parity labels") {
  auto b2 = EigenBasis::build(2, 3);
  const Vec3 p{0.48, -0.6, 0.64};
  std::vector<double> v(b2->size());
  b2->evaluate(p, 3, v, {});
  const double c = std::sqrt(3.0 / (4.0 * pi));
  CHECK(v[1] == doctest::Approx(c * p[1]));
  CHECK(v[2] == doctest::Approx(c * p[2]));
  CHECK(v[3] == doctest::Approx(c * p[0]));
  // parity under x3 -> -x3
  const Vec3 q{p[0], p[1], -p[2]};
  std::vector<double> vq(b2->size());
  b2->evaluate(q, 3, vq, {});
  for (std::size_t k = 0; k < b2->size(); ++k) {
    const double sign = b2->mode(k).parity == Parity::even ? 1.0 : -1.0;
    CHECK(vq[k] == doctest::Approx(sign * v[k]).epsilon(1e-12));
  }
}

TEST_CASE("eigen-relation under the discrete Laplacian") {
  for (int n : {1, 2}) {
    auto b = EigenBasis::build(n, default_cutoff);
    const auto& nodes = b->rule().nodes;
    double worst = 0.0;
    for (std::size_t k = 0; k < b->size(); ++k) {
      for (std::size_t i = 0; i < nodes.size(); i += (n == 1 ? 3 : 37)) {
        if (b->rule().weights[i] == 0.0) continue;
        const double lap = b->discrete_laplacian(k, nodes[i]);
        worst = std::max(worst, std::abs(lap + b->mode(k).eigenvalue * b->sample(k, i)));
      }
    }
    CAPTURE(n);
    CHECK(worst < 1e-6);
  }
}

TEST_CASE("mode gradients match finite differences") {
  std::mt19937_64 rng(11);
  for (int n : {1, 2}) {
    auto b = EigenBasis::build(n, 8);
    std::vector<double> v(b->size()), vp(b->size()), vm(b->size());
    std::vector<Vec3> g(b->size());
    for (int trial = 0; trial < 20; ++trial) {
      const Vec3 p = random_unit(rng, n);
      b->evaluate(p, 8, v, g);
      // tangent direction
      Vec3 t = random_unit(rng, n);
      const double pt = dot(p, t);
      for (int d = 0; d < 3; ++d) t[d] -= pt * p[d];
      const double tn = norm(t);
      for (int d = 0; d < 3; ++d) t[d] /= tn;
      const double step = 1e-5;
      Vec3 a, c;
      for (int d = 0; d < 3; ++d) {
        a[d] = std::cos(step) * p[d] + std::sin(step) * t[d];
        c[d] = std::cos(step) * p[d] - std::sin(step) * t[d];
      }
      b->evaluate(a, 8, vp, {});
      b->evaluate(c, 8, vm, {});
      for (std::size_t k = 0; k < b->size(); ++k) {
        const double fd = (vp[k] - vm[k]) / (2 * step);
        CHECK(dot(g[k], t) == doctest::Approx(fd).epsilon(1e-6).scale(1.0));
        CHECK(std::abs(dot(g[k], p)) < 1e-12);
      }
    }
  }
}

TEST_CASE("projection, synthesis and Parseval") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int n : {1, 2}) {
    auto b = EigenBasis::build(n, 12);
    std::vector<double> coeffs(b->size());
    for (std::size_t k = 0; k < coeffs.size(); ++k) coeffs[k] = b->mode(k).parity == Parity::even ? u(rng) : 0.0;
    const Trace t = synthesize(coeffs, b);
    const Trace round = Trace::from_samples(b, t.samples());
    const auto back = round.band();
    double err = 0.0, sum = 0.0;
    for (std::size_t k = 0; k < coeffs.size(); ++k) {
      err = std::max(err, std::abs(back[k] - coeffs[k]));
      sum += coeffs[k] * coeffs[k];
    }
    CHECK(err < 1e-10);
    CHECK(sphere_inner(t, t) == doctest::Approx(sum).epsilon(1e-12));
    CHECK(t.sample_norm() * t.sample_norm() == doctest::Approx(sum).epsilon(1e-10));
  }
  auto b1 = EigenBasis::build(1, 6);
  std::vector<double> ones(b1->rule().size(), 1.0);
  const auto c1 = project(Trace::from_samples(b1, ones));
  CHECK(c1[0] == doctest::Approx(std::sqrt(2.0 * pi)).epsilon(1e-13));
  for (std::size_t k = 1; k < c1.size(); ++k) CHECK(std::abs(c1[k]) < 1e-12);

  const Trace zero = synthesize(std::vector<double>(4, 0.0), b1);
  for (double s : zero.samples()) CHECK(s == 0.0);
  CHECK_THROWS_AS(synthesize(std::vector<double>(b1->size() + 1, 1.0), b1), std::invalid_argument);
}

TEST_CASE("eigenmodes have unit mass and Dirichlet energy lambda") {
  auto b = EigenBasis::build(2, 6);
  std::vector<double> e(b->size(), 0.0);
  e[7] = 1.0;
  const Trace f = synthesize(e, b);
  CHECK(sphere_inner(f, f) == doctest::Approx(1.0));
  CHECK(sphere_dirichlet(f, f) == doctest::Approx(b->mode(7).eigenvalue));
  e[7] = 0.0;
  e[20] = 1.0;
  const Trace g = synthesize(e, b);
  CHECK(std::abs(sphere_inner(f, g)) < 1e-12);
  CHECK(std::abs(sphere_dirichlet(f, g)) < 1e-12);
}

TEST_CASE("sample symmetrisation records the asymmetry") {
  auto b = EigenBasis::build(1, 4);
  std::vector<double> s(b->rule().size(), 0.0);
  for (std::size_t i = 0; i < s.size(); ++i) s[i] = b->rule().nodes[i][1];  // odd: x2
  const Trace t = Trace::from_samples(b, s);
  CHECK(t.asymmetry() > 1.0);
  CHECK_FALSE(t.even());
  for (double v : t.samples()) CHECK(std::abs(v) < 1e-15);
}
