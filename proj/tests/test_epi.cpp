#include <numbers>

#include "doctest.h"
#include "oracles.hpp"
#include "thinobs/epi.hpp"

using namespace thinobs;

namespace {

constexpr double pi = std::numbers::pi;

Trace mode_trace(const BasisPtr& b, std::size_t k, double scale = 1.0) {
  std::vector<double> e(b->size(), 0.0);
  e[k] = scale;
  return synthesize(e, b);
}

double l2_norm(const Trace& t) {
  const Trace one[1] = {t};
  return std::sqrt(std::max(0.0, form_table(one).l2(0, 0)));
}

}  // namespace

TEST_CASE("decompose reference traces") {
  for (int n : {1, 2}) {
    auto b = EigenBasis::build(n, default_cutoff);
    const Vec3 e = n == 1 ? Vec3{1.0, 0.0, 0.0} : Vec3{std::cos(2.0), std::sin(2.0), 0.0};
    const Decomposition dh = decompose(he_trace(b, e));
    CHECK(dh.C == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::abs(dh.c0) < 1e-12);
    CHECK(norm({dh.e[0] - e[0], dh.e[1] - e[1], dh.e[2] - e[2]}) < 1e-12);
    CHECK(l2_norm(dh.phi) < 1e-10);

    const Decomposition du = decompose(u0_trace(b));
    CHECK(du.C == 0.0);
    CHECK(du.c0 == 1.0);
    CHECK(du.e == Vec3{1.0, 0.0, 0.0});
    CHECK(l2_norm(du.phi) == 0.0);

    // cos 2t, or minus the zonal degree-2 harmonic (positive on the equator)
    const Trace phi = n == 1 ? mode_trace(b, 3, 0.3) : mode_trace(b, 6, -0.3);
    const Decomposition dp = decompose(he_trace(b, e) + phi);
    CHECK(dp.C == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::abs(dp.c0) < 1e-12);
    CHECK(l2_norm(dp.phi - phi) < 1e-10);
  }
}

TEST_CASE("decomposition invariants on random admissible traces") {
  std::mt19937_64 rng(404);
  for (int n : {1, 2}) {
    auto b = EigenBasis::build(n, default_cutoff);
    for (int trial = 0; trial < 10; ++trial) {
      Trace c = random_admissible_trace(b, rng);
      if (trial % 3 == 0) c += 0.8 * u0_trace(b);
      if (trial % 3 == 1) c += 0.5 * he_trace(b, decompose(c).e);
      REQUIRE(c.admissible());
      const Decomposition d = decompose(c);
      CHECK(d.C >= 0.0);
      const auto a = project(d.phi);
      for (std::size_t k = 0; k < a.size(); ++k)
        if (b->mode(k).degree <= 1) CHECK(std::abs(a[k]) < 1e-10);
      CHECK(l2_norm(reconstruct(d) - c) < 1e-10);
      // zeta agrees with z on the equator and with c on the unit sphere
      const PiecewiseHomogeneousFn zeta = competitor(d);
      const HomogeneousFn z{1.5, c};
      for (int i = 0; i < 16; ++i) {
        const double psi = 2 * pi * i / 16;
        const Vec3 x = n == 1 ? Vec3{i % 2 ? 0.6 : -0.6, 0.0, 0.0} : Vec3{0.7 * std::cos(psi), 0.7 * std::sin(psi), 0.0};
        CHECK(zeta.value(x) == doctest::Approx(z.value(x)).epsilon(1e-10).scale(1.0));
      }
      CHECK(l2_norm(zeta.boundary_trace() - c) < 1e-10);
    }
  }
}

TEST_CASE("decompose rejects bad input") {
  auto b = EigenBasis::build(1, 8);
  CHECK_THROWS_AS(decompose(-1.0 * he_trace(b, {1.0, 0.0, 0.0})), std::invalid_argument);
  const Trace odd = mode_trace(b, 2);  // sin t
  const Trace c = u0_trace(b) + 0.1 * odd;
  CHECK_THROWS_AS(decompose(c), std::invalid_argument);
  const Decomposition d = decompose(c, true);
  CHECK(d.c0 == doctest::Approx(1.0));
  std::vector<double> s(b->rule().size());
  for (std::size_t i = 0; i < s.size(); ++i) s[i] = 1.0 + 0.01 * b->rule().nodes[i][1];
  CHECK_THROWS_AS(decompose(Trace::from_samples(b, s)), std::invalid_argument);
  CHECK_NOTHROW(decompose(Trace::from_samples(b, s), true));
}

TEST_CASE("competitor reference shapes") {
  auto b = EigenBasis::build(1, default_cutoff);
  const PiecewiseHomogeneousFn zu = competitor(decompose(u0_trace(b)));
  REQUIRE(zu.terms().size() == 1);
  CHECK(zu.terms()[0].alpha == 1.0);
  const PiecewiseHomogeneousFn zh = competitor(decompose(he_trace(b, {1.0, 0.0, 0.0})));
  REQUIRE(zh.terms().size() == 1);
  CHECK(zh.terms()[0].alpha == 1.5);
}

TEST_CASE("epi check on the reference traces") {
  auto b1 = EigenBasis::build(1, default_cutoff);
  const Trace u0 = u0_trace(b1);
  const EpiReport r = check(u0);
  CHECK(r.eps == doctest::Approx(0.2));
  CHECK(r.W_z == doctest::Approx(-5 * pi / 12).epsilon(1e-12));
  CHECK(r.W_zeta == doctest::Approx(-pi / 2).epsilon(1e-12));
  CHECK(std::abs(r.W_zeta - 1.2 * r.W_z) < 1e-10);
  CHECK(r.equality);
  CHECK(r.passed);
  for (double term : {r.I, r.J, r.K, r.L}) CHECK(std::abs(term) < 1e-12);
  CHECK(equality_case(r, decompose(u0)));

  for (int n : {1, 2}) {
    auto b = EigenBasis::build(n, default_cutoff);
    const Vec3 e = n == 1 ? Vec3{-1.0, 0.0, 0.0} : Vec3{0.8, 0.6, 0.0};
    const Trace he = he_trace(b, e);
    const EpiReport rh = check(he);
    CHECK(std::abs(rh.W_z) < 1e-10);
    CHECK(std::abs(rh.W_zeta) < 1e-10);
    for (double term : {rh.I, rh.J, rh.K, rh.L}) CHECK(std::abs(term) < 1e-10);
    CHECK(equality_case(rh, decompose(he)));

    const Trace c = he + (n == 1 ? mode_trace(b, 3, 0.3) : mode_trace(b, 6, -0.3));
    const EpiReport rp = check(c);
    CHECK(rp.J < -1e-3);
    CHECK_FALSE(equality_case(rp, decompose(c)));
  }
}

TEST_CASE("ledger on random admissible traces") {
  for (int n : {1, 2}) {
    const auto reports = check_random(n, 40, 900 + n);
    for (const EpiReport& r : reports) {
      CHECK(r.passed);
      CHECK(std::abs(r.ledger_residual()) < 1e-8);
      CHECK(std::abs(r.I) < 1e-9);
      CHECK(std::abs(r.K) < 1e-9);
      CHECK(r.J <= 1e-12);
      CHECK(r.L <= 1e-12);
    }
  }
}

TEST_CASE("ledger with closed-form atoms") {
  std::mt19937_64 rng(55);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int n : {1, 2}) {
    auto b = EigenBasis::build(n, default_cutoff);
    for (int trial = 0; trial < 6; ++trial) {
      // h_e along the degree-1 direction of the band part, so the decomposition
      // axis coincides with the atom axis
      const Trace band = random_admissible_trace(b, rng, 4);
      const Vec3 e = decompose(band).e;
      Trace c = band + (1.0 + u(rng)) * he_trace(b, e) + u(rng) * u0_trace(b);
      const EpiReport r = check(c);
      CAPTURE(n);
      CAPTURE(trial);
      CHECK(r.passed);
      CHECK(std::abs(r.ledger_residual()) < 1e-8);
      CHECK(std::abs(r.I) < 1e-9);
      CHECK(std::abs(r.K) < 1e-9);
    }
  }
}

TEST_CASE("sharpness of the constant") {
  auto b1 = EigenBasis::build(1, default_cutoff);
  const Trace c = 0.7 * u0_trace(b1);
  const EpiReport r = check(c, 1.0 / 4.0);
  // I = c0^2 |u0|^2 (W-coefficients at eps = 1/(2n+2)) = c0^2 |u0|^2 / 48
  CHECK(r.I == doctest::Approx(0.49 * pi / 48).epsilon(1e-10));
  CHECK(std::abs(r.ledger_residual()) < 1e-10);
}

TEST_CASE("L closed form for n = 1") {
  // phi extended 3/2-homogeneously; the contact half-line carries 3 phi(pi) int_0^1 s^2 ds
  auto b = EigenBasis::build(1, default_cutoff);
  const Trace phi = mode_trace(b, 3, 0.4) + mode_trace(b, 7, -0.2);
  const Vec3 e{1.0, 0.0, 0.0};
  const double phi_pi = phi.value({-1.0, 0.0, 0.0});
  // <-Lap(r^{3/2} h_e), r^{3/2} phi> in the plane
  auto H = oracle::homogeneous(1.5, he_trace(b, e));
  auto P = oracle::homogeneous(1.5, phi);
  const double volume = oracle::volume_dirichlet(1, H, P) - 1.5 * oracle::sphere_mass(1, H, P);
  CHECK(volume == doctest::Approx(3.0 * phi_pi / 3.0).epsilon(1e-6));
  CHECK(contact_integral(phi, e) == doctest::Approx(phi_pi).epsilon(1e-14));
  Decomposition d{1, e, 1.0, 0.0, phi};
  const EpiReport r = check(d, reconstruct(d));
  CHECK(r.L == doctest::Approx(-2.0 * 0.2 * phi_pi).epsilon(1e-12));
}

TEST_CASE("gap chain") {
  const GapChain g = gap_chain(-0.5, 1);
  CHECK(std::abs(g.factor - 1.0) < 1e-12);
  CHECK_FALSE(g.contradiction);
  CHECK(g.below_half);
  for (int n : {1, 2, 3, 7}) {
    CHECK(gap_chain(-0.25, n).contradiction);
    CHECK(std::abs(gap_chain(-0.5, n).factor - 1.0) < 1e-12);
  }
  const GapChain a = gap_chain(-0.75, 1);
  CHECK(a.factor < 1.0);
  CHECK_FALSE(a.contradiction);
  CHECK_THROWS_AS(gap_chain(0.0, 1), std::invalid_argument);

  auto b1 = EigenBasis::build(1, default_cutoff);
  const GapChain s = gap_chain(-0.5, -u0_trace(b1));
  CHECK(s.lhs == doctest::Approx(-pi / 2));
  CHECK(s.rhs == doctest::Approx(-pi / 2).epsilon(1e-12));
}
