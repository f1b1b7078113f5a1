#include <algorithm>
#include <numbers>

#include "doctest.h"
#include "thinobs/gapscan.hpp"
#include "thinobs/homog.hpp"

using namespace thinobs;

namespace {

bool contains(const HomogeneityCertificate& c, double l) {
  return std::any_of(c.admissible.begin(), c.admissible.end(), [&](const auto& a) { return std::abs(a.lambda - l) < 1e-9; });
}

}  // namespace

TEST_CASE("scan over (0.5, 2.5)") {
  const auto c = enumerate_2d(0.5, 2.5, 1e-4);
  CHECK(contains(c, 1.0));
  CHECK(contains(c, 1.5));
  CHECK(contains(c, 2.0));
  for (const auto& a : c.admissible) {
    CHECK_FALSE((a.lambda > 1.01 && a.lambda < 1.49));
    CHECK(a.residual <= 1e-8);
  }
  // the 1-homogeneous solution is -|x2| (both endpoints in contact), the
  // 2-homogeneous one x1^2 - x2^2 (both free), 3/2 has one contact endpoint
  for (const auto& a : c.admissible) {
    if (std::abs(a.lambda - 1.0) < 1e-9) CHECK(a.endpoint == EndpointCase::contact_contact);
    if (std::abs(a.lambda - 2.0) < 1e-9) CHECK(a.endpoint == EndpointCase::free_free);
    if (std::abs(a.lambda - 1.5) < 1e-9)
      CHECK((a.endpoint == EndpointCase::free_contact || a.endpoint == EndpointCase::contact_free));
  }
  CHECK(c.admissible.size() == 4);
}

TEST_CASE("probe at 5/4 fails every case") {
  for (const CaseProbe& p : probe(1.25)) CHECK_FALSE(p.admissible());
  // at 3/2 exactly the mixed cases survive
  int ok = 0;
  for (const CaseProbe& p : probe(1.5)) ok += p.admissible() ? 1 : 0;
  CHECK(ok == 2);
}

TEST_CASE("scan over (3, 4) contains 7/2") {
  const auto c = enumerate_2d(3.0, 4.0, 1e-4);
  CHECK(contains(c, 3.5));
  // Re (x1 + i|x2|)^{7/2} restricted to the circle satisfies the case directly
  const double l = 3.5, pi = std::numbers::pi;
  CHECK(std::abs(std::cos(l * pi)) < 1e-12);      // c(pi) = 0
  CHECK(-l * std::sin(l * pi) >= 0.0);            // c'(pi) >= 0
}

TEST_CASE("gap certificate") {
  const GapCertificate g = certify_gap();
  CHECK(g.empty);
  CHECK(g.chain_contradicts);
  CHECK(g.min_chain_factor > 1.0);
  CHECK(g.holds());
  CHECK_FALSE(certify_gap(0.99, 1.49).holds());
  CHECK_FALSE(certify_gap(1.01, 1.51).holds());
  CHECK_FALSE(certify_gap(0.99, 1.49).empty);
  CHECK_FALSE(certify_gap(1.01, 1.51).empty);
  const std::string text = to_text(g);
  CHECK(text.find("certified true") != std::string::npos);
  CHECK(text.find("admissible 0") != std::string::npos);
}

TEST_CASE("scan input checks") {
  CHECK_THROWS_AS(enumerate_2d(1.0, 2.0, 1e-2), std::invalid_argument);
  CHECK_THROWS_AS(enumerate_2d(2.0, 1.0, 1e-4), std::invalid_argument);
  CHECK_THROWS_AS(enumerate_2d(0.0, 1.0, 1e-4), std::invalid_argument);
}

TEST_CASE("admissible homogeneities satisfy the shifted Weiss identities") {
  auto b = EigenBasis::build(1, default_cutoff);
  const auto c = enumerate_2d(0.5, 4.2, 1e-4);
  for (const auto& a : c.admissible) {
    CAPTURE(a.lambda);
    const Trace trace = arc_trace(b, a.A, a.B, a.lambda);
    const double t = a.lambda - 1.5;
    const double mass = sphere_inner(trace, trace);
    const ShiftIdentities s = weiss_shift_identities(t, trace);
    CHECK(std::abs(s.shifted - t * mass) <= 1e-8);
    CHECK(std::abs(s.fixed - (1.0 + t / 3.0) * t * mass) <= 1e-8);
    CHECK(std::abs(weiss(HomogeneousFn{a.lambda, trace}, 1.5) - s.shifted) <= 1e-8);
  }
}

TEST_CASE("the 3/2 family repeats with period 2") {
  const auto c = enumerate_2d(0.5, 8.0, 1e-4);
  for (const auto& a : c.admissible) {
    if (a.endpoint != EndpointCase::free_contact && a.endpoint != EndpointCase::contact_free) continue;
    if (a.lambda + 2.0 >= 8.0) continue;
    const bool found = std::any_of(c.admissible.begin(), c.admissible.end(), [&](const auto& b) {
      return b.endpoint == a.endpoint && std::abs(b.lambda - a.lambda - 2.0) < 1e-9;
    });
    CHECK(found);
  }
}

TEST_CASE("parallel and sequential scans agree") {
  const auto a = enumerate_2d(0.5, 4.0, 1e-4, false), s = enumerate_2d(0.5, 4.0, 1e-4, true);
  REQUIRE(a.admissible.size() == s.admissible.size());
  for (std::size_t k = 0; k < a.admissible.size(); ++k) {
    CHECK(a.admissible[k].lambda == s.admissible[k].lambda);
    CHECK(a.admissible[k].endpoint == s.admissible[k].endpoint);
  }
}
