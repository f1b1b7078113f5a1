#include <filesystem>
#include <fstream>
#include <random>

#include "doctest.h"
#include "thinobs/homog.hpp"
#include "thinobs/presets.hpp"
#include "thinobs/signorini.hpp"

using namespace thinobs;

namespace {

double sup_error(const GridSolution& s, const BoundaryFn& f) {
  double e = 0.0;
  for (int j = 0; j < s.ny(); ++j)
    for (int i = 0; i < s.nx(); ++i) e = std::max(e, std::abs(s.at(i, j) - f(s.x1(i), s.x2(j))));
  return e;
}

double he(double x1, double x2) { return HeAtom::eval({1.0, 0.0, 0.0}, 1, {x1, x2, 0.0}); }

SolveOptions opts(int m, double tol = 1e-10) {
  SolveOptions o;
  o.h = 1.0 / m;
  o.tol = tol;
  return o;
}

}  // namespace

TEST_CASE("affine data: constraint inactive") {
  const auto g = boundary_preset("harmonic-affine");
  const GridSolution s = solve(g, opts(64));
  CHECK(s.converged);
  CHECK(sup_error(s, g) < 1e-9);
  for (int i = 0; i < s.nx(); ++i) CHECK(s.contact[i] == (i == 0 ? 1 : 0));
  // u vanishes only at the data corner (-1, 0), which is not part of the equator segment
  CHECK(free_boundary(s).empty());
  CHECK(dirichlet_energy(s) == doctest::Approx(4.0).epsilon(1e-9));
}

TEST_CASE("-|x2| data: full contact, exact on the grid") {
  const auto g = boundary_preset("abs-x2");
  const GridSolution s = solve(g, opts(64));
  CHECK(s.converged);
  CHECK(sup_error(s, g) <= 1e-10);
  for (auto c : s.contact) CHECK(c == 1);
  CHECK(free_boundary(s).empty());
  const auto d = normal_derivative(s);
  for (int i = 1; i < s.nx() - 1; ++i) CHECK(d[i] == doctest::Approx(-1.0).epsilon(1e-9));
  CHECK(dirichlet_energy(s) == doctest::Approx(4.0).epsilon(1e-9));
}

TEST_CASE("h_e data: refinement, contact set and free boundary") {
  double prev = 0.0;
  for (int m : {64, 128, 256}) {
    const GridSolution s = solve(he, opts(m));
    CAPTURE(m);
    REQUIRE(s.converged);
    const double err = sup_error(s, he);
    if (prev > 0.0) CHECK(prev / err >= 2.0);
    prev = err;
    const Residuals r = residuals(s);
    CHECK(r.harmonic <= 1e-10);
    CHECK(r.complementarity <= 1e-10);
    CHECK(r.sign <= 1e-10);
    CHECK(r.min_equator >= 0.0);
    for (int i = 0; i < s.nx(); ++i) {
      const double x = s.x1(i);
      if (x <= 0.0) CHECK(s.contact[i] == 1);
      if (x > 2 * s.h()) CHECK(s.contact[i] == 0);
    }
    const auto fb = free_boundary(s);
    REQUIRE(fb.size() == 1);
    CHECK(std::abs(fb[0]) <= 2 * s.h());
  }
  CHECK(prev <= 5e-3);
}

TEST_CASE("unconverged runs are flagged") {
  SolveOptions o = opts(64);
  o.max_sweeps = 1;
  o.nested = false;
  const GridSolution s = solve(he, o);
  CHECK_FALSE(s.converged);
  CHECK(s.sweeps == 1);
  CHECK(s.residual > o.tol);
  CHECK(residuals(s).max() == s.residual);
}

TEST_CASE("energy is non-increasing per sweep") {
  for (SweepOrder order : {SweepOrder::lexicographic, SweepOrder::red_black})
    for (std::uint64_t seed : {3u, 4u}) {
      SolveOptions o = opts(32);
      o.order = order;
      o.track_energy = true;
      o.nested = false;
      const GridSolution s = solve(random_boundary(seed), o);
      REQUIRE(s.energy_history.size() == static_cast<std::size_t>(s.sweeps) + 1);
      for (std::size_t k = 1; k < s.energy_history.size(); ++k)
        CHECK(s.energy_history[k] <= s.energy_history[k - 1] * (1.0 + 1e-14));
    }
}

TEST_CASE("red-black and lexicographic sweeps reach the same minimizer") {
  const auto g = random_boundary(11);
  SolveOptions a = opts(64, 1e-12), b = a;
  b.order = SweepOrder::red_black;
  const GridSolution sa = solve(g, a), sb = solve(g, b);
  REQUIRE(sa.converged);
  REQUIRE(sb.converged);
  double diff = 0.0;
  for (std::size_t k = 0; k < sa.u.size(); ++k) diff = std::max(diff, std::abs(sa.u[k] - sb.u[k]));
  CHECK(diff < 1e-8);
  CHECK(sa.contact == sb.contact);
  const Residuals ra = residuals(sa), rp = residuals_parallel(sa);
  CHECK(ra.harmonic == rp.harmonic);
  CHECK(ra.complementarity == rp.complementarity);
  CHECK(ra.sign == rp.sign);
}

TEST_CASE("comparison: larger data gives a larger solution") {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int pair = 0; pair < 5; ++pair) {
    const auto g1 = random_boundary(100 + pair);
    const double c = 0.2 * u(rng), k = 1.0 + 4.0 * u(rng), p = 6.0 * u(rng);
    const BoundaryFn g2 = [=](double x1, double x2) { return g1(x1, x2) + c * (1.0 + std::sin(k * x1 + p) * std::cos(k * x2)); };
    const GridSolution s1 = solve(g1, opts(32, 1e-12)), s2 = solve(g2, opts(32, 1e-12));
    for (std::size_t i = 0; i < s1.u.size(); ++i) CHECK(s2.u[i] >= s1.u[i] - 1e-10);
  }
}

TEST_CASE("bad input") {
  CHECK_THROWS_AS(GridSolution::with_spacing(0.3), std::invalid_argument);
  CHECK_THROWS_AS(solve([](double, double) { return -1.0; }, opts(16)), std::invalid_argument);
  SolveOptions o = opts(16);
  o.omega = 2.0;
  CHECK_THROWS_AS(solve(he, o), std::invalid_argument);
  o = opts(16);
  o.tol = 0.0;
  CHECK_THROWS_AS(solve(he, o), std::invalid_argument);
}

TEST_CASE("closed-form grids and interpolation") {
  const GridSolution s = from_function(he, 1.0 / 64);
  // samples of the continuum solution are not a discrete minimizer
  CHECK_FALSE(s.converged);
  CHECK(s.residual == residuals(s).max());
  CHECK(from_function(boundary_preset("abs-x2"), 1.0 / 64).converged);
  CHECK(s.value(0.25, 0.5) == doctest::Approx(he(0.25, 0.5)).epsilon(1e-3));
  CHECK(s.value(0.25, -0.5) == s.value(0.25, 0.5));
  CHECK(s.value(s.x1(70), s.x2(9)) == s.at(70, 9));
  CHECK_THROWS_AS(s.value(1.5, 0.0), std::out_of_range);
  const auto g = s.interp_gradient(0.3, -0.2);
  const auto gp = s.interp_gradient(0.3, 0.2);
  CHECK(g[0] == gp[0]);
  CHECK(g[1] == -gp[1]);
}

TEST_CASE("grid files round-trip") {
  const auto dir = std::filesystem::temp_directory_path() / "thinobs_grid_io";
  std::filesystem::create_directories(dir);
  const GridSolution s = solve(random_boundary(5), opts(32));
  write_grid(dir / "u.grid", s);
  const GridSolution t = read_grid(dir / "u.grid");
  CHECK(t.u == s.u);
  CHECK(t.contact == s.contact);
  CHECK(t.sweeps == s.sweeps);
  CHECK(t.tol == s.tol);
  CHECK(t.residual == s.residual);
  CHECK(t.converged == s.converged);
  CHECK(t.h() == s.h());
  {
    std::ofstream bad(dir / "bad.grid");
    bad << "thinobs-grid h=0.03125 nx=5 ny=33\n";
  }
  CHECK_THROWS(read_grid(dir / "bad.grid"));
}
