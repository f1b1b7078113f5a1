#include "thinobs/epi.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace thinobs {

namespace {

constexpr double pi = std::numbers::pi;

// The degree-1 part of a projection written as v . x'.
Vec3 degree_one_vector(int n, const std::vector<double>& a) {
  if (n == 1) return {a[1] / std::sqrt(pi), 0.0, 0.0};
  const double s = std::sqrt(3.0 / (4.0 * pi));
  return {s * a[3], s * a[1], 0.0};
}

double weiss_form(double alpha, double beta, int n, double inner, double dirichlet) {
  return mixed_dirichlet(alpha, beta, n, inner, dirichlet) - 1.5 * inner;
}

bool is_zero(const Trace& t) {
  if (!t.atoms().empty()) return false;
  for (double c : t.band())
    if (c != 0.0) return false;
  return true;
}

Trace drop_odd(const Trace& c) {
  std::vector<double> band(c.band().begin(), c.band().end());
  for (std::size_t k = 0; k < band.size(); ++k)
    if (c.basis()->mode(k).parity == Parity::odd) band[k] = 0.0;
  Trace out = Trace::from_coefficients(c.basis(), band);
  for (const auto& wa : c.atoms()) out += Trace::from_atom(c.basis(), wa.atom, wa.weight);
  return out;
}

}  // namespace

double default_epsilon(int n) { return 1.0 / (2.0 * n + 3.0); }

Decomposition decompose(const Trace& input, bool symmetrize) {
  Trace c = input;
  if (!c.even()) {
    if (!symmetrize) throw std::invalid_argument("decompose: trace is not even across the equator");
    c = drop_odd(c);
  }
  if (!c.admissible(1e-10)) throw std::invalid_argument("decompose: trace is negative on the equator");

  const int n = c.ambient_n();
  const BasisPtr& basis = c.basis();
  Decomposition d{n, {1.0, 0.0, 0.0}, 0.0, 0.0, c};
  const Vec3 v = degree_one_vector(n, project(c, 1));
  const double vn = norm(v);
  Trace rest = c;
  if (vn > 1e-13) {
    d.e = {v[0] / vn, v[1] / vn, 0.0};
    const Trace he = he_trace(basis, d.e);
    // h_e projects onto degree one as kappa (x'.e) with kappa > 0
    const double kappa = dot(degree_one_vector(n, project(he, 1)), d.e);
    d.C = vn / kappa;
    rest -= d.C * he;
  }
  const Trace u0 = u0_trace(basis);
  d.c0 = project(rest, 0)[0] / project(u0, 0)[0];
  d.phi = rest;
  if (d.c0 != 0.0) d.phi -= d.c0 * u0;
  return d;
}

Trace reconstruct(const Decomposition& d) {
  Trace c = d.phi;
  if (d.C != 0.0) c += d.C * he_trace(d.phi.basis(), d.e);
  if (d.c0 != 0.0) c += d.c0 * u0_trace(d.phi.basis());
  return c;
}

PiecewiseHomogeneousFn competitor(const Decomposition& d) {
  PiecewiseHomogeneousFn z;
  const BasisPtr& basis = d.phi.basis();
  if (d.C != 0.0) z.add(1.5, d.C * he_trace(basis, d.e));
  if (d.c0 != 0.0) z.add(1.0, d.c0 * u0_trace(basis));
  if (!is_zero(d.phi)) z.add(1.5, d.phi);
  if (z.empty()) z.add(1.5, d.phi);
  return z;
}

EpiReport check(const Decomposition& d, const Trace& c, std::optional<double> eps_override) {
  const int n = d.n;
  EpiReport r;
  r.n = n;
  r.eps = eps_override.value_or(default_epsilon(n));
  const double eps = r.eps;
  r.W_z = weiss(HomogeneousFn{1.5, c}, 1.5);
  r.W_zeta = weiss(competitor(d), 1.5);

  const BasisPtr& basis = c.basis();
  const Trace forms_in[2] = {u0_trace(basis), d.phi};
  const FormTable t = form_table(forms_in);
  const double uu = t.l2(0, 0), du = t.grad(0, 0);
  r.I = d.c0 * d.c0 * (weiss_form(1.0, 1.0, n, uu, du) - (1.0 + eps) * weiss_form(1.5, 1.5, n, uu, du));
  r.J = -eps * (t.grad(1, 1) - lambda_of(1.5, n) * t.l2(1, 1)) / (n + 2.0);
  const double up = t.l2(0, 1), dp = t.grad(0, 1);
  r.K = 2.0 * d.c0 * (weiss_form(1.0, 1.5, n, up, dp) - (1.0 + eps) * weiss_form(1.5, 1.5, n, up, dp));
  r.L = d.C == 0.0 ? 0.0 : -6.0 * d.C * eps / (n + 2.0) * contact_integral(d.phi, d.e);

  const double gap = r.W_zeta - (1.0 + eps) * r.W_z;
  r.passed = gap <= 1e-9;
  r.equality = std::abs(gap) <= 1e-9;
  return r;
}

EpiReport check(const Trace& c, std::optional<double> eps, bool symmetrize) {
  const Decomposition d = decompose(c, symmetrize);
  return check(d, reconstruct(d), eps);
}

bool equality_case(const EpiReport& r, const Decomposition& d) {
  if (!r.equality) return false;
  const Trace one[1] = {d.phi};
  const double phi_norm = std::sqrt(std::max(0.0, form_table(one).l2(0, 0)));
  if (phi_norm > 1e-6)
    throw std::logic_error("equality in the epiperimetric inequality with phi of norm " + std::to_string(phi_norm));
  return true;
}

GapChain gap_chain(double t, int n) {
  if (!(t < 0.0)) throw std::invalid_argument("gap_chain: t must be negative");
  GapChain g;
  g.factor = (1.0 + default_epsilon(n)) * (1.0 + t / (n + 2.0));
  g.contradiction = g.factor > 1.0 + 1e-15;
  g.below_half = t <= -0.5;
  return g;
}

GapChain gap_chain(double t, const Trace& c) {
  const int n = c.ambient_n();
  GapChain g = gap_chain(t, n);
  const ShiftIdentities s = weiss_shift_identities(t, c);
  g.lhs = s.shifted;
  g.rhs = (1.0 + default_epsilon(n)) * s.fixed;
  return g;
}

Trace random_admissible_trace(const BasisPtr& basis, std::mt19937_64& rng, int max_degree) {
  const int n = basis->ambient_n();
  std::normal_distribution<double> gauss;
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<double> coeffs(basis->count_up_to(max_degree), 0.0);
  const double tail = 0.2 + unit(rng);
  for (std::size_t k = 1; k < coeffs.size(); ++k) {
    const EigenMode& m = basis->mode(k);
    if (m.parity == Parity::odd) continue;
    coeffs[k] = (m.degree == 1 ? 1.5 : tail) * gauss(rng) / m.degree;
  }
  Trace c = synthesize(coeffs, basis);
  // lift the constant mode until the equator minimum is a small random margin
  double lowest = c.equator_min();
  const int samples = n == 1 ? 2 : 720;
  for (int i = 0; i < samples; ++i) {
    const double psi = (n == 1 ? pi : 2.0 * pi / samples) * i;
    lowest = std::min(lowest, c.value({std::cos(psi), std::sin(psi), 0.0}));
  }
  const double margin = unit(rng) < 0.3 ? 0.0 : 0.3 * unit(rng);
  coeffs[0] = (margin - lowest) * std::sqrt(n == 1 ? 2.0 * pi : 4.0 * pi);
  return synthesize(coeffs, basis);
}

std::vector<EpiReport> check_random(int n, int cases, std::uint64_t seed, bool sequential, int cutoff) {
  const BasisPtr basis = EigenBasis::build(n, cutoff);
  std::mt19937_64 rng(seed);
  std::vector<Trace> traces;
  traces.reserve(cases);
  for (int i = 0; i < cases; ++i) traces.push_back(random_admissible_trace(basis, rng));
  std::vector<EpiReport> reports(cases);
#pragma omp parallel for schedule(dynamic) if (!sequential)
  for (int i = 0; i < cases; ++i) reports[i] = check(traces[i]);
  return reports;
}

}  // namespace thinobs
