#include "thinobs/gapscan.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "thinobs/epi.hpp"

namespace thinobs {

namespace {

constexpr double pi = std::numbers::pi;

double sin_condition(double l) { return std::sin(l * pi); }
double cos_condition(double l) { return std::cos(l * pi); }

// c = A cos(l t) + B sin(l t) on (0, pi).
// free at 0: B = 0, A > 0.  contact at 0: A = 0, c'(0) = B l <= 0 so B < 0.
// free at pi: c'(pi) = 0.  contact at pi: c(pi) = 0 and c'(pi) >= 0.
struct CaseRule {
  EndpointCase endpoint;
  double (*condition)(double);
  double A, B;
};

const CaseRule rules[4] = {
    {EndpointCase::free_free, sin_condition, 1.0, 0.0},
    {EndpointCase::free_contact, cos_condition, 1.0, 0.0},
    {EndpointCase::contact_free, cos_condition, 0.0, -1.0},
    {EndpointCase::contact_contact, sin_condition, 0.0, -1.0},
};

// Sign screens at pi for the surviving endpoint condition.
bool screen(const CaseRule& rule, double l) {
  const double c = rule.A * std::cos(l * pi) + rule.B * std::sin(l * pi);
  const double dc = l * (-rule.A * std::sin(l * pi) + rule.B * std::cos(l * pi));
  switch (rule.endpoint) {
    case EndpointCase::free_free:
    case EndpointCase::contact_free:
      return c >= 0.0;  // value at a free point
    case EndpointCase::free_contact:
    case EndpointCase::contact_contact:
      return dc >= 0.0;  // slope at a contact point
  }
  return false;
}

double bisect(double (*f)(double), double a, double b) {
  double fa = f(a);
  // bisect until the bracket stops shrinking (well below root_tol)
  while (true) {
    const double m = 0.5 * (a + b);
    if (m <= a || m >= b) break;
    const double fm = f(m);
    if (fm == 0.0) return m;
    if ((fm < 0.0) == (fa < 0.0)) {
      a = m;
      fa = fm;
    } else {
      b = m;
    }
  }
  return 0.5 * (a + b);
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

std::string case_label(EndpointCase c) {
  switch (c) {
    case EndpointCase::free_free: return "free/free";
    case EndpointCase::free_contact: return "free/contact";
    case EndpointCase::contact_free: return "contact/free";
    case EndpointCase::contact_contact: return "contact/contact";
  }
  return "?";
}

std::vector<CaseProbe> probe(double lambda) {
  std::vector<CaseProbe> out;
  for (const CaseRule& r : rules) out.push_back({r.endpoint, r.condition(lambda), screen(r, lambda)});
  return out;
}

HomogeneityCertificate enumerate_2d(double lambda_min, double lambda_max, double step, bool sequential) {
  if (!(lambda_min > 0.0 && lambda_max > lambda_min)) throw std::invalid_argument("enumerate_2d: need 0 < lambda_min < lambda_max");
  if (!(step > 0.0 && step <= 1e-3)) throw std::invalid_argument("enumerate_2d: step must lie in (0, 1e-3] to bracket roots");
  HomogeneityCertificate cert{lambda_min, lambda_max, step, {}};
  const long cells = static_cast<long>(std::ceil((lambda_max - lambda_min) / step));
  std::vector<std::vector<AdmissibleHomogeneity>> found(cells);
#pragma omp parallel for schedule(static) if (!sequential)
  for (long k = 0; k < cells; ++k) {
    const double a = lambda_min + k * step;
    const double b = std::min(lambda_max, a + step);
    for (const CaseRule& rule : rules) {
      const double fa = rule.condition(a), fb = rule.condition(b);
      // half-open brackets [a, b) so shared grid points are counted once
      if (fb == 0.0 || (fa < 0.0) == (fb < 0.0)) {
        if (fa != 0.0) continue;
      }
      const double l = fa == 0.0 ? a : bisect(rule.condition, a, b);
      if (!(l > lambda_min && l < lambda_max)) continue;
      if (!screen(rule, l)) continue;
      const double res = std::abs(rule.condition(l));
      if (res > 1e-8) continue;
      found[k].push_back({l, rule.endpoint, res, rule.A, rule.B});
    }
  }
  for (const auto& f : found) cert.admissible.insert(cert.admissible.end(), f.begin(), f.end());
  std::stable_sort(cert.admissible.begin(), cert.admissible.end(),
                   [](const auto& x, const auto& y) { return x.lambda < y.lambda - 1e-9; });
  return cert;
}

GapCertificate certify_gap(double lo, double hi, double step, bool sequential) {
  GapCertificate g;
  g.scan = enumerate_2d(lo, hi, step, sequential);
  g.empty = g.scan.admissible.empty();
  g.chain_contradicts = true;
  g.min_chain_factor = INFINITY;
  const long probes = static_cast<long>(std::floor((hi - lo) / step));
  for (long k = 1; k < probes; ++k) {
    const double t = lo + k * step - 1.5;
    if (!(t < 0.0)) continue;
    const GapChain c = gap_chain(t, 1);
    g.min_chain_factor = std::min(g.min_chain_factor, c.factor);
    g.chain_contradicts = g.chain_contradicts && c.contradiction;
  }
  return g;
}

std::string to_text(const GapCertificate& g) {
  std::ostringstream out;
  out << "gap-certificate\n";
  out << "range " << fmt(g.scan.lambda_min) << " " << fmt(g.scan.lambda_max) << "\n";
  out << "step " << fmt(g.scan.step) << "\n";
  out << "admissible " << g.scan.admissible.size() << "\n";
  for (const auto& a : g.scan.admissible)
    out << "lambda " << fmt(a.lambda) << " case " << case_label(a.endpoint) << " residual " << fmt(a.residual) << "\n";
  out << "chain-min-factor " << fmt(g.min_chain_factor) << "\n";
  out << "chain-contradiction " << (g.chain_contradicts ? "true" : "false") << "\n";
  out << "certified " << (g.holds() ? "true" : "false") << "\n";
  return out.str();
}

}  // namespace thinobs
