#pragma once

#include <cmath>
#include <string>
#include <vector>

namespace thinobs {

/// Endpoint behaviour on the upper half-circle: the equator point at theta = 0
/// (x1 > 0) and at theta = pi (x1 < 0) is either free (c' = 0, c >= 0) or
/// contact (c = 0 with the one-sided slope sign-constrained).
enum class EndpointCase { free_free, free_contact, contact_free, contact_contact };

std::string case_label(EndpointCase c);

struct AdmissibleHomogeneity {
  double lambda = 0.0;
  EndpointCase endpoint = EndpointCase::free_free;
  double residual = 0.0;  // |transcendental condition| at the polished root
  /// Angular profile c(t) = A cos(lambda t) + B sin(lambda t), t in [0, pi].
  double A = 0.0, B = 0.0;
};

struct HomogeneityCertificate {
  double lambda_min = 0.0, lambda_max = 0.0, step = 0.0;
  std::vector<AdmissibleHomogeneity> admissible;  // sorted by lambda, then case
};

/// Per-case verdict at one lambda, for probes.
struct CaseProbe {
  EndpointCase endpoint;
  double condition = 0.0;  // sin(lambda pi) or cos(lambda pi)
  bool sign_ok = false;
  bool admissible(double tol = 1e-8) const { return sign_ok && std::abs(condition) <= tol; }
};
std::vector<CaseProbe> probe(double lambda);

/// Scans (lambda_min, lambda_max) with the given step, brackets the roots of
/// sin(lambda pi) and cos(lambda pi), bisects to full precision and keeps the cases whose
/// sign screens hold. Throws std::invalid_argument for step > 1e-3 or an empty range.
HomogeneityCertificate enumerate_2d(double lambda_min, double lambda_max, double step = 1e-4, bool sequential = false);

struct GapCertificate {
  HomogeneityCertificate scan;
  bool empty = false;             // no admissible lambda in the range
  bool chain_contradicts = false;  // the scalar chain factor exceeds 1 at every probe
  double min_chain_factor = 0.0;
  bool holds() const { return empty && chain_contradicts; }
};

/// Scan of (lo, hi), plus the chain factor at t = lambda - 3/2 over the scan grid.
GapCertificate certify_gap(double lo = 1.01, double hi = 1.49, double step = 1e-4, bool sequential = false);

/// Structured text with the admissible list and per-case residuals.
std::string to_text(const GapCertificate& g);

}  // namespace thinobs
