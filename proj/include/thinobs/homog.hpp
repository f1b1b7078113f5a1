#pragma once

#include <filesystem>
#include <utility>
#include <vector>

#include "thinobs/trace.hpp"

namespace thinobs {

/// Re((x'.e + i|x_{n+1}|)^{3/2}) restricted to the sphere.
class HeAtom final : public TraceAtom {
 public:
  HeAtom(int n, const Vec3& e);
  int ambient_n() const override { return n_; }
  double value(const Vec3& p) const override;
  Vec3 gradient(const Vec3& p) const override;
  std::optional<Vec3> axis() const override { return e_; }
  std::string key() const override;
  const Vec3& direction() const { return e_; }

  /// Value and gradient of the 3/2-homogeneous function at any point of R^{n+1}.
  static double eval(const Vec3& e, int n, const Vec3& x);
  static Vec3 grad(const Vec3& e, int n, const Vec3& x);

 private:
  int n_;
  Vec3 e_;
};

/// |x_{n+1}| restricted to the sphere.
class AbsNormalAtom final : public TraceAtom {
 public:
  explicit AbsNormalAtom(int n) : n_(n) {}
  int ambient_n() const override { return n_; }
  double value(const Vec3& p) const override;
  Vec3 gradient(const Vec3& p) const override;
  std::string key() const override { return "abs-normal"; }

 private:
  int n_;
};

/// n = 1 profile A cos(l t) + B sin(l t) for t in [0, pi], reflected evenly.
class ArcAtom final : public TraceAtom {
 public:
  ArcAtom(double a, double b, double l) : a_(a), b_(b), l_(l) {}
  int ambient_n() const override { return 1; }
  double value(const Vec3& p) const override;
  Vec3 gradient(const Vec3& p) const override;
  std::string key() const override;

 private:
  double a_, b_, l_;
};

Trace he_trace(const BasisPtr& basis, const Vec3& e);
Trace u0_trace(const BasisPtr& basis);
Trace arc_trace(const BasisPtr& basis, double a, double b, double l);

/// r^alpha c(theta).
struct HomogeneousFn {
  double alpha = 0.0;
  Trace trace;
  double value(const Vec3& x) const;
};

/// Finite sum of homogeneous terms with distinct homogeneities.
class PiecewiseHomogeneousFn {
 public:
  PiecewiseHomogeneousFn() = default;
  explicit PiecewiseHomogeneousFn(std::vector<HomogeneousFn> terms);

  /// Adds a term, merging with an existing term of equal homogeneity.
  void add(double alpha, const Trace& trace);
  const std::vector<HomogeneousFn>& terms() const { return terms_; }
  bool empty() const { return terms_.empty(); }
  int ambient_n() const;

  /// Restriction to the unit sphere.
  Trace boundary_trace() const;
  double value(const Vec3& x) const;

  PiecewiseHomogeneousFn& operator*=(double s);

 private:
  std::vector<HomogeneousFn> terms_;
};

/// Integral over B_1 of grad(r^alpha f) . grad(r^beta g).
double mixed_dirichlet(double alpha, const Trace& f, double beta, const Trace& g);
/// Same, from precomputed sphere integrals <f,g> and <grad f, grad g>.
double mixed_dirichlet(double alpha, double beta, int n, double inner, double dirichlet);

/// Weiss energy W_lambda at radius 1.
double weiss(const PiecewiseHomogeneousFn& pw, double lambda);
double weiss(const HomogeneousFn& fn, double lambda);

/// W_{3/2}(r^{3/2} c) in eigen-coordinates, (1/(n+2)) sum (lambda_k - lambda(3/2)) c_k^2.
/// Traces carrying closed-form atoms use the completed series
/// (<grad c, grad c> - lambda(3/2) <c, c>) / (n+2).
double weiss_spectral(const Trace& c);

/// Relative residual of the eigen-relation |grad c|^2 = lambda(3/2 + t) |c|^2.
double eigen_residual(double t, const Trace& c);

struct ShiftIdentities {
  double shifted = 0.0;  // W_{3/2}(r^{3/2+t} c) = t |c|^2
  double fixed = 0.0;    // W_{3/2}(r^{3/2} c) = (1 + t/(n+2)) t |c|^2
};
/// Closed forms for the Weiss energies of a (3/2+t)-homogeneous solution
/// trace. Throws std::invalid_argument if c fails the eigen-relation to 1e-6
/// or is negative on the equator.
ShiftIdentities weiss_shift_identities(double t, const Trace& c);

/// Almgren quotient r D(r) / H(r) of a homogeneous function, with the radial
/// integrals done in closed form.
double almgren_quotient(const HomogeneousFn& fn, double r);

/// Trace files: header "ambient_n,K", then one row per basis node with the
/// node angle(s), quadrature weight and value.
void write_trace(const std::filesystem::path& path, const Trace& c);
Trace read_trace(const std::filesystem::path& path);

/// Manifest: one "term alpha=<a> trace=<file>" line per term; trace files are
/// written next to the manifest.
void write_manifest(const std::filesystem::path& path, const PiecewiseHomogeneousFn& pw);
PiecewiseHomogeneousFn read_manifest(const std::filesystem::path& path);

}  // namespace thinobs
