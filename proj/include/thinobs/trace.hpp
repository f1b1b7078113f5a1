#pragma once

#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "thinobs/spharm.hpp"

namespace thinobs {

/// A closed-form even profile on the sphere that is not band-limited
/// (h_e, |x_{n+1}|, arc profiles). Atoms are smooth on each closed hemisphere;
/// any further singular points lie on the equator and are organised around
/// `axis()`, which the quadrature layer uses to pick an adapted rule.
class TraceAtom {
 public:
  virtual ~TraceAtom() = default;
  virtual int ambient_n() const = 0;
  virtual double value(const Vec3& p) const = 0;
  /// Tangential gradient at p.
  virtual Vec3 gradient(const Vec3& p) const = 0;
  virtual std::optional<Vec3> axis() const { return std::nullopt; }
  /// Stable identity: atoms with equal keys are merged in linear combinations.
  virtual std::string key() const = 0;
};

using AtomPtr = std::shared_ptr<const TraceAtom>;

struct WeightedAtom {
  double weight = 0.0;
  AtomPtr atom;
};

/// An even function on the unit sphere: a band-limited part (coefficients in
/// the basis) plus a finite combination of closed-form atoms, together with
/// its values at the basis sample nodes.
class Trace {
 public:
  explicit Trace(BasisPtr basis);

  static Trace from_coefficients(BasisPtr basis, std::span<const double> coeffs);
  static Trace from_atom(BasisPtr basis, AtomPtr atom, double weight = 1.0);
  /// Samples at every basis node (equator nodes included). The input is
  /// symmetrised across the equator (the asymmetry is kept in asymmetry()),
  /// projected onto the basis, and the stored samples are resynthesised from
  /// that projection.
  static Trace from_samples(BasisPtr basis, std::span<const double> samples);

  const BasisPtr& basis() const { return basis_; }
  int ambient_n() const { return basis_->ambient_n(); }

  std::span<const double> samples() const { return samples_; }
  std::span<const double> band() const { return band_; }
  const std::vector<WeightedAtom>& atoms() const { return atoms_; }
  bool band_limited() const { return atoms_.empty(); }
  /// Highest degree carrying a nonzero band coefficient, -1 for none.
  int band_degree() const;

  /// max |c(x) - c(x*)| of the raw input samples (0 for constructed traces).
  double asymmetry() const { return asymmetry_; }
  /// True when odd band coefficients vanish and the input was symmetric.
  bool even(double tol = 1e-12) const;

  double value(const Vec3& p) const;
  Vec3 gradient(const Vec3& p) const;

  /// Minimum over the equator sample nodes.
  double equator_min() const;
  bool admissible(double tol = 1e-10) const { return equator_min() >= -tol; }

  /// L^2 norm of the sample values against the basis rule (diagnostic only).
  double sample_norm() const;

  /// Throws unless `other` lives on a basis of the same dimension and cutoff.
  void check_same_basis(const Trace& other) const;

  Trace& operator+=(const Trace& other);
  Trace& operator-=(const Trace& other);
  Trace& operator*=(double s);

  friend Trace operator+(Trace a, const Trace& b) { return a += b; }
  friend Trace operator-(Trace a, const Trace& b) { return a -= b; }
  friend Trace operator*(double s, Trace a) { return a *= s; }
  friend Trace operator-(Trace a) { return a *= -1.0; }

 private:
  void add_atom(double weight, const AtomPtr& atom);

  BasisPtr basis_;
  std::vector<double> band_;
  std::vector<WeightedAtom> atoms_;
  std::vector<double> samples_;
  double asymmetry_ = 0.0;
};

/// Coefficients <c, phi_k> for the modes of degree <= max_degree (all modes
/// when max_degree < 0).
std::vector<double> project(const Trace& c, int max_degree = -1);
/// Trace with the given coefficients (length <= basis size, zero padded).
Trace synthesize(std::span<const double> coeffs, const BasisPtr& basis);

/// Integral over the sphere of f g.
double sphere_inner(const Trace& f, const Trace& g);
/// Integral over the sphere of grad_theta f . grad_theta g.
double sphere_dirichlet(const Trace& f, const Trace& g);

/// Gram matrices (L^2 and Dirichlet) of a family of traces, computed on one
/// shared rule. Entry (i, j) is at i * size + j.
struct FormTable {
  std::size_t size = 0;
  std::vector<double> inner;
  std::vector<double> dirichlet;
  double l2(std::size_t i, std::size_t j) const { return inner[i * size + j]; }
  double grad(std::size_t i, std::size_t j) const { return dirichlet[i * size + j]; }
};
FormTable form_table(std::span<const Trace> traces);

/// Integral of f over the equator S^{n-1} (n = 1: f(e_1) + f(-e_1)).
double equator_integral(const Trace& f);
/// Integral of f |omega . e|^{1/2} over the open equatorial half {omega . e < 0}.
double contact_integral(const Trace& f, const Vec3& e);

/// Values and gradients of a trace on an arbitrary rule.
struct SampledTrace {
  std::vector<double> values;
  std::vector<Vec3> grads;
};
SampledTrace sample_on(const Trace& f, std::span<const Vec3> nodes, bool with_gradients);

/// Rule used for bilinear forms involving the given traces.
SphereRule form_rule(std::span<const Trace* const> traces);

}  // namespace thinobs
