#pragma once

#include <optional>
#include <random>
#include <vector>

#include "thinobs/homog.hpp"

namespace thinobs {

/// c = C h_e + c0 u_0 + phi with phi orthogonal to degrees 0 and 1.
struct Decomposition {
  int n = 1;
  Vec3 e{1.0, 0.0, 0.0};
  double C = 0.0;
  double c0 = 0.0;
  Trace phi;
};

struct EpiReport {
  int n = 1;
  double eps = 0.0;
  double W_z = 0.0;
  double W_zeta = 0.0;
  double I = 0.0, J = 0.0, K = 0.0, L = 0.0;
  bool passed = false;
  bool equality = false;
  /// W_zeta - (1+eps) W_z - (I+J+K+L).
  double ledger_residual() const { return W_zeta - (1.0 + eps) * W_z - (I + J + K + L); }
};

/// 1/(2n+3).
double default_epsilon(int n);

/// Throws std::invalid_argument for non-even traces (unless `symmetrize`,
/// which drops the odd part) and for traces below -1e-10 on the equator.
Decomposition decompose(const Trace& c, bool symmetrize = false);
Trace reconstruct(const Decomposition& d);

/// zeta = C r^{3/2} h_e + c0 r u_0 + r^{3/2} phi, with equal homogeneities merged
/// and vanishing terms dropped.
PiecewiseHomogeneousFn competitor(const Decomposition& d);

/// W(zeta) against (1+eps) W(z) for z = r^{3/2} c, with the I/J/K/L ledger.
/// `eps` defaults to 1/(2n+3); overriding it is only meant for sharpness probes.
EpiReport check(const Trace& c, std::optional<double> eps = std::nullopt, bool symmetrize = false);
EpiReport check(const Decomposition& d, const Trace& c, std::optional<double> eps = std::nullopt);

/// True iff |W_zeta - (1+eps) W_z| <= 1e-9. Throws std::logic_error when the
/// equality holds while |phi| > 1e-6.
bool equality_case(const EpiReport& r, const Decomposition& d);

struct GapChain {
  double lhs = 0.0;     // W_{3/2}(r^{3/2+t} c) = t |c|^2
  double rhs = 0.0;     // (1+eps)(1+t/(n+2)) t |c|^2
  double factor = 0.0;  // (1+eps)(1+t/(n+2))
  bool contradiction = false;  // factor > 1: no such solution exists
  bool below_half = false;     // t <= -1/2
};

/// The scalar part of the chain for homogeneity 3/2 + t in dimension n.
GapChain gap_chain(double t, int n);
/// Full chain for a (3/2+t)-homogeneous solution trace; t must be negative.
GapChain gap_chain(double t, const Trace& c);

/// Random even band-limited trace, nonnegative on the equator.
Trace random_admissible_trace(const BasisPtr& basis, std::mt19937_64& rng, int max_degree = 6);

/// Runs check() on `cases` random admissible traces drawn from `seed`.
/// Traces are drawn sequentially; the checks run in parallel unless `sequential`.
std::vector<EpiReport> check_random(int n, int cases, std::uint64_t seed, bool sequential = false,
                                    int cutoff = default_cutoff);

}  // namespace thinobs
