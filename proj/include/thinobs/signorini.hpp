#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <limits>
#include <vector>

namespace thinobs {

/// Boundary data g(x1, x2) on the outer boundary of the half-square.
using BoundaryFn = std::function<double(double x1, double x2)>;

/// Node values on [-1,1] x [0,1] with spacing h = 1/m; row j = 0 is the
/// equator, where the even reflection across x2 = 0 is built into the stencil.
class GridSolution {
 public:
  explicit GridSolution(int m);
  static GridSolution with_spacing(double h);

  int m() const { return m_; }
  double h() const { return h_; }
  int nx() const { return 2 * m_ + 1; }
  int ny() const { return m_ + 1; }
  double x1(int i) const { return -1.0 + i * h_; }
  double x2(int j) const { return j * h_; }

  double& at(int i, int j) { return u[static_cast<std::size_t>(j) * nx() + i]; }
  double at(int i, int j) const { return u[static_cast<std::size_t>(j) * nx() + i]; }

  /// Bilinear interpolation, with x2 reflected to |x2|.
  double value(double x1, double x2) const;
  /// Gradient of the bilinear interpolant (x2 reflected, d/dx2 sign-corrected).
  std::array<double, 2> interp_gradient(double x1, double x2) const;

  /// Contact iff u <= 10 machine epsilon.
  void update_contact();

  std::vector<double> u;
  std::vector<std::uint8_t> contact;  // equator row
  double tol = 1e-10;
  long sweeps = 0;
  double residual = std::numeric_limits<double>::infinity();
  bool converged = false;
  std::vector<double> energy_history;

 private:
  int m_;
  double h_;
};

enum class SweepOrder { lexicographic, red_black };

struct SolveOptions {
  double h = 1.0 / 256;
  double tol = 1e-10;
  long max_sweeps = 200000;
  /// 0 selects 2/(1 + sin(pi h/2)).
  double omega = 0.0;
  SweepOrder order = SweepOrder::lexicographic;
  /// Start from the interpolated solution on the grid with spacing 2h.
  bool nested = true;
  bool track_energy = false;
  int check_every = 10;
};

double default_omega(double h);

/// Projected SOR for the thin obstacle problem with data g. Stops once
/// max(residuals) <= tol; otherwise returns with converged = false.
GridSolution solve(const BoundaryFn& g, const SolveOptions& opt = {});

/// Samples f at every node (closed-form references).
GridSolution from_function(const BoundaryFn& f, double h, double tol = 1e-10);

/// Interior equator points where the contact mask changes state; the crossing is placed
/// by linear interpolation of u^{2/3} between the bracketing free nodes.
std::vector<double> free_boundary(const GridSolution& s);

struct Residuals {
  double harmonic = 0.0;         // max |stencil sum - 4u| over non-contact nodes
  double complementarity = 0.0;  // max |u d| over equator nodes
  double sign = 0.0;             // max(0, d) over equator nodes
  double min_equator = 0.0;
  double max() const { return std::max({harmonic, complementarity, sign}); }
};

/// d_i = (u_{i-1,0} + u_{i+1,0} + 2u_{i,1} - 4u_{i,0})/(2h), the discrete
/// one-sided derivative in x2 carried by the equator.
std::vector<double> normal_derivative(const GridSolution& s);
Residuals residuals(const GridSolution& s);
Residuals residuals_parallel(const GridSolution& s);

/// Discrete Dirichlet energy of the even extension on [-1,1]^2.
double dirichlet_energy(const GridSolution& s);

void write_grid(const std::filesystem::path& path, const GridSolution& s);
GridSolution read_grid(const std::filesystem::path& path);

namespace kernels {
/// One relaxation pass over the free nodes.
void sweep_lexicographic(GridSolution& s, double omega);
void sweep_red_black(GridSolution& s, double omega);
}  // namespace kernels

}  // namespace thinobs
