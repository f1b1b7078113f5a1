#pragma once

#include <array>
#include <filesystem>
#include <string>
#include <vector>

#include "thinobs/signorini.hpp"

namespace thinobs {

/// Centers live on the equator: x0 = (x0, 0).
struct FrequencyCurve {
  double x0 = 0.0;
  std::vector<double> radii, N, D, H;
  /// max over consecutive radii of N(r_k) - N(r_{k+1}), clipped at 0.
  double defect() const;
};

struct HCurve {
  double x0 = 0.0;
  double lambda = 0.0;
  std::vector<double> radii, values;  // H(r)/r^{1+2 lambda}
  /// max over consecutive radii of (earlier - later)/earlier, clipped at 0.
  double defect() const;
};

struct WeissCurve {
  double x0 = 0.0;
  double lambda = 0.0;
  std::vector<double> radii, W;  // D(r)/r^{2 lambda} - lambda H(r)/r^{1+2 lambda}
};

/// Diagnostics refuse radii below this multiple of h.
constexpr double min_radius_cells = 4.0;

/// H(r) = int over the circle of radius r about (x0, 0) of u^2, from 720 arc nodes.
double circle_mass(const GridSolution& s, double x0, double r);
/// D(r) = int over the disk of |grad u|^2 for the even extension, using the
/// bilinear interpolant: 2x2 Gauss points on cells inside the disk, cells cut
/// by the circle split by quadtree to depth 7 with midpoint leaves.
double ball_dirichlet(const GridSolution& s, double x0, double r);
double ball_dirichlet_serial(const GridSolution& s, double x0, double r);
/// int over the disk of u^2, same quadrature.
double ball_mass(const GridSolution& s, double x0, double r);

/// Dyadic-ish geometric radii from max(4h, r_lo) to min(0.9, 1 - |x0|).
std::vector<double> default_radii(const GridSolution& s, double x0, int count = 12, double r_lo = 0.0);

FrequencyCurve frequency(const GridSolution& s, double x0, const std::vector<double>& radii);

struct FrequencyLimit {
  double value = 0.0;
  std::array<double, 3> radii{}, N{};
};
/// Richardson extrapolation (orders 1 and 2) over N at 4h, 8h, 16h. Requires
/// x0 within 2h of a free boundary point of s.
FrequencyLimit frequency_at_zero(const GridSolution& s, double x0);

HCurve h_quotient(const GridSolution& s, double x0, double lambda, const std::vector<double>& radii);
WeissCurve weiss_curve(const GridSolution& s, double x0, double lambda, const std::vector<double>& radii);

/// u_r(x) = u(x0 + r x)/(H(r)/r)^{1/2} sampled on a unit half-grid with spacing
/// h_out, then rescaled so the circle mass of the output is 1.
GridSolution blowup(const GridSolution& s, double x0, double r, double h_out = 1.0 / 128);

struct HeFit {
  double C = 0.0;
  int e_sign = 1;  // e = e_sign * x1
  double residual = 0.0;  // relative L2 over nodes with |x| < 1
};
HeFit he_fit(const GridSolution& b);

/// Least-squares slope of log |u|_{L2(B_r)} against log r; requires >= 3 radii.
double growth_slope(const GridSolution& s, double x0, const std::vector<double>& radii);

struct HolderEstimate {
  double seminorm = 0.0;
  std::array<double, 2> x{}, y{};
};
/// max |grad u(x) - grad u(y)|/|x - y|^exponent over node pairs in the half
/// disk of radius `radius` about the origin. Pairs are offsets (a s, b s) with
/// |a|, |b| <= 2 for strides s = 1, 2, 4, ...; gradients by centered differences,
/// second-order one-sided in x2 on the equator row.
HolderEstimate holder_grad(const GridSolution& s, double exponent = 0.5, double radius = 0.5);

/// CSV with a header row; every value printed with 17 significant digits.
void write_csv(const std::filesystem::path& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& columns);

}  // namespace thinobs
