#include "thinobs/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <stdexcept>

#include "thinobs/homog.hpp"

namespace thinobs {

namespace {

constexpr double pi = std::numbers::pi;
constexpr int arc_nodes = 720;
constexpr int cut_depth = 7;

void check_ball(const GridSolution& s, double x0, double r) {
  if (!(r >= min_radius_cells * s.h() * (1.0 - 1e-12)))
    throw std::invalid_argument("radius " + std::to_string(r) + " is below the reliable minimum 4h");
  if (std::abs(x0) + r > 1.0 + 1e-12 || r > 1.0)
    throw std::invalid_argument("ball of radius " + std::to_string(r) + " leaves the domain");
}

struct Cell {
  double u00, u10, u01, u11;
};

// |grad|^2 and value^2 of the bilinear interpolant at local (s, t) in [0,1]^2.
inline double grad_sq(const Cell& c, double s, double t, double inv_h) {
  const double g1 = ((1 - t) * (c.u10 - c.u00) + t * (c.u11 - c.u01)) * inv_h;
  const double g2 = ((1 - s) * (c.u01 - c.u00) + s * (c.u11 - c.u10)) * inv_h;
  return g1 * g1 + g2 * g2;
}

inline double value_sq(const Cell& c, double s, double t, double) {
  const double v = (1 - s) * (1 - t) * c.u00 + s * (1 - t) * c.u10 + (1 - s) * t * c.u01 + s * t * c.u11;
  return v * v;
}

const double gauss_pts[2] = {0.5 - 0.5 / std::sqrt(3.0), 0.5 + 0.5 / std::sqrt(3.0)};

// Integral over the part of the local square [a0,a0+w] x [b0,b0+w] (cell units)
// inside the disk; squares crossing the circle are split down to cut_depth.
template <class F>
double cut_integral(const Cell& c, double xa, double ya, double h, double r2, double a0, double b0, double w, int depth,
                    F integrand) {
  const double x0 = xa + a0 * h, x1 = xa + (a0 + w) * h, y0 = ya + b0 * h, y1 = ya + (b0 + w) * h;
  const double fx = std::max(std::abs(x0), std::abs(x1)), fy = std::max(std::abs(y0), std::abs(y1));
  const double nx = x0 <= 0.0 && x1 >= 0.0 ? 0.0 : std::min(std::abs(x0), std::abs(x1));
  const double ny = y0 <= 0.0 && y1 >= 0.0 ? 0.0 : std::min(std::abs(y0), std::abs(y1));
  if (nx * nx + ny * ny >= r2) return 0.0;
  const double inv_h = 1.0 / h;
  if (fx * fx + fy * fy <= r2) {
    double q = 0.0;
    for (double a : gauss_pts)
      for (double b : gauss_pts) q += integrand(c, a0 + a * w, b0 + b * w, inv_h);
    return 0.25 * q * w * w * h * h;
  }
  if (depth == cut_depth) {
    const double a = a0 + 0.5 * w, b = b0 + 0.5 * w;
    const double x = xa + a * h, y = ya + b * h;
    return x * x + y * y < r2 ? integrand(c, a, b, inv_h) * w * w * h * h : 0.0;
  }
  const double hw = 0.5 * w;
  return cut_integral(c, xa, ya, h, r2, a0, b0, hw, depth + 1, integrand) +
         cut_integral(c, xa, ya, h, r2, a0 + hw, b0, hw, depth + 1, integrand) +
         cut_integral(c, xa, ya, h, r2, a0, b0 + hw, hw, depth + 1, integrand) +
         cut_integral(c, xa, ya, h, r2, a0 + hw, b0 + hw, hw, depth + 1, integrand);
}

template <class F>
double row_integral(const GridSolution& s, double x0, double r, int j, int i_lo, int i_hi, F integrand) {
  const double h = s.h(), r2 = r * r;
  double sum = 0.0;
  const double ya = s.x2(j);
  for (int i = i_lo; i < i_hi; ++i) {
    const Cell c{s.at(i, j), s.at(i + 1, j), s.at(i, j + 1), s.at(i + 1, j + 1)};
    sum += cut_integral(c, s.x1(i) - x0, ya, h, r2, 0.0, 0.0, 1.0, 0, integrand);
  }
  return sum;
}

template <class F>
double ball_integral(const GridSolution& s, double x0, double r, F integrand, bool parallel) {
  check_ball(s, x0, r);
  const int i_lo = std::max(0, static_cast<int>(std::floor((x0 - r + 1.0) * s.m())));
  const int i_hi = std::min(s.nx() - 1, static_cast<int>(std::ceil((x0 + r + 1.0) * s.m())));
  const int rows = std::min(s.ny() - 1, static_cast<int>(std::ceil(r * s.m())));
  std::vector<double> per_row(rows, 0.0);
#pragma omp parallel for schedule(dynamic, 4) if (parallel)
  for (int j = 0; j < rows; ++j) per_row[j] = row_integral(s, x0, r, j, i_lo, i_hi, integrand);
  double total = 0.0;
  for (double v : per_row) total += v;
  return 2.0 * total;  // mirror half
}

void check_radii(const std::vector<double>& radii) {
  if (radii.empty()) throw std::invalid_argument("no radii given");
  for (std::size_t k = 1; k < radii.size(); ++k)
    if (!(radii[k] > radii[k - 1])) throw std::invalid_argument("radii must be increasing");
}

double checked_mass(const GridSolution& s, double x0, double r) {
  const double H = circle_mass(s, x0, r);
  if (!(H >= 1e-14)) throw std::domain_error("degenerate sphere: H(" + std::to_string(r) + ") = " + std::to_string(H));
  return H;
}

// Node gradient: centered differences, second-order one-sided in x2 on the equator.
std::array<double, 2> node_gradient(const GridSolution& s, int i, int j) {
  const double h = s.h();
  const double g1 = (s.at(i + 1, j) - s.at(i - 1, j)) / (2 * h);
  const double g2 = j == 0 ? (-3 * s.at(i, 0) + 4 * s.at(i, 1) - s.at(i, 2)) / (2 * h)
                           : (s.at(i, j + 1) - s.at(i, j - 1)) / (2 * h);
  return {g1, g2};
}

}  // namespace

double FrequencyCurve::defect() const {
  double d = 0.0;
  for (std::size_t k = 1; k < N.size(); ++k) d = std::max(d, N[k - 1] - N[k]);
  return d;
}

double HCurve::defect() const {
  double d = 0.0;
  for (std::size_t k = 1; k < values.size(); ++k) d = std::max(d, (values[k - 1] - values[k]) / values[k - 1]);
  return d;
}

double circle_mass(const GridSolution& s, double x0, double r) {
  check_ball(s, x0, r);
  double sum = 0.0;
  for (int k = 0; k < arc_nodes; ++k) {
    const double t = 2 * pi * (k + 0.5) / arc_nodes;
    const double v = s.value(std::clamp(x0 + r * std::cos(t), -1.0, 1.0), r * std::sin(t));
    sum += v * v;
  }
  return sum * 2 * pi * r / arc_nodes;
}

double ball_dirichlet(const GridSolution& s, double x0, double r) { return ball_integral(s, x0, r, grad_sq, true); }
double ball_dirichlet_serial(const GridSolution& s, double x0, double r) { return ball_integral(s, x0, r, grad_sq, false); }
double ball_mass(const GridSolution& s, double x0, double r) { return ball_integral(s, x0, r, value_sq, true); }

std::vector<double> default_radii(const GridSolution& s, double x0, int count, double r_lo) {
  const double lo = std::max(min_radius_cells * s.h(), r_lo);
  const double hi = std::min(0.9, 1.0 - std::abs(x0));
  if (!(hi > lo) || count < 2) throw std::invalid_argument("no reliable radii around x0 = " + std::to_string(x0));
  std::vector<double> radii(count);
  for (int k = 0; k < count; ++k) radii[k] = lo * std::pow(hi / lo, static_cast<double>(k) / (count - 1));
  return radii;
}

FrequencyCurve frequency(const GridSolution& s, double x0, const std::vector<double>& radii) {
  check_radii(radii);
  FrequencyCurve c;
  c.x0 = x0;
  c.radii = radii;
  for (double r : radii) {
    const double H = checked_mass(s, x0, r);
    const double D = ball_dirichlet(s, x0, r);
    c.H.push_back(H);
    c.D.push_back(D);
    c.N.push_back(r * D / H);
  }
  return c;
}

FrequencyLimit frequency_at_zero(const GridSolution& s, double x0) {
  const auto fb = free_boundary(s);
  const bool on_gamma = std::any_of(fb.begin(), fb.end(), [&](double p) { return std::abs(p - x0) <= 2 * s.h(); });
  if (!on_gamma) throw std::invalid_argument("frequency_at_zero: x0 = " + std::to_string(x0) + " is not a free boundary point");
  FrequencyLimit out;
  const double r = min_radius_cells * s.h();
  out.radii = {r, 2 * r, 4 * r};
  if (std::abs(x0) + out.radii[2] > 1.0) throw std::invalid_argument("frequency_at_zero: radii too close to the domain edge");
  const FrequencyCurve c = frequency(s, x0, {out.radii.begin(), out.radii.end()});
  std::copy(c.N.begin(), c.N.end(), out.N.begin());
  const double r1a = 2 * out.N[0] - out.N[1], r1b = 2 * out.N[1] - out.N[2];
  out.value = (4 * r1a - r1b) / 3;
  return out;
}

HCurve h_quotient(const GridSolution& s, double x0, double lambda, const std::vector<double>& radii) {
  check_radii(radii);
  HCurve c;
  c.x0 = x0;
  c.lambda = lambda;
  c.radii = radii;
  for (double r : radii) c.values.push_back(checked_mass(s, x0, r) / std::pow(r, 1.0 + 2.0 * lambda));
  return c;
}

WeissCurve weiss_curve(const GridSolution& s, double x0, double lambda, const std::vector<double>& radii) {
  check_radii(radii);
  WeissCurve c;
  c.x0 = x0;
  c.lambda = lambda;
  c.radii = radii;
  for (double r : radii)
    c.W.push_back(ball_dirichlet(s, x0, r) / std::pow(r, 2 * lambda) - lambda * circle_mass(s, x0, r) / std::pow(r, 1 + 2 * lambda));
  return c;
}

GridSolution blowup(const GridSolution& s, double x0, double r, double h_out) {
  const double H = checked_mass(s, x0, r);
  const double scale = 1.0 / std::sqrt(H / r);
  GridSolution b = GridSolution::with_spacing(h_out);
  for (int j = 0; j < b.ny(); ++j)
    for (int i = 0; i < b.nx(); ++i) b.at(i, j) = scale * s.value(std::clamp(x0 + r * b.x1(i), -1.0, 1.0), r * b.x2(j));
  const double mass = circle_mass(b, 0.0, 1.0);
  if (!(mass > 0.0)) throw std::domain_error("blowup: degenerate normalization");
  const double fix = 1.0 / std::sqrt(mass);
  for (double& v : b.u) v *= fix;
  b.tol = s.tol;
  b.update_contact();
  return b;
}

HeFit he_fit(const GridSolution& b) {
  HeFit best;
  best.residual = INFINITY;
  for (int sign : {1, -1}) {
    const Vec3 e{static_cast<double>(sign), 0.0, 0.0};
    double bh = 0.0, hh = 0.0, bb = 0.0;
    for (int j = 0; j < b.ny(); ++j)
      for (int i = 0; i < b.nx(); ++i) {
        const double x = b.x1(i), y = b.x2(j);
        if (x * x + y * y >= 1.0) continue;
        const double w = j == 0 ? 0.5 : 1.0;
        const double hv = HeAtom::eval(e, 1, {x, y, 0.0}), bv = b.at(i, j);
        bh += w * bv * hv;
        hh += w * hv * hv;
        bb += w * bv * bv;
      }
    const double C = std::max(0.0, bh / hh);
    const double res2 = std::max(0.0, bb - 2 * C * bh + C * C * hh);
    const double rel = bb > 0.0 ? std::sqrt(res2 / bb) : INFINITY;
    if (rel < best.residual) best = {C, sign, rel};
  }
  return best;
}

double growth_slope(const GridSolution& s, double x0, const std::vector<double>& radii) {
  if (radii.size() < 3) throw std::invalid_argument("growth_slope: need at least 3 radii");
  check_radii(radii);
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(radii.size());
  for (double r : radii) {
    const double x = std::log(r), y = 0.5 * std::log(ball_mass(s, x0, r));
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

HolderEstimate holder_grad(const GridSolution& s, double exponent, double radius) {
  const int m = s.m();
  const int reach = static_cast<int>(std::floor(radius * m));
  if (reach + 1 >= m || s.ny() < 3) throw std::invalid_argument("holder_grad: radius too large for the grid");
  const int ic = m;  // x1 = 0
  // gradients on the half disk
  const int w = 2 * reach + 1, hgt = reach + 1;
  std::vector<std::array<double, 2>> g(static_cast<std::size_t>(w) * hgt);
  std::vector<std::uint8_t> inside(g.size(), 0);
  for (int j = 0; j < hgt; ++j)
    for (int a = -reach; a <= reach; ++a) {
      const std::size_t k = static_cast<std::size_t>(j) * w + (a + reach);
      if (static_cast<double>(a) * a + static_cast<double>(j) * j > static_cast<double>(radius * m) * (radius * m)) continue;
      inside[k] = 1;
      g[k] = node_gradient(s, ic + a, j);
    }
  HolderEstimate best;
  for (int stride = 1; stride <= reach; stride *= 2) {
    for (int j = 0; j < hgt; ++j)
      for (int a = -reach; a <= reach; ++a) {
        const std::size_t k = static_cast<std::size_t>(j) * w + (a + reach);
        if (!inside[k]) continue;
        for (int db = 0; db <= 2; ++db)
          for (int da = -2; da <= 2; ++da) {
            if (db == 0 && da <= 0) continue;
            const int a2 = a + da * stride, j2 = j + db * stride;
            if (a2 < -reach || a2 > reach || j2 >= hgt) continue;
            const std::size_t k2 = static_cast<std::size_t>(j2) * w + (a2 + reach);
            if (!inside[k2]) continue;
            const double dist = s.h() * stride * std::hypot(da, db);
            const double dg = std::hypot(g[k][0] - g[k2][0], g[k][1] - g[k2][1]);
            const double q = dg / std::pow(dist, exponent);
            if (q > best.seminorm) best = {q, {a * s.h(), j * s.h()}, {a2 * s.h(), j2 * s.h()}};
          }
      }
  }
  return best;
}

void write_csv(const std::filesystem::path& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& columns) {
  if (header.size() != columns.size()) throw std::invalid_argument("write_csv: header/column count mismatch");
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  for (std::size_t c = 0; c < header.size(); ++c) out << (c ? "," : "") << header[c];
  out << "\n";
  const std::size_t rows = columns.empty() ? 0 : columns[0].size();
  char buf[40];
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < columns.size(); ++c) {
      std::snprintf(buf, sizeof buf, "%.17g", columns[c].at(r));
      out << (c ? "," : "") << buf;
    }
    out << "\n";
  }
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

}  // namespace thinobs
