#include "thinobs/signorini.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <string>

namespace thinobs {

namespace {

constexpr double contact_threshold = 10.0 * std::numeric_limits<double>::epsilon();

void set_boundary(GridSolution& s, const BoundaryFn& g) {
  const int nx = s.nx(), ny = s.ny();
  for (int j = 0; j < ny; ++j) {
    s.at(0, j) = g(-1.0, s.x2(j));
    s.at(nx - 1, j) = g(1.0, s.x2(j));
  }
  for (int i = 0; i < nx; ++i) s.at(i, ny - 1) = g(s.x1(i), 1.0);
  for (int i : {0, nx - 1})
    if (!(s.at(i, 0) >= 0.0)) throw std::invalid_argument("solve: boundary data must be nonnegative at (+-1, 0)");
  for (double v : {s.at(0, ny - 1), s.at(nx - 1, ny - 1)})
    if (!std::isfinite(v)) throw std::invalid_argument("solve: boundary data is not finite");
}

// Bilinear prolongation from spacing 2h, clamped to the constraint on the equator.
void prolongate(const GridSolution& coarse, GridSolution& fine) {
  for (int j = 1; j < fine.ny() - 1; ++j)
    for (int i = 1; i < fine.nx() - 1; ++i) fine.at(i, j) = coarse.value(fine.x1(i), fine.x2(j));
  for (int i = 1; i < fine.nx() - 1; ++i) fine.at(i, 0) = std::max(0.0, coarse.value(fine.x1(i), 0.0));
}

inline double relax_interior(double* row, const double* below, const double* above, int i, double omega) {
  const double gs = 0.25 * (row[i - 1] + row[i + 1] + below[i] + above[i]);
  return row[i] + omega * (gs - row[i]);
}

inline double relax_equator(const double* row, const double* above, int i, double omega) {
  const double gs = 0.25 * (row[i - 1] + row[i + 1] + 2.0 * above[i]);
  return std::max(0.0, row[i] + omega * (gs - row[i]));
}

struct RowDefect {
  double harmonic = 0.0, comp = 0.0, sign = 0.0, min_eq = INFINITY;
};

RowDefect row_defect(const GridSolution& s, int j) {
  RowDefect r;
  const int nx = s.nx();
  const double* row = &s.u[static_cast<std::size_t>(j) * nx];
  const double* above = row + nx;
  if (j == 0) {
    r.min_eq = std::min(row[0], row[nx - 1]);
    for (int i = 1; i < nx - 1; ++i) {
      const double defect = row[i - 1] + row[i + 1] + 2.0 * above[i] - 4.0 * row[i];
      const double d = defect / (2.0 * s.h());
      if (row[i] > contact_threshold) r.harmonic = std::max(r.harmonic, std::abs(defect));
      r.comp = std::max(r.comp, std::abs(row[i] * d));
      r.sign = std::max(r.sign, d);
      r.min_eq = std::min(r.min_eq, row[i]);
    }
  } else {
    const double* below = row - nx;
    for (int i = 1; i < nx - 1; ++i)
      r.harmonic = std::max(r.harmonic, std::abs(row[i - 1] + row[i + 1] + below[i] + above[i] - 4.0 * row[i]));
  }
  return r;
}

Residuals combine(const std::vector<RowDefect>& rows) {
  Residuals out;
  out.min_equator = rows[0].min_eq;
  for (const RowDefect& r : rows) {
    out.harmonic = std::max(out.harmonic, r.harmonic);
    out.complementarity = std::max(out.complementarity, r.comp);
    out.sign = std::max(out.sign, r.sign);
  }
  return out;
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

GridSolution::GridSolution(int m) : m_(m), h_(1.0 / m) {
  if (m < 2) throw std::invalid_argument("GridSolution: need at least 2 intervals per unit length");
  u.assign(static_cast<std::size_t>(nx()) * ny(), 0.0);
  contact.assign(nx(), 0);
}

GridSolution GridSolution::with_spacing(double h) {
  if (!(h > 0.0)) throw std::invalid_argument("grid spacing must be positive");
  const double m = std::round(1.0 / h);
  if (std::abs(m * h - 1.0) > 1e-12) throw std::invalid_argument("grid spacing must be 1/m for an integer m");
  return GridSolution(static_cast<int>(m));
}

double GridSolution::value(double x1, double x2) const {
  x2 = std::abs(x2);
  if (x1 < -1.0 - 1e-12 || x1 > 1.0 + 1e-12 || x2 > 1.0 + 1e-12) throw std::out_of_range("GridSolution::value: point outside the domain");
  const double a = std::clamp((x1 + 1.0) * m_, 0.0, 2.0 * m_);
  const double b = std::clamp(x2 * m_, 0.0, static_cast<double>(m_));
  const int i = std::min(static_cast<int>(a), nx() - 2);
  const int j = std::min(static_cast<int>(b), ny() - 2);
  const double s = a - i, t = b - j;
  return (1 - s) * (1 - t) * at(i, j) + s * (1 - t) * at(i + 1, j) + (1 - s) * t * at(i, j + 1) + s * t * at(i + 1, j + 1);
}

std::array<double, 2> GridSolution::interp_gradient(double x1, double x2) const {
  const double sgn = x2 < 0.0 ? -1.0 : 1.0;
  x2 = std::abs(x2);
  const double a = std::clamp((x1 + 1.0) * m_, 0.0, 2.0 * m_);
  const double b = std::clamp(x2 * m_, 0.0, static_cast<double>(m_));
  const int i = std::min(static_cast<int>(a), nx() - 2);
  const int j = std::min(static_cast<int>(b), ny() - 2);
  const double s = a - i, t = b - j;
  const double u00 = at(i, j), u10 = at(i + 1, j), u01 = at(i, j + 1), u11 = at(i + 1, j + 1);
  const double g1 = ((1 - t) * (u10 - u00) + t * (u11 - u01)) * m_;
  const double g2 = ((1 - s) * (u01 - u00) + s * (u11 - u10)) * m_;
  return {g1, sgn * g2};
}

void GridSolution::update_contact() {
  for (int i = 0; i < nx(); ++i) contact[i] = at(i, 0) <= contact_threshold ? 1 : 0;
}

double default_omega(double h) { return 2.0 / (1.0 + std::sin(std::numbers::pi * h / 2.0)); }

namespace kernels {

void sweep_lexicographic(GridSolution& s, double omega) {
  const int nx = s.nx(), ny = s.ny();
  double* u = s.u.data();
  for (int i = 1; i < nx - 1; ++i) u[i] = relax_equator(u, u + nx, i, omega);
  for (int j = 1; j < ny - 1; ++j) {
    double* row = u + static_cast<std::size_t>(j) * nx;
    for (int i = 1; i < nx - 1; ++i) row[i] = relax_interior(row, row - nx, row + nx, i, omega);
  }
}

void sweep_red_black(GridSolution& s, double omega) {
  const int nx = s.nx(), ny = s.ny();
  double* u = s.u.data();
  for (int color = 0; color < 2; ++color) {
#pragma omp parallel for schedule(static)
    for (int j = 0; j < ny - 1; ++j) {
      double* row = u + static_cast<std::size_t>(j) * nx;
      const int start = 1 + (j + 1 + color) % 2;
      if (j == 0) {
        for (int i = start; i < nx - 1; i += 2) row[i] = relax_equator(row, row + nx, i, omega);
      } else {
        for (int i = start; i < nx - 1; i += 2) row[i] = relax_interior(row, row - nx, row + nx, i, omega);
      }
    }
  }
}

}  // namespace kernels

Residuals residuals(const GridSolution& s) {
  std::vector<RowDefect> rows(s.ny() - 1);
  for (int j = 0; j < s.ny() - 1; ++j) rows[j] = row_defect(s, j);
  return combine(rows);
}

Residuals residuals_parallel(const GridSolution& s) {
  std::vector<RowDefect> rows(s.ny() - 1);
#pragma omp parallel for schedule(static)
  for (int j = 0; j < s.ny() - 1; ++j) rows[j] = row_defect(s, j);
  return combine(rows);
}

std::vector<double> normal_derivative(const GridSolution& s) {
  const int nx = s.nx();
  std::vector<double> d(nx, 0.0);
  for (int i = 1; i < nx - 1; ++i)
    d[i] = (s.at(i - 1, 0) + s.at(i + 1, 0) + 2.0 * s.at(i, 1) - 4.0 * s.at(i, 0)) / (2.0 * s.h());
  return d;
}

double dirichlet_energy(const GridSolution& s) {
  // Trapezoid weights: edges along the equator (shared with the mirror half)
  // and along the outer boundary count 1/2.
  const int nx = s.nx(), ny = s.ny();
  std::vector<double> rows(ny, 0.0);
#pragma omp parallel for schedule(static)
  for (int j = 0; j < ny; ++j) {
    double e = 0.0;
    const double wr = j == 0 || j == ny - 1 ? 0.5 : 1.0;
    for (int i = 0; i + 1 < nx; ++i) {
      const double d = s.at(i + 1, j) - s.at(i, j);
      e += wr * d * d;
    }
    if (j + 1 < ny)
      for (int i = 0; i < nx; ++i) {
        const double d = s.at(i, j + 1) - s.at(i, j);
        e += (i == 0 || i == nx - 1 ? 0.5 : 1.0) * d * d;
      }
    rows[j] = e;
  }
  double total = 0.0;
  for (double e : rows) total += e;
  return 2.0 * total;
}

GridSolution solve(const BoundaryFn& g, const SolveOptions& opt) {
  if (!(opt.tol > 0.0)) throw std::invalid_argument("solve: tol must be positive");
  if (opt.max_sweeps < 1) throw std::invalid_argument("solve: max_sweeps must be positive");
  GridSolution s = GridSolution::with_spacing(opt.h);
  const double omega = opt.omega == 0.0 ? default_omega(s.h()) : opt.omega;
  if (!(omega > 0.0 && omega < 2.0)) throw std::invalid_argument("solve: omega must lie in (0, 2)");
  s.tol = opt.tol;
  set_boundary(s, g);
  if (opt.nested && s.m() % 2 == 0 && s.m() >= 32) {
    SolveOptions coarse_opt = opt;
    coarse_opt.h = 2.0 * s.h();
    coarse_opt.omega = opt.omega;
    coarse_opt.track_energy = false;
    prolongate(solve(g, coarse_opt), s);
  }

  const auto sweep = opt.order == SweepOrder::lexicographic ? kernels::sweep_lexicographic : kernels::sweep_red_black;
  const auto measure = opt.order == SweepOrder::lexicographic ? residuals : residuals_parallel;
  if (opt.track_energy) s.energy_history.push_back(dirichlet_energy(s));
  s.residual = measure(s).max();
  while (s.residual > opt.tol && s.sweeps < opt.max_sweeps) {
    sweep(s, omega);
    ++s.sweeps;
    if (opt.track_energy) s.energy_history.push_back(dirichlet_energy(s));
    if (s.sweeps % opt.check_every == 0 || s.sweeps == opt.max_sweeps) s.residual = measure(s).max();
  }
  s.converged = s.residual <= opt.tol;
  s.update_contact();
  return s;
}

GridSolution from_function(const BoundaryFn& f, double h, double tol) {
  GridSolution s = GridSolution::with_spacing(h);
  for (int j = 0; j < s.ny(); ++j)
    for (int i = 0; i < s.nx(); ++i) s.at(i, j) = f(s.x1(i), s.x2(j));
  s.tol = tol;
  s.residual = residuals(s).max();
  s.converged = s.residual <= tol;
  s.update_contact();
  return s;
}

std::vector<double> free_boundary(const GridSolution& s) {
  std::vector<double> out;
  const int nx = s.nx();
  // interior equator nodes only: the corners carry boundary data
  for (int i = 1; i + 2 < nx; ++i) {
    if (s.contact[i] == s.contact[i + 1]) continue;
    // u ~ dist^{3/2} near a regular free boundary point, so u^{2/3} is close to linear
    const int c = s.contact[i] ? i : i + 1;
    const int f = s.contact[i] ? i + 1 : i;
    const int f2 = f + (f - c);
    double x = 0.5 * (s.x1(c) + s.x1(f));
    if (f2 >= 0 && f2 < nx && !s.contact[f2]) {
      const double v1 = std::cbrt(s.at(f, 0) * s.at(f, 0)), v2 = std::cbrt(s.at(f2, 0) * s.at(f2, 0));
      if (v2 != v1) {
        const double root = s.x1(f) - v1 * (s.x1(f2) - s.x1(f)) / (v2 - v1);
        const double lo = std::min(s.x1(c), s.x1(f)), hi = std::max(s.x1(c), s.x1(f));
        x = std::clamp(root, lo, hi);
      }
    }
    out.push_back(x);
  }
  return out;
}

void write_grid(const std::filesystem::path& path, const GridSolution& s) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << "thinobs-grid h=" << fmt(s.h()) << " nx=" << s.nx() << " ny=" << s.ny() << " tol=" << fmt(s.tol)
      << " sweeps=" << s.sweeps << " residual=" << fmt(s.residual) << " converged=" << (s.converged ? 1 : 0) << "\n";
  out.write(reinterpret_cast<const char*>(s.u.data()), static_cast<std::streamsize>(s.u.size() * sizeof(double)));
  out.write(reinterpret_cast<const char*>(s.contact.data()), static_cast<std::streamsize>(s.contact.size()));
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

GridSolution read_grid(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::string header;
  std::getline(in, header);
  std::istringstream hs(header);
  std::string magic, field;
  hs >> magic;
  if (magic != "thinobs-grid") throw std::runtime_error(path.string() + ": not a grid file");
  double h = 0.0, tol = 0.0, residual = 0.0;
  long sweeps = 0;
  int nx = 0, ny = 0, converged = 0;
  while (hs >> field) {
    const auto eq = field.find('=');
    if (eq == std::string::npos) throw std::runtime_error(path.string() + ": bad header field " + field);
    const std::string key = field.substr(0, eq), val = field.substr(eq + 1);
    if (key == "h") h = std::stod(val);
    else if (key == "nx") nx = std::stoi(val);
    else if (key == "ny") ny = std::stoi(val);
    else if (key == "tol") tol = std::stod(val);
    else if (key == "sweeps") sweeps = std::stol(val);
    else if (key == "residual") residual = std::stod(val);
    else if (key == "converged") converged = std::stoi(val);
  }
  GridSolution s = GridSolution::with_spacing(h);
  if (s.nx() != nx || s.ny() != ny) throw std::runtime_error(path.string() + ": grid shape does not match h");
  in.read(reinterpret_cast<char*>(s.u.data()), static_cast<std::streamsize>(s.u.size() * sizeof(double)));
  in.read(reinterpret_cast<char*>(s.contact.data()), static_cast<std::streamsize>(s.contact.size()));
  if (!in) throw std::runtime_error(path.string() + ": truncated grid file");
  s.tol = tol;
  s.sweeps = sweeps;
  s.residual = residual;
  s.converged = converged != 0;
  return s;
}

}  // namespace thinobs
