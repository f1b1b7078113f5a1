#include "thinobs/homog.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace thinobs {

namespace {

constexpr double pi = std::numbers::pi;

Vec3 tangential(const Vec3& g, const Vec3& p) {
  const double gp = dot(g, p);
  return {g[0] - gp * p[0], g[1] - gp * p[1], g[2] - gp * p[2]};
}

std::string fmt(double v, int digits = 17) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return buf;
}

}  // namespace

HeAtom::HeAtom(int n, const Vec3& e) : n_(n), e_(e) {
  if (n != 1 && n != 2) throw std::invalid_argument("he_trace: unsupported n");
  if (std::abs(e[normal_axis(n)]) > 1e-12 || std::abs(norm(e) - 1.0) > 1e-12 || (n == 1 && e[1] != 0.0))
    throw std::invalid_argument("he_trace: e must be a unit vector in the equatorial plane");
}

double HeAtom::eval(const Vec3& e, int n, const Vec3& x) {
  // Re (s + iy)^{3/2} = sqrt((rho + s)/2) (2s - rho), exactly zero for y = 0, s <= 0
  const double s = dot(x, e);
  const double rho = std::hypot(s, x[normal_axis(n)]);
  return std::sqrt(std::max(0.0, 0.5 * (rho + s))) * (2.0 * s - rho);
}

Vec3 HeAtom::grad(const Vec3& e, int n, const Vec3& x) {
  const int ax = normal_axis(n);
  const std::complex<double> z(dot(x, e), std::abs(x[ax]));
  if (z == 0.0) return {0.0, 0.0, 0.0};
  // d/ds Re z^{3/2} = Re(3/2 z^{1/2}), d/dy = Re(3i/2 z^{1/2})
  const std::complex<double> w = 1.5 * std::sqrt(z);
  const double ds = w.real();
  const double dy = -w.imag() * (x[ax] < 0.0 ? -1.0 : 1.0);
  Vec3 g{ds * e[0], ds * e[1], ds * e[2]};
  g[ax] += dy;
  return g;
}

double HeAtom::value(const Vec3& p) const { return eval(e_, n_, p); }

Vec3 HeAtom::gradient(const Vec3& p) const { return tangential(grad(e_, n_, p), p); }

std::string HeAtom::key() const {
  // axes closer than ~1e-13 are treated as equal
  return "he:" + fmt(e_[0], 13) + "," + fmt(e_[1], 13) + "," + fmt(e_[2], 13);
}

double AbsNormalAtom::value(const Vec3& p) const { return std::abs(p[normal_axis(n_)]); }

Vec3 AbsNormalAtom::gradient(const Vec3& p) const {
  const int ax = normal_axis(n_);
  Vec3 g{0.0, 0.0, 0.0};
  g[ax] = p[ax] < 0.0 ? -1.0 : 1.0;
  return tangential(g, p);
}

double ArcAtom::value(const Vec3& p) const {
  const double t = std::atan2(std::abs(p[1]), p[0]);
  return a_ * std::cos(l_ * t) + b_ * std::sin(l_ * t);
}

Vec3 ArcAtom::gradient(const Vec3& p) const {
  const double t = std::atan2(p[1], p[0]);
  const double th = std::abs(t);
  const double dc = l_ * (-a_ * std::sin(l_ * th) + b_ * std::cos(l_ * th));
  const double d = (t < 0.0 ? -1.0 : 1.0) * dc;
  return {-d * std::sin(t), d * std::cos(t), 0.0};
}

std::string ArcAtom::key() const { return "arc:" + fmt(a_) + "," + fmt(b_) + "," + fmt(l_); }

Trace he_trace(const BasisPtr& basis, const Vec3& e) {
  return Trace::from_atom(basis, std::make_shared<HeAtom>(basis->ambient_n(), e));
}

Trace u0_trace(const BasisPtr& basis) {
  return Trace::from_atom(basis, std::make_shared<AbsNormalAtom>(basis->ambient_n()));
}

Trace arc_trace(const BasisPtr& basis, double a, double b, double l) {
  if (basis->ambient_n() != 1) throw std::invalid_argument("arc_trace: only n = 1");
  return Trace::from_atom(basis, std::make_shared<ArcAtom>(a, b, l));
}

double HomogeneousFn::value(const Vec3& x) const {
  const double r = norm(x);
  if (r == 0.0) return 0.0;
  return std::pow(r, alpha) * trace.value({x[0] / r, x[1] / r, x[2] / r});
}

PiecewiseHomogeneousFn::PiecewiseHomogeneousFn(std::vector<HomogeneousFn> terms) {
  for (auto& t : terms) add(t.alpha, t.trace);
}

void PiecewiseHomogeneousFn::add(double alpha, const Trace& trace) {
  if (alpha < 0.0) throw std::invalid_argument("homogeneity must be nonnegative");
  if (!terms_.empty()) terms_.front().trace.check_same_basis(trace);
  for (auto& t : terms_)
    if (t.alpha == alpha) {
      t.trace += trace;
      return;
    }
  terms_.push_back({alpha, trace});
}

int PiecewiseHomogeneousFn::ambient_n() const {
  if (terms_.empty()) throw std::logic_error("empty piecewise-homogeneous function");
  return terms_.front().trace.ambient_n();
}

Trace PiecewiseHomogeneousFn::boundary_trace() const {
  if (terms_.empty()) throw std::logic_error("empty piecewise-homogeneous function");
  Trace sum(terms_.front().trace.basis());
  for (const auto& t : terms_) sum += t.trace;
  return sum;
}

double PiecewiseHomogeneousFn::value(const Vec3& x) const {
  double v = 0.0;
  for (const auto& t : terms_) v += t.value(x);
  return v;
}

PiecewiseHomogeneousFn& PiecewiseHomogeneousFn::operator*=(double s) {
  for (auto& t : terms_) t.trace *= s;
  return *this;
}

double mixed_dirichlet(double alpha, double beta, int n, double inner, double dirichlet) {
  const double denom = alpha + beta + n - 1.0;
  if (!(denom > 0.0)) throw std::invalid_argument("mixed_dirichlet: alpha + beta + n - 1 must be positive");
  return (alpha * beta * inner + dirichlet) / denom;
}

double mixed_dirichlet(double alpha, const Trace& f, double beta, const Trace& g) {
  f.check_same_basis(g);
  const Trace pair[2] = {f, g};
  const FormTable table = form_table(pair);
  return mixed_dirichlet(alpha, beta, f.ambient_n(), table.l2(0, 1), table.grad(0, 1));
}

double weiss(const PiecewiseHomogeneousFn& pw, double lambda) {
  if (pw.empty()) return 0.0;
  const int n = pw.ambient_n();
  std::vector<Trace> traces;
  for (const auto& t : pw.terms()) traces.push_back(t.trace);
  const FormTable table = form_table(traces);
  double energy = 0.0, mass = 0.0;
  for (std::size_t i = 0; i < traces.size(); ++i)
    for (std::size_t j = 0; j < traces.size(); ++j) {
      const double ai = pw.terms()[i].alpha, aj = pw.terms()[j].alpha;
      energy += mixed_dirichlet(ai, aj, n, table.l2(i, j), table.grad(i, j));
      mass += table.l2(i, j);
    }
  return energy - lambda * mass;
}

double weiss(const HomogeneousFn& fn, double lambda) { return weiss(PiecewiseHomogeneousFn({fn}), lambda); }

double weiss_spectral(const Trace& c) {
  const int n = c.ambient_n();
  const double l32 = lambda_of(1.5, n);
  if (c.band_limited()) {
    const auto band = c.band();
    double sum = 0.0;
    for (std::size_t k = 0; k < band.size(); ++k) sum += (c.basis()->mode(k).eigenvalue - l32) * band[k] * band[k];
    return sum / (n + 2.0);
  }
  const Trace one[1] = {c};
  const FormTable table = form_table(one);
  return (table.grad(0, 0) - l32 * table.l2(0, 0)) / (n + 2.0);
}

double eigen_residual(double t, const Trace& c) {
  const Trace one[1] = {c};
  const FormTable table = form_table(one);
  const double lam = lambda_of(1.5 + t, c.ambient_n());
  return std::abs(table.grad(0, 0) - lam * table.l2(0, 0)) / std::max(1.0, table.l2(0, 0));
}

ShiftIdentities weiss_shift_identities(double t, const Trace& c) {
  if (1.5 + t < 0.0) throw std::invalid_argument("weiss_shift_identities: negative homogeneity");
  if (eigen_residual(t, c) > 1e-6)
    throw std::invalid_argument("weiss_shift_identities: trace is not an eigenfunction for lambda(3/2+t)");
  if (!c.admissible()) throw std::invalid_argument("weiss_shift_identities: trace is negative on the equator");
  const int n = c.ambient_n();
  const double mass = sphere_inner(c, c);
  return {t * mass, (1.0 + t / (n + 2.0)) * t * mass};
}

double almgren_quotient(const HomogeneousFn& fn, double r) {
  if (!(r > 0.0)) throw std::invalid_argument("almgren_quotient: radius must be positive");
  const int n = fn.trace.ambient_n();
  const Trace one[1] = {fn.trace};
  const FormTable table = form_table(one);
  const double a = fn.alpha;
  const double mass = table.l2(0, 0);
  if (mass < 1e-300) throw std::invalid_argument("almgren_quotient: zero trace");
  // D(r) = r^{2a+n-1} D(1), H(r) = r^{2a+n} H(1)
  const double d = std::pow(r, 2 * a + n - 1) * mixed_dirichlet(a, a, n, mass, table.grad(0, 0));
  const double h = std::pow(r, 2 * a + n) * mass;
  return r * d / h;
}

void write_trace(const std::filesystem::path& path, const Trace& c) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  const auto& rule = c.basis()->rule();
  const int n = c.ambient_n();
  out << n << "," << c.basis()->cutoff_degree() << "\n";
  const auto samples = c.samples();
  for (std::size_t i = 0; i < rule.size(); ++i) {
    const Vec3& p = rule.nodes[i];
    if (n == 1)
      out << fmt(std::atan2(p[1], p[0]));
    else
      out << fmt(std::acos(std::clamp(p[2], -1.0, 1.0))) << "," << fmt(std::atan2(p[1], p[0]));
    out << "," << fmt(rule.weights[i]) << "," << fmt(samples[i]) << "\n";
  }
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

Trace read_trace(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::string line;
  std::getline(in, line);
  int n = 0, K = 0;
  char comma = 0;
  std::istringstream header(line);
  if (!(header >> n >> comma >> K) || comma != ',') throw std::runtime_error(path.string() + ": bad header");
  const BasisPtr basis = EigenBasis::build(n, K);
  const auto& rule = basis->rule();
  std::vector<double> samples;
  samples.reserve(rule.size());
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<double> cols;
    std::istringstream row(line);
    std::string cell;
    while (std::getline(row, cell, ',')) cols.push_back(std::stod(cell));
    const std::size_t want = n == 1 ? 3 : 4;
    if (cols.size() != want) throw std::runtime_error(path.string() + ": bad row '" + line + "'");
    const std::size_t i = samples.size();
    if (i >= rule.size()) throw std::runtime_error(path.string() + ": too many rows");
    const Vec3& p = rule.nodes[i];
    Vec3 q;
    if (n == 1)
      q = {std::cos(cols[0]), std::sin(cols[0]), 0.0};
    else
      q = {std::sin(cols[0]) * std::cos(cols[1]), std::sin(cols[0]) * std::sin(cols[1]), std::cos(cols[0])};
    const Vec3 diff{p[0] - q[0], p[1] - q[1], p[2] - q[2]};
    if (norm(diff) > 1e-9) throw std::runtime_error(path.string() + ": node " + std::to_string(i) + " does not match the basis rule");
    samples.push_back(cols.back());
  }
  if (samples.size() != rule.size()) throw std::runtime_error(path.string() + ": expected " + std::to_string(rule.size()) + " rows");
  return Trace::from_samples(basis, samples);
}

void write_manifest(const std::filesystem::path& path, const PiecewiseHomogeneousFn& pw) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  const std::string stem = path.stem().string();
  for (std::size_t i = 0; i < pw.terms().size(); ++i) {
    const std::string name = stem + "_term" + std::to_string(i) + ".csv";
    write_trace(path.parent_path() / name, pw.terms()[i].trace);
    out << "term alpha=" << fmt(pw.terms()[i].alpha) << " trace=" << name << "\n";
  }
}

PiecewiseHomogeneousFn read_manifest(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  PiecewiseHomogeneousFn pw;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream row(line);
    std::string tag, a, t;
    row >> tag >> a >> t;
    if (tag != "term" || a.rfind("alpha=", 0) != 0 || t.rfind("trace=", 0) != 0)
      throw std::runtime_error(path.string() + ": bad manifest line '" + line + "'");
    pw.add(std::stod(a.substr(6)), read_trace(path.parent_path() / t.substr(6)));
  }
  return pw;
}

}  // namespace thinobs
