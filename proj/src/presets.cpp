#include "thinobs/presets.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <stdexcept>

#include "thinobs/epi.hpp"
#include "thinobs/homog.hpp"

namespace thinobs {

const std::vector<PresetInfo>& presets() {
  static const std::vector<PresetInfo> list = {
      {"he", "Re((x1 + i|x2|)^{3/2}), the 3/2-homogeneous solution with e = +x1"},
      {"abs-x2", "-|x2|, the 1-homogeneous solution with full contact"},
      {"harmonic-affine", "1 + x1, harmonic and positive on the equator"},
      {"random-trace", "seeded random admissible data (--seed)"},
      {"file", "trace file (--trace), extended 3/2-homogeneously for the solver"},
  };
  return list;
}

BoundaryFn random_boundary(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const double A = 1.0 + 0.5 * u(rng);
  const double shift = 0.3 * u(rng);
  const double sign = u(rng) < 0.0 ? -1.0 : 1.0;
  const double b[4] = {0.05 * u(rng), 0.1 * u(rng), 0.15 * u(rng), 0.15 * u(rng)};
  BoundaryFn g = [=](double x1, double x2) {
    const double s = sign * (x1 - shift);
    const std::complex<double> z(s, std::abs(x2));
    double v = A * HeAtom::eval({1.0, 0.0, 0.0}, 1, {s, x2, 0.0});
    std::complex<double> p = 1.0;
    for (double c : b) {
      v += c * p.real();
      p *= z;
    }
    return v;
  };
  // keep the equator corners admissible
  const double lift = std::max({0.0, -g(-1.0, 0.0), -g(1.0, 0.0)});
  if (lift == 0.0) return g;
  return [g, lift](double x1, double x2) { return g(x1, x2) + lift; };
}

BoundaryFn boundary_preset(const std::string& name, const PresetArgs& args) {
  if (name == "he") return [](double x1, double x2) { return HeAtom::eval({1.0, 0.0, 0.0}, 1, {x1, x2, 0.0}); };
  if (name == "abs-x2") return [](double, double x2) { return -std::abs(x2); };
  if (name == "harmonic-affine") return [](double x1, double) { return 1.0 + x1; };
  if (name == "random-trace") return random_boundary(args.seed);
  if (name == "file") {
    const Trace c = read_trace(args.file);
    if (c.ambient_n() != 1) throw std::invalid_argument("file preset: the solver needs an n = 1 trace");
    if (!c.admissible()) throw std::invalid_argument("file preset: trace is negative on the equator");
    return [c](double x1, double x2) {
      const double r = std::hypot(x1, x2);
      if (r == 0.0) return 0.0;
      const double v = std::pow(r, 1.5) * c.value({x1 / r, std::abs(x2) / r, 0.0});
      // resynthesis round-off on the equator
      return x2 == 0.0 ? std::max(0.0, v) : v;
    };
  }
  throw std::invalid_argument("unknown preset '" + name + "'");
}

Trace trace_preset(const std::string& name, const BasisPtr& basis, const PresetArgs& args) {
  if (name == "he") return he_trace(basis, {1.0, 0.0, 0.0});
  if (name == "abs-x2") return -1.0 * u0_trace(basis);
  if (name == "harmonic-affine") {
    std::vector<double> coeffs(basis->count_up_to(1), 0.0);
    const double n = basis->ambient_n();
    coeffs[0] = std::sqrt(n == 1 ? 2.0 * std::numbers::pi : 4.0 * std::numbers::pi);
    const Trace one = synthesize(coeffs, basis);
    // x1 on the sphere: mode 1 for n = 1 (cos t / sqrt(pi)), mode 3 for n = 2
    std::vector<double> lin(basis->count_up_to(1), 0.0);
    lin[n == 1 ? 1 : 3] = n == 1 ? std::sqrt(std::numbers::pi) : std::sqrt(4.0 * std::numbers::pi / 3.0);
    return one + synthesize(lin, basis);
  }
  if (name == "random-trace") {
    std::mt19937_64 rng(args.seed);
    return random_admissible_trace(basis, rng);
  }
  if (name == "file") {
    const Trace c = read_trace(args.file);
    if (c.ambient_n() != basis->ambient_n()) throw std::invalid_argument("file preset: trace dimension does not match --n");
    return c;
  }
  throw std::invalid_argument("unknown preset '" + name + "'");
}

}  // namespace thinobs
