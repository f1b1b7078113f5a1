#include "thinobs/spharm.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace thinobs {

namespace {

constexpr double pi = std::numbers::pi;

void evaluate_circle(const Vec3& p, int max_degree, std::span<double> values, std::span<Vec3> grads) {
  const double t = std::atan2(p[1], p[0]);
  const Vec3 tangent{-std::sin(t), std::cos(t), 0.0};
  const double c0 = 1.0 / std::sqrt(2.0 * pi);
  const double c1 = 1.0 / std::sqrt(pi);
  values[0] = c0;
  if (!grads.empty()) grads[0] = {0.0, 0.0, 0.0};
  for (int d = 1; d <= max_degree; ++d) {
    const double cd = std::cos(d * t), sd = std::sin(d * t);
    values[2 * d - 1] = c1 * cd;
    values[2 * d] = c1 * sd;
    if (!grads.empty()) {
      const double gc = -c1 * d * sd, gs = c1 * d * cd;
      grads[2 * d - 1] = {gc * tangent[0], gc * tangent[1], 0.0};
      grads[2 * d] = {gs * tangent[0], gs * tangent[1], 0.0};
    }
  }
}

// Real spherical harmonics up to degree L. p_bar is the associated Legendre
// function scaled by sqrt((2l+1)(l-m)!/(l+m)!); t_bar = p_bar / sin(polar) for
// m >= 1, obtained from the same recurrence with a seed one power of sin lower.
void evaluate_sphere(const Vec3& p, int L, std::span<double> values, std::span<Vec3> grads) {
  const double x = std::clamp(p[2], -1.0, 1.0);
  const double s = std::hypot(p[0], p[1]);
  const double psi = std::atan2(p[1], p[0]);
  const double cpsi = std::cos(psi), spsi = std::sin(psi);
  const Vec3 e_polar{x * cpsi, x * spsi, -s};
  const Vec3 e_azim{-spsi, cpsi, 0.0};
  const bool want_grad = !grads.empty();

  const int stride = L + 2;
  std::vector<double> pb(stride * stride, 0.0), tb(stride * stride, 0.0);
  auto at = [stride](int l, int m) { return l * stride + m; };

  double amm = 1.0, tmm = 1.0;
  for (int m = 0; m <= L; ++m) {
    if (m > 0) {
      const double f = std::sqrt((2.0 * m - 1.0) / (2.0 * m));
      amm *= f * s;
      tmm = (m == 1) ? f : tmm * f * s;
    }
    pb[at(m, m)] = std::sqrt(2.0 * m + 1.0) * amm;
    tb[at(m, m)] = (m > 0) ? std::sqrt(2.0 * m + 1.0) * tmm : 0.0;
    for (int l = m + 1; l <= L + 1; ++l) {
      const double a = std::sqrt((4.0 * l * l - 1.0) / (double(l) * l - double(m) * m));
      const double b = (l - 1 > m) ? std::sqrt(((l - 1.0) * (l - 1.0) - double(m) * m) /
                                               (4.0 * (l - 1.0) * (l - 1.0) - 1.0))
                                   : 0.0;
      const double p2 = (l - 2 >= m) ? pb[at(l - 2, m)] : 0.0;
      const double t2 = (l - 2 >= m) ? tb[at(l - 2, m)] : 0.0;
      pb[at(l, m)] = a * (x * pb[at(l - 1, m)] - b * p2);
      tb[at(l, m)] = a * (x * tb[at(l - 1, m)] - b * t2);
    }
  }
  const double norm0 = 1.0 / std::sqrt(4.0 * pi);
  const double norm1 = std::sqrt(2.0) * norm0;
  for (int l = 0; l <= L; ++l) {
    for (int m = -l; m <= l; ++m) {
      const int am = std::abs(m);
      const std::size_t k = static_cast<std::size_t>(l * l + l + m);
      const double pv = pb[at(l, am)];
      if (m == 0) {
        values[k] = norm0 * pv;
        if (want_grad) {
          const double dp = (l == 0) ? 0.0 : -std::sqrt(double(l) * (l + 1)) * pb[at(l, 1)];
          grads[k] = {norm0 * dp * e_polar[0], norm0 * dp * e_polar[1], norm0 * dp * e_polar[2]};
        }
        continue;
      }
      const double trig = (m > 0) ? std::cos(am * psi) : std::sin(am * psi);
      values[k] = norm1 * pv * trig;
      if (want_grad) {
        const double tl1 = (l - 1 >= am) ? tb[at(l - 1, am)] : 0.0;
        const double dp = l * x * tb[at(l, am)] -
                          std::sqrt((2.0 * l + 1.0) / (2.0 * l - 1.0) * (l - am) * (l + am)) * tl1;
        const double dtrig = (m > 0) ? -am * std::sin(am * psi) : am * std::cos(am * psi);
        const double gp = norm1 * dp * trig;
        const double ga = norm1 * tb[at(l, am)] * dtrig;
        grads[k] = {gp * e_polar[0] + ga * e_azim[0], gp * e_polar[1] + ga * e_azim[1],
                    gp * e_polar[2] + ga * e_azim[2]};
      }
    }
  }
}

}  // namespace

double lambda_of(double alpha, int n) { return alpha * (alpha + n - 1.0); }

std::shared_ptr<const EigenBasis> EigenBasis::build(int n, int cutoff_degree) {
  if (n != 1 && n != 2) throw std::invalid_argument("EigenBasis: unsupported ambient n = " + std::to_string(n));
  if (cutoff_degree < 2) throw std::invalid_argument("EigenBasis: cutoff degree must be at least 2");

  std::shared_ptr<EigenBasis> basis(new EigenBasis());
  basis->n_ = n;
  basis->cutoff_ = cutoff_degree;
  const int K = cutoff_degree;

  if (n == 1) {
    basis->modes_.push_back({0, 0, 0, 0.0, Parity::even});
    for (int d = 1; d <= K; ++d) {
      const double lam = lambda_of(d, 1);
      basis->modes_.push_back({2 * d - 1, d, d, lam, Parity::even});
      basis->modes_.push_back({2 * d, d, -d, lam, Parity::odd});
    }
    basis->rule_ = hemisphere_rule(1, 4 * K + 8, 0, true);
  } else {
    for (int l = 0; l <= K; ++l) {
      for (int m = -l; m <= l; ++m) {
        const Parity par = ((l + std::abs(m)) % 2 == 0) ? Parity::even : Parity::odd;
        basis->modes_.push_back({l * l + l + m, l, m, lambda_of(l, 2), par});
      }
    }
    basis->rule_ = hemisphere_rule(2, K + 2, 2 * K + 2, true);
  }

  const std::size_t count = basis->rule_.size();
  const std::size_t eq_count = (n == 1) ? 2 : static_cast<std::size_t>(2 * K + 2);
  const std::size_t half = (count - eq_count) / 2;
  basis->mirror_.resize(count);
  for (std::size_t i = 0; i < count; ++i) {
    if (i < half)
      basis->mirror_[i] = i + half;
    else if (i < 2 * half)
      basis->mirror_[i] = i - half;
    else {
      basis->mirror_[i] = i;
      basis->equator_nodes_.push_back(i);
    }
  }

  const std::size_t nm = basis->modes_.size();
  basis->samples_.assign(nm * count, 0.0);
  std::vector<double> vals(nm);
  for (std::size_t i = 0; i < count; ++i) {
    basis->evaluate(basis->rule_.nodes[i], K, vals, {});
    for (std::size_t k = 0; k < nm; ++k) basis->samples_[k * count + i] = vals[k];
  }
  return basis;
}

std::size_t EigenBasis::count_up_to(int degree) const {
  if (degree < 0) return 0;
  const std::size_t d = static_cast<std::size_t>(std::min(degree, cutoff_));
  return n_ == 1 ? 2 * d + 1 : (d + 1) * (d + 1);
}

void EigenBasis::evaluate(const Vec3& p, int max_degree, std::span<double> values, std::span<Vec3> grads) const {
  const int L = std::min(max_degree, cutoff_);
  if (L < 0) return;
  if (values.size() < count_up_to(L) || (!grads.empty() && grads.size() < count_up_to(L)))
    throw std::invalid_argument("EigenBasis::evaluate: output span too small");
  if (n_ == 1)
    evaluate_circle(p, L, values, grads);
  else
    evaluate_sphere(p, L, values, grads);
}

double EigenBasis::discrete_laplacian(std::size_t k, const Vec3& p, double step) const {
  const EigenMode& md = mode(k);
  std::vector<double> buf(count_up_to(md.degree));
  auto f = [&](const Vec3& q) {
    evaluate(q, md.degree, buf, {});
    return buf[k];
  };
  // sixth-order central second difference along a great circle
  auto d2 = [step](auto&& g) {
    return (2.0 * (g(-3) + g(3)) - 27.0 * (g(-2) + g(2)) + 270.0 * (g(-1) + g(1)) - 490.0 * g(0)) /
           (180.0 * step * step);
  };
  if (n_ == 1) {
    const double t = std::atan2(p[1], p[0]);
    return d2([&](int j) { return f({std::cos(t + j * step), std::sin(t + j * step), 0.0}); });
  }
  // Chart in which p sits on the equator of a rotated pole t2; there the
  // Laplace-Beltrami operator reduces to f_aa + f_bb at p.
  const Vec3 seed = std::abs(p[2]) < 0.9 ? Vec3{0.0, 0.0, 1.0} : Vec3{1.0, 0.0, 0.0};
  Vec3 t1{p[1] * seed[2] - p[2] * seed[1], p[2] * seed[0] - p[0] * seed[2], p[0] * seed[1] - p[1] * seed[0]};
  const double n1 = norm(t1);
  for (double& c : t1) c /= n1;
  const Vec3 t2{p[1] * t1[2] - p[2] * t1[1], p[2] * t1[0] - p[0] * t1[2], p[0] * t1[1] - p[1] * t1[0]};
  auto chart = [&](double a, double b) {
    Vec3 q;
    for (int d = 0; d < 3; ++d)
      q[d] = std::cos(b) * (std::cos(a) * p[d] + std::sin(a) * t1[d]) + std::sin(b) * t2[d];
    return f(q);
  };
  return d2([&](int j) { return chart(j * step, 0.0); }) + d2([&](int j) { return chart(0.0, j * step); });
}

}  // namespace thinobs
