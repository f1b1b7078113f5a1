#include "thinobs/trace.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace thinobs {

namespace {

std::optional<Vec3> first_axis(std::span<const Trace* const> traces) {
  for (const Trace* t : traces)
    for (const auto& wa : t->atoms())
      if (auto ax = wa.atom->axis()) return ax;
  return std::nullopt;
}

double spectral_sum(std::span<const double> a, std::span<const double> b, const EigenBasis* weights) {
  const std::size_t m = std::min(a.size(), b.size());
  double sum = 0.0;
  for (std::size_t k = 0; k < m; ++k) sum += (weights ? weights->mode(k).eigenvalue : 1.0) * a[k] * b[k];
  return sum;
}

}  // namespace

Trace::Trace(BasisPtr basis) : basis_(std::move(basis)) {
  if (!basis_) throw std::invalid_argument("Trace: null basis");
  band_.assign(basis_->size(), 0.0);
  samples_.assign(basis_->rule().size(), 0.0);
}

Trace Trace::from_coefficients(BasisPtr basis, std::span<const double> coeffs) {
  Trace t(std::move(basis));
  if (coeffs.size() > t.band_.size()) throw std::invalid_argument("synthesize: more coefficients than modes");
  const std::size_t count = t.samples_.size();
  for (std::size_t k = 0; k < coeffs.size(); ++k) {
    t.band_[k] = coeffs[k];
    if (coeffs[k] == 0.0) continue;
    for (std::size_t i = 0; i < count; ++i) t.samples_[i] += coeffs[k] * t.basis_->sample(k, i);
  }
  return t;
}

Trace Trace::from_atom(BasisPtr basis, AtomPtr atom, double weight) {
  Trace t(std::move(basis));
  if (atom->ambient_n() != t.ambient_n()) throw std::invalid_argument("Trace: atom dimension mismatch");
  t.atoms_.push_back({weight, atom});
  const auto& nodes = t.basis_->rule().nodes;
  for (std::size_t i = 0; i < nodes.size(); ++i) t.samples_[i] = weight * atom->value(nodes[i]);
  return t;
}

Trace Trace::from_samples(BasisPtr basis, std::span<const double> samples) {
  Trace t(std::move(basis));
  const std::size_t count = t.samples_.size();
  if (samples.size() != count) throw std::invalid_argument("Trace: sample count does not match the basis rule");
  for (std::size_t i = 0; i < count; ++i) {
    const std::size_t j = t.basis_->mirror(i);
    t.asymmetry_ = std::max(t.asymmetry_, std::abs(samples[i] - samples[j]));
    t.samples_[i] = 0.5 * (samples[i] + samples[j]);
  }
  const auto& w = t.basis_->rule().weights;
  for (std::size_t k = 0; k < t.band_.size(); ++k) {
    double sum = 0.0;
    for (std::size_t i = 0; i < count; ++i) sum += w[i] * t.samples_[i] * t.basis_->sample(k, i);
    t.band_[k] = sum;
  }
  // keep samples consistent with the band part that every form uses
  for (std::size_t i = 0; i < count; ++i) {
    double v = 0.0;
    for (std::size_t k = 0; k < t.band_.size(); ++k) v += t.band_[k] * t.basis_->sample(k, i);
    t.samples_[i] = v;
  }
  return t;
}

int Trace::band_degree() const {
  for (std::size_t k = band_.size(); k-- > 0;)
    if (band_[k] != 0.0) return basis_->mode(k).degree;
  return -1;
}

bool Trace::even(double tol) const {
  if (asymmetry_ > tol) return false;
  for (std::size_t k = 0; k < band_.size(); ++k)
    if (basis_->mode(k).parity == Parity::odd && std::abs(band_[k]) > tol) return false;
  return true;
}

double Trace::value(const Vec3& p) const {
  double v = 0.0;
  const int deg = band_degree();
  if (deg >= 0) {
    std::vector<double> buf(basis_->count_up_to(deg));
    basis_->evaluate(p, deg, buf, {});
    for (std::size_t k = 0; k < buf.size(); ++k) v += band_[k] * buf[k];
  }
  for (const auto& wa : atoms_) v += wa.weight * wa.atom->value(p);
  return v;
}

Vec3 Trace::gradient(const Vec3& p) const {
  Vec3 g{0.0, 0.0, 0.0};
  const int deg = band_degree();
  if (deg >= 0) {
    const std::size_t m = basis_->count_up_to(deg);
    std::vector<double> buf(m);
    std::vector<Vec3> gbuf(m);
    basis_->evaluate(p, deg, buf, gbuf);
    for (std::size_t k = 0; k < m; ++k)
      for (int d = 0; d < 3; ++d) g[d] += band_[k] * gbuf[k][d];
  }
  for (const auto& wa : atoms_) {
    const Vec3 ga = wa.atom->gradient(p);
    for (int d = 0; d < 3; ++d) g[d] += wa.weight * ga[d];
  }
  return g;
}

double Trace::equator_min() const {
  double m = INFINITY;
  for (std::size_t i : basis_->equator_nodes()) m = std::min(m, samples_[i]);
  return m;
}

double Trace::sample_norm() const {
  const auto& w = basis_->rule().weights;
  double sum = 0.0;
  for (std::size_t i = 0; i < samples_.size(); ++i) sum += w[i] * samples_[i] * samples_[i];
  return std::sqrt(sum);
}

void Trace::check_same_basis(const Trace& other) const {
  if (basis_ != other.basis_) {
    if (basis_->ambient_n() != other.basis_->ambient_n())
      throw std::invalid_argument("Trace: ambient dimension mismatch");
    if (basis_->cutoff_degree() != other.basis_->cutoff_degree())
      throw std::invalid_argument("Trace: basis cutoff mismatch");
  }
}

void Trace::add_atom(double weight, const AtomPtr& atom) {
  const std::string key = atom->key();
  for (auto it = atoms_.begin(); it != atoms_.end(); ++it) {
    if (it->atom->key() == key) {
      it->weight += weight;
      if (it->weight == 0.0) atoms_.erase(it);
      return;
    }
  }
  if (weight != 0.0) atoms_.push_back({weight, atom});
}

Trace& Trace::operator+=(const Trace& other) {
  check_same_basis(other);
  for (std::size_t k = 0; k < band_.size(); ++k) band_[k] += other.band_[k];
  for (std::size_t i = 0; i < samples_.size(); ++i) samples_[i] += other.samples_[i];
  for (const auto& wa : other.atoms_) add_atom(wa.weight, wa.atom);
  asymmetry_ = std::max(asymmetry_, other.asymmetry_);
  return *this;
}

Trace& Trace::operator-=(const Trace& other) {
  check_same_basis(other);
  for (std::size_t k = 0; k < band_.size(); ++k) band_[k] -= other.band_[k];
  for (std::size_t i = 0; i < samples_.size(); ++i) samples_[i] -= other.samples_[i];
  for (const auto& wa : other.atoms_) add_atom(-wa.weight, wa.atom);
  asymmetry_ = std::max(asymmetry_, other.asymmetry_);
  return *this;
}

Trace& Trace::operator*=(double s) {
  for (double& c : band_) c *= s;
  for (double& v : samples_) v *= s;
  if (s == 0.0)
    atoms_.clear();
  else
    for (auto& wa : atoms_) wa.weight *= s;
  return *this;
}

SphereRule form_rule(std::span<const Trace* const> traces) {
  if (traces.empty()) throw std::invalid_argument("form_rule: no traces");
  const int n = traces.front()->ambient_n();
  const int K = traces.front()->basis()->cutoff_degree();
  if (n == 1) return hemisphere_rule(1, 4 * K + 40, 0, false);
  if (auto axis = first_axis(traces)) return adapted_rule(2, *axis, 2 * K + 48, K + 24);
  return hemisphere_rule(2, K + 8, 2 * K + 8, false);
}

SampledTrace sample_on(const Trace& f, std::span<const Vec3> nodes, bool with_gradients) {
  SampledTrace out;
  const std::size_t count = nodes.size();
  out.values.assign(count, 0.0);
  if (with_gradients) out.grads.assign(count, Vec3{0.0, 0.0, 0.0});
  const int deg = f.band_degree();
  const BasisPtr& basis = f.basis();
  const std::size_t m = basis->count_up_to(deg);
  const auto band = f.band();

#pragma omp parallel
  {
    std::vector<double> buf(m);
    std::vector<Vec3> gbuf(with_gradients ? m : 0);
#pragma omp for schedule(static)
    for (std::size_t i = 0; i < count; ++i) {
      double v = 0.0;
      Vec3 g{0.0, 0.0, 0.0};
      if (deg >= 0) {
        basis->evaluate(nodes[i], deg, buf, gbuf);
        for (std::size_t k = 0; k < m; ++k) {
          v += band[k] * buf[k];
          if (with_gradients)
            for (int d = 0; d < 3; ++d) g[d] += band[k] * gbuf[k][d];
        }
      }
      for (const auto& wa : f.atoms()) {
        v += wa.weight * wa.atom->value(nodes[i]);
        if (with_gradients) {
          const Vec3 ga = wa.atom->gradient(nodes[i]);
          for (int d = 0; d < 3; ++d) g[d] += wa.weight * ga[d];
        }
      }
      out.values[i] = v;
      if (with_gradients) out.grads[i] = g;
    }
  }
  return out;
}

FormTable form_table(std::span<const Trace> traces) {
  FormTable table;
  table.size = traces.size();
  table.inner.assign(table.size * table.size, 0.0);
  table.dirichlet.assign(table.size * table.size, 0.0);
  if (traces.empty()) return table;
  for (const Trace& t : traces) traces.front().check_same_basis(t);

  const bool spectral = std::all_of(traces.begin(), traces.end(), [](const Trace& t) { return t.band_limited(); });
  if (spectral) {
    const EigenBasis* basis = traces.front().basis().get();
    for (std::size_t i = 0; i < table.size; ++i)
      for (std::size_t j = i; j < table.size; ++j) {
        const double l2 = spectral_sum(traces[i].band(), traces[j].band(), nullptr);
        const double dg = spectral_sum(traces[i].band(), traces[j].band(), basis);
        table.inner[i * table.size + j] = table.inner[j * table.size + i] = l2;
        table.dirichlet[i * table.size + j] = table.dirichlet[j * table.size + i] = dg;
      }
    return table;
  }

  std::vector<const Trace*> ptrs;
  for (const Trace& t : traces) ptrs.push_back(&t);
  const SphereRule rule = form_rule(ptrs);
  std::vector<SampledTrace> sampled;
  sampled.reserve(traces.size());
  for (const Trace& t : traces) sampled.push_back(sample_on(t, rule.nodes, true));
  for (std::size_t i = 0; i < table.size; ++i)
    for (std::size_t j = i; j < table.size; ++j) {
      double l2 = 0.0, dg = 0.0;
      for (std::size_t q = 0; q < rule.size(); ++q) {
        l2 += rule.weights[q] * sampled[i].values[q] * sampled[j].values[q];
        dg += rule.weights[q] * dot(sampled[i].grads[q], sampled[j].grads[q]);
      }
      table.inner[i * table.size + j] = table.inner[j * table.size + i] = l2;
      table.dirichlet[i * table.size + j] = table.dirichlet[j * table.size + i] = dg;
    }
  return table;
}

double sphere_inner(const Trace& f, const Trace& g) {
  if (f.band_limited() && g.band_limited()) {
    f.check_same_basis(g);
    return spectral_sum(f.band(), g.band(), nullptr);
  }
  const Trace pair[2] = {f, g};
  return form_table(pair).l2(0, 1);
}

double sphere_dirichlet(const Trace& f, const Trace& g) {
  if (f.band_limited() && g.band_limited()) {
    f.check_same_basis(g);
    return spectral_sum(f.band(), g.band(), f.basis().get());
  }
  const Trace pair[2] = {f, g};
  return form_table(pair).grad(0, 1);
}

std::vector<double> project(const Trace& c, int max_degree) {
  const BasisPtr& basis = c.basis();
  const int L = max_degree < 0 ? basis->cutoff_degree() : std::min(max_degree, basis->cutoff_degree());
  const std::size_t m = basis->count_up_to(L);
  std::vector<double> coeffs(c.band().begin(), c.band().begin() + m);
  if (c.band_limited()) return coeffs;
  // atoms only: the band part is already exact
  Trace atoms_only(basis);
  for (const auto& wa : c.atoms()) atoms_only += Trace::from_atom(basis, wa.atom, wa.weight);
  const Trace* ptr = &c;
  const SphereRule rule = form_rule(std::span<const Trace* const>(&ptr, 1));
  const SampledTrace s = sample_on(atoms_only, rule.nodes, false);
  std::vector<double> buf(m);
  for (std::size_t q = 0; q < rule.size(); ++q) {
    basis->evaluate(rule.nodes[q], L, buf, {});
    const double wv = rule.weights[q] * s.values[q];
    for (std::size_t k = 0; k < m; ++k) coeffs[k] += wv * buf[k];
  }
  return coeffs;
}

Trace synthesize(std::span<const double> coeffs, const BasisPtr& basis) {
  return Trace::from_coefficients(basis, coeffs);
}

double equator_integral(const Trace& f) {
  const int n = f.ambient_n();
  const Trace* ptr = &f;
  const Vec3 axis = first_axis(std::span<const Trace* const>(&ptr, 1)).value_or(Vec3{1.0, 0.0, 0.0});
  const EquatorRule rule = equator_rule(n, axis, 2 * f.basis()->cutoff_degree() + 32);
  const SampledTrace s = sample_on(f, rule.nodes, false);
  double sum = 0.0;
  for (std::size_t q = 0; q < rule.nodes.size(); ++q) sum += rule.weights[q] * s.values[q];
  return sum;
}

double contact_integral(const Trace& f, const Vec3& e) {
  const EquatorRule rule = contact_half_rule(f.ambient_n(), e, 2 * f.basis()->cutoff_degree() + 32);
  const SampledTrace s = sample_on(f, rule.nodes, false);
  double sum = 0.0;
  for (std::size_t q = 0; q < rule.nodes.size(); ++q)
    sum += rule.weights[q] * s.values[q] * std::sqrt(std::abs(dot(rule.nodes[q], e)));
  return sum;
}

}  // namespace thinobs
