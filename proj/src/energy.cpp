#include "deadcore/energy.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace deadcore {

Nonlinearity make_nonlinearity(double p, double eps) {
  if (!(p >= 1.0 && p < 2.0)) throw std::invalid_argument("exponent must lie in [1,2)");
  if (!(eps >= 0.0) || !std::isfinite(eps))
    throw std::invalid_argument("smoothing width must be a finite nonnegative number");
  return Nonlinearity{p, p == 1.0 ? eps : 0.0};
}

double Nonlinearity::f(double t) const {
  if (p == 1.0) {
    if (eps > 0.0) return t / std::sqrt(t * t + eps * eps);
    return (t > 0.0) - (t < 0.0);
  }
  if (t == 0.0) return 0.0;
  return std::copysign(std::pow(std::abs(t), p - 1.0), t);
}

double Nonlinearity::potential(double t) const {
  if (p == 1.0) {
    if (eps > 0.0) return std::sqrt(t * t + eps * eps) - eps;
    return std::abs(t);
  }
  return std::pow(std::abs(t), p) / p;
}

double Nonlinearity::fprime(double t) const {
  if (p == 1.0) {
    if (eps > 0.0) {
      double s2 = t * t + eps * eps;
      return eps * eps / (s2 * std::sqrt(s2));
    }
    return 0.0;
  }
  if (t == 0.0) return std::numeric_limits<double>::infinity();
  return (p - 1.0) * std::pow(std::abs(t), p - 2.0);
}

namespace {

template <typename WeightAt>
EnergyReport energy_core(const Field& u, WeightAt w, const Nonlinearity& nl) {
  const Grid& g = u.grid;
  double vol = g.cell_volume();
  double grad_sq = dirichlet_energy(u);
  double pot = 0.0, fu_u = 0.0;
  for (std::size_t i = 0; i < u.v.size(); ++i) {
    double wi = w(i);
    pot += wi * nl.potential(u.v[i]);
    fu_u += wi * nl.f(u.v[i]) * u.v[i];
  }
  pot *= vol;
  fu_u *= vol;

  Field lap = laplacian_apply(u);
  double res = 0.0;
  for (std::size_t i = 0; i < u.v.size(); ++i) {
    if (g.on_boundary(i)) continue;
    res = std::max(res, std::abs(-lap.v[i] - w(i) * nl.f(u.v[i])));
  }

  EnergyReport r;
  r.dirichlet = 0.5 * grad_sq;
  r.potential = pot;
  r.value = r.dirichlet - r.potential;
  r.residual_sup = res;
  r.identity_defect = std::abs(grad_sq - fu_u);
  return r;
}

template <typename WeightAt>
Field gradient_core(const Field& u, WeightAt w, const Nonlinearity& nl) {
  if (nl.p == 1.0 && nl.eps == 0.0)
    throw std::domain_error("gradient undefined at the nonsmooth point p=1, eps=0; use continuation");
  const Grid& g = u.grid;
  double vol = g.cell_volume();
  Field lap = laplacian_apply(u);
  Field out(g);
  for (std::size_t i = 0; i < u.v.size(); ++i) {
    if (g.on_boundary(i)) continue;
    out.v[i] = vol * (-lap.v[i] - w(i) * nl.f(u.v[i]));
  }
  return out;
}

}  // namespace

EnergyReport energy(const Field& u, const QField& q, const Nonlinearity& nl) {
  if (!(u.grid == q.grid)) throw std::invalid_argument("field and weight grids differ");
  return energy_core(u, [&](std::size_t i) { return static_cast<double>(q.q[i]); }, nl);
}

EnergyReport energy_weighted(const Field& u, const std::vector<double>& w,
                             const Nonlinearity& nl) {
  if (w.size() != u.v.size()) throw std::invalid_argument("weight vector size mismatch");
  return energy_core(u, [&](std::size_t i) { return w[i]; }, nl);
}

Field energy_gradient(const Field& u, const QField& q, const Nonlinearity& nl) {
  if (!(u.grid == q.grid)) throw std::invalid_argument("field and weight grids differ");
  return gradient_core(u, [&](std::size_t i) { return static_cast<double>(q.q[i]); }, nl);
}

Field energy_gradient_weighted(const Field& u, const std::vector<double>& w,
                               const Nonlinearity& nl) {
  if (w.size() != u.v.size()) throw std::invalid_argument("weight vector size mismatch");
  return gradient_core(u, [&](std::size_t i) { return w[i]; }, nl);
}

}  // namespace deadcore
