#pragma once

#include <vector>

#include "deadcore/grid.hpp"

namespace deadcore {

// f_p(t) = |t|^(p-2) t for p in (1,2); at p = 1 the signum, optionally
// smoothed to t / sqrt(t^2 + eps^2). `potential` is the primitive vanishing
// at 0: |t|^p / p, and at p = 1 with smoothing sqrt(t^2 + eps^2) - eps.
struct Nonlinearity {
  double p = 1.0;
  double eps = 0.0;  // smoothing width, meaningful only at p = 1

  double f(double t) const;
  double potential(double t) const;
  double fprime(double t) const;  // diagnostics only; blows up at t -> 0 for p in (1,2)
};

Nonlinearity make_nonlinearity(double p, double eps = 0.0);

struct EnergyReport {
  double value = 0.0;            // I(u) = dirichlet - potential
  double dirichlet = 0.0;        // one half of the squared discrete gradient norm
  double potential = 0.0;        // weighted integral of the potential
  double residual_sup = 0.0;     // sup over interior nodes of |-lap u - w f(u)|
  double identity_defect = 0.0;  // | |grad u|^2 - integral of w f(u) u |
};

// Public evaluation against the sharp +-1 weight.
EnergyReport energy(const Field& u, const QField& q, const Nonlinearity& nl);

// Solver-facing evaluation against fractional interface weights.
EnergyReport energy_weighted(const Field& u, const std::vector<double>& w,
                             const Nonlinearity& nl);

// Gradient of the discrete functional: h^dim (-lap u - w f(u)) on interior
// nodes, zero on the boundary. Throws at the nonsmooth point p = 1, eps = 0.
Field energy_gradient(const Field& u, const QField& q, const Nonlinearity& nl);
Field energy_gradient_weighted(const Field& u, const std::vector<double>& w,
                               const Nonlinearity& nl);

}  // namespace deadcore
