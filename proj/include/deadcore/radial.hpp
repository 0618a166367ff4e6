#pragma once

#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "deadcore/energy.hpp"
#include "deadcore/grid.hpp"

namespace deadcore {

// Closed-form compact radial profile for the unit-ball inclusion at p = 1.
// Inner branch solves -u'' - (N-1)/r u' = 1, the middle branch the same with
// right side -1, glued C^1 at r = 1 and touching zero flat at R = 2^(1/N).
struct ExplicitW {
  int dim = 1;
  double a = 1.0;  // center value
  double R = 2.0;  // support radius

  double inner(double r) const;
  double middle(double r) const;
  double value(double r) const;
  double deriv(double r) const;
};
ExplicitW explicit_w(int dim);

// Closed-form even sign-changing profile at p = 1 in one dimension, inclusion
// interval (-1,1): positive cap on |x| < r1, negative well on r1 < |x| < r2,
// flat contact at r2. All constants are exact in sqrt(2).
struct ExplicitNodal1D {
  double r1, c1, c2, r2;  // c3 coincides with c1

  double cap(double t) const;   // c1 - t^2/2
  double well(double t) const;  // (t-c2)^2/2 - c1
  double tail(double t) const;  // -(t-r2)^2/2
  double value(double x) const;
  double deriv(double x) const;
  double energy() const;     // closed form, negative
  double dirichlet() const;  // squared gradient norm
};
ExplicitNodal1D explicit_nodal_1d();

// Dead-core envelope u(r) <= C_p (t0 - r)_+^(2/(2-p)) near contact.
double barrier_exponent(double p);
double barrier_constant(double p);

// Radial solution as accepted integrator nodes (r strictly increasing,
// starting at 0). Evaluation is piecewise cubic Hermite; zero past the
// last node.
struct RadialProfile {
  int dim = 1;
  double p = 1.0;
  double a = 0.0;       // value at r = 0
  double R_supp = 0.0;  // matched contact radius (0 if the shot crossed zero)
  std::vector<double> r, u, du;

  double value(double radius) const;
  double slope(double radius) const;
};

// u'' = -(dim-1)/r u' - q f_p(u); at r = 0 the symmetric limit -q f_p(u)/dim.
double radial_rhs(int dim, const Nonlinearity& nl, double q, double r, double u, double du);

struct ShootResult {
  RadialProfile profile;
  double a = 0.0;       // matched center value
  double R_supp = 0.0;  // contact radius
  double u_end = 0.0;   // |u| at the contact (matching defect)
  double du_end = 0.0;  // |u'| at the contact
  int iterations = 0;   // root-finder evaluations
};

// Finds u(0) = a so that the radial shot lands with value and slope zero at a
// common radius. The weight is +1 for r < r_omega and -1 beyond. The bracket,
// when given, must straddle a sign change of the matching defect; otherwise
// it is grown automatically from a scaling-based guess.
ShootResult shoot_ground_state(int dim, const Nonlinearity& nl, double r_omega = 1.0,
                               std::optional<std::pair<double, double>> a_bracket = {});

// Re-integrates every stored step at tightened tolerance and returns the
// worst deviation against the stored nodes (value or slope).
double verify_profile(const RadialProfile& prof, const Nonlinearity& nl, double r_omega = 1.0);

// Uniform tabulation of a closed form into a RadialProfile; breakpoints are
// inserted exactly so no interval straddles a branch seam.
RadialProfile tabulate_radial(int dim, double p, double R_supp,
                              const std::vector<double>& breakpoints, int samples,
                              const std::function<double(double)>& value,
                              const std::function<double(double)>& deriv);
RadialProfile tabulate_explicit_w(int dim, int samples);
RadialProfile tabulate_explicit_nodal(int samples);

// Field with values radial_value(|x - center|); boundary nodes forced to 0.
Field sample_radial(const Grid& g, Point center, const std::function<double(double)>& radial_value);

}  // namespace deadcore
