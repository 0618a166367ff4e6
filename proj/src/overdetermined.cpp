#include "deadcore/overdetermined.hpp"

#include <cmath>
#include <stdexcept>

namespace deadcore {

FluxReport flux_check(const Field& u, const SupportInfo& info) {
  const Grid& g = u.grid;
  if (info.mask.size() != g.size()) throw std::invalid_argument("mask size mismatch");
  const double h = g.h();
  const double tau = info.scan.tau;
  FluxReport rep;
  rep.value_tol = 10.0 * tau;
  rep.grad_tol = 20.0 * h;
  const long n = g.n;
  const long reach = 2;
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (g.on_boundary(i)) continue;
    const long ix = static_cast<long>(i) % n;
    const long iy = static_cast<long>(i) / n;  // 0 in one dimension
    bool edge = false;
    const std::uint8_t me = info.mask[i];
    for (long dy = g.dim == 2 ? -reach : 0; dy <= (g.dim == 2 ? reach : 0) && !edge; ++dy) {
      for (long dx = -reach; dx <= reach && !edge; ++dx) {
        const long jx = ix + dx, jy = iy + dy;
        if (jx < 0 || jx >= n || (g.dim == 2 && (jy < 0 || jy >= n))) continue;
        const std::size_t j = static_cast<std::size_t>(g.dim == 2 ? jy * n + jx : jx);
        if (info.mask[j] != me) edge = true;
      }
    }
    if (!edge) continue;
    ++rep.band_nodes;
    rep.boundary_value_max = std::max(rep.boundary_value_max, std::abs(u.v[i]));
    double gx = (u.v[i + 1] - u.v[i - 1]) / (2.0 * h);
    double gy = 0.0;
    if (g.dim == 2) gy = (u.v[i + static_cast<std::size_t>(n)] - u.v[i - static_cast<std::size_t>(n)]) / (2.0 * h);
    rep.boundary_grad_max = std::max(rep.boundary_grad_max, std::sqrt(gx * gx + gy * gy));
  }
  if (rep.band_nodes == 0) throw std::runtime_error("support has no free boundary in the box");
  rep.pass =
      rep.boundary_value_max <= rep.value_tol && rep.boundary_grad_max <= rep.grad_tol;
  return rep;
}

OuterSetReport outer_set_solve(Grid g, const Shape& d_omega, const SolveConfig& cfg) {
  OuterSetReport rep{SolutionRecord{Field(g), EnergyReport{}, FieldClass::nonnegative, 0.0, 0.0,
                                    0.0, 0.0, 0.0, 0, 0.0, false, 0},
                     SupportInfo{}, false, 0.0, FluxReport{}};
  rep.ground = solve_ground_state(g, d_omega, make_nonlinearity(1.0), cfg);
  const Grid& gg = rep.ground.u.grid;
  rep.support = extract_support(rep.ground.u, cfg.clearance_margin);
  rep.u_radius_refined = rep.support.radius_refined;

  // D must sit compactly inside the support: every node of D is masked along
  // with its whole stencil neighborhood
  const QField qf = sample_q(gg, d_omega);
  const long n = gg.n;
  rep.contains_domain = true;
  for (std::size_t i = 0; i < gg.size() && rep.contains_domain; ++i) {
    if (qf.q[i] <= 0) continue;
    if (gg.on_boundary(i)) {
      rep.contains_domain = false;
      break;
    }
    if (!rep.support.mask[i]) {
      rep.contains_domain = false;
      break;
    }
    const std::size_t left = i - 1, right = i + 1;
    if (!rep.support.mask[left] || !rep.support.mask[right]) rep.contains_domain = false;
    if (gg.dim == 2) {
      const std::size_t dn = i - static_cast<std::size_t>(n);
      const std::size_t up = i + static_cast<std::size_t>(n);
      if (!rep.support.mask[dn] || !rep.support.mask[up]) rep.contains_domain = false;
    }
  }

  rep.flux = flux_check(rep.ground.u, rep.support);
  return rep;
}

std::string inner_set_status() {
  return "inner set: prescribing the outer set and recovering the inclusion has no general "
         "construction; no solver is provided";
}

}  // namespace deadcore
