#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <vector>

#include "deadcore/grid.hpp"

namespace oracles {

// Dense reference for the principal eigenvalue of -lap v = lambda q v with
// zero box boundary data. The stiffness K is positive definite, so the
// problem is recast as q v = mu K v and lambda = 1 / mu_max. Cost is cubic
// in the interior node count; keep grids small.
inline double dense_lambda1(const deadcore::Grid& g, const std::vector<std::int8_t>& q) {
  const int n = g.n;
  const double ih2 = 1.0 / (g.h() * g.h());
  std::vector<long> dense(g.size(), -1);
  long m = 0;
  for (std::size_t i = 0; i < g.size(); ++i)
    if (!g.on_boundary(i)) dense[i] = m++;

  Eigen::MatrixXd K = Eigen::MatrixXd::Zero(m, m);
  Eigen::MatrixXd B = Eigen::MatrixXd::Zero(m, m);
  auto couple = [&](std::size_t i, std::size_t j) {
    if (dense[j] >= 0) K(dense[i], dense[j]) = -ih2;
  };
  if (g.dim == 1) {
    for (int ix = 1; ix < n - 1; ++ix) {
      std::size_t i = g.index(ix);
      K(dense[i], dense[i]) = 2.0 * ih2;
      B(dense[i], dense[i]) = static_cast<double>(q[i]);
      couple(i, g.index(ix - 1));
      couple(i, g.index(ix + 1));
    }
  } else {
    for (int iy = 1; iy < n - 1; ++iy)
      for (int ix = 1; ix < n - 1; ++ix) {
        std::size_t i = g.index(ix, iy);
        K(dense[i], dense[i]) = 4.0 * ih2;
        B(dense[i], dense[i]) = static_cast<double>(q[i]);
        couple(i, g.index(ix - 1, iy));
        couple(i, g.index(ix + 1, iy));
        couple(i, g.index(ix, iy - 1));
        couple(i, g.index(ix, iy + 1));
      }
  }

  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(B, K, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw std::runtime_error("dense eigensolve failed");
  const double mu_max = es.eigenvalues()(m - 1);  // ascending order
  if (mu_max <= 0.0) throw std::runtime_error("no positive eigenvalue: q never positive");
  return 1.0 / mu_max;
}

}  // namespace oracles
