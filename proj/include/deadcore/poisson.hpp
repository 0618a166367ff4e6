#pragma once

#include <vector>

#include "deadcore/grid.hpp"

namespace deadcore {

// Solves (-lap + diag(shift)) x = b on the grid interior with x = 0 on the
// box boundary. shift must be nonnegative (arbitrarily large entries are fine
// and effectively freeze those nodes). 1D solves exactly by tridiagonal
// elimination; 2D runs geometric multigrid V-cycles until the interior
// residual drops to rel_tol * ||b||_2 or max_cycles is spent, whichever
// comes first. Boundary entries of b are ignored.
Field shifted_poisson_solve(const Grid& g, const std::vector<double>& shift, const Field& b,
                            double rel_tol = 1e-10, int max_cycles = 60);

}  // namespace deadcore
