#include "deadcore/poisson.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace deadcore {

namespace {

// One multigrid level: m intervals per side, nodes (m+1)^2, row-major.
struct MgLevel {
  int m = 0;
  double h = 0.0;
  std::vector<double> s;  // diagonal shift
  std::vector<double> x;
  std::vector<double> b;
  std::vector<double> r;
};

inline std::size_t at(int m, int i, int j) {
  return static_cast<std::size_t>(j) * (m + 1) + i;
}

// Red-black Gauss-Seidel on (-lap + s). Rows with huge s reduce to x = b/s,
// so dead-core freezing costs nothing here.
void smooth(MgLevel& lv, int sweeps) {
  const int m = lv.m;
  const double ih2 = 1.0 / (lv.h * lv.h);
  const int stride = m + 1;
  for (int sweep = 0; sweep < sweeps; ++sweep) {
    for (int color = 0; color < 2; ++color) {
      for (int j = 1; j < m; ++j) {
        for (int i = 1 + ((j + color) & 1); i < m; i += 2) {
          const std::size_t k = at(m, i, j);
          const double nb = lv.x[k - 1] + lv.x[k + 1] + lv.x[k - stride] + lv.x[k + stride];
          lv.x[k] = (lv.b[k] + ih2 * nb) / (4.0 * ih2 + lv.s[k]);
        }
      }
    }
  }
}

double residual(MgLevel& lv) {
  const int m = lv.m;
  const double ih2 = 1.0 / (lv.h * lv.h);
  const int stride = m + 1;
  double norm2 = 0.0;
  for (int j = 1; j < m; ++j) {
    for (int i = 1; i < m; ++i) {
      const std::size_t k = at(m, i, j);
      const double nb = lv.x[k - 1] + lv.x[k + 1] + lv.x[k - stride] + lv.x[k + stride];
      const double ax = (4.0 * lv.x[k] - nb) * ih2 + lv.s[k] * lv.x[k];
      lv.r[k] = lv.b[k] - ax;
      norm2 += lv.r[k] * lv.r[k];
    }
  }
  return std::sqrt(norm2);
}

// Full-weighting restriction of the fine residual into the coarse right side.
void restrict_residual(const MgLevel& fine, MgLevel& coarse) {
  const int mc = coarse.m;
  const int mf = fine.m;
  for (int J = 1; J < mc; ++J) {
    for (int I = 1; I < mc; ++I) {
      const int i = 2 * I, j = 2 * J;
      const std::size_t k = at(mf, i, j);
      const int stride = mf + 1;
      coarse.b[at(mc, I, J)] =
          0.25 * fine.r[k] +
          0.125 * (fine.r[k - 1] + fine.r[k + 1] + fine.r[k - stride] + fine.r[k + stride]) +
          0.0625 * (fine.r[k - stride - 1] + fine.r[k - stride + 1] + fine.r[k + stride - 1] +
                    fine.r[k + stride + 1]);
    }
  }
}

// Bilinear prolongation, added into the fine iterate.
void prolong_add(const MgLevel& coarse, MgLevel& fine) {
  const int mc = coarse.m;
  const int mf = fine.m;
  for (int J = 0; J <= mc; ++J) {
    for (int I = 0; I <= mc; ++I) {
      const double v = coarse.x[at(mc, I, J)];
      if (v == 0.0) continue;
      const int i = 2 * I, j = 2 * J;
      fine.x[at(mf, i, j)] += v;
      if (i + 1 <= mf) fine.x[at(mf, i + 1, j)] += 0.5 * v;
      if (i - 1 >= 0) fine.x[at(mf, i - 1, j)] += 0.5 * v;
      if (j + 1 <= mf) fine.x[at(mf, i, j + 1)] += 0.5 * v;
      if (j - 1 >= 0) fine.x[at(mf, i, j - 1)] += 0.5 * v;
      if (i + 1 <= mf && j + 1 <= mf) fine.x[at(mf, i + 1, j + 1)] += 0.25 * v;
      if (i + 1 <= mf && j - 1 >= 0) fine.x[at(mf, i + 1, j - 1)] += 0.25 * v;
      if (i - 1 >= 0 && j + 1 <= mf) fine.x[at(mf, i - 1, j + 1)] += 0.25 * v;
      if (i - 1 >= 0 && j - 1 >= 0) fine.x[at(mf, i - 1, j - 1)] += 0.25 * v;
    }
  }
}

void vcycle(std::vector<MgLevel>& lv, std::size_t l) {
  if (l + 1 == lv.size()) {
    // coarsest grids stay tiny, so plain sweeps reach roundoff
    smooth(lv[l], 200);
    return;
  }
  smooth(lv[l], 2);
  residual(lv[l]);
  MgLevel& c = lv[l + 1];
  std::fill(c.b.begin(), c.b.end(), 0.0);
  std::fill(c.x.begin(), c.x.end(), 0.0);
  restrict_residual(lv[l], c);
  vcycle(lv, l + 1);
  prolong_add(c, lv[l]);
  smooth(lv[l], 2);
}

Field solve_1d(const Grid& g, const std::vector<double>& shift, const Field& b) {
  const int n = g.n;
  const double ih2 = 1.0 / (g.h() * g.h());
  const double off = -ih2;
  std::vector<double> cp(static_cast<std::size_t>(n), 0.0);
  std::vector<double> dp(static_cast<std::size_t>(n), 0.0);
  double cprev = 0.0, dprev = 0.0;
  for (int i = 1; i + 1 < n; ++i) {
    const double diag = 2.0 * ih2 + shift[static_cast<std::size_t>(i)];
    const double m = diag - off * cprev;
    cp[static_cast<std::size_t>(i)] = off / m;
    dp[static_cast<std::size_t>(i)] = (b.v[static_cast<std::size_t>(i)] - off * dprev) / m;
    cprev = cp[static_cast<std::size_t>(i)];
    dprev = dp[static_cast<std::size_t>(i)];
  }
  Field x(g);
  double next = 0.0;
  for (int i = n - 2; i >= 1; --i) {
    x.v[static_cast<std::size_t>(i)] =
        dp[static_cast<std::size_t>(i)] - cp[static_cast<std::size_t>(i)] * next;
    next = x.v[static_cast<std::size_t>(i)];
  }
  return x;
}

}  // namespace

Field shifted_poisson_solve(const Grid& g, const std::vector<double>& shift, const Field& b,
                            double rel_tol, int max_cycles) {
  if (g.dim != 1 && g.dim != 2) throw std::invalid_argument("grid dimension must be 1 or 2");
  if (shift.size() != g.size() || b.v.size() != g.size())
    throw std::invalid_argument("shift or right side size mismatch");
  if (!(rel_tol > 0.0) || max_cycles < 1) throw std::invalid_argument("bad solve parameters");
  for (std::size_t i = 0; i < shift.size(); ++i)
    if (!(shift[i] >= 0.0)) throw std::invalid_argument("shift entries must be nonnegative");

  if (g.dim == 1) return solve_1d(g, shift, b);

  std::vector<MgLevel> lv;
  {
    MgLevel top;
    top.m = g.n - 1;
    top.h = g.h();
    top.s = shift;
    top.x.assign(g.size(), 0.0);
    top.b = b.v;
    top.r.assign(g.size(), 0.0);
    for (std::size_t i = 0; i < g.size(); ++i)
      if (g.on_boundary(i)) top.b[i] = 0.0;
    lv.push_back(std::move(top));
  }
  while (lv.back().m % 2 == 0 && lv.back().m / 2 >= 4) {
    const MgLevel& f = lv.back();
    MgLevel c;
    c.m = f.m / 2;
    c.h = 2.0 * f.h;
    const std::size_t sz = static_cast<std::size_t>(c.m + 1) * (c.m + 1);
    c.s.assign(sz, 0.0);
    c.x.assign(sz, 0.0);
    c.b.assign(sz, 0.0);
    c.r.assign(sz, 0.0);
    const int stride = f.m + 1;
    for (int J = 1; J < c.m; ++J) {
      for (int I = 1; I < c.m; ++I) {
        const std::size_t k = at(f.m, 2 * I, 2 * J);
        c.s[at(c.m, I, J)] =
            0.25 * f.s[k] +
            0.125 * (f.s[k - 1] + f.s[k + 1] + f.s[k - stride] + f.s[k + stride]) +
            0.0625 * (f.s[k - stride - 1] + f.s[k - stride + 1] + f.s[k + stride - 1] +
                      f.s[k + stride + 1]);
      }
    }
    lv.push_back(std::move(c));
  }

  double bnorm = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i)
    if (!g.on_boundary(i)) bnorm += lv[0].b[i] * lv[0].b[i];
  bnorm = std::sqrt(bnorm);
  Field out(g);
  if (bnorm == 0.0) return out;

  for (int cycle = 0; cycle < max_cycles; ++cycle) {
    vcycle(lv, 0);
    if (residual(lv[0]) <= rel_tol * bnorm) break;
  }
  out.v = lv[0].x;
  for (std::size_t i = 0; i < g.size(); ++i)
    if (g.on_boundary(i)) out.v[i] = 0.0;
  return out;
}

}  // namespace deadcore
