#pragma once

// Rectangular node grids over [-X, X] x (0, Y], complex fields on them, and
// finite-difference Wirtinger calculus.

#include "halfplane.hpp"

#include <cstdint>
#include <functional>
#include <vector>

namespace corona {

// Nodes x_i = -X + i hx (i = 0..n) and y_j = (j + 1) hy (j = 0..n-1); the
// column i = n/2 is the imaginary axis and column n - i mirrors column i.
struct Grid {
  double X = 1.0, Y = 1.0;
  int n = 0;

  Grid() = default;
  Grid(double X_, double Y_, int n_) : X(X_), Y(Y_), n(n_) {
    if (n < 2 || n % 2 != 0) throw Error(ErrorKind::parse, "grid resolution must be even and at least 2");
  }

  int nx() const { return n + 1; }
  int ny() const { return n; }
  double hx() const { return 2.0 * X / n; }
  double hy() const { return Y / n; }
  double x(int i) const { return i == n / 2 ? 0.0 : -X + i * hx(); }
  double y(int j) const { return (j + 1) * hy(); }
  cplx node(int i, int j) const { return {x(i), y(j)}; }
  size_t index(int i, int j) const { return static_cast<size_t>(j) * nx() + i; }
  size_t size() const { return static_cast<size_t>(nx()) * ny(); }
  int mirror(int i) const { return n - i; }
  bool operator==(const Grid& o) const { return X == o.X && Y == o.Y && n == o.n; }
  bool operator!=(const Grid& o) const { return !(*this == o); }

  // the grid with doubled resolution over the same box
  Grid refined() const { return Grid(X, Y, 2 * n); }
};

struct GridField {
  Grid grid;
  std::vector<cplx> v;
  std::vector<uint8_t> mask;  // 1 where the value is defined

  GridField() = default;
  explicit GridField(const Grid& g, cplx fill = 0.0) : grid(g), v(g.size(), fill), mask(g.size(), 1) {}

  cplx& operator()(int i, int j) { return v[grid.index(i, j)]; }
  cplx operator()(int i, int j) const { return v[grid.index(i, j)]; }
  bool defined(int i, int j) const { return mask[grid.index(i, j)] != 0; }
};

// Evaluates f on the right half (x >= 0) and fills the left half by
// F(-conj z) = conj F(z); axis nodes are projected to real values.
inline GridField sample_symmetric(const Grid& g, const std::function<cplx(cplx)>& f) {
  GridField F(g);
  for (int j = 0; j < g.ny(); ++j)
    for (int i = g.n / 2; i <= g.n; ++i) {
      cplx v = f(g.node(i, j));
      if (i == g.n / 2) v = v.real();
      F(i, j) = v;
      F(g.mirror(i), j) = std::conj(v);
    }
  return F;
}

inline GridField sample(const Grid& g, const std::function<cplx(cplx)>& f) {
  GridField F(g);
  for (int j = 0; j < g.ny(); ++j)
    for (int i = 0; i < g.nx(); ++i) F(i, j) = f(g.node(i, j));
  return F;
}

// F -> (F + F^dagger) / 2 with F^dagger(z) = conj F(-conj z)
inline GridField symmetrize(const GridField& F) {
  GridField S = F;
  const Grid& g = F.grid;
  for (int j = 0; j < g.ny(); ++j)
    for (int i = 0; i < g.nx(); ++i) {
      S(i, j) = 0.5 * (F(i, j) + std::conj(F(g.mirror(i), j)));
      S.mask[g.index(i, j)] = F.defined(i, j) && F.defined(g.mirror(i), j);
    }
  return S;
}

inline double symmetry_defect(const GridField& F) {
  double d = 0.0;
  const Grid& g = F.grid;
  for (int j = 0; j < g.ny(); ++j)
    for (int i = 0; i < g.nx(); ++i)
      if (F.defined(i, j) && F.defined(g.mirror(i), j))
        d = std::max(d, std::abs(F(i, j) - std::conj(F(g.mirror(i), j))));
  return d;
}

inline GridField operator-(const GridField& a, const GridField& b) {
  if (a.grid != b.grid) throw Error(ErrorKind::inconsistent_input, "grid mismatch");
  GridField c(a.grid);
  for (size_t k = 0; k < c.v.size(); ++k) {
    c.v[k] = a.v[k] - b.v[k];
    c.mask[k] = a.mask[k] && b.mask[k];
  }
  return c;
}

inline GridField operator+(const GridField& a, const GridField& b) {
  if (a.grid != b.grid) throw Error(ErrorKind::inconsistent_input, "grid mismatch");
  GridField c(a.grid);
  for (size_t k = 0; k < c.v.size(); ++k) {
    c.v[k] = a.v[k] + b.v[k];
    c.mask[k] = a.mask[k] && b.mask[k];
  }
  return c;
}

// ---------------------------------------------------------------------------
// Finite differences: second-order central in the interior, second-order
// one-sided on the boundary rows and columns.

namespace detail {

inline bool diff_x(const GridField& F, int i, int j, cplx& out) {
  const Grid& g = F.grid;
  const double h = g.hx();
  auto ok = [&](int a) { return a >= 0 && a < g.nx() && F.defined(a, j); };
  if (ok(i - 1) && ok(i + 1)) out = (F(i + 1, j) - F(i - 1, j)) / (2 * h);
  else if (ok(i) && ok(i + 1) && ok(i + 2)) out = (-3.0 * F(i, j) + 4.0 * F(i + 1, j) - F(i + 2, j)) / (2 * h);
  else if (ok(i) && ok(i - 1) && ok(i - 2)) out = (3.0 * F(i, j) - 4.0 * F(i - 1, j) + F(i - 2, j)) / (2 * h);
  else return false;
  return true;
}

inline bool diff_y(const GridField& F, int i, int j, cplx& out) {
  const Grid& g = F.grid;
  const double h = g.hy();
  auto ok = [&](int b) { return b >= 0 && b < g.ny() && F.defined(i, b); };
  if (ok(j - 1) && ok(j + 1)) out = (F(i, j + 1) - F(i, j - 1)) / (2 * h);
  else if (ok(j) && ok(j + 1) && ok(j + 2)) out = (-3.0 * F(i, j) + 4.0 * F(i, j + 1) - F(i, j + 2)) / (2 * h);
  else if (ok(j) && ok(j - 1) && ok(j - 2)) out = (3.0 * F(i, j) - 4.0 * F(i, j - 1) + F(i, j - 2)) / (2 * h);
  else return false;
  return true;
}

inline bool diff2(const GridField& F, int i, int j, bool along_x, cplx& out) {
  const Grid& g = F.grid;
  int di = along_x ? 1 : 0, dj = along_x ? 0 : 1;
  double h = along_x ? g.hx() : g.hy();
  auto ok = [&](int k) {
    int a = i + k * di, b = j + k * dj;
    return a >= 0 && a < g.nx() && b >= 0 && b < g.ny() && F.defined(a, b);
  };
  auto at = [&](int k) { return F(i + k * di, j + k * dj); };
  if (ok(-1) && ok(0) && ok(1)) out = (at(1) - 2.0 * at(0) + at(-1)) / (h * h);
  else if (ok(0) && ok(1) && ok(2) && ok(3)) out = (2.0 * at(0) - 5.0 * at(1) + 4.0 * at(2) - at(3)) / (h * h);
  else if (ok(0) && ok(-1) && ok(-2) && ok(-3)) out = (2.0 * at(0) - 5.0 * at(-1) + 4.0 * at(-2) - at(-3)) / (h * h);
  else return false;
  return true;
}

}  // namespace detail

struct FieldCalculus {
  GridField d, dbar, lap;
};

inline FieldCalculus field_calculus(const GridField& F) {
  const Grid& g = F.grid;
  FieldCalculus c{GridField(g), GridField(g), GridField(g)};
  for (int j = 0; j < g.ny(); ++j)
    for (int i = 0; i < g.nx(); ++i) {
      size_t k = g.index(i, j);
      cplx fx, fy, fxx, fyy;
      bool okd = F.defined(i, j) && detail::diff_x(F, i, j, fx) && detail::diff_y(F, i, j, fy);
      bool okl = F.defined(i, j) && detail::diff2(F, i, j, true, fxx) && detail::diff2(F, i, j, false, fyy);
      c.d.mask[k] = c.dbar.mask[k] = okd;
      c.lap.mask[k] = okl;
      if (okd) {
        c.d.v[k] = 0.5 * (fx - kI * fy);
        c.dbar.v[k] = 0.5 * (fx + kI * fy);
      }
      if (okl) c.lap.v[k] = fxx + fyy;
    }
  return c;
}

inline GridField dbar(const GridField& F) { return field_calculus(F).dbar; }

// Fourth-order central dbar where the five-point stencils are defined, the
// second-order one elsewhere.
inline GridField dbar4(const GridField& F) {
  const Grid& g = F.grid;
  GridField out = dbar(F);
  auto ok = [&](int i, int j) { return i >= 0 && i < g.nx() && j >= 0 && j < g.ny() && F.defined(i, j); };
  for (int j = 2; j + 2 < g.ny(); ++j)
    for (int i = 2; i + 2 < g.nx(); ++i) {
      bool full = true;
      for (int a = -2; a <= 2 && full; ++a) full = ok(i + a, j) && ok(i, j + a);
      if (!full) continue;
      cplx fx = (F(i - 2, j) - 8.0 * F(i - 1, j) + 8.0 * F(i + 1, j) - F(i + 2, j)) / (12.0 * g.hx());
      cplx fy = (F(i, j - 2) - 8.0 * F(i, j - 1) + 8.0 * F(i, j + 1) - F(i, j + 2)) / (12.0 * g.hy());
      out.v[g.index(i, j)] = 0.5 * (fx + kI * fy);
    }
  return out;
}

// Carleson intensity of the node-mass measure sum_k mass_k delta_{z_k} over
// squares Q(I) whose base I is a union of consecutive node columns, via a
// two-dimensional prefix sum.
inline double grid_carleson_intensity(const Grid& g, const std::vector<double>& mass) {
  const int nx = g.nx(), ny = g.ny();
  std::vector<double> P(static_cast<size_t>(nx + 1) * (ny + 1), 0.0);
  auto at = [&](int i, int j) -> double& { return P[static_cast<size_t>(j) * (nx + 1) + i]; };
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i)
      at(i + 1, j + 1) = mass[g.index(i, j)] + at(i, j + 1) + at(i + 1, j) - at(i, j);
  double best = 0.0;
  const double hx = g.hx(), hy = g.hy();
  for (int a = 0; a < nx; ++a)
    for (int b = a; b < nx; ++b) {
      double w = (b - a + 1) * hx;
      int jm = std::min(ny, static_cast<int>(std::floor(w / hy + 1e-9)));
      double m = at(b + 1, jm) - at(a, jm);
      best = std::max(best, m / w);
    }
  return best;
}

}  // namespace corona
