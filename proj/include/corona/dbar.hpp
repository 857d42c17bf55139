#pragma once

// Solution of dbar v = f on the grid box by the Cauchy-Pompeiu area transform
//   v(z) = (1/pi) Int_Omega f(zeta) / (z - zeta) dA(zeta)
// with f piecewise constant on node-centered cells and every cell integrated
// exactly, evaluated on the grid by zero-padded FFT convolution.

#include "grid.hpp"
#include "vfield.hpp"

#include <unsupported/Eigen/FFT>

namespace corona {

// Fields obeying f(-conj z) = -conj f(z); dbar maps symmetric fields to these.
inline GridField sample_antisymmetric(const Grid& g, const std::function<cplx(cplx)>& f) {
  GridField F(g);
  for (int j = 0; j < g.ny(); ++j)
    for (int i = g.n / 2; i <= g.n; ++i) {
      cplx v = f(g.node(i, j));
      if (i == g.n / 2) v = cplx(0.0, v.imag());
      F(i, j) = v;
      F(g.mirror(i), j) = -std::conj(v);
    }
  return F;
}

// (1/pi) Int_cell dA / (u - zeta) for the cell [-hx/2, hx/2] x [-hy/2, hy/2],
// by Stokes: Int dA / (u - zeta) = -(1/2i) Oint conj(zeta - u) / (zeta - u) dzeta.
inline cplx cell_kernel_exact(cplx u, double hx, double hy) {
  const cplx c[4] = {{-hx / 2, -hy / 2}, {hx / 2, -hy / 2}, {hx / 2, hy / 2}, {-hx / 2, hy / 2}};
  cplx s = 0.0;
  for (int k = 0; k < 4; ++k) {
    cplx A = c[k] - u, D = c[(k + 1) % 4] - c[k], B = A + D;
    double im = (std::conj(A) * D).imag();
    if (im == 0.0) continue;
    s += im / D * std::log(B / A);
  }
  return -s / kPi;
}

inline cplx cell_kernel(cplx u, double hx, double hy) {
  double au = std::abs(u);
  if (au <= 6.0 * std::max(hx, hy)) return cell_kernel_exact(u, hx, hy);
  double m2 = (hx * hx - hy * hy) / 12.0;
  double m4 = std::pow(hx, 4) / 80.0 - hx * hx * hy * hy / 24.0 + std::pow(hy, 4) / 80.0;
  cplx iu = 1.0 / u, iu2 = iu * iu;
  return hx * hy / kPi * iu * (1.0 + iu2 * (m2 + m4 * iu2));
}

namespace detail {

inline int fft_size(int n) {
  int p = 1;
  while (p < n) p *= 2;
  return p;
}

inline void fft2(std::vector<cplx>& a, int px, int py, bool inverse) {
  Eigen::FFT<double> fft;
  std::vector<cplx> in, out;
  in.resize(px);
  for (int j = 0; j < py; ++j) {
    std::copy(a.begin() + static_cast<size_t>(j) * px, a.begin() + static_cast<size_t>(j + 1) * px, in.begin());
    if (inverse) fft.inv(out, in); else fft.fwd(out, in);
    std::copy(out.begin(), out.end(), a.begin() + static_cast<size_t>(j) * px);
  }
  in.resize(py);
  for (int i = 0; i < px; ++i) {
    for (int j = 0; j < py; ++j) in[j] = a[static_cast<size_t>(j) * px + i];
    if (inverse) fft.inv(out, in); else fft.fwd(out, in);
    for (int j = 0; j < py; ++j) a[static_cast<size_t>(j) * px + i] = out[j];
  }
}

}  // namespace detail

// v on the grid nodes for piecewise-constant data f on the node cells.
inline GridField cauchy_transform(const GridField& f) {
  const Grid& g = f.grid;
  const int nx = g.nx(), ny = g.ny();
  const int px = detail::fft_size(2 * nx - 1), py = detail::fft_size(2 * ny - 1);
  const double hx = g.hx(), hy = g.hy();
  std::vector<cplx> K(static_cast<size_t>(px) * py, 0.0), D(K.size(), 0.0);
  for (int b = 0; b < py; ++b) {
    int dj = b < ny ? b : b - py;
    if (dj <= -ny || dj >= ny) continue;
    for (int a = 0; a < px; ++a) {
      int di = a < nx ? a : a - px;
      if (di <= -nx || di >= nx) continue;
      K[static_cast<size_t>(b) * px + a] = cell_kernel(cplx(di * hx, dj * hy), hx, hy);
    }
  }
  bool any = false;
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i)
      if (f.defined(i, j) && f(i, j) != 0.0) {
        D[static_cast<size_t>(j) * px + i] = f(i, j);
        any = true;
      }
  GridField v(g);
  if (!any) return v;
  detail::fft2(K, px, py, false);
  detail::fft2(D, px, py, false);
  for (size_t k = 0; k < K.size(); ++k) D[k] *= K[k];
  detail::fft2(D, px, py, true);
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) v(i, j) = D[static_cast<size_t>(j) * px + i];
  return v;
}

// The same transform at an arbitrary point by direct summation over the
// support of f.
class TransformEvaluator {
 public:
  TransformEvaluator() = default;
  explicit TransformEvaluator(const GridField& f) : g_(f.grid) {
    for (int j = 0; j < g_.ny(); ++j)
      for (int i = 0; i < g_.nx(); ++i)
        if (f.defined(i, j) && f(i, j) != 0.0) support_.push_back({g_.node(i, j), f(i, j)});
  }
  cplx operator()(cplx z) const {
    const double hx = g_.hx(), hy = g_.hy(), near = 36.0 * std::max(hx, hy) * std::max(hx, hy);
    const double m2 = (hx * hx - hy * hy) / 12.0;
    const double m4 = std::pow(hx, 4) / 80.0 - hx * hx * hy * hy / 24.0 + std::pow(hy, 4) / 80.0;
    cplx s = 0.0, far = 0.0;
    for (const auto& [c, w] : support_) {
      cplx u = z - c;
      double n = std::norm(u);
      if (n <= near) {
        s += w * cell_kernel_exact(u, hx, hy);
      } else {
        cplx iu = std::conj(u) / n, iu2 = iu * iu;
        far += w * iu * (1.0 + iu2 * (m2 + m4 * iu2));
      }
    }
    return s + far * (hx * hy / kPi);
  }
  size_t support_size() const { return support_.size(); }

 private:
  Grid g_;
  std::vector<std::pair<cplx, cplx>> support_;
};

struct DbarCheck {
  double max_abs = 0.0;  // max |dbar v - f| over checked nodes
  double max_rel = 0.0;  // relative to max |f|
  double p99_rel = 0.0;
  size_t nodes = 0;
};

// Finite-difference dbar of v against f on nodes at least `margin` nodes away
// from the box boundary and at height at least `bottom`.
inline DbarCheck verify_dbar(const GridField& v, const GridField& f, int margin = 2, double bottom = 0.0) {
  const Grid& g = v.grid;
  GridField d = dbar4(v);
  double fmax = 0.0;
  for (size_t k = 0; k < f.v.size(); ++k)
    if (f.mask[k]) fmax = std::max(fmax, std::abs(f.v[k]));
  std::vector<double> err;
  for (int j = margin; j < g.ny() - margin; ++j)
    for (int i = margin; i < g.nx() - margin; ++i)
      if (g.y(j) >= bottom && d.defined(i, j) && f.defined(i, j)) err.push_back(std::abs(d(i, j) - f(i, j)));
  DbarCheck c;
  c.nodes = err.size();
  if (err.empty()) return c;
  c.max_abs = *std::max_element(err.begin(), err.end());
  size_t k99 = static_cast<size_t>(0.99 * (err.size() - 1));
  std::nth_element(err.begin(), err.begin() + k99, err.end());
  double scale = fmax > 0.0 ? fmax : 1.0;
  c.max_rel = c.max_abs / scale;
  c.p99_rel = err[k99] / scale;
  return c;
}

struct DbarSolution {
  GridField v;
  GridField f;
  double sup_v = 0.0;
  DbarCheck residual;
  double symmetry_defect = 0.0;
  bool symmetric = false;
  TransformEvaluator eval;
};

inline DbarSolution solve_dbar(const GridField& f) {
  DbarSolution s;
  s.f = f;
  s.v = symmetrize(cauchy_transform(f));
  for (const cplx& x : s.v.v) s.sup_v = std::max(s.sup_v, std::abs(x));
  s.residual = verify_dbar(s.v, f);
  s.symmetry_defect = symmetry_defect(s.v);
  s.symmetric = s.symmetry_defect <= 1e-12 * std::max(1.0, s.sup_v);
  s.eval = TransformEvaluator(f);
  return s;
}

struct Kappa {
  GridField kappa;
  double sup_re = 0.0;
  double sup_dbar = 0.0;  // analyticity certificate, max |dbar kappa| on interior nodes
  double symmetry_defect = 0.0;
  double sup_exp = 0.0, sup_exp_neg = 0.0;
};

inline Kappa make_kappa(const GridField& V, const DbarSolution& sol, int margin = 2) {
  Kappa k;
  k.kappa = symmetrize(V - sol.v);
  const Grid& g = V.grid;
  GridField d = dbar(k.kappa);
  for (int j = 0; j < g.ny(); ++j)
    for (int i = 0; i < g.nx(); ++i) {
      cplx x = k.kappa(i, j);
      k.sup_re = std::max(k.sup_re, std::abs(x.real()));
      k.sup_exp = std::max(k.sup_exp, std::exp(x.real()));
      k.sup_exp_neg = std::max(k.sup_exp_neg, std::exp(-x.real()));
      if (i >= margin && j >= margin && i < g.nx() - margin && j < g.ny() - margin && d.defined(i, j))
        k.sup_dbar = std::max(k.sup_dbar, std::abs(d(i, j)));
    }
  k.symmetry_defect = symmetry_defect(k.kappa);
  return k;
}

// ---------------------------------------------------------------------------
// Oracle for indicator data: (1/pi) Int_Q dA / (z - zeta) over a rectangle,
// integrating in x in closed form and in y by adaptive Simpson.

inline cplx indicator_transform_oracle(cplx z, double x0, double x1, double y0, double y1, double tol = 1e-13) {
  // Int_{x0}^{x1} dx / (z - x - i y) = log(z - x0 - i y) - log(z - x1 - i y), continuous in y
  auto inner = [&](double y) {
    cplx a = z - cplx(x0, y), b = z - cplx(x1, y);
    return std::log(a / b);
  };
  std::function<cplx(double, double, cplx, cplx, cplx, double, int)> simpson =
      [&](double a, double b, cplx fa, cplx fm, cplx fb, double eps, int depth) -> cplx {
    double m = 0.5 * (a + b), lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    cplx flm = inner(lm), frm = inner(rm);
    cplx whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    cplx left = (m - a) / 6.0 * (fa + 4.0 * flm + fm), right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    if (depth > 50 || std::abs(left + right - whole) <= 15.0 * eps) return left + right + (left + right - whole) / 15.0;
    return simpson(a, m, fa, flm, fm, eps / 2, depth + 1) + simpson(m, b, fm, frm, fb, eps / 2, depth + 1);
  };
  // split at the height of z, where the integrand has a log kink
  std::vector<double> cuts{y0, y1};
  if (z.imag() > y0 && z.imag() < y1) cuts.insert(cuts.begin() + 1, z.imag());
  cplx s = 0.0;
  for (size_t k = 0; k + 1 < cuts.size(); ++k) {
    double a = cuts[k], b = cuts[k + 1];
    s += simpson(a, b, inner(a), inner(0.5 * (a + b)), inner(b), tol, 0);
  }
  return s / kPi;
}

}  // namespace corona
