#pragma once

// Independent unimodularity certificate: rational u1, u2 with f1 u1 + f2 u2 = 1.
// In the disc variable w = (z - i)/(z + i) each factor is
//   b_a = ((i - a) + (i + a) w) / ((i - conj a) + (i + conj a) w),
// so f_k = N_k / D_k where N_k has its roots in the open disc and D_k has
// none on the closed disc. The Sylvester system A N1 + B N2 = 1 gives
// u1 = A D1 and u2 = B D2.

#include "halfplane.hpp"
#include "poly.hpp"

#include <Eigen/Dense>

#include <random>

namespace corona {

using CPoly = Poly<cplx>;

inline CPoly disc_numerator(const Blaschke& b) {
  CPoly p = CPoly::constant(1.0);
  for (const cplx& a : b.zeros) p = p * CPoly(std::vector<cplx>{kI - a, kI + a});
  return p;
}

inline CPoly disc_denominator(const Blaschke& b) {
  CPoly p = CPoly::constant(1.0);
  for (const cplx& a : b.zeros) p = p * CPoly(std::vector<cplx>{kI - std::conj(a), kI + std::conj(a)});
  return p;
}

struct BezoutOracle {
  CPoly u1, u2;  // in the disc variable
  double rcond = 1.0;
  double residual = 0.0;  // grid plus random points
  size_t points = 0;

  cplx eval_u1(cplx z) const { return u1(to_disc(z)); }
  cplx eval_u2(cplx z) const { return u2(to_disc(z)); }
};

// A P + B Q = 1 with deg A < deg Q and deg B < deg P.
inline std::pair<CPoly, CPoly> sylvester_solve(const CPoly& P, const CPoly& Q, double& rcond) {
  const int n = P.degree(), m = Q.degree(), N = n + m;
  Eigen::MatrixXcd S = Eigen::MatrixXcd::Zero(N, N);
  for (int j = 0; j < m; ++j)
    for (int k = 0; k <= n; ++k) S(j + k, j) = P.c[k];
  for (int j = 0; j < n; ++j)
    for (int k = 0; k <= m; ++k) S(j + k, m + j) = Q.c[k];
  Eigen::VectorXcd rhs = Eigen::VectorXcd::Zero(N);
  rhs(0) = 1.0;
  Eigen::FullPivLU<Eigen::MatrixXcd> lu(S);
  rcond = lu.rcond();
  if (rcond < 1e-14) throw Error(ErrorKind::not_unimodular, "resultant vanishes: common zero");
  Eigen::VectorXcd x = lu.solve(rhs);
  std::vector<cplx> a(x.data(), x.data() + m), b(x.data() + m, x.data() + N);
  return {CPoly(a), CPoly(b)};
}

inline double bezout_residual(const Blaschke& f1, const Blaschke& f2, const BezoutOracle& o, cplx z) {
  return std::abs(f1(z) * o.eval_u1(z) + f2(z) * o.eval_u2(z) - 1.0);
}

// Residual checked on an n x n grid over [-X, X] x (0, Y] and `random`
// seeded points of the same box.
inline BezoutOracle bezout_oracle(const Blaschke& f1, const Blaschke& f2, double X = 4.0, double Y = 4.0,
                                  int n = 200, int random = 10000, uint64_t seed = 42) {
  for (const cplx& a : f1.zeros)
    if (has_zero(f2, a)) throw Error(ErrorKind::not_unimodular, "common zero");
  BezoutOracle o;
  if (f1.empty()) {
    o.u1 = CPoly::constant(1.0);
  } else if (f2.empty()) {
    o.u2 = CPoly::constant(1.0);
  } else {
    auto [A, B] = sylvester_solve(disc_numerator(f1), disc_numerator(f2), o.rcond);
    o.u1 = A * disc_denominator(f1);
    o.u2 = B * disc_denominator(f2);
  }
  for (int j = 1; j <= n; ++j)
    for (int i = 0; i <= n; ++i) {
      cplx z(-X + 2.0 * X * i / n, Y * j / n);
      o.residual = std::max(o.residual, bezout_residual(f1, f2, o, z));
      ++o.points;
    }
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> ux(-X, X), uy(Y / n, Y);
  for (int k = 0; k < random; ++k) {
    cplx z(ux(rng), uy(rng));
    o.residual = std::max(o.residual, bezout_residual(f1, f2, o, z));
    ++o.points;
  }
  return o;
}

}  // namespace corona
