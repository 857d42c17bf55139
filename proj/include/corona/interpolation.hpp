#pragma once

// Bounded analytic interpolation on the upper half-plane. The smallest
// admissible sup-norm is found by bisection on the Pick matrix
//   P_ij = (rho^2 - t_i conj t_j) i / (z_i - conj z_j),
// and the interpolant is realized by the Schur recursion on rho' = 1.01 rho.

#include "halfplane.hpp"

#include <Eigen/Dense>

#include <vector>

namespace corona {

namespace detail {

// Pick matrix with the Szego kernel normalized to unit diagonal.
inline Eigen::MatrixXcd pick_matrix(const std::vector<cplx>& z, const std::vector<cplx>& t, double rho) {
  const int n = static_cast<int>(z.size());
  Eigen::MatrixXcd P(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      cplx k = kI / (z[i] - std::conj(z[j]));
      double s = std::sqrt(4.0 * z[i].imag() * z[j].imag());
      P(i, j) = (rho * rho - t[i] * std::conj(t[j])) * k * s;
    }
  return P;
}

inline double min_eigenvalue(const Eigen::MatrixXcd& P) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(P, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

}  // namespace detail

inline bool pick_feasible(const std::vector<cplx>& z, const std::vector<cplx>& t, double rho) {
  Eigen::MatrixXcd P = detail::pick_matrix(z, t, rho);
  return detail::min_eigenvalue(P) >= -1e-12 * std::max(rho * rho, 1e-300) * P.rows();
}

struct Interpolant {
  std::vector<cplx> nodes, targets;
  double rho = 0.0;       // smallest feasible norm found by the search
  double rho_used = 0.0;  // norm of the realized interpolant
  double pick_min_eig = 0.0;
  std::vector<cplx> gamma;  // Schur parameters, one per node

  // the unsymmetrized interpolant l
  cplx raw(cplx z) const {
    if (gamma.empty()) return 0.0;
    cplx S = 0.0;
    for (size_t k = gamma.size(); k-- > 0;) {
      cplx bS = blaschke_factor(nodes[k], z) * S;
      S = (gamma[k] + bS) / (1.0 + std::conj(gamma[k]) * bS);
    }
    return rho_used * S;
  }
  // h = (l + l^dagger) / 2
  cplx operator()(cplx z) const { return 0.5 * (raw(z) + std::conj(raw(reflect(z)))); }

  double max_node_error() const {
    double e = 0.0;
    for (size_t k = 0; k < nodes.size(); ++k) e = std::max(e, std::abs((*this)(nodes[k]) - targets[k]));
    return e;
  }
};

// Nodes must be distinct points of the upper half-plane, closed under
// reflection, with conjugate targets at mirrored nodes.
inline Interpolant interpolate_symmetric(const std::vector<cplx>& nodes, const std::vector<cplx>& targets,
                                         double max_norm = 1e6) {
  if (nodes.size() != targets.size()) throw Error(ErrorKind::inconsistent_input, "node and target counts differ");
  Interpolant I;
  I.nodes = nodes;
  I.targets = targets;
  double lo = 0.0;
  for (size_t k = 0; k < nodes.size(); ++k) {
    if (!(nodes[k].imag() > 0.0)) throw Error(ErrorKind::inconsistent_input, "interpolation node off the half-plane");
    for (size_t j = 0; j < k; ++j)
      if (nodes[j] == nodes[k]) throw Error(ErrorKind::inconsistent_input, "repeated interpolation node");
    lo = std::max(lo, std::abs(targets[k]));
  }
  for (size_t k = 0; k < nodes.size(); ++k) {
    bool ok = false;
    for (size_t j = 0; j < nodes.size(); ++j)
      if (nodes[j] == reflect(nodes[k]))
        ok = std::abs(targets[j] - std::conj(targets[k])) <= 1e-12 * (1.0 + std::abs(targets[k]));
    if (!ok) throw Error(ErrorKind::inconsistent_input, "targets are not reflection-symmetric");
  }
  if (lo == 0.0) return I;

  double hi = lo;
  while (!pick_feasible(nodes, targets, hi)) {
    hi *= 2.0;
    if (hi > max_norm) throw Error(ErrorKind::ill_conditioned, "Pick search exceeds the norm bound 1e6");
  }
  if (hi > lo) {
    double a = hi / 2.0 > lo ? hi / 2.0 : lo, b = hi;
    while (b - a > 1e-9 * b) {
      double m = 0.5 * (a + b);
      (pick_feasible(nodes, targets, m) ? b : a) = m;
    }
    hi = b;
  }
  I.rho = hi;
  I.rho_used = 1.01 * hi;
  I.pick_min_eig = detail::min_eigenvalue(detail::pick_matrix(nodes, targets, I.rho_used));

  // Schur recursion: S(z_k) = w_k with S = (g + b_1 S_1) / (1 + conj(g) b_1 S_1)
  std::vector<cplx> w;
  for (const cplx& t : targets) w.push_back(t / I.rho_used);
  for (size_t j = 0; j < nodes.size(); ++j) {
    cplx g = w[j];
    if (!(std::abs(g) < 1.0)) throw Error(ErrorKind::ill_conditioned, "Schur parameter outside the unit disc");
    I.gamma.push_back(g);
    for (size_t k = j + 1; k < nodes.size(); ++k)
      w[k] = (w[k] - g) / (1.0 - std::conj(g) * w[k]) / blaschke_factor(nodes[j], nodes[k]);
  }
  return I;
}

}  // namespace corona
