#pragma once

// Dense univariate polynomials, coefficients stored lowest degree first.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

namespace corona {

template <typename T>
struct Poly {
  std::vector<T> c;

  Poly() = default;
  explicit Poly(std::vector<T> coeffs) : c(std::move(coeffs)) { trim(); }
  static Poly constant(T v) { return Poly(std::vector<T>{v}); }

  int degree() const { return c.empty() ? -1 : static_cast<int>(c.size()) - 1; }
  bool is_zero() const { return c.empty(); }
  T lead() const { return c.empty() ? T(0) : c.back(); }

  void trim(double tol = 0.0) {
    while (!c.empty() && std::abs(c.back()) <= tol) c.pop_back();
  }

  template <typename Z>
  Z operator()(Z z) const {
    Z acc(0);
    for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * z + Z(*it);
    return acc;
  }

  friend Poly operator+(const Poly& a, const Poly& b) {
    std::vector<T> r(std::max(a.c.size(), b.c.size()), T(0));
    for (size_t i = 0; i < a.c.size(); ++i) r[i] += a.c[i];
    for (size_t i = 0; i < b.c.size(); ++i) r[i] += b.c[i];
    return Poly(std::move(r));
  }
  friend Poly operator-(const Poly& a, const Poly& b) {
    std::vector<T> r(std::max(a.c.size(), b.c.size()), T(0));
    for (size_t i = 0; i < a.c.size(); ++i) r[i] += a.c[i];
    for (size_t i = 0; i < b.c.size(); ++i) r[i] -= b.c[i];
    return Poly(std::move(r));
  }
  friend Poly operator*(const Poly& a, const Poly& b) {
    if (a.is_zero() || b.is_zero()) return Poly();
    std::vector<T> r(a.c.size() + b.c.size() - 1, T(0));
    for (size_t i = 0; i < a.c.size(); ++i)
      for (size_t j = 0; j < b.c.size(); ++j) r[i + j] += a.c[i] * b.c[j];
    return Poly(std::move(r));
  }
  friend Poly operator*(T s, const Poly& a) {
    std::vector<T> r = a.c;
    for (auto& v : r) v *= s;
    return Poly(std::move(r));
  }
};

template <typename T>
Poly<T> from_roots(const std::vector<T>& roots) {
  Poly<T> p = Poly<T>::constant(T(1));
  for (const T& r : roots) p = p * Poly<T>(std::vector<T>{-r, T(1)});
  return p;
}

template <typename T>
struct DivMod {
  Poly<T> q, r;
};

// Long division; remainder coefficients below rel_tol * |a| are dropped.
template <typename T>
DivMod<T> divmod(const Poly<T>& a, const Poly<T>& b, double rel_tol = 0.0) {
  DivMod<T> out;
  if (a.degree() < b.degree()) {
    out.r = a;
    return out;
  }
  std::vector<T> r = a.c;
  std::vector<T> q(a.c.size() - b.c.size() + 1, T(0));
  double scale = 0.0;
  for (const auto& v : a.c) scale = std::max(scale, double(std::abs(v)));
  for (int k = static_cast<int>(q.size()) - 1; k >= 0; --k) {
    T f = r[k + b.c.size() - 1] / b.lead();
    q[k] = f;
    for (size_t j = 0; j < b.c.size(); ++j) r[k + j] -= f * b.c[j];
    r[k + b.c.size() - 1] = T(0);
  }
  out.q = Poly<T>(q);
  out.r = Poly<T>(r);
  out.r.trim(rel_tol * scale);
  return out;
}

template <typename T>
struct EuclidResult {
  Poly<T> gcd, s, t;  // s*a + t*b = gcd
};

// Extended Euclid. A remainder is treated as zero once its coefficients fall
// below rel_tol times the size of the dividend.
template <typename T>
EuclidResult<T> extended_euclid(const Poly<T>& a, const Poly<T>& b, double rel_tol = 1e-12) {
  Poly<T> r0 = a, r1 = b;
  Poly<T> s0 = Poly<T>::constant(T(1)), s1;
  Poly<T> t0, t1 = Poly<T>::constant(T(1));
  while (!r1.is_zero()) {
    auto dm = divmod(r0, r1, rel_tol);
    Poly<T> r2 = dm.r;
    Poly<T> s2 = s0 - dm.q * s1;
    Poly<T> t2 = t0 - dm.q * t1;
    r0 = r1; r1 = r2;
    s0 = s1; s1 = s2;
    t0 = t1; t1 = t2;
  }
  return {r0, s0, t0};
}

// All complex roots via companion-matrix eigenvalues.
inline std::vector<std::complex<double>> poly_roots(const Poly<std::complex<double>>& p) {
  const int n = p.degree();
  std::vector<std::complex<double>> out;
  if (n < 1) return out;
  Eigen::MatrixXcd comp = Eigen::MatrixXcd::Zero(n, n);
  for (int i = 1; i < n; ++i) comp(i, i - 1) = 1.0;
  for (int i = 0; i < n; ++i) comp(i, n - 1) = -p.c[i] / p.lead();
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(comp, false);
  for (int i = 0; i < n; ++i) out.push_back(es.eigenvalues()(i));
  return out;
}

}  // namespace corona
