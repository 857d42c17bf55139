#pragma once

// Upper half-plane primitives: Blaschke products, the reflection z -> -conj(z),
// corona and sign measurements, the Cayley transfer, and zero-file ingestion.

#include "errors.hpp"
#include "poly.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <map>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace corona {

using cplx = std::complex<double>;
inline constexpr double kPi = 3.14159265358979323846;
inline const cplx kI{0.0, 1.0};

inline cplx reflect(cplx z) { return {-z.real(), z.imag()}; }
inline bool on_axis(cplx a) { return a.real() == 0.0; }

inline cplx blaschke_factor(cplx a, cplx z) { return (z - a) / (z - std::conj(a)); }

// Ordering used everywhere a deterministic zero order is needed.
inline bool zero_less(cplx a, cplx b) {
  if (a.imag() != b.imag()) return a.imag() < b.imag();
  return a.real() < b.real();
}

struct Blaschke {
  std::vector<cplx> zeros;

  Blaschke() = default;
  explicit Blaschke(std::vector<cplx> z) : zeros(std::move(z)) {
    std::sort(zeros.begin(), zeros.end(), zero_less);
  }

  bool empty() const { return zeros.empty(); }
  size_t degree() const { return zeros.size(); }

  cplx operator()(cplx z) const {
    cplx v(1.0, 0.0);
    for (const cplx& a : zeros) v *= blaschke_factor(a, z);
    return v;
  }

  std::vector<cplx> axis_zeros() const {
    std::vector<cplx> out;
    for (const cplx& a : zeros)
      if (on_axis(a)) out.push_back(a);
    return out;
  }
};

inline cplx eval(const Blaschke& b, cplx z) { return b(z); }

inline bool has_zero(const Blaschke& b, cplx a, double tol = 1e-12) {
  for (const cplx& z : b.zeros)
    if (std::abs(z - a) <= tol * std::max(1.0, std::abs(a))) return true;
  return false;
}

inline bool is_symmetric(const Blaschke& b) {
  for (const cplx& a : b.zeros)
    if (!has_zero(b, reflect(a), 0.0)) return false;
  return true;
}

// Validates simplicity, the half-plane condition and exact reflection closure.
inline Blaschke make_symmetric_product(std::vector<cplx> zeros) {
  for (size_t i = 0; i < zeros.size(); ++i) {
    if (!(zeros[i].imag() > 0.0) || !std::isfinite(zeros[i].real()))
      throw Error(ErrorKind::geometry, "zero outside the open upper half-plane");
    for (size_t j = 0; j < i; ++j)
      if (zeros[i] == zeros[j]) throw Error(ErrorKind::geometry, "repeated zero");
  }
  Blaschke b(std::move(zeros));
  if (!is_symmetric(b)) throw Error(ErrorKind::geometry, "zero set is not reflection-closed");
  return b;
}

inline Blaschke reflected(const Blaschke& b) {
  std::vector<cplx> z;
  for (const cplx& a : b.zeros) z.push_back(reflect(a));
  return Blaschke(z);
}

// ---------------------------------------------------------------------------
// Sampled functions and symmetrization

struct Samples {
  std::vector<cplx> z;
  std::vector<cplx> f;
};

// Index of the reflected partner of every sample point; throws when the
// sample set is not reflection-closed.
inline std::vector<size_t> mirror_indices(const std::vector<cplx>& pts, double tol = 1e-12) {
  const size_t n = pts.size();
  std::vector<size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  auto key_less = [&](size_t i, size_t j) {
    if (pts[i].imag() != pts[j].imag()) return pts[i].imag() < pts[j].imag();
    return pts[i].real() < pts[j].real();
  };
  std::sort(order.begin(), order.end(), key_less);
  std::vector<size_t> mirror(n, n);
  for (size_t i = 0; i < n; ++i) {
    cplx target = reflect(pts[i]);
    double scale = tol * std::max(1.0, std::abs(target));
    auto it = std::lower_bound(order.begin(), order.end(), target, [&](size_t k, cplx t) {
      if (pts[k].imag() < t.imag() - scale) return true;
      if (pts[k].imag() > t.imag() + scale) return false;
      return pts[k].real() < t.real() - scale;
    });
    for (; it != order.end(); ++it) {
      if (pts[*it].imag() > target.imag() + scale) break;
      if (std::abs(pts[*it] - target) <= scale) {
        mirror[i] = *it;
        break;
      }
    }
    if (mirror[i] == n) throw Error(ErrorKind::geometry, "sample set is not reflection-closed");
  }
  return mirror;
}

inline Samples symmetrize(const Samples& s) {
  if (s.z.size() != s.f.size()) throw Error(ErrorKind::geometry, "sample size mismatch");
  auto m = mirror_indices(s.z);
  Samples out{s.z, std::vector<cplx>(s.f.size())};
  for (size_t i = 0; i < s.z.size(); ++i) out.f[i] = 0.5 * (s.f[i] + std::conj(s.f[m[i]]));
  return out;
}

inline double symmetry_defect(const Samples& s) {
  auto m = mirror_indices(s.z);
  double d = 0.0;
  for (size_t i = 0; i < s.z.size(); ++i) d = std::max(d, std::abs(s.f[i] - std::conj(s.f[m[i]])));
  return d;
}

// ---------------------------------------------------------------------------
// Corona constant

struct DeltaResult {
  double delta = 0.0;
  cplx argmin{0.0, 1.0};
  bool common_zero = false;
  double box_radius = 0.0;
  double outer_lower_bound = 0.0;  // lower bound of |f1|+|f2| for |z| >= box_radius
  std::string enclosure;
};

struct GridSpec {
  int nx = 256;
  int ny = 128;
  int zoom_rounds = 3;
  int zoom_candidates = 8;
};

namespace detail {

inline double outer_modulus_bound(const Blaschke& b, double R) {
  double v = 1.0;
  for (const cplx& a : b.zeros) {
    double m = std::abs(a);
    v *= (R > m) ? (R - m) / (R + m) : 0.0;
  }
  return v;
}

}  // namespace detail

// Minimum of |f1|+|f2| over the closed upper half-plane. A half-disc box is
// searched on a grid with zoomed refinement; outside the box every factor
// obeys |b_a(z)| >= (|z|-|a|)/(|z|+|a|), and the box is doubled until that
// bound exceeds the box minimum.
inline DeltaResult corona_delta(const Blaschke& f1, const Blaschke& f2, GridSpec g = {}) {
  DeltaResult out;
  for (const cplx& a : f1.zeros)
    if (has_zero(f2, a)) {
      out.common_zero = true;
      out.delta = 0.0;
      out.argmin = a;
      out.enclosure = "common zero";
      return out;
    }
  auto F = [&](cplx z) { return std::abs(f1(z)) + std::abs(f2(z)); };
  if (f1.empty() && f2.empty()) {
    out.delta = 2.0;
    out.enclosure = "both products constant";
    return out;
  }

  double m = 0.0;
  for (const cplx& a : f1.zeros) m = std::max(m, std::abs(a));
  for (const cplx& a : f2.zeros) m = std::max(m, std::abs(a));
  double R = 2.0 * m;

  struct Cand {
    double v;
    cplx z;
    double w;
  };
  for (int expand = 0; expand < 40; ++expand) {
    std::vector<Cand> cands;
    const double hx = 2.0 * R / g.nx, hy = R / g.ny;
    for (int j = 0; j < g.ny; ++j)
      for (int i = 0; i < g.nx; ++i) {
        cplx z(-R + (i + 0.5) * hx, (j + 0.5) * hy);
        if (std::abs(z) > R) continue;
        cands.push_back({F(z), z, std::max(hx, hy)});
      }
    for (const Blaschke* b : {&f1, &f2})
      for (const cplx& a : b->zeros) cands.push_back({F(a), a, 0.5 * a.imag()});
    std::sort(cands.begin(), cands.end(), [](const Cand& a, const Cand& b) {
      if (a.v != b.v) return a.v < b.v;
      return zero_less(a.z, b.z);
    });
    Cand best = cands.front();
    const size_t K = std::min<size_t>(cands.size(), g.zoom_candidates);
    std::vector<Cand> seeds(cands.begin(), cands.begin() + K);
    for (const Blaschke* b : {&f1, &f2})
      for (const cplx& a : b->zeros) seeds.push_back({F(a), a, 0.5 * a.imag()});
    for (Cand c : seeds) {
      double w = c.w;
      for (int round = 0; round < g.zoom_rounds; ++round) {
        Cand local = c;
        for (int j = -10; j <= 10; ++j)
          for (int i = -10; i <= 10; ++i) {
            cplx z = c.z + cplx(i * w / 10.0, j * w / 10.0);
            if (z.imag() <= 0.0) continue;
            double v = F(z);
            if (v < local.v) local = {v, z, w};
          }
        c = local;
        w /= 10.0;
      }
      if (c.v < best.v) best = c;
    }
    double lb = detail::outer_modulus_bound(f1, R) + detail::outer_modulus_bound(f2, R);
    if (lb >= best.v || expand == 39) {
      out.delta = best.v;
      out.argmin = best.z;
      out.box_radius = R;
      out.outer_lower_bound = lb;
      std::ostringstream os;
      os.precision(6);
      os << "grid " << g.nx << "x" << g.ny << " on half-disc radius " << R << " with "
         << g.zoom_rounds << " zoom rounds; outside: |f1|+|f2| >= " << lb;
      out.enclosure = os.str();
      if (out.delta < 1e-12) out.common_zero = true;
      return out;
    }
    R *= 2.0;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Sublevel sets on the imaginary axis and the sign condition

struct AxisInterval {
  double lo, hi;  // open interval (lo, hi) of heights y
};

// {y > 0 : |b(iy)| < t} as a finite union of open intervals. Endpoints are
// roots of |N(iy)|^2 - t^2 |D(iy)|^2, isolated by companion eigenvalues and a
// log-spaced scan, then bisected to 1e-10 relative.
inline std::vector<AxisInterval> axis_sublevel(const Blaschke& b, double t) {
  std::vector<AxisInterval> out;
  if (b.empty() || t <= 0.0) return out;
  auto h = [&](double y) { return std::abs(b(cplx(0.0, y))) - t; };

  using CP = Poly<cplx>;
  CP N = CP::constant(1.0), D = CP::constant(1.0);
  for (const cplx& a : b.zeros) {
    N = N * CP(std::vector<cplx>{-a, kI});
    D = D * CP(std::vector<cplx>{-std::conj(a), kI});
  }
  auto conj_poly = [](const CP& p) {
    std::vector<cplx> c = p.c;
    for (auto& v : c) v = std::conj(v);
    return CP(c);
  };
  CP P = N * conj_poly(N) - (t * t) * (D * conj_poly(D));

  double ymin = std::numeric_limits<double>::infinity(), ymax = 0.0;
  for (const cplx& a : b.zeros) {
    ymin = std::min(ymin, a.imag());
    ymax = std::max(ymax, std::abs(a));
  }
  std::vector<std::pair<double, double>> brackets;
  for (const cplx& r : poly_roots(P)) {
    if (r.real() <= 0.0 || std::abs(r.imag()) > 1e-6 * (1.0 + std::abs(r))) continue;
    double d = 1e-7 * (1.0 + std::abs(r.real()));
    for (int k = 0; k < 12; ++k, d *= 4.0) {
      double lo = std::max(r.real() - d, 0.5 * r.real()), hi = r.real() + d;
      if ((h(lo) < 0.0) != (h(hi) < 0.0)) {
        brackets.push_back({lo, hi});
        break;
      }
    }
  }
  {
    const int n = 4000;
    double a0 = std::log(ymin * 1e-3), a1 = std::log(ymax * 1e3);
    double yprev = std::exp(a0), hprev = h(yprev);
    for (int k = 1; k <= n; ++k) {
      double y = std::exp(a0 + (a1 - a0) * k / n), hv = h(y);
      if ((hprev < 0.0) != (hv < 0.0)) brackets.push_back({yprev, y});
      yprev = y;
      hprev = hv;
    }
  }
  std::vector<double> roots;
  for (auto [lo, hi] : brackets) {
    bool neg_lo = h(lo) < 0.0;
    while (hi - lo > 1e-10 * std::max(1.0, hi)) {
      double mid = 0.5 * (lo + hi);
      if ((h(mid) < 0.0) == neg_lo) lo = mid; else hi = mid;
    }
    roots.push_back(0.5 * (lo + hi));
  }
  std::sort(roots.begin(), roots.end());
  std::vector<double> uniq;
  for (double r : roots)
    if (uniq.empty() || r - uniq.back() > 1e-8 * std::max(1.0, r)) uniq.push_back(r);

  std::vector<double> pts{0.0};
  pts.insert(pts.end(), uniq.begin(), uniq.end());
  for (size_t k = 0; k + 1 < pts.size(); ++k) {
    double mid = 0.5 * (pts[k] + pts[k + 1]);
    if (h(mid) < 0.0) out.push_back({pts[k], pts[k + 1]});
  }
  return out;
}

struct SignCheck {
  std::vector<AxisInterval> intervals;
  int sign = 1;
  bool violation = false;
  double witness_pos = 0.0;  // heights y with f1(iy) > 0 and < 0
  double witness_neg = 0.0;
};

inline SignCheck axis_sign_condition(const Blaschke& f1, const Blaschke& f2, double threshold) {
  if (!(threshold > 0.0 && threshold < 1.0))
    throw Error(ErrorKind::hypothesis, "threshold must lie in (0,1)");
  SignCheck out;
  out.intervals = axis_sublevel(f2, threshold);
  std::vector<double> witnesses;
  for (const auto& iv : out.intervals) {
    bool found = false;
    for (double s : {0.5, 0.3, 0.7, 0.1, 0.9}) {
      double y = iv.lo + s * (iv.hi - iv.lo);
      if (std::abs(f1(cplx(0.0, y))) > 1e-14) {
        witnesses.push_back(y);
        found = true;
        break;
      }
    }
    if (!found) throw Error(ErrorKind::degenerate, "f1 vanishes on a sublevel interval");
  }
  for (const cplx& a : f2.axis_zeros()) witnesses.push_back(a.imag());
  bool have_pos = false, have_neg = false;
  for (double y : witnesses) {
    double v = f1(cplx(0.0, y)).real();
    if (v > 0.0 && !have_pos) {
      have_pos = true;
      out.witness_pos = y;
    }
    if (v < 0.0 && !have_neg) {
      have_neg = true;
      out.witness_neg = y;
    }
  }
  out.violation = have_pos && have_neg;
  out.sign = (have_neg && !have_pos) ? -1 : 1;
  return out;
}

// ---------------------------------------------------------------------------
// Cayley transfer: the half-plane maps onto the disc by z -> (z-i)/(z+i).

inline cplx to_disc(cplx z) {
  if (std::abs(z + kI) == 0.0) throw Error(ErrorKind::excluded_point, "z = -i is the pole of the transfer");
  return (z - kI) / (z + kI);
}

inline cplx to_halfplane(cplx w) {
  if (std::abs(1.0 - w) == 0.0) throw Error(ErrorKind::excluded_point, "w = 1 is the pole of the transfer");
  return kI * (1.0 + w) / (1.0 - w);
}

inline std::vector<cplx> zeros_to_disc(const Blaschke& b) {
  std::vector<cplx> out;
  for (const cplx& a : b.zeros) out.push_back(to_disc(a));
  return out;
}

inline Blaschke zeros_from_disc(const std::vector<cplx>& w) {
  std::vector<cplx> z;
  for (const cplx& v : w) {
    cplx a = to_halfplane(v);
    if (v.imag() == 0.0) a = cplx(0.0, a.imag());
    z.push_back(a);
  }
  return Blaschke(z);
}

inline Samples samples_to_disc(const Samples& s) {
  Samples out{{}, s.f};
  for (const cplx& z : s.z) out.z.push_back(to_disc(z));
  return out;
}

inline Samples samples_from_disc(const Samples& s) {
  Samples out{{}, s.f};
  for (const cplx& w : s.z) out.z.push_back(to_halfplane(w));
  return out;
}

// ---------------------------------------------------------------------------
// Two-sided estimate of log(1/|B(z)|) by the Poisson-type sum.

struct LogModulusBounds {
  double lower = 0.0, upper = 0.0, actual = 0.0;
};

inline LogModulusBounds log_modulus_sum(const Blaschke& b, cplx z, double gamma) {
  LogModulusBounds out;
  double s = 0.0, act = 0.0;
  for (const cplx& a : b.zeros) {
    double m = std::abs(blaschke_factor(a, z));
    if (m < gamma) {
      std::ostringstream os;
      os << "|b_a(z)| < gamma for a = " << a.real() << "+" << a.imag() << "i";
      throw Error(ErrorKind::hypothesis, os.str());
    }
    s += 2.0 * z.imag() * a.imag() / std::norm(z - std::conj(a));
    act -= std::log(m);
  }
  out.lower = s;
  out.upper = s / gamma;
  out.actual = act;
  return out;
}

// ---------------------------------------------------------------------------
// Zero-set text format: "re im" per line, '#' starts a comment line.

struct ZeroFile {
  Blaschke product;
  std::vector<cplx> added_partners;
};

inline ZeroFile parse_zero_text(const std::string& text) {
  std::vector<cplx> zs;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::istringstream ls(line);
    double re, im;
    std::string rest;
    if (!(ls >> re >> im) || (ls >> rest)) {
      throw Error(ErrorKind::parse, "line " + std::to_string(lineno) + ": expected 're im'");
    }
    if (!(im > 0.0) || !std::isfinite(re) || !std::isfinite(im))
      throw Error(ErrorKind::parse, "line " + std::to_string(lineno) + ": zero must have im > 0");
    zs.emplace_back(re == 0.0 ? 0.0 : re, im);
  }
  ZeroFile out;
  std::vector<cplx> all = zs;
  for (const cplx& a : zs) {
    cplx r = reflect(a);
    bool present = false;
    for (const cplx& b : all)
      if (b == r) present = true;
    if (!present) {
      all.push_back(r);
      out.added_partners.push_back(r);
    }
  }
  for (size_t i = 0; i < all.size(); ++i)
    for (size_t j = 0; j < i; ++j)
      if (all[i] == all[j]) throw Error(ErrorKind::parse, "repeated zero in input");
  out.product = make_symmetric_product(all);
  return out;
}

}  // namespace corona
