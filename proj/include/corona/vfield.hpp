#pragma once

// The correcting function V. Every summand family carries a product of
// Blaschke factors, an interior (regions and discs) where its raw field phi
// vanishes, and one path per zero that runs inside the interior to a slit and
// down the slit to the real line, continued by reflection into the lower
// half-plane. Outside the interior phi is the logarithm of the product with
// branch cuts on the outer parts of these paths; on the lower half-plane it is
// the same logarithm with the reflected paths as cuts.
//
// V = phi * psi_r for a smooth radial bump psi_r. With w the jump of phi
// across its cuts and interior boundaries,
//   V(z) = phi(z) + (1/2 pi i) Int w(zeta) (m(|zeta - z| / r) - 1) / (zeta - z) dzeta
// where m is the radial mass of the bump, so only cut pieces within r of z
// contribute, and
//   dbar V(z) = (i/2) Int w(zeta) psi_r(z - zeta) dzeta.

#include "carleson.hpp"
#include "grid.hpp"
#include "slits.hpp"

#include <Eigen/Dense>

#include <array>
#include <deque>
#include <map>
#include <unordered_map>

namespace corona {

// ---------------------------------------------------------------------------
// Radial bump psi(rho) = C exp(-1 / (1 - rho^2)) on the unit disc, unit mass.

namespace bump {

// G(t) = Int_0^t exp(-1/s) ds
inline double G(double t) { return t <= 0.0 ? 0.0 : t * std::exp(-1.0 / t) + std::expint(-1.0 / t); }
inline double G1() {
  static const double v = G(1.0);
  return v;
}

inline double density(double rho) {
  if (rho >= 1.0) return 0.0;
  return std::exp(-1.0 / (1.0 - rho * rho)) / (kPi * G1());
}

// d psi / d rho
inline double density_slope(double rho) {
  if (rho >= 1.0) return 0.0;
  double s = 1.0 - rho * rho;
  return density(rho) * (-2.0 * rho / (s * s));
}

// mass of the bump inside the disc of radius rho
inline double mass(double rho) {
  if (rho >= 1.0) return 1.0;
  if (rho <= 0.0) return 0.0;
  double r2 = rho * rho;
  if (r2 < 0.25) {
    // Int_{1 - r2}^{1} exp(-1/t) dt by 10-point Gauss
    static const double x[5] = {0.1488743389816312, 0.4333953941292472, 0.6794095682990244,
                                0.8650633666889845, 0.9739065285171717};
    static const double w[5] = {0.2955242247147529, 0.2692667193099963, 0.2190863625159820,
                                0.1494513491505806, 0.0666713443086881};
    double a = 1.0 - r2, c = 0.5 * (1.0 + a), h = 0.5 * r2, s = 0.0;
    for (int k = 0; k < 5; ++k) s += w[k] * (std::exp(-1.0 / (c + h * x[k])) + std::exp(-1.0 / (c - h * x[k])));
    return h * s / G1();
  }
  return 1.0 - G(1.0 - r2) / G1();
}

// Cubic Hermite tables in s = rho^2 for the mass m, the density psi and
// d psi / ds, using dm/ds = pi psi.
class Table {
 public:
  static const Table& get() {
    static const Table t;
    return t;
  }
  struct Values {
    double mass, density, density_ds;
  };
  Values operator()(double s) const {
    if (s >= 1.0) return {1.0, 0.0, 0.0};
    double u = s * N;
    int k = std::min(static_cast<int>(u), N - 1);
    double t = u - k, h = 1.0 / N;
    double h00 = (1 + 2 * t) * (1 - t) * (1 - t), h10 = t * (1 - t) * (1 - t), h01 = t * t * (3 - 2 * t),
           h11 = t * t * (t - 1);
    auto H = [&](const std::vector<double>& f, const std::vector<double>& d) {
      return h00 * f[k] + h10 * h * d[k] + h01 * f[k + 1] + h11 * h * d[k + 1];
    };
    return {H(m_, dm_), H(p_, dp_), H(dp_, ddp_)};
  }

 private:
  static constexpr int N = 8192;
  std::vector<double> m_, dm_, p_, dp_, ddp_;
  Table() {
    for (int k = 0; k <= N; ++k) {
      double s = double(k) / N, q = 1.0 - s;
      double psi = s < 1.0 ? density(std::sqrt(s)) : 0.0;
      m_.push_back(s < 1.0 ? mass(std::sqrt(s)) : 1.0);
      dm_.push_back(kPi * psi);
      p_.push_back(psi);
      dp_.push_back(s < 1.0 ? -psi / (q * q) : 0.0);
      ddp_.push_back(s < 1.0 ? psi * (1.0 / (q * q * q * q) - 2.0 / (q * q * q)) : 0.0);
    }
  }
};

}  // namespace bump

// Gauss-Legendre rule on [-1, 1]
template <int N>
struct GaussRule {
  std::array<double, N> x{}, w{};
  GaussRule() {
    for (int i = 0; i < N; ++i) {
      double t = std::cos(kPi * (i + 0.75) / (N + 0.5));
      for (int it = 0; it < 100; ++it) {
        double p0 = 1.0, p1 = t;
        for (int k = 2; k <= N; ++k) {
          double p2 = ((2.0 * k - 1.0) * t * p1 - (k - 1.0) * p0) / k;
          p0 = p1;
          p1 = p2;
        }
        double dp = N * (t * p1 - p0) / (t * t - 1.0);
        double dt = p1 / dp;
        t -= dt;
        if (std::abs(dt) < 1e-16) {
          x[i] = t;
          w[i] = 2.0 / ((1.0 - t * t) * dp * dp);
          break;
        }
        x[i] = t;
        w[i] = 2.0 / ((1.0 - t * t) * dp * dp);
      }
    }
  }
};

// ---------------------------------------------------------------------------
// Summands

// A polyline from a zero to the real line; cut[k] marks segments lying
// outside the interior.
struct BranchPath {
  std::vector<cplx> pts;
  std::vector<uint8_t> cut;
};

struct WeightedSegment {
  cplx p, q;
  double mult;
};

struct Summand {
  PairKind family = PairKind::off_axis_pair;
  std::vector<cplx> zeros;
  std::vector<BranchPath> paths;
  std::vector<Rect> rects;
  std::vector<std::vector<cplx>> polygons;  // convex, counter-clockwise
  std::vector<std::vector<cplx>> loops;     // interior boundary, interior on the left
  std::vector<Slit> slits;
  std::vector<WeightedSegment> segments;    // every path segment in both half-planes
  std::vector<WeightedSegment> cuts;        // segments carrying a jump of phi

  bool inside(cplx z) const {
    if (z.imag() <= 0.0) return false;
    for (const Rect& r : rects)
      if (r.contains(z)) return true;
    for (const auto& P : polygons) {
      bool in = true;
      for (size_t k = 0; in && k < P.size(); ++k) {
        cplx a = P[k], b = P[(k + 1) % P.size()];
        double c = (b.real() - a.real()) * (z.imag() - a.imag()) - (b.imag() - a.imag()) * (z.real() - a.real());
        in = c >= -1e-14 * std::abs(b - a) * (1.0 + std::abs(z));
      }
      if (in) return true;
    }
    return false;
  }

  // branch-tracked logarithm of the product
  cplx F(cplx z) const {
    cplx s = 0.0;
    for (const auto& g : segments) s += g.mult * std::log((z - g.p) / (z - g.q));
    return s;
  }

  cplx phi(cplx z) const { return inside(z) ? cplx(0.0) : F(z); }

  cplx theta(cplx z) const {
    cplx v = 1.0;
    for (const cplx& a : zeros) v *= blaschke_factor(a, z);
    return v;
  }
};

inline std::vector<cplx> disc_polygon(cplx c, double radius, int sides) {
  std::vector<cplx> P;
  for (int k = 0; k < sides; ++k) {
    double t = -0.5 * kPi + 2.0 * kPi * k / sides;
    cplx p = c + radius * cplx(std::cos(t), std::sin(t));
    if (k == 0) p = c - cplx(0.0, radius);
    if (2 * k == sides) p = c + cplx(0.0, radius);
    P.push_back(p);
  }
  return P;
}

namespace detail {

inline int rect_index(const std::vector<Rect>& rects, cplx z) {
  for (size_t k = 0; k < rects.size(); ++k)
    if (rects[k].contains(z)) return static_cast<int>(k);
  return -1;
}

// Point shared by two closed rectangles through which a path can pass
// without touching the outer boundary, if any.
inline bool rect_link(const Rect& a, const Rect& b, cplx& out) {
  double x0 = std::max(a.x0, b.x0), x1 = std::min(a.x1, b.x1);
  double y0 = std::max(a.y0, b.y0), y1 = std::min(a.y1, b.y1);
  double tol = 1e-12 * (1.0 + std::abs(x0) + std::abs(y1));
  if (x1 < x0 - tol || y1 < y0 - tol) return false;
  if (x1 - x0 <= tol && y1 - y0 <= tol) return false;
  out = cplx(0.5 * (x0 + x1), 0.5 * (y0 + y1));
  return true;
}

inline cplx rect_center(const Rect& r) { return {0.5 * (r.x0 + r.x1), 0.5 * (r.y0 + r.y1)}; }

// Route from a zero through the rectangles of its component to the origin of
// one of the admissible slits, then down that slit.
inline std::vector<cplx> route_in_component(const std::vector<Rect>& rects, const std::vector<const Slit*>& targets,
                                            cplx a) {
  int start = rect_index(rects, a);
  if (start < 0) throw Error(ErrorKind::construction, "zero outside its component");
  const int n = static_cast<int>(rects.size());
  std::vector<int> prev(n, -2);
  std::deque<int> queue{start};
  prev[start] = -1;
  int goal = -1;
  const Slit* slit = nullptr;
  while (!queue.empty() && goal < 0) {
    int k = queue.front();
    queue.pop_front();
    for (const Slit* s : targets)
      if (rects[k].contains(s->origin)) {
        goal = k;
        slit = s;
        break;
      }
    if (goal >= 0) break;
    for (int m = 0; m < n; ++m) {
      cplx link;
      if (prev[m] == -2 && rect_link(rects[k], rects[m], link)) {
        prev[m] = k;
        queue.push_back(m);
      }
    }
  }
  if (goal < 0) throw Error(ErrorKind::construction, "no slit reachable from a zero inside its component");
  std::vector<int> chain;
  for (int k = goal; k >= 0; k = prev[k]) chain.push_back(k);
  std::reverse(chain.begin(), chain.end());
  std::vector<cplx> pts{a};
  for (size_t k = 0; k < chain.size(); ++k) {
    if (k > 0) {
      cplx link;
      rect_link(rects[chain[k - 1]], rects[chain[k]], link);
      pts.push_back(link);
    }
    pts.push_back(rect_center(rects[chain[k]]));
  }
  for (const cplx& p : slit->poly) pts.push_back(p);
  std::vector<cplx> clean{pts.front()};
  for (size_t k = 1; k < pts.size(); ++k)
    if (std::abs(pts[k] - clean.back()) > 0.0) clean.push_back(pts[k]);
  clean.back() = cplx(clean.back().real(), 0.0);
  return clean;
}

inline bool segment_intersection(cplx a, cplx b, cplx c, cplx d, double& t) {
  cplx r = b - a, s = d - c;
  double den = r.real() * s.imag() - r.imag() * s.real();
  if (den == 0.0) return false;
  cplx ca = c - a;
  double t1 = (ca.real() * s.imag() - ca.imag() * s.real()) / den;
  double u1 = (ca.real() * r.imag() - ca.imag() * r.real()) / den;
  if (t1 < -1e-12 || t1 > 1 + 1e-12 || u1 < -1e-12 || u1 > 1 + 1e-12) return false;
  t = std::clamp(t1, 0.0, 1.0);
  return true;
}

}  // namespace detail

// Splits a path at its crossings with the summand's interior boundaries and
// flags the pieces outside the interior. Outer pieces in the upper half-plane
// must run along one of the summand's slits.
inline BranchPath finalize_path(const Summand& s, const std::vector<cplx>& raw) {
  BranchPath out;
  out.pts.push_back(raw.front());
  for (size_t k = 0; k + 1 < raw.size(); ++k) {
    cplx a = raw[k], b = raw[k + 1];
    std::vector<double> ts;
    for (const auto& loop : s.loops)
      for (size_t e = 0; e < loop.size(); ++e) {
        double t;
        if (detail::segment_intersection(a, b, loop[e], loop[(e + 1) % loop.size()], t) && t > 1e-12 &&
            t < 1 - 1e-12)
          ts.push_back(t);
      }
    std::sort(ts.begin(), ts.end());
    ts.push_back(1.0);
    double t0 = 0.0;
    for (double t : ts) {
      if (t - t0 <= 1e-12) continue;
      cplx p = a + t0 * (b - a), q = t == 1.0 ? b : a + t * (b - a);
      bool outside = !s.inside(0.5 * (p + q));
      out.pts.push_back(q);
      out.cut.push_back(outside);
      t0 = t;
    }
  }
  for (size_t k = 0; k < out.cut.size(); ++k) {
    if (!out.cut[k]) continue;
    cplx p = out.pts[k], q = out.pts[k + 1];
    double tol = 1e-9 * (1.0 + std::abs(p) + std::abs(q));
    bool on = false;
    for (const Slit& sl : s.slits)
      on = on || (point_polyline_distance(p, sl.poly) < tol && point_polyline_distance(q, sl.poly) < tol &&
                  point_polyline_distance(0.5 * (p + q), sl.poly) < tol);
    if (!on) {
      std::ostringstream os;
      os << "branch path leaves the interior away from a slit near " << p.real() << "+" << p.imag() << "i";
      throw Error(ErrorKind::construction, os.str());
    }
  }
  return out;
}

// Collects the weighted segments of all paths and their reflections; equal
// segments are merged.
inline void collect_segments(Summand& s) {
  std::map<std::array<double, 4>, double> all, cut;
  auto add = [](std::map<std::array<double, 4>, double>& m, cplx p, cplx q) {
    bool flip = std::make_pair(p.real(), p.imag()) > std::make_pair(q.real(), q.imag());
    if (flip) std::swap(p, q);
    m[{p.real(), p.imag(), q.real(), q.imag()}] += flip ? -1.0 : 1.0;
  };
  for (const auto& P : s.paths) {
    const size_t n = P.pts.size();
    for (size_t k = 0; k + 1 < n; ++k) {
      cplx p = P.pts[k], q = P.pts[k + 1];
      add(all, p, q);
      add(all, std::conj(q), std::conj(p));
      add(cut, std::conj(q), std::conj(p));
      if (P.cut[k]) add(cut, p, q);
    }
  }
  auto dump = [](const std::map<std::array<double, 4>, double>& m, std::vector<WeightedSegment>& v) {
    v.clear();
    for (const auto& [k, w] : m)
      if (w != 0.0) v.push_back({cplx(k[0], k[1]), cplx(k[2], k[3]), w});
  };
  dump(all, s.segments);
  dump(cut, s.cuts);
}

inline void add_path(Summand& s, const std::vector<cplx>& raw) { s.paths.push_back(finalize_path(s, raw)); }

inline std::vector<cplx> mirrored(const std::vector<cplx>& pts) {
  std::vector<cplx> m;
  for (const cplx& p : pts) m.push_back(reflect(p));
  return m;
}

inline std::vector<cplx> axis_path(cplx a) { return {a, cplx(0.0, 0.0)}; }

struct SummandParams {
  int polygon_sides = 128;
};

// Routes every zero of a component: zeros off the axis through the
// component to one of its vertical slits on their own side, mirrored zeros by
// reflection, axis zeros straight down the axis.
inline void route_component(Summand& s, const Component& C, const std::vector<Slit>& slits) {
  std::vector<const Slit*> right, any;
  for (const Slit& sl : slits)
    if (sl.kind == SlitKind::vertical) {
      any.push_back(&sl);
      if (sl.origin.real() >= 0.0) right.push_back(&sl);
    }
  for (const cplx& a : C.zeros) {
    if (on_axis(a)) {
      add_path(s, axis_path(a));
    } else if (!C.self_symmetric) {
      add_path(s, detail::route_in_component(C.rects, any, a));
    } else if (a.real() > 0.0) {
      add_path(s, detail::route_in_component(C.rects, right, a));
    } else {
      add_path(s, mirrored(detail::route_in_component(C.rects, right, reflect(a))));
    }
  }
}

inline void add_component_geometry(Summand& s, const Component& C, const std::vector<Slit>& slits) {
  s.rects.insert(s.rects.end(), C.rects.begin(), C.rects.end());
  s.loops.insert(s.loops.end(), C.loops.begin(), C.loops.end());
  s.slits.insert(s.slits.end(), slits.begin(), slits.end());
  s.zeros.insert(s.zeros.end(), C.zeros.begin(), C.zeros.end());
}

inline void add_disc(Summand& s, const Disc& d, int sides) {
  s.polygons.push_back(disc_polygon(d.center, d.radius, sides));
  s.loops.push_back(s.polygons.back());
}

inline void check_zero_clearance(const Summand& s, double L) {
  for (const cplx& a : s.zeros)
    for (const auto& loop : s.loops) {
      std::vector<cplx> closed = loop;
      closed.push_back(loop.front());
      if (point_polyline_distance(a, closed) < 1e-8 * L)
        throw Error(ErrorKind::construction, "a zero lies on the boundary of its interior");
    }
}

inline std::vector<Summand> build_summands(const Decomposition& d, const SlitSystem& S, SummandParams prm = {}) {
  std::vector<Summand> out;
  for (const Pairing& pr : S.pairings) {
    Summand s;
    s.family = pr.kind;
    s.slits = pr.slits;
    for (const Disc& dk : pr.discs) add_disc(s, dk, prm.polygon_sides);
    for (int c : pr.components) add_component_geometry(s, d.components[c], S.component_slits[c]);
    s.zeros.insert(s.zeros.end(), pr.zeros.begin(), pr.zeros.end());
    check_zero_clearance(s, d.L);

    switch (pr.kind) {
      case PairKind::off_axis_pair:
        for (const Slit& sl : pr.slits) {
          cplx a(sl.origin.real(), sl.origin.imag() / (1.0 - S.delta_prime));
          for (const cplx& z : pr.zeros)
            if (z.real() == sl.origin.real()) a = z;
          std::vector<cplx> raw{a};
          raw.insert(raw.end(), sl.poly.begin(), sl.poly.end());
          add_path(s, raw);
        }
        break;
      case PairKind::off_axis_merged: {
        const Slit& sl = pr.slits.front();
        for (const cplx& a : pr.zeros) {
          std::vector<cplx> raw{a, cplx(0.0, a.imag())};
          raw.insert(raw.end(), sl.poly.begin(), sl.poly.end());
          add_path(s, raw);
        }
        break;
      }
      case PairKind::region_pair_offaxis: {
        const Component& C0 = d.components[pr.components[0]];
        for (const cplx& a : C0.zeros) {
          std::vector<cplx> raw = detail::route_in_component(C0.rects, [&] {
            std::vector<const Slit*> t;
            for (const Slit& sl : S.component_slits[pr.components[0]])
              if (sl.kind == SlitKind::vertical) t.push_back(&sl);
            return t;
          }(), a);
          add_path(s, raw);
          add_path(s, mirrored(raw));
        }
        break;
      }
      default:
        for (int c : pr.components) route_component(s, d.components[c], S.component_slits[c]);
        for (const cplx& a : pr.zeros) add_path(s, axis_path(a));
        break;
    }
    collect_segments(s);
    out.push_back(std::move(s));
  }
  return out;
}

// ---------------------------------------------------------------------------
// The mollified field

constexpr int kPanelOrder = 8;

struct Panel {
  cplx a, b, mid, half;
  bool constant = true;
  cplx wc;  // constant density
  std::array<cplx, kPanelOrder> zeta{}, w{}, coef{};
  int summand = -1;
};

struct VParams {
  double r_frac = 0.5;       // mollifier radius as a fraction of L
  double panel_frac = 0.125; // panel length bound as a fraction of the radius
};

struct VSample {
  cplx value, dbar, lap;
};

class VField {
 public:
  VField() = default;
  VField(std::vector<Summand> summands, double L, VParams prm = {})
      : summands_(std::move(summands)), L_(L), r_(prm.r_frac * L), panel_len_(prm.panel_frac * prm.r_frac * L) {
    build_monomial_inverse();
    for (size_t s = 0; s < summands_.size(); ++s) {
      for (const auto& c : summands_[s].cuts) add_cut_panels(static_cast<int>(s), c);
      for (const auto& loop : summands_[s].loops) add_boundary_panels(static_cast<int>(s), loop);
    }
    build_buckets();
  }

  const std::vector<Summand>& summands() const { return summands_; }
  double radius() const { return r_; }
  double L() const { return L_; }
  size_t panel_count() const { return panels_.size(); }

  cplx phi(cplx z) const {
    cplx s = 0.0;
    for (const auto& S : summands_) s += S.phi(z);
    return s;
  }

  // Value, dbar and Laplacian of V at z; only = k restricts to summand k.
  // With `per`, the dbar and Laplacian of each summand are stored there.
  VSample sample(cplx z, int only = -1, std::vector<VSample>* per = nullptr) const {
    if (per) per->assign(summands_.size(), VSample{0.0, 0.0, 0.0});
    std::vector<int> near = near_panels(z);
    double dmin = std::numeric_limits<double>::infinity();
    for (int p : near) dmin = std::min(dmin, point_segment_distance(z, panels_[p].a, panels_[p].b));
    if (dmin < 1e-10 * L_) z += 1e-9 * L_ * cplx(0.6, 0.8);

    VSample out{0.0, 0.0, 0.0};
    for (size_t k = 0; k < summands_.size(); ++k)
      if (only < 0 || only == static_cast<int>(k)) out.value += summands_[k].phi(z);
    const auto& G = rule();
    const auto& T = bump::Table::get();
    cplx corr = 0.0;
    for (int pi : near) {
      const Panel& P = panels_[pi];
      if (only >= 0 && P.summand != only) continue;
      if (point_segment_distance(z, P.a, P.b) >= r_) continue;
      cplx t0 = (z - P.mid) / P.half;
      cplx Y = 0.0, X = 0.0, D = 0.0, Lp = 0.0;
      for (int j = 0; j < kPanelOrder; ++j) {
        cplx u = P.zeta[j] - z;
        cplx wj = G.w[j] * P.half * P.w[j];
        double s = std::norm(u) / (r_ * r_);
        if (s >= 1.0) {
          Y += wj / u;
          continue;
        }
        auto b = T(s);
        Y += wj * b.mass / u;
        D += wj * b.density;
        Lp -= wj * b.density_ds * std::conj(u);
      }
      if (P.constant) {
        X = P.wc * std::log((1.0 - t0) / (-1.0 - t0));
      } else if (std::abs(t0) <= 2.0) {
        cplx I = std::log((1.0 - t0) / (-1.0 - t0));
        X = P.coef[0] * I;
        for (int k = 1; k < kPanelOrder; ++k) {
          I = (k % 2 == 1 ? 2.0 / k : 0.0) + t0 * I;
          X += P.coef[k] * I;
        }
      } else {
        for (int j = 0; j < kPanelOrder; ++j) X += G.w[j] * P.w[j] / (G.x[j] - t0);
      }
      corr += Y - X;
      out.dbar += D;
      out.lap += Lp;
      if (per) {
        (*per)[P.summand].dbar += D;
        (*per)[P.summand].lap += Lp;
      }
    }
    const cplx cd = 0.5 * kI / (r_ * r_), cl = 4.0 * cd / (r_ * r_);
    out.value += corr / (2.0 * kPi * kI);
    out.dbar *= cd;
    out.lap *= cl;
    if (per)
      for (VSample& v : *per) {
        v.dbar *= cd;
        v.lap *= cl;
      }
    return out;
  }

  cplx value(cplx z) const { return sample(z).value; }
  cplx dbar(cplx z) const { return sample(z).dbar; }

  // The support of dbar V in the upper half-plane must sit inside the grid box.
  void check_grid(const Grid& g) const {
    for (const Panel& P : panels_)
      for (cplx p : {P.a, P.b})
        if (p.imag() > 0.0 && (std::abs(p.real()) + r_ > g.X || p.imag() + r_ > g.Y))
          throw Error(ErrorKind::grid_too_small, "cut neighborhoods leave the grid box");
  }

 private:
  std::vector<Summand> summands_;
  double L_ = 1.0, r_ = 1.0, panel_len_ = 1.0;
  std::vector<Panel> panels_;
  std::array<std::array<double, kPanelOrder>, kPanelOrder> vinv_{};
  double bx0_ = 0.0, by0_ = 0.0;
  int bnx_ = 0, bny_ = 0;
  std::vector<std::vector<int>> buckets_;

  static const GaussRule<kPanelOrder>& rule() {
    static const GaussRule<kPanelOrder> g;
    return g;
  }

  void build_monomial_inverse() {
    const auto& G = rule();
    Eigen::Matrix<double, kPanelOrder, kPanelOrder> V;
    for (int i = 0; i < kPanelOrder; ++i)
      for (int k = 0; k < kPanelOrder; ++k) V(i, k) = std::pow(G.x[i], k);
    Eigen::Matrix<double, kPanelOrder, kPanelOrder> Vi = V.inverse();
    for (int i = 0; i < kPanelOrder; ++i)
      for (int k = 0; k < kPanelOrder; ++k) vinv_[i][k] = Vi(i, k);
  }

  Panel make_panel(int s, cplx a, cplx b) const {
    Panel P;
    P.a = a;
    P.b = b;
    P.mid = 0.5 * (a + b);
    P.half = 0.5 * (b - a);
    P.summand = s;
    const auto& G = rule();
    for (int j = 0; j < kPanelOrder; ++j) P.zeta[j] = P.mid + G.x[j] * P.half;
    return P;
  }

  void add_cut_panels(int s, const WeightedSegment& c) {
    int m = std::max(1, static_cast<int>(std::ceil(std::abs(c.q - c.p) / panel_len_)));
    for (int k = 0; k < m; ++k) {
      cplx a = c.p + (c.q - c.p) * (double(k) / m), b = k + 1 == m ? c.q : c.p + (c.q - c.p) * (double(k + 1) / m);
      Panel P = make_panel(s, a, b);
      P.constant = true;
      P.wc = -2.0 * kPi * kI * c.mult;
      P.w.fill(P.wc);
      panels_.push_back(P);
    }
  }

  void fill_density(Panel& P) const {
    const Summand& S = summands_[P.summand];
    for (int j = 0; j < kPanelOrder; ++j) P.w[j] = -S.F(P.zeta[j]);
    for (int k = 0; k < kPanelOrder; ++k) {
      cplx c = 0.0;
      for (int i = 0; i < kPanelOrder; ++i) c += vinv_[k][i] * P.w[i];
      P.coef[k] = c;
    }
  }

  bool density_resolved(const Panel& P) const {
    const Summand& S = summands_[P.summand];
    for (double t : {-0.93, -0.5, 0.1, 0.62, 0.97}) {
      cplx poly = 0.0, tk = 1.0;
      for (int k = 0; k < kPanelOrder; ++k, tk *= t) poly += P.coef[k] * tk;
      cplx exact = -S.F(P.mid + t * P.half);
      if (std::abs(poly - exact) > 1e-10 * (1.0 + std::abs(exact))) return false;
    }
    return true;
  }

  void add_boundary_piece(int s, cplx a, cplx b, int depth) {
    Panel P = make_panel(s, a, b);
    P.constant = false;
    fill_density(P);
    if (depth < 60 && std::abs(b - a) > 1e-9 * L_ && !density_resolved(P)) {
      cplx m = 0.5 * (a + b);
      add_boundary_piece(s, a, m, depth + 1);
      add_boundary_piece(s, m, b, depth + 1);
      return;
    }
    panels_.push_back(P);
  }

  void add_boundary_panels(int s, const std::vector<cplx>& loop) {
    const Summand& S = summands_[s];
    for (size_t e = 0; e < loop.size(); ++e) {
      cplx a = loop[e], b = loop[(e + 1) % loop.size()];
      std::vector<double> ts{0.0, 1.0};
      for (const auto& g : S.segments) {
        if (g.p.imag() < 0.0 || g.q.imag() < 0.0) continue;
        for (cplx v : {g.p, g.q}) {
          double t;
          cplx d = b - a;
          t = ((v - a) * std::conj(d)).real() / std::norm(d);
          if (t > 0.0 && t < 1.0 && std::abs(a + t * d - v) < 1e-12 * (1.0 + std::abs(v))) ts.push_back(t);
        }
        double t;
        if (detail::segment_intersection(a, b, g.p, g.q, t)) ts.push_back(t);
      }
      std::sort(ts.begin(), ts.end());
      for (size_t k = 0; k + 1 < ts.size(); ++k) {
        if (ts[k + 1] - ts[k] < 1e-13) continue;
        cplx p = a + ts[k] * (b - a), q = a + ts[k + 1] * (b - a);
        int m = std::max(1, static_cast<int>(std::ceil(std::abs(q - p) / panel_len_)));
        for (int i = 0; i < m; ++i)
          add_boundary_piece(s, p + (q - p) * (double(i) / m), i + 1 == m ? q : p + (q - p) * (double(i + 1) / m), 0);
      }
    }
  }

  void build_buckets() {
    if (panels_.empty()) return;
    double x0 = 1e300, x1 = -1e300, y0 = 1e300, y1 = -1e300;
    for (const Panel& P : panels_)
      for (cplx p : {P.a, P.b}) {
        x0 = std::min(x0, p.real());
        x1 = std::max(x1, p.real());
        y0 = std::min(y0, p.imag());
        y1 = std::max(y1, p.imag());
      }
    bx0_ = x0 - r_;
    by0_ = y0 - r_;
    bnx_ = static_cast<int>(std::ceil((x1 - x0 + 2 * r_) / r_)) + 1;
    bny_ = static_cast<int>(std::ceil((y1 - y0 + 2 * r_) / r_)) + 1;
    buckets_.assign(static_cast<size_t>(bnx_) * bny_, {});
    for (size_t k = 0; k < panels_.size(); ++k) {
      const Panel& P = panels_[k];
      double ax = std::min(P.a.real(), P.b.real()) - r_, bx = std::max(P.a.real(), P.b.real()) + r_;
      double ay = std::min(P.a.imag(), P.b.imag()) - r_, by = std::max(P.a.imag(), P.b.imag()) + r_;
      int i0 = std::max(0, static_cast<int>(std::floor((ax - bx0_) / r_)));
      int i1 = std::min(bnx_ - 1, static_cast<int>(std::floor((bx - bx0_) / r_)));
      int j0 = std::max(0, static_cast<int>(std::floor((ay - by0_) / r_)));
      int j1 = std::min(bny_ - 1, static_cast<int>(std::floor((by - by0_) / r_)));
      for (int j = j0; j <= j1; ++j)
        for (int i = i0; i <= i1; ++i) buckets_[static_cast<size_t>(j) * bnx_ + i].push_back(static_cast<int>(k));
    }
  }

  std::vector<int> near_panels(cplx z) const {
    if (buckets_.empty()) return {};
    int i = static_cast<int>(std::floor((z.real() - bx0_) / r_));
    int j = static_cast<int>(std::floor((z.imag() - by0_) / r_));
    if (i < 0 || j < 0 || i >= bnx_ || j >= bny_) return {};
    return buckets_[static_cast<size_t>(j) * bnx_ + i];
  }
};

// ---------------------------------------------------------------------------
// Grid samples and certificates

struct FamilyBound {
  PairKind family;
  double dbar_scaled = 0.0;  // sup |dbar V_s| Im z
  double lap_scaled = 0.0;   // sup |Delta V_s| (Im z)^2
};

struct VGrids {
  GridField V, dbar, lap;
  std::vector<FamilyBound> families;
};

// V, dbar V and Delta V on the grid; the right half is evaluated and the left
// half filled by reflection.
inline VGrids sample_v_grid(const VField& V, const Grid& g) {
  VGrids out{GridField(g), GridField(g), GridField(g), {}};
  for (const auto& s : V.summands()) out.families.push_back({s.family});
  std::vector<VSample> per;
  for (int j = 0; j < g.ny(); ++j) {
    const double y = g.y(j);
    for (int i = g.n / 2; i <= g.n; ++i) {
      VSample s = V.sample(g.node(i, j), -1, &per);
      if (i == g.n / 2) {
        s.value = s.value.real();
        s.dbar = cplx(0.0, s.dbar.imag());
        s.lap = s.lap.real();
      }
      out.V(i, j) = s.value;
      out.dbar(i, j) = s.dbar;
      out.lap(i, j) = s.lap;
      out.V(g.mirror(i), j) = std::conj(s.value);
      out.dbar(g.mirror(i), j) = -std::conj(s.dbar);
      out.lap(g.mirror(i), j) = std::conj(s.lap);
      for (size_t k = 0; k < per.size(); ++k) {
        auto& f = out.families[k];
        f.dbar_scaled = std::max(f.dbar_scaled, std::abs(per[k].dbar) * y);
        f.lap_scaled = std::max(f.lap_scaled, std::abs(per[k].lap) * y * y);
      }
    }
  }
  return out;
}

struct VCertificates {
  double sup_re = 0.0;
  double re_bound = 0.0;      // max over nodes of sum_s min(log 1/delta', log 1/|Theta_s|)
  double re_overshoot = 0.0;  // max over nodes of |Re V| minus that sum
  double lap_intensity = 0.0; // |Delta V| Im z dxdy
  double grad_intensity = 0.0;
  double grad_pointwise = 0.0;  // sup |dV| Im z
  double closeness = 0.0;       // max |log p - V| over nodes with |q| < delta'
  size_t closeness_nodes = 0;
  int branch_components = 0;
  size_t branch_inconsistencies = 0;
  double treil = 0.0;  // max of sum_s (1 - |Theta_s|^2)
};

struct BranchStats {
  int components = 0;
  size_t inconsistencies = 0;  // node pairs whose unwrapped values disagree
};

// Per connected component of the node set, a logarithm of P unwrapped from
// node to node, anchored at the axis when the component meets it and at its
// highest node otherwise.
inline BranchStats unwrap_log(const Grid& g, const std::vector<uint8_t>& in, const std::vector<cplx>& P,
                              std::vector<cplx>& logp) {
  BranchStats c;
  std::vector<uint8_t> seen(in.size(), 0);
  logp.assign(in.size(), 0.0);
  const int di[4] = {1, -1, 0, 0}, dj[4] = {0, 0, 1, -1};
  for (size_t start = 0; start < in.size(); ++start) {
    if (!in[start] || seen[start]) continue;
    std::vector<size_t> comp{start};
    seen[start] = 1;
    for (size_t h = 0; h < comp.size(); ++h) {
      int i = static_cast<int>(comp[h] % g.nx()), j = static_cast<int>(comp[h] / g.nx());
      for (int e = 0; e < 4; ++e) {
        int a = i + di[e], b = j + dj[e];
        if (a < 0 || b < 0 || a >= g.nx() || b >= g.ny()) continue;
        size_t k = g.index(a, b);
        if (in[k] && !seen[k]) {
          seen[k] = 1;
          comp.push_back(k);
        }
      }
    }
    ++c.components;
    size_t anchor = comp[0];
    bool axis = false;
    for (size_t k : comp) {
      bool on_axis = static_cast<int>(k % g.nx()) == g.n / 2;
      if (on_axis && (!axis || k < anchor)) anchor = k;
      if (!axis && !on_axis && k / g.nx() > anchor / g.nx()) anchor = k;
      axis = axis || on_axis;
    }
    std::vector<uint8_t> done(in.size(), 0);
    std::deque<size_t> queue{anchor};
    logp[anchor] = std::log(P[anchor]);
    if (axis) logp[anchor] = cplx(logp[anchor].real(), P[anchor].real() < 0.0 ? kPi : 0.0);
    done[anchor] = 1;
    while (!queue.empty()) {
      size_t k = queue.front();
      queue.pop_front();
      int i = static_cast<int>(k % g.nx()), j = static_cast<int>(k / g.nx());
      for (int e = 0; e < 4; ++e) {
        int a = i + di[e], b = j + dj[e];
        if (a < 0 || b < 0 || a >= g.nx() || b >= g.ny()) continue;
        size_t m = g.index(a, b);
        if (!in[m]) continue;
        cplx step = logp[k] + std::log(P[m] / P[k]);
        if (!done[m]) {
          logp[m] = step;
          done[m] = 1;
          queue.push_back(m);
        } else if (std::abs(step - logp[m]) > 1e-6) {
          ++c.inconsistencies;
        }
      }
    }
  }
  return c;
}

inline VCertificates v_certificates(const VField& V, const VGrids& G, const Blaschke& q, double delta_prime) {
  VCertificates c;
  const Grid& g = G.V.grid;
  const double cell = g.hx() * g.hy();
  FieldCalculus fc = field_calculus(G.V);
  std::vector<double> lap_mass(g.size(), 0.0), grad_mass(g.size(), 0.0);
  std::vector<uint8_t> low(g.size(), 0);
  std::vector<cplx> P(g.size(), 1.0);
  const double cap = std::log(1.0 / delta_prime);
  for (int j = 0; j < g.ny(); ++j)
    for (int i = 0; i < g.nx(); ++i) {
      const size_t k = g.index(i, j);
      const cplx z = g.node(i, j);
      const double y = z.imag();
      c.sup_re = std::max(c.sup_re, std::abs(G.V.v[k].real()));
      lap_mass[k] = std::abs(G.lap.v[k]) * y * cell;
      if (fc.d.mask[k]) {
        grad_mass[k] = std::abs(fc.d.v[k]) * cell;
        c.grad_pointwise = std::max(c.grad_pointwise, std::abs(fc.d.v[k]) * y);
      }
      double bound = 0.0, treil = 0.0;
      for (const auto& s : V.summands()) {
        cplx t = s.theta(z);
        double m = std::abs(t);
        bound += m > 0.0 ? std::min(cap, -std::log(m)) : cap;
        treil += 1.0 - m * m;
        P[k] *= t;
      }
      c.re_bound = std::max(c.re_bound, bound);
      c.re_overshoot = std::max(c.re_overshoot, std::abs(G.V.v[k].real()) - bound);
      c.treil = std::max(c.treil, treil);
      low[k] = std::abs(q(z)) < delta_prime;
    }
  c.lap_intensity = grid_carleson_intensity(g, lap_mass);
  c.grad_intensity = grid_carleson_intensity(g, grad_mass);
  std::vector<cplx> logp;
  BranchStats bs = unwrap_log(g, low, P, logp);
  c.branch_components = bs.components;
  c.branch_inconsistencies = bs.inconsistencies;
  for (size_t k = 0; k < g.size(); ++k)
    if (low[k]) {
      ++c.closeness_nodes;
      c.closeness = std::max(c.closeness, std::abs(logp[k] - G.V.v[k]));
    }
  return c;
}

}  // namespace corona
