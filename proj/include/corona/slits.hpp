#pragma once

// Slits attached to components and residual zeros, their neighborhoods and
// ranks, and the pairing of odd axis objects between consecutive axis
// intervals where |q| is small.

#include "carleson.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>
#include <vector>

namespace corona {

enum class SlitKind { vertical, gamma, axis_connector };

inline const char* slit_kind_name(SlitKind k) {
  switch (k) {
    case SlitKind::vertical: return "vertical";
    case SlitKind::gamma: return "gamma";
    case SlitKind::axis_connector: return "axis-connector";
  }
  return "unknown";
}

struct Slit {
  SlitKind kind = SlitKind::vertical;
  std::vector<cplx> poly;  // starts at the origin
  double altitude = 0.0;
  int rank = 0;
  cplx origin;
  int owner = -1;
  double radius = 0.0;  // half-width of the Euclidean neighborhood
};

// 2^k <= d < 2^(k+1)
inline int slit_rank(double d) {
  int k = static_cast<int>(std::floor(std::log2(d)));
  while (std::ldexp(1.0, k) > d) --k;
  while (std::ldexp(1.0, k + 1) <= d) ++k;
  return k;
}

inline Slit make_slit(SlitKind kind, std::vector<cplx> poly, cplx origin, int owner, double dp) {
  Slit s;
  s.kind = kind;
  s.poly = std::move(poly);
  s.origin = origin;
  s.altitude = origin.imag();
  s.rank = slit_rank(s.altitude);
  s.owner = owner;
  s.radius = dp / 100.0 * s.altitude;
  return s;
}

// ---------------------------------------------------------------------------
// Planar helpers

inline double point_segment_distance(cplx z, cplx a, cplx b) {
  cplx d = b - a;
  double l2 = std::norm(d);
  double t = l2 > 0.0 ? std::clamp(((z - a) * std::conj(d)).real() / l2, 0.0, 1.0) : 0.0;
  return std::abs(z - (a + t * d));
}

inline double segment_distance(cplx a, cplx b, cplx c, cplx d) {
  auto cross = [](cplx u, cplx v) { return u.real() * v.imag() - u.imag() * v.real(); };
  double d1 = cross(b - a, c - a), d2 = cross(b - a, d - a);
  double d3 = cross(d - c, a - c), d4 = cross(d - c, b - c);
  if (((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) && ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0))) return 0.0;
  return std::min({point_segment_distance(a, c, d), point_segment_distance(b, c, d),
                   point_segment_distance(c, a, b), point_segment_distance(d, a, b)});
}

inline double polyline_distance(const std::vector<cplx>& p, const std::vector<cplx>& q) {
  double m = std::numeric_limits<double>::infinity();
  for (size_t i = 0; i + 1 < p.size(); ++i)
    for (size_t j = 0; j + 1 < q.size(); ++j) m = std::min(m, segment_distance(p[i], p[i + 1], q[j], q[j + 1]));
  return m;
}

inline double point_polyline_distance(cplx z, const std::vector<cplx>& p) {
  double m = std::numeric_limits<double>::infinity();
  for (size_t i = 0; i + 1 < p.size(); ++i) m = std::min(m, point_segment_distance(z, p[i], p[i + 1]));
  return m;
}

// Parameter range [t0, t1] of a segment inside a closed rectangle, or empty.
inline bool clip_segment(cplx a, cplx b, const Rect& r, double& t0, double& t1) {
  t0 = 0.0;
  t1 = 1.0;
  cplx d = b - a;
  auto clip = [&](double p, double q) {
    if (p == 0.0) return q >= 0.0;
    double s = q / p;
    if (p < 0.0) t0 = std::max(t0, s); else t1 = std::min(t1, s);
    return t0 <= t1;
  };
  return clip(-d.real(), a.real() - r.x0) && clip(d.real(), r.x1 - a.real()) &&
         clip(-d.imag(), a.imag() - r.y0) && clip(d.imag(), r.y1 - a.imag());
}

// ---------------------------------------------------------------------------
// Slits of a component

// Gamma-slits for a maximal vertical boundary interval [a+ib, a+ic], drawn
// toward the exterior side dir = +1 (right) or -1 (left).
inline std::vector<Slit> gamma_slits(double a, double b, double c, int dir, int owner, double dp) {
  if (!(b > 0.0) || !(c > b)) throw Error(ErrorKind::construction, "vertical boundary interval must lie in the open upper half-plane");
  std::vector<Slit> out;
  for (int k = 1; c * std::ldexp(1.0, -k - 2) > b; ++k) {
    double h = c * std::ldexp(1.0, -k);
    cplx o(a, h), e(a + dir * h, h);
    out.push_back(make_slit(SlitKind::gamma, {o, e, cplx(e.real(), 0.0)}, o, owner, dp));
  }
  return out;
}

inline std::vector<Slit> build_slits(const Decomposition& d, int comp, double dp) {
  const Component& C = d.components[comp];
  std::vector<Slit> out;
  for (int ri : C.regions) {
    const Region& R = d.regions[ri];
    for (const Interval& ch : R.children) {
      if (!(ch.len() < R.J.len())) continue;
      cplx o(ch.mid(), ch.len());
      if (C.contains(cplx(ch.mid(), 0.5 * ch.len()))) continue;
      out.push_back(make_slit(SlitKind::vertical, {o, cplx(ch.mid(), 0.0)}, o, comp, dp));
    }
  }
  for (const auto& loop : C.loops) {
    const size_t n = loop.size();
    for (size_t k = 0; k < n; ++k) {
      cplx p = loop[k], q = loop[(k + 1) % n];
      if (p.real() != q.real()) continue;
      double b = std::min(p.imag(), q.imag()), c = std::max(p.imag(), q.imag());
      int dir = q.imag() > p.imag() ? 1 : -1;  // interior on the left of travel
      auto g = gamma_slits(p.real(), b, c, dir, comp, dp);
      out.insert(out.end(), g.begin(), g.end());
    }
  }
  if (C.self_symmetric && C.axis_zero_count > 0 && C.axis_zero_count % 2 == 0) {
    cplx o(0.0, C.axis_bottom());
    out.push_back(make_slit(SlitKind::vertical, {o, cplx(0.0, 0.0)}, o, comp, dp));
  }
  return out;
}

// Disjointness of slits and of their neighborhoods, and origin-only contact
// with the given closed rectangles.
inline void check_slits(const std::vector<Slit>& slits, const std::vector<Rect>& rects, const std::string& what) {
  for (size_t i = 0; i < slits.size(); ++i) {
    const Slit& s = slits[i];
    if (!(std::ldexp(1.0, s.rank) <= s.altitude && s.altitude < std::ldexp(1.0, s.rank + 1)))
      throw Error(ErrorKind::construction, what + ": rank inconsistent with altitude");
    for (size_t k = 0; k + 1 < s.poly.size(); ++k)
      for (const Rect& r : rects) {
        double t0, t1;
        if (!clip_segment(s.poly[k], s.poly[k + 1], r, t0, t1)) continue;
        bool only_origin = k == 0 && t1 <= 1e-12;
        if (!only_origin) {
          std::ostringstream os;
          os << what << ": slit " << i << " meets the component away from its origin";
          throw Error(ErrorKind::construction, os.str());
        }
      }
    for (size_t j = 0; j < i; ++j) {
      double dist = polyline_distance(s.poly, slits[j].poly);
      if (dist <= s.radius + slits[j].radius) {
        std::ostringstream os;
        os << what << ": slits " << j << " and " << i << " are not separated (distance " << dist << ")";
        throw Error(ErrorKind::construction, os.str());
      }
    }
  }
}

// ---------------------------------------------------------------------------
// Pairing

struct Disc {
  cplx center;
  double radius;
};

enum class PairKind {
  off_axis_pair,
  off_axis_merged,
  region_pair_offaxis,
  region_solo_even,
  region_region,
  region_zero,
  zero_zero,
  axis_solo,
};

inline const char* pair_kind_name(PairKind k) {
  switch (k) {
    case PairKind::off_axis_pair: return "off-axis-pair";
    case PairKind::off_axis_merged: return "off-axis-merged-disc";
    case PairKind::region_pair_offaxis: return "region-pair-offaxis";
    case PairKind::region_solo_even: return "region-solo-even";
    case PairKind::region_region: return "region-region";
    case PairKind::region_zero: return "region-zero";
    case PairKind::zero_zero: return "zero-zero";
    case PairKind::axis_solo: return "axis-solo";
  }
  return "unknown";
}

// An object with an odd number of axis zeros, seen through its footprint on
// the imaginary axis.
struct AxisObject {
  int component = -1;  // -1 for a residual (or virtual) zero
  cplx zero;
  bool is_virtual = false;
  double lo = 0.0, hi = 0.0;
};

struct Pairing {
  PairKind kind;
  std::vector<int> components;
  std::vector<cplx> zeros;  // residual zeros owned by the pairing
  bool has_virtual = false;
  std::vector<Disc> discs;
  std::vector<Slit> slits;
  std::vector<AxisObject> members;  // odd objects, upper first
};

struct SlitSystem {
  double delta_prime = 0.0;
  int sign = 1;
  std::vector<AxisInterval> Z;
  std::vector<std::vector<Slit>> component_slits;
  std::vector<Pairing> pairings;
  bool has_virtual = false;
  cplx virtual_zero;

  std::vector<const Slit*> all_slits() const {
    std::vector<const Slit*> out;
    for (const auto& v : component_slits)
      for (const Slit& s : v) out.push_back(&s);
    for (const auto& p : pairings)
      for (const Slit& s : p.slits) out.push_back(&s);
    return out;
  }
};

inline bool discs_overlap(cplx a, double dp) { return std::abs(a.real()) < dp * a.imag(); }

// Pairs odd axis objects consecutively by height inside every gap between
// the axis intervals Z of {|q| < delta'}. An unpaired object is allowed only
// in the bottom gap. When the common sign is negative the top gap holds an
// odd count and a virtual axis zero above all intervals completes it; with
// no intervals at all it sits above every axis object.
inline SlitSystem classify_and_pair(const Decomposition& d, const Blaschke& q, double dp, int sign) {
  SlitSystem S;
  S.delta_prime = dp;
  S.sign = sign;
  S.Z = axis_sublevel(q, dp);

  for (size_t c = 0; c < d.components.size(); ++c) {
    S.component_slits.push_back(build_slits(d, static_cast<int>(c), dp));
    check_slits(S.component_slits.back(), d.components[c].rects, "component " + std::to_string(c));
  }

  const int owner_base = 1000000;
  auto add = [&](Pairing p) {
    check_slits(p.slits, {}, "pairing " + std::to_string(S.pairings.size()));
    S.pairings.push_back(std::move(p));
    return owner_base + static_cast<int>(S.pairings.size()) - 1;
  };

  // residual off-axis zeros with their reflections
  for (const cplx& a : d.sigma1) {
    if (on_axis(a) || a.real() < 0.0) continue;
    Pairing p;
    p.zeros = {reflect(a), a};
    int owner = owner_base + static_cast<int>(S.pairings.size());
    if (discs_overlap(a, dp)) {
      p.kind = PairKind::off_axis_merged;
      cplx c(0.0, a.imag());
      p.discs = {{c, dp * a.imag()}};
      cplx o(0.0, (1.0 - dp) * a.imag());
      p.slits.push_back(make_slit(SlitKind::vertical, {o, cplx(0.0, 0.0)}, o, owner, dp));
    } else {
      p.kind = PairKind::off_axis_pair;
      p.discs = {{reflect(a), dp * a.imag()}, {a, dp * a.imag()}};
      for (const cplx& z : p.zeros) {
        cplx o(z.real(), (1.0 - dp) * z.imag());
        p.slits.push_back(make_slit(SlitKind::vertical, {o, cplx(z.real(), 0.0)}, o, owner, dp));
      }
    }
    add(std::move(p));
  }

  std::vector<AxisObject> odd;
  for (size_t c = 0; c < d.components.size(); ++c) {
    const Component& C = d.components[c];
    if (!C.self_symmetric) {
      if (C.mirror > static_cast<int>(c)) {
        Pairing p;
        p.kind = PairKind::region_pair_offaxis;
        p.components = {static_cast<int>(c), C.mirror};
        add(std::move(p));
      }
      continue;
    }
    if (C.axis_zero_count % 2 == 0) {
      Pairing p;
      p.kind = PairKind::region_solo_even;
      p.components = {static_cast<int>(c)};
      add(std::move(p));
    } else {
      AxisObject o;
      o.component = static_cast<int>(c);
      o.lo = C.axis_bottom();
      o.hi = C.axis_top();
      odd.push_back(o);
    }
  }
  for (const cplx& a : d.sigma1)
    if (on_axis(a)) {
      AxisObject o;
      o.zero = a;
      o.lo = (1.0 - dp) * a.imag();
      o.hi = (1.0 + dp) * a.imag();
      odd.push_back(o);
    }

  const size_t nz = S.Z.size();
  auto gap_of = [&](const AxisObject& o) {
    size_t g = 0;
    for (const auto& iv : S.Z) {
      if (iv.hi <= o.lo) ++g;
      else if (iv.lo < o.hi) throw Error(ErrorKind::inconsistent_input, "an odd axis object meets {|q| < delta'}");
    }
    return g;
  };
  std::vector<std::vector<AxisObject>> gaps(nz + 1);
  for (const AxisObject& o : odd) gaps[gap_of(o)].push_back(o);
  if (sign < 0) {
    double y = nz ? std::max(d.L, 2.0 * S.Z.back().hi) : d.L;
    for (const auto& g : gaps)
      for (const AxisObject& o : g) y = std::max(y, 2.0 * o.hi);
    AxisObject v;
    v.zero = cplx(0.0, y);
    v.is_virtual = true;
    v.lo = (1.0 - dp) * y;
    v.hi = (1.0 + dp) * y;
    gaps[nz].push_back(v);
    S.has_virtual = true;
    S.virtual_zero = v.zero;
  }

  for (size_t g = 0; g <= nz; ++g) {
    auto& objs = gaps[g];
    std::sort(objs.begin(), objs.end(), [](const AxisObject& a, const AxisObject& b) { return a.hi > b.hi; });
    if (objs.size() % 2 == 1 && g != 0) {
      std::ostringstream os;
      os << "odd number of odd axis objects between axis intervals (gap " << g << ")";
      throw Error(ErrorKind::sign_violation, os.str());
    }
    for (size_t k = 0; k < objs.size(); k += 2) {
      Pairing p;
      int owner = owner_base + static_cast<int>(S.pairings.size());
      if (k + 1 == objs.size()) {
        const AxisObject& w = objs[k];
        p.kind = PairKind::axis_solo;
        p.members = {w};
        cplx o = w.component >= 0 ? cplx(0.0, w.lo) : w.zero;
        p.slits.push_back(make_slit(SlitKind::vertical, {cplx(0.0, w.lo), cplx(0.0, 0.0)}, o, owner, dp));
      } else {
        const AxisObject& u = objs[k];
        const AxisObject& w = objs[k + 1];
        p.members = {u, w};
        bool ur = u.component >= 0, wr = w.component >= 0;
        p.kind = ur && wr ? PairKind::region_region : (ur || wr ? PairKind::region_zero : PairKind::zero_zero);
        cplx oc = ur ? cplx(0.0, w.hi) : u.zero;
        if (ur && !wr) oc = cplx(0.0, u.lo);
        p.slits.push_back(
            make_slit(SlitKind::axis_connector, {cplx(0.0, u.lo), cplx(0.0, w.hi)}, oc, owner, dp));
        cplx ob = wr ? cplx(0.0, w.lo) : w.zero;
        p.slits.push_back(make_slit(SlitKind::vertical, {cplx(0.0, w.lo), cplx(0.0, 0.0)}, ob, owner, dp));
      }
      for (const AxisObject& m : p.members) {
        if (m.component >= 0) p.components.push_back(m.component);
        else {
          p.zeros.push_back(m.zero);
          p.discs.push_back({m.zero, dp * m.zero.imag()});
          if (m.is_virtual) p.has_virtual = true;
        }
      }
      add(std::move(p));
    }
  }
  return S;
}

// ---------------------------------------------------------------------------
// Census of neighborhoods at a point

struct Census {
  std::map<int, int> slits_per_rank;
  int components = 0;  // components whose pseudo-hyperbolic boundary neighborhood holds z
  int discs = 0;       // residual zeros whose circle neighborhood holds z
  int max_per_rank() const {
    int m = 0;
    for (auto [k, v] : slits_per_rank) m = std::max(m, v);
    return m;
  }
};

// min over boundary points a of |b_a(z)| = |z - a| / |z - conj a|
inline double pseudo_hyperbolic_distance(cplx z, const std::vector<std::vector<cplx>>& loops) {
  double best = 1.0;
  auto rho = [&](cplx a) { return std::abs(z - a) / std::abs(z - std::conj(a)); };
  for (const auto& l : loops)
    for (size_t k = 0; k < l.size(); ++k) {
      cplx a = l[k], b = l[(k + 1) % l.size()];
      double lo = 0.0, hi = 1.0;
      for (int it = 0; it < 60; ++it) {
        double m1 = lo + (hi - lo) / 3.0, m2 = hi - (hi - lo) / 3.0;
        if (rho(a + m1 * (b - a)) < rho(a + m2 * (b - a))) hi = m2; else lo = m1;
      }
      best = std::min({best, rho(a), rho(b), rho(a + 0.5 * (lo + hi) * (b - a))});
    }
  return best;
}

inline Census neighborhood_census(cplx z, const SlitSystem& S, const Decomposition& d) {
  Census c;
  for (const Slit* s : S.all_slits())
    if (point_polyline_distance(z, s->poly) < s->radius) c.slits_per_rank[s->rank]++;
  for (const auto& comp : d.components)
    if (pseudo_hyperbolic_distance(z, comp.loops) < S.delta_prime / 100.0) c.components++;
  for (const auto& p : S.pairings)
    for (const Disc& dk : p.discs)
      if (std::abs(std::abs(z - dk.center) - dk.radius) < S.delta_prime * dk.center.imag()) c.discs++;
  return c;
}

inline std::vector<Atom> slit_origins(const SlitSystem& S) {
  std::vector<Atom> out;
  for (const Slit* s : S.all_slits()) out.push_back({s->origin, s->origin.imag()});
  return out;
}

}  // namespace corona
