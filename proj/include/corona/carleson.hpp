#pragma once

// Symmetric stopping-time decomposition: interval selection under the
// triple-square mass test, generations of regions U(J), their connected
// components, the residual zero set, and Carleson intensities.

#include "halfplane.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <numeric>
#include <set>
#include <vector>

namespace corona {

struct Interval {
  double lo = 0.0, hi = 0.0;
  double len() const { return hi - lo; }
  double mid() const { return 0.5 * (lo + hi); }
  Interval mirrored() const { return {-hi, -lo}; }
  bool operator==(const Interval& o) const { return lo == o.lo && hi == o.hi; }
};

struct Rect {
  double x0, x1, y0, y1;
  bool contains(cplx z, double tol = 1e-12) const {
    double s = tol * std::max({1.0, std::abs(x0), std::abs(x1), y1});
    return z.real() >= x0 - s && z.real() <= x1 + s && z.imag() >= y0 - s && z.imag() <= y1 + s;
  }
  Rect mirrored() const { return {-x1, -x0, y0, y1}; }
};

struct Atom {
  cplx z;
  double w;
};

// ---------------------------------------------------------------------------
// Carleson intensity of finite measures

// sup over squares Q(I) of mass(Q(I)) / |I| for point masses. For a fixed set
// of captured atoms the optimal square has |I| = max(spread of Re, max Im)
// and one side at an extreme abscissa, so the candidates below contain a
// maximizer.
inline double carleson_intensity(const std::vector<Atom>& atoms) {
  if (atoms.empty()) return 0.0;
  std::vector<double> xs, widths;
  for (const Atom& a : atoms) {
    xs.push_back(a.z.real());
    widths.push_back(a.z.imag());
  }
  for (size_t i = 0; i < atoms.size(); ++i)
    for (size_t j = 0; j < atoms.size(); ++j) {
      double d = atoms[j].z.real() - atoms[i].z.real();
      if (d > 0.0) widths.push_back(d);
    }
  std::sort(widths.begin(), widths.end());
  widths.erase(std::unique(widths.begin(), widths.end()), widths.end());
  double best = 0.0;
  for (double w : widths) {
    if (w <= 0.0) continue;
    for (double x : xs)
      for (double x0 : {x, x - w}) {
        double mass = 0.0, eps = 1e-12 * (std::abs(x) + w);
        for (const Atom& a : atoms)
          if (a.z.real() >= x0 - eps && a.z.real() <= x0 + w + eps && a.z.imag() <= w * (1 + 1e-12))
            mass += a.w;
        best = std::max(best, mass / w);
      }
  }
  return best;
}

struct Segment {
  cplx a, b;
};

// Length of the part of a segment inside the closed square Q([x0, x0+w]).
inline double clipped_length(const Segment& s, double x0, double w) {
  double t0 = 0.0, t1 = 1.0;
  cplx d = s.b - s.a;
  auto clip = [&](double p, double q) {  // p*t <= q
    if (p == 0.0) return q >= 0.0;
    double r = q / p;
    if (p < 0.0) t0 = std::max(t0, r); else t1 = std::min(t1, r);
    return true;
  };
  if (!clip(-d.real(), s.a.real() - x0)) return 0.0;
  if (!clip(d.real(), x0 + w - s.a.real())) return 0.0;
  if (!clip(-d.imag(), s.a.imag())) return 0.0;
  if (!clip(d.imag(), w - s.a.imag())) return 0.0;
  return t1 > t0 ? (t1 - t0) * std::abs(d) : 0.0;
}

// Intensity of arc length on a finite set of segments, over squares whose
// sides pass through segment endpoints or whose size matches an endpoint
// height, plus a dyadic sweep.
inline double carleson_intensity(const std::vector<Segment>& segs) {
  if (segs.empty()) return 0.0;
  std::vector<double> xs, widths;
  for (const Segment& s : segs)
    for (cplx p : {s.a, s.b}) {
      xs.push_back(p.real());
      if (p.imag() > 0.0) widths.push_back(p.imag());
    }
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  for (size_t i = 0; i < xs.size(); ++i)
    for (size_t j = i + 1; j < xs.size(); ++j) widths.push_back(xs[j] - xs[i]);
  std::sort(widths.begin(), widths.end());
  widths.erase(std::unique(widths.begin(), widths.end()), widths.end());
  double best = 0.0;
  auto mass = [&](double x0, double w) {
    double m = 0.0;
    for (const Segment& s : segs) m += clipped_length(s, x0, w);
    return m / w;
  };
  for (double w : widths) {
    if (w <= 1e-300) continue;
    for (double x : xs) {
      best = std::max(best, mass(x, w));
      best = std::max(best, mass(x - w, w));
    }
  }
  double lo = xs.front(), hi = xs.back(), span = std::max(hi - lo, 1e-12);
  for (int lev = 0; lev < 12; ++lev) {
    double w = span / std::pow(2.0, lev);
    for (double x0 = lo; x0 < hi; x0 += w / 2) best = std::max(best, mass(x0, w));
  }
  return best;
}

// ---------------------------------------------------------------------------
// Stopping intervals

struct StoppingResult {
  Interval parent{0.0, 0.0};
  double M = 0.0, eta = 0.0;
  std::vector<Interval> intervals;
  double sum_len = 0.0;
  double bound_i = 0.0;        // 20 log(1/eta) |I| / M
  bool prop_i = true;
  double min_mass_ratio = 0.0; // min_k mass(Q(3 I_k)) / |I_k|, compared with M
  bool prop_ii = true;
  double residual_intensity = 0.0;
  bool prop_iv = true;
  double max_pointwise_ratio = 0.0;  // sampled sum / (M + log 1/eta)
};

namespace detail {

// Mass of zeros in Q(3 I') with the triple interval clipped to the strip.
inline double triple_mass(const std::vector<cplx>& zeros, Interval sub, Interval strip) {
  double w = sub.len(), c = sub.mid();
  double lo = std::max(c - 1.5 * w, strip.lo), hi = std::min(c + 1.5 * w, strip.hi);
  double m = 0.0;
  for (const cplx& a : zeros)
    if (a.real() >= lo && a.real() <= hi && a.imag() <= 3.0 * w) m += a.imag();
  return m;
}

inline bool any_in_triple(const std::vector<cplx>& zeros, Interval sub, Interval strip) {
  return triple_mass(zeros, sub, strip) > 0.0;
}

inline double top_half_max(const Blaschke& b, Interval I, int nx = 17, int ny = 9) {
  double m = 0.0, w = I.len();
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) {
      cplx z(I.lo + w * i / (nx - 1), w * (0.5 + 0.5 * j / (ny - 1)));
      m = std::max(m, std::abs(b(z)));
    }
  return m;
}

}  // namespace detail

// Maximal proper dyadic subintervals I_k of I with
// sum over zeros in Q(3 I_k) of Im a >= M |I_k|; the three certified
// properties are re-checked by brute force before returning.
inline StoppingResult stopping_intervals(const Blaschke& b, Interval I, double M, double eta) {
  if (!(M > 0.0)) throw Error(ErrorKind::hypothesis, "M must be positive");
  if (detail::top_half_max(b, I) < eta)
    throw Error(ErrorKind::hypothesis, "no top-half witness with |B| >= eta");
  StoppingResult out;
  out.parent = I;
  out.M = M;
  out.eta = eta;
  const auto& zs = b.zeros;
  double min_im = std::numeric_limits<double>::infinity();
  for (const cplx& a : zs) min_im = std::min(min_im, a.imag());

  std::function<void(Interval, int)> rec = [&](Interval J, int depth) {
    if (!detail::any_in_triple(zs, J, I)) return;
    if (detail::triple_mass(zs, J, I) >= M * J.len()) {
      out.intervals.push_back(J);
      return;
    }
    if (depth >= 60 || 3.0 * J.len() < min_im) return;
    rec({J.lo, J.mid()}, depth + 1);
    rec({J.mid(), J.hi}, depth + 1);
  };
  rec({I.lo, I.mid()}, 1);
  rec({I.mid(), I.hi}, 1);

  out.bound_i = 20.0 * std::log(1.0 / eta) / M * I.len();
  for (const Interval& J : out.intervals) out.sum_len += J.len();
  out.prop_i = out.sum_len <= out.bound_i * (1.0 + 1e-12);
  out.min_mass_ratio = std::numeric_limits<double>::infinity();
  for (const Interval& J : out.intervals)
    out.min_mass_ratio = std::min(out.min_mass_ratio, detail::triple_mass(zs, J, I) / J.len());
  out.prop_ii = out.intervals.empty() || out.min_mass_ratio >= M;
  if (out.intervals.empty()) out.min_mass_ratio = 0.0;

  auto in_selected = [&](cplx z) {
    for (const Interval& J : out.intervals)
      if (z.real() >= J.lo && z.real() <= J.hi && z.imag() <= J.len()) return true;
    return false;
  };
  std::vector<Atom> residual;
  for (const cplx& a : zs)
    if (a.real() >= I.lo && a.real() <= I.hi && a.imag() <= I.len() && !in_selected(a))
      residual.push_back({a, a.imag()});
  out.residual_intensity = carleson_intensity(residual);
  out.prop_iv = out.residual_intensity <= 5.0 * M;

  const int ns = 64;
  double denom = M + std::log(1.0 / eta);
  for (int j = 0; j < ns; ++j)
    for (int i = 0; i < ns; ++i) {
      cplx z(I.lo + I.len() * (i + 0.5) / ns, I.len() * (j + 0.5) / ns);
      if (in_selected(z)) continue;
      double s = 0.0;
      for (const cplx& a : zs) s += z.imag() * a.imag() / std::norm(z - std::conj(a));
      out.max_pointwise_ratio = std::max(out.max_pointwise_ratio, s / denom);
    }
  return out;
}

// ---------------------------------------------------------------------------
// Decomposition

struct Region {
  int generation = 0;
  Interval J;
  std::vector<Interval> children;  // D(J)
  std::vector<Rect> rects;         // columns J' x [|J'|, |J|]
  int component = -1;
};

struct Edge {
  cplx a, b;  // interior on the left
};

struct Component {
  std::vector<int> regions;
  std::vector<Rect> rects;
  std::vector<std::vector<cplx>> loops;  // closed rectilinear loops, interior on the left
  std::vector<cplx> zeros;
  int axis_zero_count = 0;
  bool self_symmetric = false;
  int mirror = -1;
  double boundary_length = 0.0;
  bool contains(cplx z) const {
    for (const Rect& r : rects)
      if (r.contains(z)) return true;
    return false;
  }
  double axis_bottom() const;  // lowest height where the closed component meets the axis
  double axis_top() const;
};

inline double Component::axis_bottom() const {
  double v = std::numeric_limits<double>::infinity();
  for (const Rect& r : rects)
    if (r.x0 <= 0.0 && r.x1 >= 0.0) v = std::min(v, r.y0);
  return v;
}
inline double Component::axis_top() const {
  double v = 0.0;
  for (const Rect& r : rects)
    if (r.x0 <= 0.0 && r.x1 >= 0.0) v = std::max(v, r.y1);
  return v;
}

struct Decomposition {
  double L = 0.0, M = 0.0, eta = 0.0;
  std::vector<std::vector<Interval>> generations;
  std::vector<Region> regions;
  std::vector<Component> components;
  std::vector<cplx> sigma1;
  std::vector<StoppingResult> certificates;
  double max_p_in_regions = 0.0;
  double min_corona_on_boundary = std::numeric_limits<double>::infinity();
};

// Boundary of a union of closed axis-aligned rectangles as rectilinear loops
// with the interior on the left, built on the coarse cell grid of all
// rectangle coordinates.
inline std::vector<std::vector<cplx>> union_boundary(const std::vector<Rect>& rects) {
  std::vector<double> xs, ys;
  for (const Rect& r : rects) {
    xs.push_back(r.x0); xs.push_back(r.x1);
    ys.push_back(r.y0); ys.push_back(r.y1);
  }
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  std::sort(ys.begin(), ys.end());
  ys.erase(std::unique(ys.begin(), ys.end()), ys.end());
  const int nx = static_cast<int>(xs.size()) - 1, ny = static_cast<int>(ys.size()) - 1;
  if (nx < 1 || ny < 1) return {};
  std::vector<char> occ(nx * ny, 0);
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) {
      cplx c(0.5 * (xs[i] + xs[i + 1]), 0.5 * (ys[j] + ys[j + 1]));
      for (const Rect& r : rects)
        if (r.contains(c, 0.0)) { occ[j * nx + i] = 1; break; }
    }
  auto filled = [&](int i, int j) { return i >= 0 && j >= 0 && i < nx && j < ny && occ[j * nx + i]; };
  // Unit edges between lattice vertices (i,j) -> (i',j'), interior on the left.
  std::map<std::pair<int, int>, std::vector<std::pair<int, int>>> out_edges;
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) {
      if (!filled(i, j)) continue;
      if (!filled(i, j - 1)) out_edges[{i, j}].push_back({i + 1, j});          // bottom, eastward
      if (!filled(i + 1, j)) out_edges[{i + 1, j}].push_back({i + 1, j + 1});  // right, northward
      if (!filled(i, j + 1)) out_edges[{i + 1, j + 1}].push_back({i, j + 1});  // top, westward
      if (!filled(i - 1, j)) out_edges[{i, j + 1}].push_back({i, j});          // left, southward
    }
  std::vector<std::vector<cplx>> loops;
  while (!out_edges.empty()) {
    auto start = out_edges.begin()->first;
    std::vector<std::pair<int, int>> verts{start};
    auto cur = start;
    std::pair<int, int> prev_dir{0, 0};
    while (true) {
      auto& lst = out_edges[cur];
      size_t pick = 0;
      if (lst.size() > 1) {
        // prefer the left turn at pinch vertices
        for (size_t k = 0; k < lst.size(); ++k) {
          int dx = lst[k].first - cur.first, dy = lst[k].second - cur.second;
          if (prev_dir.first * dy - prev_dir.second * dx > 0) pick = k;
        }
      }
      auto nxt = lst[pick];
      prev_dir = {nxt.first - cur.first, nxt.second - cur.second};
      lst.erase(lst.begin() + pick);
      if (lst.empty()) out_edges.erase(cur);
      cur = nxt;
      if (cur == start) break;
      verts.push_back(cur);
    }
    // drop collinear vertices
    std::vector<cplx> loop;
    const size_t n = verts.size();
    for (size_t k = 0; k < n; ++k) {
      auto p = verts[(k + n - 1) % n], c = verts[k], q = verts[(k + 1) % n];
      int d1x = c.first - p.first, d1y = c.second - p.second, d2x = q.first - c.first, d2y = q.second - c.second;
      if (d1x * d2y - d1y * d2x == 0 && d1x * d2x + d1y * d2y > 0) continue;
      loop.emplace_back(xs[c.first], ys[c.second]);
    }
    loops.push_back(loop);
  }
  return loops;
}

inline double loops_length(const std::vector<std::vector<cplx>>& loops) {
  double s = 0.0;
  for (const auto& l : loops)
    for (size_t k = 0; k < l.size(); ++k) s += std::abs(l[(k + 1) % l.size()] - l[k]);
  return s;
}

inline std::vector<Segment> loops_segments(const std::vector<std::vector<cplx>>& loops) {
  std::vector<Segment> out;
  for (const auto& l : loops)
    for (size_t k = 0; k < l.size(); ++k) out.push_back({l[k], l[(k + 1) % l.size()]});
  return out;
}

// Arc-length data of the boundary of a union of rectangles; all four sides
// count, so a single square Q(J) gives 4|J|.
inline double region_boundary_length(const std::vector<Rect>& rects) {
  return loops_length(union_boundary(rects));
}

namespace detail {

inline bool rects_touch(const Rect& a, const Rect& b, double tol = 1e-12) {
  double s = tol * std::max({1.0, std::abs(a.x1), std::abs(b.x1), a.y1, b.y1});
  double ox = std::min(a.x1, b.x1) - std::max(a.x0, b.x0);
  double oy = std::min(a.y1, b.y1) - std::max(a.y0, b.y0);
  if (ox < -s || oy < -s) return false;
  return ox > s || oy > s;  // shared edge of positive length or overlap
}

// Reflection-closed set of intervals; a piece touching the axis is merged
// with its mirror image.
inline std::vector<Interval> symmetric_closure(const std::vector<Interval>& right) {
  std::vector<Interval> all;
  for (const Interval& I : right) {
    all.push_back(I);
    all.push_back(I.mirrored());
  }
  std::sort(all.begin(), all.end(), [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
  std::vector<Interval> merged;
  for (const Interval& I : all) {
    bool joins = !merged.empty() && (I.lo < merged.back().hi || (I.lo == 0.0 && merged.back().hi == 0.0));
    if (joins) merged.back().hi = std::max(merged.back().hi, I.hi);
    else merged.push_back(I);
  }
  return merged;
}

// Maximal dyadic subintervals of J (dyadic relative to J) whose top half
// carries a sample with |p| > threshold; covers J.
inline std::vector<Interval> next_children(const Blaschke& p, Interval J, double threshold) {
  std::vector<Interval> out;
  std::function<void(Interval, int)> rec = [&](Interval K, int depth) {
    if (depth >= 50 || top_half_max(p, K) > threshold) {
      out.push_back(K);
      return;
    }
    rec({K.lo, K.mid()}, depth + 1);
    rec({K.mid(), K.hi}, depth + 1);
  };
  rec(J, 0);
  return out;
}

}  // namespace detail

struct DecompositionParams {
  double delta_prime = 0.1;
  double M = 0.0;       // 0: max(200 log(1/delta'), 1) * 1.01
  double L = 0.0;       // 0: from the zeros
  int max_generations = 64;
};

inline double default_M(double delta_prime) {
  return std::max(200.0 * std::log(1.0 / delta_prime), 1.0) * 1.01;
}

inline double base_length(const Blaschke& p, const Blaschke& q) {
  double m = 0.0;
  for (const Blaschke* b : {&p, &q})
    for (const cplx& a : b->zeros) m = std::max(m, std::abs(a.real()) + a.imag());
  if (m <= 0.0) return 1.0;
  return std::pow(2.0, std::ceil(std::log2(4.0 * m)));
}

inline Decomposition build_generations(const Blaschke& p, const Blaschke& q, const DecompositionParams& prm) {
  Decomposition d;
  const double dp = prm.delta_prime;
  d.M = prm.M > 0.0 ? prm.M : default_M(dp);
  d.eta = dp;
  d.L = prm.L > 0.0 ? prm.L : base_length(p, q);
  if (p.empty()) {
    return d;
  }
  for (int k = 0; k < 20 && std::abs(p(cplx(0.0, 0.75 * d.L))) < dp; ++k) d.L *= 2.0;

  // Right-half pieces of the current generation, each with its clipping strip.
  std::vector<Interval> parents{{0.0, d.L}};
  for (int gen = 1; gen <= prm.max_generations + 1; ++gen) {
    std::vector<Interval> right;
    for (const Interval& P : parents) {
      if (detail::top_half_max(p, P) < d.eta) continue;
      StoppingResult sr = stopping_intervals(p, P, d.M, d.eta);
      for (const Interval& I : sr.intervals) right.push_back(I);
      d.certificates.push_back(sr);
    }
    if (right.empty()) break;
    if (gen > prm.max_generations)
      throw Error(ErrorKind::construction, "generation limit exceeded");
    std::vector<Interval> K = detail::symmetric_closure(right);
    d.generations.push_back(K);
    parents.clear();
    for (const Interval& J : K) {
      if (J.hi <= 0.0) continue;  // left pieces come from mirroring
      std::vector<Interval> kids;
      if (J.lo < 0.0 && detail::top_half_max(p, J) > dp) {
        kids.push_back(J);
      } else if (J.lo < 0.0) {  // self-symmetric piece [-w, w]
        auto half = detail::next_children(p, {0.0, J.hi}, dp);
        for (const Interval& c : half) { kids.push_back(c); kids.push_back(c.mirrored()); }
      } else {
        kids = detail::next_children(p, J, dp);
      }
      std::sort(kids.begin(), kids.end(), [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
      auto make_region = [&](Interval JJ, const std::vector<Interval>& ch) {
        Region r;
        r.generation = gen;
        r.J = JJ;
        r.children = ch;
        for (const Interval& c : ch)
          if (c.len() < JJ.len()) r.rects.push_back({c.lo, c.hi, c.len(), JJ.len()});
        return r;
      };
      Region R = make_region(J, kids);
      if (!R.rects.empty()) d.regions.push_back(R);
      if (J.lo >= 0.0) {
        std::vector<Interval> mk;
        for (auto it = kids.rbegin(); it != kids.rend(); ++it) mk.push_back(it->mirrored());
        Region Rm = make_region(J.mirrored(), mk);
        if (!Rm.rects.empty()) d.regions.push_back(Rm);
      }
      for (const Interval& c : kids)
        if (c.lo >= 0.0 && c.len() < J.len()) parents.push_back(c);
    }
  }

  // Components by shared-edge adjacency.
  const size_t nr = d.regions.size();
  std::vector<int> parent(nr);
  std::iota(parent.begin(), parent.end(), 0);
  std::function<int(int)> find = [&](int x) { return parent[x] == x ? x : parent[x] = find(parent[x]); };
  for (size_t i = 0; i < nr; ++i)
    for (size_t j = i + 1; j < nr; ++j) {
      bool touch = false;
      for (const Rect& a : d.regions[i].rects)
        for (const Rect& b : d.regions[j].rects)
          if (detail::rects_touch(a, b)) touch = true;
      if (touch) parent[find(static_cast<int>(i))] = find(static_cast<int>(j));
    }
  std::map<int, int> root_to_comp;
  for (size_t i = 0; i < nr; ++i) {
    int r = find(static_cast<int>(i));
    if (!root_to_comp.count(r)) {
      root_to_comp[r] = static_cast<int>(d.components.size());
      d.components.emplace_back();
    }
    int c = root_to_comp[r];
    d.regions[i].component = c;
    d.components[c].regions.push_back(static_cast<int>(i));
    for (const Rect& rc : d.regions[i].rects) d.components[c].rects.push_back(rc);
  }
  for (auto& comp : d.components) {
    comp.loops = union_boundary(comp.rects);
    comp.boundary_length = loops_length(comp.loops);
  }
  // Reflection partners.
  for (size_t c = 0; c < d.components.size(); ++c) {
    Rect probe = d.components[c].rects.front().mirrored();
    for (size_t e = 0; e < d.components.size(); ++e)
      for (const Rect& r : d.components[e].rects)
        if (r.x0 == probe.x0 && r.x1 == probe.x1 && r.y0 == probe.y0 && r.y1 == probe.y1)
          d.components[c].mirror = static_cast<int>(e);
    d.components[c].self_symmetric = d.components[c].mirror == static_cast<int>(c);
  }
  // Zero membership.
  for (const cplx& a : p.zeros) {
    int owner = -1;
    for (size_t c = 0; c < d.components.size() && owner < 0; ++c)
      if (d.components[c].contains(a)) owner = static_cast<int>(c);
    if (owner < 0) d.sigma1.push_back(a);
    else {
      d.components[owner].zeros.push_back(a);
      if (on_axis(a)) d.components[owner].axis_zero_count++;
    }
  }
  // Sublevel and corona samples on the regions.
  for (const Region& r : d.regions)
    for (const Rect& rc : r.rects)
      for (int j = 0; j <= 8; ++j)
        for (int i = 0; i <= 8; ++i) {
          cplx z(rc.x0 + (rc.x1 - rc.x0) * i / 8.0, rc.y0 + (rc.y1 - rc.y0) * j / 8.0);
          double pv = std::abs(p(z));
          if (i > 0 && i < 8 && j > 0 && j < 8) d.max_p_in_regions = std::max(d.max_p_in_regions, pv);
          if (i == 0 || i == 8 || j == 0 || j == 8)
            d.min_corona_on_boundary = std::min(d.min_corona_on_boundary, pv + std::abs(q(z)));
        }
  if (d.min_corona_on_boundary < dp)
    throw Error(ErrorKind::inconsistent_input, "|p|+|q| < delta' on a region boundary");
  return d;
}

inline std::vector<Atom> sigma1_measure(const Decomposition& d) {
  std::vector<Atom> out;
  for (const cplx& a : d.sigma1) out.push_back({a, a.imag()});
  return out;
}

inline std::vector<Segment> boundary_segments(const Decomposition& d) {
  std::vector<Segment> out;
  for (const auto& c : d.components) {
    auto s = loops_segments(c.loops);
    out.insert(out.end(), s.begin(), s.end());
  }
  return out;
}

}  // namespace corona
