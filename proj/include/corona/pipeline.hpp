#pragma once

// The end-to-end construction: given real symmetric Blaschke products f1, f2
// with |f1| + |f2| >= delta and f1 of one sign s on {iy : |f2(iy)| < eps},
//   kappa = V - v,  h interpolating log(s f1 e^{-kappa}) at the zeros of f2,
//   g1 = s e^{-(kappa + h)},  g2 = G1 e^{-h},  G1 = (e^h - s f1 e^{-kappa}) / f2,
// so that f1 g1 + f2 g2 = 1 with g1 invertible.

#include "bezout.hpp"
#include "dbar.hpp"
#include "interpolation.hpp"

#include <array>
#include <memory>
#include <random>
#include <string>

namespace corona {

struct PipelineParams {
  double epsilon = 0.1;
  double delta_prime = 0.0;  // 0: min(delta, epsilon) / 10
  int grid = 512;
  double tolerance = 1e-6;
  double dbar_tolerance = 1e-3;
  double analyticity_tolerance = 1e-2;
  uint64_t seed = 42;
  int random_points = 10000;
  int retries = 8;
  VParams v;
};

enum class Status { success, necessity_violation, not_unimodular, tolerance_failure, input_error };

inline int exit_code(Status s) {
  switch (s) {
    case Status::success: return 0;
    case Status::necessity_violation: return 2;
    case Status::not_unimodular: return 3;
    case Status::tolerance_failure: return 4;
    case Status::input_error: return 5;
  }
  return 5;
}

inline const char* status_name(Status s) {
  switch (s) {
    case Status::success: return "success";
    case Status::necessity_violation: return "necessity-violated";
    case Status::not_unimodular: return "not-unimodular";
    case Status::tolerance_failure: return "tolerance-failure";
    case Status::input_error: return "input-error";
  }
  return "unknown";
}

// ---------------------------------------------------------------------------
// Report

struct NecessityReport {
  bool pass = true;
  int sign = 1;
  double witness_pos = 0.0, witness_neg = 0.0;
  std::vector<std::array<double, 2>> intervals;
};

struct OracleReport {
  bool ok = false;
  double residual = 0.0;
  double rcond = 0.0;
  size_t points = 0;
};

struct DecompositionReport {
  double L = 0.0, M = 0.0;
  int generations = 0, regions = 0, components = 0, sigma1 = 0;
  int stopping_runs = 0;
  bool prop_i = true, prop_ii = true, prop_iv = true;
  double sum_len_ratio = 0.0;       // max sum |I_k| / (20 log(1/eta) |I| / M)
  double residual_intensity_ratio = 0.0;  // max residual intensity / 5M
  double sigma1_intensity = 0.0;
  double boundary_intensity = 0.0;
  double max_p_in_regions = 0.0;
};

struct SlitReport {
  int slits = 0, pairings = 0;
  bool disjoint = true;           // within every family
  int cross_family_overlaps = 0;  // axis slits to the real line shared by different families
  bool has_virtual = false;
  int max_rank_multiplicity = 0;  // largest slit count per rank among origins
  std::map<std::string, int> families;
};

struct FamilyReport {
  std::string family;
  double dbar_scaled = 0.0, lap_scaled = 0.0;
};

struct VReport {
  int resolution = 0;
  double radius = 0.0;
  size_t panels = 0;
  int summands = 0;
  VCertificates certificates;
  std::vector<FamilyReport> families;
};

struct DbarReport {
  double sup_v = 0.0;
  double residual_max = 0.0, residual_p99 = 0.0;
  size_t nodes = 0;
  bool symmetric = false;
  double symmetry_defect = 0.0;
  double kappa_sup_re = 0.0, kappa_sup_dbar = 0.0, kappa_symmetry = 0.0;
  double sup_exp_kappa = 0.0, sup_exp_neg_kappa = 0.0;
};

struct InterpolationReport {
  int nodes = 0;
  double rho = 0.0, rho_used = 0.0, pick_min_eig = 0.0;
  double node_error = 0.0, sup_h = 0.0, numerator_max = 0.0;
  int branch_components = 0;
};

struct SolutionReport {
  double residual = 0.0, residual_grid = 0.0, residual_random = 0.0;
  double sup_g1 = 0.0, inf_g1 = 0.0, sup_g1_inv = 0.0, sup_g2 = 0.0;
  double symmetry_g1 = 0.0, symmetry_g2 = 0.0;
  bool invertibility_bound = true;  // |g1| >= exp(-sup |Re(kappa + h)|) at every node
  size_t grid_nodes = 0, random_points = 0;
};

struct StabilizationReport {
  int schema = 1;
  std::string status = "success";
  int exit_code = 0;
  std::string stage, message, hint;
  std::vector<std::array<double, 2>> f1, f2;
  double epsilon = 0.0, delta = 0.0, delta_prime = 0.0;
  int resolution = 0;
  uint64_t seed = 0;
  int retries = 0;
  NecessityReport necessity;
  OracleReport oracle;
  DecompositionReport decomposition;
  SlitReport slits;
  VReport v;
  DbarReport dbar;
  InterpolationReport interpolation;
  SolutionReport solution;
};

// ---------------------------------------------------------------------------
// Evaluable solution

class Solution {
 public:
  struct State {
    Blaschke f1, f2;
    int sign = 1;
    bool trivial = false;  // f2 has no zeros: g1 = 1, g2 = 1 - f1
    VField V;
    DbarSolution sol;
    Interpolant h;
  };

  Solution() = default;
  explicit Solution(std::shared_ptr<const State> s) : s_(std::move(s)) {}
  bool valid() const { return s_ != nullptr; }
  const State& state() const { return *s_; }

  // real on the axis, where a cut may force an asymmetric nudge of z
  cplx kappa(cplx z) const {
    if (s_->trivial) return 0.0;
    cplx k = s_->V.value(z) - s_->sol.eval(z);
    return z.real() == 0.0 ? cplx(k.real()) : k;
  }
  cplx h(cplx z) const { return s_->trivial ? 0.0 : s_->h(z); }

  cplx g1(cplx z) const { return g1_from(kappa(z), h(z)); }
  cplx g2(cplx z) const { return s_->trivial ? 1.0 - s_->f1(z) : G1(z, kappa(z), h(z)) * std::exp(-h(z)); }

  cplx g1_from(cplx kappa, cplx h) const {
    return s_->trivial ? cplx(1.0) : double(s_->sign) * std::exp(-(kappa + h));
  }

  // G1 with known kappa and h at z; near the zeros of f2 the removable
  // singularity is filled by the mean over four points at distance eta.
  cplx G1(cplx z, cplx kappa, cplx h) const {
    cplx f2 = s_->f2(z);
    if (std::abs(f2) >= 1e-6) return (std::exp(h) - double(s_->sign) * s_->f1(z) * std::exp(-kappa)) / f2;
    const double eta = 1e-2 * z.imag();
    cplx m = 0.0;
    for (cplx d : {cplx(eta, 0.0), cplx(-eta, 0.0), cplx(0.0, eta), cplx(0.0, -eta)}) {
      cplx w = z + d;
      m += G1(w, this->kappa(w), this->h(w));
    }
    return 0.25 * m;
  }

 private:
  std::shared_ptr<const State> s_;
};

struct PipelineResult {
  Status status = Status::success;
  StabilizationReport report;
  bool have_geometry = false;
  Decomposition decomposition;
  SlitSystem slits;
  std::vector<AxisInterval> Z;  // axis sublevel set of f2 at level epsilon
  Grid grid;
  GridField kappa, g1, g2;
  Solution solution;
};

// ---------------------------------------------------------------------------
// Stages

inline NecessityReport check_necessity(const Blaschke& f1, const Blaschke& f2, double epsilon) {
  SignCheck c = axis_sign_condition(f1, f2, epsilon);
  NecessityReport r;
  r.pass = !c.violation;
  r.sign = c.sign;
  r.witness_pos = c.witness_pos;
  r.witness_neg = c.witness_neg;
  for (const auto& iv : c.intervals) r.intervals.push_back({iv.lo, iv.hi});
  return r;
}

// log(s f1) at the zeros of f2, continued on the grid from the axis trace of
// each node's component of {|f2| < dp}.
inline std::vector<cplx> branch_logs(const Blaschke& f1, int sign, const Blaschke& f2, double dp, const Grid& g,
                                     BranchStats* stats = nullptr) {
  std::vector<uint8_t> in(g.size(), 0);
  std::vector<cplx> P(g.size(), 1.0);
  for (int j = 0; j < g.ny(); ++j)
    for (int i = 0; i < g.nx(); ++i) {
      cplx z = g.node(i, j);
      in[g.index(i, j)] = std::abs(f2(z)) < dp;
      P[g.index(i, j)] = double(sign) * f1(z);
    }
  std::vector<cplx> logp;
  BranchStats bs = unwrap_log(g, in, P, logp);
  if (stats) *stats = bs;
  std::vector<cplx> out(f2.zeros.size());
  for (size_t k = 0; k < f2.zeros.size(); ++k) {
    const cplx a = f2.zeros[k];
    if (a.real() < 0.0) continue;
    const cplx pa = double(sign) * f1(a);
    cplx v = std::log(pa);
    int ic = static_cast<int>(std::lround((a.real() + g.X) / g.hx()));
    int jc = static_cast<int>(std::lround(a.imag() / g.hy())) - 1;
    double best = std::numeric_limits<double>::infinity();
    for (int j = jc - 1; j <= jc + 1; ++j)
      for (int i = ic - 1; i <= ic + 1; ++i) {
        if (i < 0 || j < 0 || i >= g.nx() || j >= g.ny() || !in[g.index(i, j)]) continue;
        cplx z = g.node(i, j);
        bool inside = true;
        for (int t = 1; t < 8 && inside; ++t) inside = std::abs(f2(z + (a - z) * (t / 8.0))) < dp;
        if (inside && std::abs(z - a) < best) {
          best = std::abs(z - a);
          v = logp[g.index(i, j)] + std::log(pa / P[g.index(i, j)]);
        }
      }
    if (a.real() == 0.0) v = std::log(std::abs(pa));
    out[k] = v;
  }
  for (size_t k = 0; k < f2.zeros.size(); ++k) {
    const cplx a = f2.zeros[k];
    if (a.real() >= 0.0) continue;
    for (size_t m = 0; m < f2.zeros.size(); ++m)
      if (f2.zeros[m] == reflect(a)) out[k] = std::conj(out[m]);
  }
  return out;
}

namespace detail {

inline std::vector<std::array<double, 2>> zero_list(const Blaschke& b) {
  std::vector<std::array<double, 2>> out;
  for (const cplx& a : b.zeros) out.push_back({a.real(), a.imag()});
  return out;
}

inline DecompositionReport decomposition_report(const Decomposition& d) {
  DecompositionReport r;
  r.L = d.L;
  r.M = d.M;
  r.generations = static_cast<int>(d.generations.size());
  r.regions = static_cast<int>(d.regions.size());
  r.components = static_cast<int>(d.components.size());
  r.sigma1 = static_cast<int>(d.sigma1.size());
  r.stopping_runs = static_cast<int>(d.certificates.size());
  for (const auto& c : d.certificates) {
    r.prop_i = r.prop_i && c.prop_i;
    r.prop_ii = r.prop_ii && c.prop_ii;
    r.prop_iv = r.prop_iv && c.prop_iv;
    if (c.bound_i > 0.0) r.sum_len_ratio = std::max(r.sum_len_ratio, c.sum_len / c.bound_i);
    r.residual_intensity_ratio = std::max(r.residual_intensity_ratio, c.residual_intensity / (5.0 * d.M));
  }
  r.sigma1_intensity = carleson_intensity(sigma1_measure(d));
  r.boundary_intensity = carleson_intensity(boundary_segments(d));
  r.max_p_in_regions = d.max_p_in_regions;
  return r;
}

inline SlitReport slit_report(const Decomposition& d, const SlitSystem& S) {
  SlitReport r;
  std::vector<const Slit*> all = S.all_slits();
  r.slits = static_cast<int>(all.size());
  r.pairings = static_cast<int>(S.pairings.size());
  r.has_virtual = S.has_virtual;
  for (const auto& p : S.pairings) ++r.families[pair_kind_name(p.kind)];
  // disjointness within each family: the pairing's own slits with the slits
  // of its components, against the component rectangles
  for (const auto& p : S.pairings) {
    std::vector<Slit> fam = p.slits;
    std::vector<Rect> rects;
    for (int c : p.components) {
      fam.insert(fam.end(), S.component_slits[c].begin(), S.component_slits[c].end());
      rects.insert(rects.end(), d.components[c].rects.begin(), d.components[c].rects.end());
    }
    try {
      check_slits(fam, rects, "family");
    } catch (const Error&) {
      r.disjoint = false;
    }
  }
  std::map<int, int> family_of;
  for (size_t k = 0; k < S.pairings.size(); ++k) {
    for (const Slit& sl : S.pairings[k].slits) family_of[sl.owner] = static_cast<int>(k);
    for (int c : S.pairings[k].components)
      for (const Slit& sl : S.component_slits[c]) family_of[sl.owner] = static_cast<int>(k);
  }
  for (size_t i = 0; i < all.size(); ++i)
    for (size_t j = 0; j < i; ++j)
      if (family_of[all[i]->owner] != family_of[all[j]->owner] &&
          polyline_distance(all[i]->poly, all[j]->poly) <= all[i]->radius + all[j]->radius)
        ++r.cross_family_overlaps;
  std::map<int, int> per_rank;
  for (const Slit* s : all) r.max_rank_multiplicity = std::max(r.max_rank_multiplicity, ++per_rank[s->rank]);
  return r;
}

inline bool retryable(ErrorKind k) {
  return k == ErrorKind::construction || k == ErrorKind::geometry || k == ErrorKind::inconsistent_input ||
         k == ErrorKind::hypothesis || k == ErrorKind::degenerate;
}

struct Failure {
  Status status;
  std::string stage, hint;
};

inline Failure classify_failure(ErrorKind k, const std::string& stage) {
  switch (k) {
    case ErrorKind::parse:
    case ErrorKind::io: return {Status::input_error, stage, "check the input files"};
    case ErrorKind::not_unimodular: return {Status::not_unimodular, stage, "the pair has a common zero"};
    case ErrorKind::sign_violation: return {Status::necessity_violation, stage, "f1 changes sign on the sublevel set"};
    case ErrorKind::grid_too_small: return {Status::tolerance_failure, stage, "enlarge the grid box"};
    case ErrorKind::ill_conditioned:
    case ErrorKind::interpolation: return {Status::tolerance_failure, stage, "shrink delta_prime"};
    case ErrorKind::tolerance: return {Status::tolerance_failure, stage, "raise resolution"};
    default: return {Status::tolerance_failure, stage, "shrink delta_prime"};
  }
}

}  // namespace detail

// Residual and norms for arbitrary candidate functions g1, g2.
inline SolutionReport verify_pair(const Blaschke& f1, const Blaschke& f2, const std::function<cplx(cplx)>& g1,
                                  const std::function<cplx(cplx)>& g2, const Grid& g, int random, uint64_t seed) {
  SolutionReport r;
  r.inf_g1 = std::numeric_limits<double>::infinity();
  GridField A(g), B(g);
  auto account = [&](cplx z, cplx a, cplx b, double& res) {
    res = std::max(res, std::abs(f1(z) * a + f2(z) * b - 1.0));
    r.sup_g1 = std::max(r.sup_g1, std::abs(a));
    r.inf_g1 = std::min(r.inf_g1, std::abs(a));
    r.sup_g2 = std::max(r.sup_g2, std::abs(b));
  };
  for (int j = 0; j < g.ny(); ++j)
    for (int i = 0; i < g.nx(); ++i) {
      cplx z = g.node(i, j);
      A(i, j) = g1(z);
      B(i, j) = g2(z);
      account(z, A(i, j), B(i, j), r.residual_grid);
      ++r.grid_nodes;
    }
  r.symmetry_g1 = symmetry_defect(A);
  r.symmetry_g2 = symmetry_defect(B);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> ux(-g.X, g.X), uy(g.hy(), g.Y);
  for (int t = 0; t < random; ++t) {
    cplx z(ux(rng), uy(rng));
    account(z, g1(z), g2(z), r.residual_random);
    ++r.random_points;
  }
  r.residual = std::max(r.residual_grid, r.residual_random);
  r.sup_g1_inv = 1.0 / r.inf_g1;
  return r;
}

// Residual, norms and symmetry of g1, g2 on the grid nodes (with kappa given
// there) and at `random` seeded points of the grid box.
inline SolutionReport verify_solution(const Solution& S, const Grid& g, const GridField* kappa, int random,
                                      uint64_t seed, GridField* g1_out = nullptr, GridField* g2_out = nullptr) {
  const auto& st = S.state();
  SolutionReport r;
  r.inf_g1 = std::numeric_limits<double>::infinity();
  GridField G1v(g), G2v(g);
  double sup_re = 0.0;
  std::vector<cplx> kh(g.size());
  for (int j = 0; j < g.ny(); ++j)
    for (int i = 0; i < g.nx(); ++i) {
      cplx z = g.node(i, j);
      cplx k = kappa ? (*kappa)(i, j) : S.kappa(z), h = S.h(z);
      kh[g.index(i, j)] = k + h;
      sup_re = std::max(sup_re, std::abs((k + h).real()));
      cplx a = S.g1_from(k, h);
      cplx b = st.trivial ? 1.0 - st.f1(z) : S.G1(z, k, h) * std::exp(-h);
      G1v(i, j) = a;
      G2v(i, j) = b;
    }
  auto account = [&](cplx z, cplx a, cplx b, double& res) {
    res = std::max(res, std::abs(st.f1(z) * a + st.f2(z) * b - 1.0));
    r.sup_g1 = std::max(r.sup_g1, std::abs(a));
    r.inf_g1 = std::min(r.inf_g1, std::abs(a));
    r.sup_g2 = std::max(r.sup_g2, std::abs(b));
  };
  for (int j = 0; j < g.ny(); ++j)
    for (int i = 0; i < g.nx(); ++i) {
      account(g.node(i, j), G1v(i, j), G2v(i, j), r.residual_grid);
      if (std::abs(G1v(i, j)) < std::exp(-sup_re) * (1.0 - 1e-12)) r.invertibility_bound = false;
      ++r.grid_nodes;
    }
  r.symmetry_g1 = symmetry_defect(G1v);
  r.symmetry_g2 = symmetry_defect(G2v);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> ux(-g.X, g.X), uy(g.hy(), g.Y);
  for (int t = 0; t < random; ++t) {
    cplx z(ux(rng), uy(rng));
    cplx k = S.kappa(z), h = S.h(z);
    account(z, S.g1_from(k, h), st.trivial ? 1.0 - st.f1(z) : S.G1(z, k, h) * std::exp(-h), r.residual_random);
    ++r.random_points;
  }
  r.residual = std::max(r.residual_grid, r.residual_random);
  r.sup_g1_inv = 1.0 / r.inf_g1;
  if (g1_out) *g1_out = G1v;
  if (g2_out) *g2_out = G2v;
  return r;
}

inline PipelineResult run_pipeline(const Blaschke& f1, const Blaschke& f2, const PipelineParams& prm) {
  PipelineResult out;
  StabilizationReport& R = out.report;
  R.f1 = detail::zero_list(f1);
  R.f2 = detail::zero_list(f2);
  R.epsilon = prm.epsilon;
  R.resolution = prm.grid;
  R.seed = prm.seed;
  std::string stage = "input";
  auto fail = [&](Status s, const std::string& msg, const std::string& hint) {
    out.status = s;
    R.status = status_name(s);
    R.exit_code = exit_code(s);
    R.stage = stage;
    R.message = msg;
    R.hint = hint;
    return out;
  };

  try {
    if (!is_symmetric(f1) || !is_symmetric(f2)) throw Error(ErrorKind::parse, "products must be real symmetric");
    if (!(prm.epsilon > 0.0 && prm.epsilon < 1.0)) throw Error(ErrorKind::parse, "epsilon must lie in (0, 1)");

    stage = "unimodularity";
    DeltaResult dr = corona_delta(f1, f2);
    R.delta = dr.delta;
    if (dr.common_zero || !(dr.delta > 0.0)) throw Error(ErrorKind::not_unimodular, "f1 and f2 share a zero");
    const double L0 = base_length(f1, f2);
    BezoutOracle o = bezout_oracle(f1, f2, 2.0 * L0, 2.0 * L0, 200, prm.random_points, prm.seed);
    R.oracle = {o.residual < 1e-8, o.residual, o.rcond, o.points};

    stage = "necessity";
    R.necessity = check_necessity(f1, f2, prm.epsilon);
    for (const auto& iv : R.necessity.intervals) out.Z.push_back({iv[0], iv[1]});
    if (!R.necessity.pass) {
      std::ostringstream os;
      os << "f1 takes both signs on the axis sublevel set of f2: f1(i " << R.necessity.witness_pos << ") > 0, f1(i "
         << R.necessity.witness_neg << ") < 0";
      return fail(Status::necessity_violation, os.str(), "no invertible g1 exists for this pair");
    }
    const int sign = R.necessity.sign;
    double dp = prm.delta_prime > 0.0 ? prm.delta_prime : std::min(R.delta, prm.epsilon) / 10.0;
    R.delta_prime = dp;

    auto state = std::make_shared<Solution::State>();
    state->f1 = f1;
    state->f2 = f2;
    state->sign = sign;

    if (f2.empty()) {
      stage = "verification";
      state->trivial = true;
      out.solution = Solution(state);
      out.grid = Grid(2.0 * L0, 2.0 * L0, prm.grid);
      R.solution = verify_solution(out.solution, out.grid, nullptr, prm.random_points, prm.seed, &out.g1, &out.g2);
      if (R.solution.residual >= prm.tolerance) throw Error(ErrorKind::tolerance, "identity residual above tolerance");
      R.status = status_name(Status::success);
      return out;
    }

    // geometry, with delta' halved on construction failures and the box
    // doubled when the cut neighborhoods leave it
    stage = "decomposition";
    double Lover = 0.0;
    std::vector<Summand> summands;
    VField V;
    Grid g;
    for (int attempt = 0;; ++attempt) {
      try {
        DecompositionParams dprm;
        dprm.delta_prime = dp;
        dprm.L = Lover;
        stage = "decomposition";
        out.decomposition = build_generations(f1, f2, dprm);
        stage = "slits";
        out.slits = classify_and_pair(out.decomposition, f2, dp, sign);
        out.have_geometry = true;
        stage = "v-field";
        summands = build_summands(out.decomposition, out.slits);
        V = VField(summands, out.decomposition.L, prm.v);
        g = Grid(2.0 * out.decomposition.L, 2.0 * out.decomposition.L, prm.grid);
        V.check_grid(g);
        break;
      } catch (const Error& e) {
        if (attempt >= prm.retries) throw;
        if (e.kind() == ErrorKind::grid_too_small) {
          Lover = 2.0 * out.decomposition.L;
        } else if (detail::retryable(e.kind())) {
          dp *= 0.5;
        } else {
          throw;
        }
        ++R.retries;
      }
    }
    R.delta_prime = dp;
    const Decomposition& d = out.decomposition;
    R.decomposition = detail::decomposition_report(d);
    R.slits = detail::slit_report(d, out.slits);

    stage = "v-field";
    VGrids G = sample_v_grid(V, g);
    R.v.resolution = prm.grid;
    R.v.radius = V.radius();
    R.v.panels = V.panel_count();
    R.v.summands = static_cast<int>(summands.size());
    R.v.certificates = v_certificates(V, G, f2, dp);
    for (const auto& f : G.families) R.v.families.push_back({pair_kind_name(f.family), f.dbar_scaled, f.lap_scaled});

    stage = "dbar";
    DbarSolution sol = solve_dbar(G.dbar);
    Kappa K = make_kappa(G.V, sol);
    R.dbar = {sol.sup_v,  sol.residual.max_rel, sol.residual.p99_rel, sol.residual.nodes, sol.symmetric,
              sol.symmetry_defect, K.sup_re, K.sup_dbar, K.symmetry_defect, K.sup_exp, K.sup_exp_neg};
    out.grid = g;
    out.kappa = K.kappa;

    stage = "interpolation";
    state->V = std::move(V);
    state->sol = std::move(sol);
    BranchStats bs;
    std::vector<cplx> logs = branch_logs(f1, sign, f2, dp, g, &bs);
    std::vector<cplx> targets;
    for (size_t k = 0; k < f2.zeros.size(); ++k) {
      const cplx a = f2.zeros[k];
      targets.push_back(logs[k] - Solution(state).kappa(a));
    }
    for (size_t k = 0; k < f2.zeros.size(); ++k)
      if (f2.zeros[k].real() < 0.0)
        for (size_t m = 0; m < f2.zeros.size(); ++m)
          if (f2.zeros[m] == reflect(f2.zeros[k])) targets[k] = std::conj(targets[m]);
    state->h = interpolate_symmetric(f2.zeros, targets);
    out.solution = Solution(state);
    auto& IR = R.interpolation;
    IR.nodes = static_cast<int>(f2.zeros.size());
    IR.rho = state->h.rho;
    IR.rho_used = state->h.rho_used;
    IR.pick_min_eig = state->h.pick_min_eig;
    IR.node_error = state->h.max_node_error();
    IR.branch_components = bs.components;
    for (size_t k = 0; k < f2.zeros.size(); ++k) {
      const cplx a = f2.zeros[k];
      cplx kap = out.solution.kappa(a);
      IR.numerator_max = std::max(IR.numerator_max, std::abs(std::exp(state->h(a)) - double(sign) * f1(a) * std::exp(-kap)));
    }
    for (int j = 0; j < g.ny(); ++j)
      for (int i = 0; i < g.nx(); ++i) IR.sup_h = std::max(IR.sup_h, std::abs(state->h(g.node(i, j))));
    if (IR.numerator_max >= 1e-6)
      throw Error(ErrorKind::interpolation, "e^h - s f1 e^-kappa does not vanish at a zero of f2");

    stage = "verification";
    R.solution = verify_solution(out.solution, g, &out.kappa, prm.random_points, prm.seed, &out.g1, &out.g2);

    if (R.dbar.residual_max > prm.dbar_tolerance) {
      stage = "dbar";
      throw Error(ErrorKind::tolerance, "dbar residual above tolerance");
    }
    if (R.dbar.kappa_sup_dbar > prm.analyticity_tolerance) {
      stage = "dbar";
      throw Error(ErrorKind::tolerance, "kappa fails the analyticity check");
    }
    if (!(R.solution.residual < prm.tolerance)) throw Error(ErrorKind::tolerance, "identity residual above tolerance");
    if (!(R.solution.inf_g1 > 0.0) || !std::isfinite(R.solution.sup_g2))
      throw Error(ErrorKind::tolerance, "g1 not invertible or g2 unbounded on the samples");
  } catch (const Error& e) {
    auto f = detail::classify_failure(e.kind(), stage);
    return fail(f.status, e.what(), f.hint);
  }
  R.status = status_name(Status::success);
  return out;
}

}  // namespace corona
