#pragma once

// Run configuration, orchestration and artifact emission for the stabilize tool.

#include "pipeline.hpp"

#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <set>
#include <sstream>

namespace corona {

NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(NecessityReport, pass, sign, witness_pos, witness_neg, intervals)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(OracleReport, ok, residual, rcond, points)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(DecompositionReport, L, M, generations, regions, components, sigma1, stopping_runs,
                                   prop_i, prop_ii, prop_iv, sum_len_ratio, residual_intensity_ratio, sigma1_intensity,
                                   boundary_intensity, max_p_in_regions)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(SlitReport, slits, pairings, disjoint, cross_family_overlaps, has_virtual,
                                   max_rank_multiplicity, families)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(VCertificates, sup_re, re_bound, re_overshoot, lap_intensity, grad_intensity,
                                   grad_pointwise, closeness, closeness_nodes, branch_components,
                                   branch_inconsistencies, treil)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(FamilyReport, family, dbar_scaled, lap_scaled)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(VReport, resolution, radius, panels, summands, certificates, families)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(DbarReport, sup_v, residual_max, residual_p99, nodes, symmetric, symmetry_defect,
                                   kappa_sup_re, kappa_sup_dbar, kappa_symmetry, sup_exp_kappa, sup_exp_neg_kappa)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(InterpolationReport, nodes, rho, rho_used, pick_min_eig, node_error, sup_h,
                                   numerator_max, branch_components)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(SolutionReport, residual, residual_grid, residual_random, sup_g1, inf_g1,
                                   sup_g1_inv, sup_g2, symmetry_g1, symmetry_g2, invertibility_bound, grid_nodes,
                                   random_points)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(StabilizationReport, schema, status, exit_code, stage, message, hint, f1, f2, epsilon,
                                   delta, delta_prime, resolution, seed, retries, necessity, oracle, decomposition,
                                   slits, v, dbar, interpolation, solution)

struct RunConfig {
  std::string f1, f2;  // zero files
  double epsilon = 0.0;
  std::optional<double> delta_prime;
  int resolution = 512;
  double tolerance = 1e-6;
  double dbar_tolerance = 1e-3;
  double analyticity_tolerance = 1e-2;
  uint64_t seed = 42;
  std::string out;  // empty: nothing written
  bool emit_report = true, emit_fields = false, emit_svg = false;

  bool operator==(const RunConfig&) const = default;
};

inline void validate(const RunConfig& c) {
  if (c.f1.empty() || c.f2.empty()) throw Error(ErrorKind::parse, "f1 and f2 paths are required");
  if (!(c.epsilon > 0.0 && c.epsilon < 1.0)) throw Error(ErrorKind::parse, "epsilon must lie in (0, 1)");
  if (c.delta_prime && !(*c.delta_prime > 0.0)) throw Error(ErrorKind::parse, "delta_prime must be positive");
  const int r = c.resolution;
  if (r < 128 || r > 4096 || (r & (r - 1)) != 0)
    throw Error(ErrorKind::parse, "resolution must be a power of two in [128, 4096], got " + std::to_string(r));
  for (double t : {c.tolerance, c.dbar_tolerance, c.analyticity_tolerance})
    if (!(t > 0.0)) throw Error(ErrorKind::parse, "tolerances must be positive");
}

inline RunConfig parse_config(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::parse, std::string("config: ") + e.what());
  }
  if (!j.is_object()) throw Error(ErrorKind::parse, "config must be an object");
  static const std::set<std::string> known{"f1",        "f2",   "epsilon", "delta_prime", "resolution",
                                           "tolerance", "dbar_tolerance", "analyticity_tolerance",
                                           "seed",      "out",  "emit"};
  for (const auto& [k, v] : j.items())
    if (!known.count(k)) throw Error(ErrorKind::parse, "config: unknown field '" + k + "'");
  for (const char* k : {"f1", "f2", "epsilon"})
    if (!j.contains(k)) throw Error(ErrorKind::parse, std::string("config: missing required field '") + k + "'");

  RunConfig c;
  try {
    c.f1 = j.at("f1").get<std::string>();
    c.f2 = j.at("f2").get<std::string>();
    c.epsilon = j.at("epsilon").get<double>();
    if (j.contains("delta_prime") && !j["delta_prime"].is_null()) c.delta_prime = j["delta_prime"].get<double>();
    c.resolution = j.value("resolution", c.resolution);
    c.tolerance = j.value("tolerance", c.tolerance);
    c.dbar_tolerance = j.value("dbar_tolerance", c.dbar_tolerance);
    c.analyticity_tolerance = j.value("analyticity_tolerance", c.analyticity_tolerance);
    c.seed = j.value("seed", c.seed);
    c.out = j.value("out", c.out);
    if (j.contains("emit")) {
      const auto& e = j["emit"];
      c.emit_report = e.value("report", c.emit_report);
      c.emit_fields = e.value("fields", c.emit_fields);
      c.emit_svg = e.value("svg", c.emit_svg);
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::parse, std::string("config: ") + e.what());
  }
  validate(c);
  return c;
}

inline std::string emit_config(const RunConfig& c) {
  nlohmann::ordered_json j;
  j["f1"] = c.f1;
  j["f2"] = c.f2;
  j["epsilon"] = c.epsilon;
  j["delta_prime"] = c.delta_prime ? nlohmann::ordered_json(*c.delta_prime) : nlohmann::ordered_json(nullptr);
  j["resolution"] = c.resolution;
  j["tolerance"] = c.tolerance;
  j["dbar_tolerance"] = c.dbar_tolerance;
  j["analyticity_tolerance"] = c.analyticity_tolerance;
  j["seed"] = c.seed;
  j["out"] = c.out;
  j["emit"] = {{"report", c.emit_report}, {"fields", c.emit_fields}, {"svg", c.emit_svg}};
  return j.dump(2) + "\n";
}

inline PipelineParams pipeline_params(const RunConfig& c) {
  PipelineParams p;
  p.epsilon = c.epsilon;
  p.delta_prime = c.delta_prime.value_or(0.0);
  p.grid = c.resolution;
  p.tolerance = c.tolerance;
  p.dbar_tolerance = c.dbar_tolerance;
  p.analyticity_tolerance = c.analyticity_tolerance;
  p.seed = c.seed;
  return p;
}

// ---------------------------------------------------------------------------
// Artifacts

inline std::string report_json(const StabilizationReport& r) { return nlohmann::json(r).dump(2) + "\n"; }

namespace detail {

inline std::string fmt(double v) {
  char b[32];
  std::snprintf(b, sizeof b, "%.6f", v);
  return b;
}

inline nlohmann::json point_list(const std::vector<cplx>& p) {
  nlohmann::json a = nlohmann::json::array();
  for (const cplx& z : p) a.push_back({z.real(), z.imag()});
  return a;
}

}  // namespace detail

// Polylines with kind, rank and owner tags.
inline std::string geometry_json(const PipelineResult& res) {
  nlohmann::json j;
  j["schema"] = 1;
  j["Z"] = nlohmann::json::array();
  for (const auto& z : res.Z) j["Z"].push_back({z.lo, z.hi});
  j["components"] = nlohmann::json::array();
  j["slits"] = nlohmann::json::array();
  j["discs"] = nlohmann::json::array();
  if (!res.have_geometry) return j.dump(2) + "\n";
  j["L"] = res.decomposition.L;
  for (const auto& c : res.decomposition.components) {
    nlohmann::json loops = nlohmann::json::array();
    for (const auto& l : c.loops) loops.push_back(detail::point_list(l));
    j["components"].push_back({{"loops", loops}});
  }
  for (const Slit* s : res.slits.all_slits())
    j["slits"].push_back({{"kind", slit_kind_name(s->kind)}, {"rank", s->rank}, {"owner", s->owner},
                          {"points", detail::point_list(s->poly)}});
  for (const auto& p : res.slits.pairings)
    for (const Disc& d : p.discs)
      j["discs"].push_back({{"center", {d.center.real(), d.center.imag()}}, {"radius", d.radius}, {"family", pair_kind_name(p.kind)}});
  return j.dump(2) + "\n";
}

// SVG 1.1 of the box [-X, X] x [0, Y], y pointing up.
inline std::string svg_document(const PipelineResult& res) {
  double X = 1.0, Y = 1.0;
  if (res.have_geometry) X = Y = 2.0 * res.decomposition.L;
  else if (res.grid.n > 0) X = res.grid.X, Y = res.grid.Y;
  for (const auto& z : res.Z) Y = std::max(Y, std::isfinite(z.hi) ? 1.1 * z.hi : Y);
  const double W = 800.0, s = W / (2.0 * X), H = Y * s;
  auto px = [&](cplx z) { return detail::fmt((z.real() + X) * s) + "," + detail::fmt((Y - z.imag()) * s); };
  std::ostringstream o;
  o << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
    << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << detail::fmt(W) << "\" height=\""
    << detail::fmt(H) << "\" viewBox=\"0 0 " << detail::fmt(W) << " " << detail::fmt(H) << "\">\n"
    << "<rect x=\"0\" y=\"0\" width=\"" << detail::fmt(W) << "\" height=\"" << detail::fmt(H) << "\" fill=\"white\"/>\n"
    << "<line class=\"axis\" x1=\"" << detail::fmt(X * s) << "\" y1=\"0\" x2=\"" << detail::fmt(X * s) << "\" y2=\""
    << detail::fmt(H) << "\" stroke=\"#bbbbbb\" stroke-width=\"0.5\"/>\n";
  o << "<g id=\"Z\" stroke=\"#e07000\" stroke-width=\"4\">\n";
  for (const auto& z : res.Z) {
    double hi = std::isfinite(z.hi) ? z.hi : Y;
    o << "<line x1=\"" << detail::fmt(X * s) << "\" y1=\"" << detail::fmt((Y - z.lo) * s) << "\" x2=\""
      << detail::fmt(X * s) << "\" y2=\"" << detail::fmt((Y - hi) * s) << "\"/>\n";
  }
  o << "</g>\n";
  if (res.have_geometry) {
    o << "<g id=\"regions\" fill=\"#4060c0\" fill-opacity=\"0.2\" stroke=\"#203080\" stroke-width=\"0.5\">\n";
    for (const auto& c : res.decomposition.components)
      for (const auto& l : c.loops) {
        o << "<polygon points=\"";
        for (size_t k = 0; k < l.size(); ++k) o << (k ? " " : "") << px(l[k]);
        o << "\"/>\n";
      }
    o << "</g>\n<g id=\"discs\" fill=\"none\" stroke=\"#208040\" stroke-width=\"0.5\">\n";
    for (const auto& p : res.slits.pairings)
      for (const Disc& d : p.discs)
        o << "<circle cx=\"" << detail::fmt((d.center.real() + X) * s) << "\" cy=\""
          << detail::fmt((Y - d.center.imag()) * s) << "\" r=\"" << detail::fmt(d.radius * s) << "\"/>\n";
    o << "</g>\n<g id=\"slits\" fill=\"none\" stroke=\"#c02020\" stroke-width=\"1\">\n";
    for (const Slit* sl : res.slits.all_slits()) {
      o << "<path class=\"" << slit_kind_name(sl->kind) << "\" d=\"";
      for (size_t k = 0; k < sl->poly.size(); ++k) o << (k ? " L" : "M") << px(sl->poly[k]);
      o << "\"/>\n";
    }
    o << "</g>\n";
  }
  o << "</svg>\n";
  return o.str();
}

// x, y and the real and imaginary parts of kappa, g1, g2, thinned to at
// most 257 columns.
inline std::string fields_csv(const PipelineResult& res) {
  std::ostringstream o;
  const Grid& g = res.grid;
  o << "# resolution " << g.n << "\nx,y,re_kappa,im_kappa,re_g1,im_g1,re_g2,im_g2\n";
  if (g.n == 0 || res.g1.v.empty()) return o.str();
  const int stride = std::max(1, g.n / 256);
  char b[256];
  for (int j = 0; j < g.ny(); j += stride)
    for (int i = 0; i < g.nx(); i += stride) {
      cplx k = res.kappa.v.empty() ? cplx(0.0) : res.kappa(i, j), a = res.g1(i, j), c = res.g2(i, j);
      std::snprintf(b, sizeof b, "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", g.x(i), g.y(j), k.real(),
                    k.imag(), a.real(), a.imag(), c.real(), c.imag());
      o << b;
    }
  return o.str();
}

inline std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::io, "cannot read " + path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

inline void write_text(const std::filesystem::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  if (!out || !(out << text) || !out.flush()) throw Error(ErrorKind::io, "cannot write " + p.string());
}

inline void prepare_dir(const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec || !std::filesystem::is_directory(dir)) throw Error(ErrorKind::io, "cannot create output directory " + dir);
}

inline void emit_outputs(const PipelineResult& res, const RunConfig& c) {
  if (c.out.empty()) return;
  prepare_dir(c.out);
  const std::filesystem::path d(c.out);
  if (c.emit_report) write_text(d / "report.json", report_json(res.report));
  if (c.emit_svg) {
    write_text(d / "geometry.svg", svg_document(res));
    write_text(d / "geometry.json", geometry_json(res));
  }
  if (c.emit_fields) write_text(d / "fields.csv", fields_csv(res));
}

inline std::string status_line(const StabilizationReport& r) {
  std::ostringstream o;
  o << "stabilize: " << r.status << " (exit " << r.exit_code << ")";
  if (!r.stage.empty() && r.exit_code != 0) o << " at " << r.stage << ": " << r.message;
  if (r.exit_code == 0) o << " residual " << r.solution.residual << " at resolution " << r.resolution;
  return o.str();
}

// Ingest, run and emit. Returns the process exit code.
inline int run(const RunConfig& c, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  try {
    validate(c);
    if (!c.out.empty()) prepare_dir(c.out);
    ZeroFile a, b;
    try {
      a = parse_zero_text(read_text(c.f1));
      b = parse_zero_text(read_text(c.f2));
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::io) throw;
      throw Error(ErrorKind::parse, std::string("zero file: ") + e.what());
    }
    for (const cplx& z : a.added_partners) err << "f1: added mirror zero " << z << "\n";
    for (const cplx& z : b.added_partners) err << "f2: added mirror zero " << z << "\n";
    PipelineResult res = run_pipeline(a.product, b.product, pipeline_params(c));
    emit_outputs(res, c);
    out << status_line(res.report) << "\n";
    return res.report.exit_code;
  } catch (const Error& e) {
    out << "stabilize: input-error (exit 5): " << e.what() << "\n";
    return 5;
  }
}

}  // namespace corona
