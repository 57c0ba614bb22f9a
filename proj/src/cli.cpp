#include <CLI11.hpp>
#include <cmath>
#include <filesystem>
#include <iostream>
#include <sstream>

#include "thomjiggle/cli.hpp"
#include "thomjiggle/collapse.hpp"
#include "thomjiggle/errors.hpp"
#include "thomjiggle/io.hpp"

namespace thom {
namespace {

namespace fs = std::filesystem;

struct Run {
  std::string command;
  RunConfig cfg;
  Json params = Json::object();
  Json result = Json::object();
  std::vector<std::string> diagnostics;
  std::vector<std::string> outputs;
  bool pass = true;

  std::string out(const std::string& name) {
    outputs.push_back(name);
    return (fs::path(cfg.out_dir) / name).string();
  }
};

std::vector<Rational> parse_grid(const std::string& text) {
  std::vector<Rational> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_rational(item));
  return out;
}

std::optional<std::vector<int>> parse_projection(const std::string& text) {
  if (text.empty()) return std::nullopt;
  std::vector<int> axes;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      axes.push_back(std::stoi(item));
    } catch (const std::exception&) {
      throw InvalidParams("projection entry '" + item + "' is not an integer");
    }
  }
  return axes;
}

Json margins_json(const TransversalityReport& r) {
  Json by_dim = Json::array();
  for (std::size_t k = 1; k < r.min_by_dim.size(); ++k) by_dim.push_back(r.min_by_dim[k]);
  return Json{{"min_margin", r.min_margin}, {"min_by_dim", by_dim}, {"failing", r.failing},
              {"simplices", r.margins.size()}, {"samples", r.sample_count}, {"pass", r.pass}};
}

PLSection make_section(const FoldingTower& tower, const RunConfig& cfg, const std::string& kind) {
  if (kind == "exp") return jiggle_exp(tower, cfg.flat_model());
  if (kind == "colored") return jiggle_colored(tower, default_target_simplex(cfg.model_dim()));
  if (kind == "zero") {
    PLSection s;
    s.base = tower.top();
    s.lift.assign(s.base->num_vertices(), RVec(static_cast<std::size_t>(cfg.model_dim()), Rational(0)));
    return s;
  }
  throw InvalidParams("unknown section '" + kind + "' (exp, colored, zero)");
}

PlaneField make_field(const std::string& kind, int n) {
  if (kind == "exp") return exp_field(n);
  if (kind == "horizontal") return horizontal_field(n);
  throw InvalidParams("unknown field '" + kind + "' (exp, horizontal)");
}

std::vector<double> schedule_grid() {
  std::vector<double> g;
  for (int i = 0; i <= 12; ++i) g.push_back(i * 0.25);
  return g;
}

/// Fields of a named family: one field, or the frozen schedule from F to F_exp.
std::vector<PlaneField> make_family(const std::string& family, const std::string& start, double eps, int n,
                                    std::vector<std::string>& labels) {
  if (family == "schedule") {
    const auto grid = schedule_grid();
    for (double t : grid) labels.push_back("t=" + std::to_string(t).substr(0, 4));
    return schedule_family(make_field(start, n), exp_field(n), eps, grid);
  }
  labels.push_back(family);
  return {make_field(family, n)};
}

// ---- subcommands -----------------------------------------------------------

struct PatternArgs {
  int n = 2;
  bool verify = false;
};

void cmd_pattern(Run& run, const PatternArgs& a) {
  run.params = {{"n", a.n}, {"verify", a.verify}};
  const ThomPattern p = a.verify ? thom_pattern(a.n, run.cfg.pattern_params())
                                 : thom_pattern_unchecked(a.n, run.cfg.pattern_params());
  const auto& c = *p.pattern;
  Json counts = Json::array();
  for (int k = 0; k <= c.dimension(); ++k) counts.push_back(c.num_simplices(k));
  run.result = {{"n", a.n}, {"vertices", c.num_vertices()}, {"simplices_by_dim", counts},
                {"tops", p.top_count()}, {"euler", c.euler_characteristic()}};
  if (a.verify) {
    const PatternReport rep = verify_pattern(p);
    run.result["verify"] = {{"nondegenerate", rep.nondegenerate},
                            {"surjective", rep.surjective},
                            {"heredity", rep.heredity},
                            {"tiling", rep.tiling.pass},
                            {"volume_sum", to_string(rep.tiling.volume_sum)},
                            {"region_volume", to_string(rep.tiling.region_volume)},
                            {"pass", rep.pass}};
    for (const auto& f : rep.nondegeneracy_failures) run.diagnostics.push_back(f);
    for (const auto& f : rep.heredity_failures) run.diagnostics.push_back(f);
    if (!rep.tiling.failure.empty()) run.diagnostics.push_back(rep.tiling.failure);
    run.pass = rep.pass;
  }
  const std::string stem = "pattern_n" + std::to_string(a.n);
  save_complex(run.out(stem + ".json"), c);
  if (c.ambient_dim() <= 3) export_mesh(run.out(stem + ".off"), c, MeshFormat::Off);
}

struct SubdivideArgs {
  int r = 1;
  std::string input;
};

void cmd_subdivide(Run& run, const SubdivideArgs& a) {
  run.params = {{"r", a.r}, {"input", a.input}};
  ComplexPtr T;
  if (a.input.empty()) {
    T = run.cfg.model_complex();
  } else {
    LoadedComplex lc = load_complex(a.input);
    run.diagnostics = lc.diagnostics;
    T = lc.complex;
  }
  const ThomPattern p = thom_pattern(T->dimension(), run.cfg.pattern_params());
  const FoldingTower tower = iterate_fold(T, p, a.r);
  const FoldReport rep = verify_fold(tower);
  Json levels = Json::array();
  for (std::size_t i = 0; i < tower.complexes.size(); ++i)
    levels.push_back({{"level", i}, {"vertices", tower.complexes[i]->num_vertices()}, {"tops", rep.top_counts[i]}});
  run.result = {{"pattern_tops", p.top_count()},
                {"levels", levels},
                {"multiplicative", rep.multiplicative},
                {"tops", rep.tops},
                {"affinely_bijective", rep.bijective},
                {"fixes_base_vertices", rep.fixes_base_vertices},
                {"pass", rep.pass}};
  run.pass = rep.pass;
  save_complex(run.out("subdivide_r" + std::to_string(a.r) + ".json"), *tower.top());
}

struct JiggleArgs {
  int r = 1;
  std::string kind = "exp";
  std::string project;
  std::string format = "obj";
};

void cmd_jiggle(Run& run, const JiggleArgs& a) {
  run.params = {{"r", a.r}, {"kind", a.kind}, {"project", a.project}, {"format", a.format}};
  const ComplexPtr T = run.cfg.model_complex();
  const FoldingTower tower = iterate_fold(T, thom_pattern(T->dimension(), run.cfg.pattern_params()), a.r);
  const PLSection sec = make_section(tower, run.cfg, a.kind);
  const ComplexPtr graph = sec.graph();
  const Rational sq = sec.max_squared_norm();
  const int n = run.cfg.model_dim();
  run.result = {{"vertices", graph->num_vertices()},
                {"tops", graph->num_simplices(n)},
                {"max_squared_lift", to_string(sq)},
                {"max_lift", std::sqrt(to_double(sq))},
                {"max_squared_diameter", to_string(max_squared_diameter(*tower.top()))}};
  if (a.kind == "exp") {
    const std::size_t full = exp_image_full_rank(*graph, n);
    run.result["exp_image_full_rank"] = full;
    run.pass = full == graph->num_simplices(n);
  }
  const std::string stem = "jiggle_" + a.kind + "_r" + std::to_string(a.r);
  save_complex(run.out(stem + ".json"), *graph);
  auto proj = parse_projection(a.project);
  if (!proj && graph->ambient_dim() > 3) {
    proj = std::vector<int>{0, 1, 2};
    run.diagnostics.push_back("mesh projected onto coordinates 0,1,2");
  }
  const MeshFormat fmt = a.format == "off" ? MeshFormat::Off : MeshFormat::Obj;
  export_mesh(run.out(stem + (fmt == MeshFormat::Off ? ".off" : ".obj")), *graph, fmt, proj);
}

struct CertifyArgs {
  int r = 1;
  std::string section = "exp";
  std::string field = "exp";
  std::string start = "horizontal";
  double eps = 0.25;
  int samples = 4;
};

void cmd_certify(Run& run, const CertifyArgs& a) {
  run.params = {{"r", a.r}, {"section", a.section}, {"field", a.field}, {"start", a.start}, {"eps", a.eps},
                {"samples", a.samples}};
  const ComplexPtr T = run.cfg.model_complex();
  const FoldingTower tower = iterate_fold(T, thom_pattern(T->dimension(), run.cfg.pattern_params()), a.r);
  const PLSection sec = make_section(tower, run.cfg, a.section);
  std::vector<std::string> labels;
  const auto fields = make_family(a.field, a.start, a.eps, run.cfg.model_dim(), labels);
  const CertifyOptions opts{a.samples, run.cfg.margin_threshold};
  const ComplexPtr graph = sec.graph();
  Json per = Json::array();
  double worst = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < fields.size(); ++i) {
    const TransversalityReport rep = certify_transversality(*graph, fields[i], opts);
    Json j = margins_json(rep);
    j["field"] = labels[i];
    per.push_back(j);
    worst = std::min(worst, rep.min_margin);
    run.pass = run.pass && rep.pass;
  }
  run.result = {{"fields", per}, {"min_margin", worst}, {"threshold", opts.threshold}, {"pass", run.pass}};
}

struct ScanArgs {
  std::string family = "exp";
  std::string start = "horizontal";
  double eps = 0.25;
  int r_min = 1;
  int samples = 4;
};

void cmd_scan(Run& run, const ScanArgs& a) {
  run.params = {{"family", a.family}, {"start", a.start}, {"eps", a.eps}, {"r_min", a.r_min}, {"samples", a.samples}};
  const ComplexPtr T = run.cfg.model_complex();
  const ThomPattern p = thom_pattern(T->dimension(), run.cfg.pattern_params());
  std::vector<std::string> labels;
  const auto fields = make_family(a.family, a.start, a.eps, run.cfg.model_dim(), labels);
  const int r_min = std::min(a.r_min, run.cfg.r_max);
  const ScanResult s = scan_transversal_order(T, p, run.cfg.flat_model(), fields, run.cfg.r_max, r_min,
                                              {a.samples, run.cfg.margin_threshold});
  Json passed = Json::array();
  for (bool b : s.passed) passed.push_back(b);
  run.result = {{"order", s.order}, {"orders", s.orders}, {"best_margin", s.best_margin}, {"passed", passed}};
  if (s.order < 0)
    throw OrderExhausted("no order in " + std::to_string(r_min) + ".." + std::to_string(run.cfg.r_max) +
                         " is transverse to the family");
}

struct CocycleArgs {
  std::string host = "torus";
  std::string lambda = "random";
  int r = 0;
  bool oracle = false;
};

void cmd_cocycle(Run& run, const CocycleArgs& a) {
  run.params = {{"host", a.host}, {"lambda", a.lambda}, {"r", a.r}, {"oracle", a.oracle}};
  CocycleHost host;
  if (a.host == "torus") host = torus_host(run.cfg.grid, a.r);
  else if (a.host == "sphere") host = sphere_host(a.r);
  else throw InvalidParams("unknown host '" + a.host + "' (torus, sphere)");
  const int d = host.complex->ambient_dim();
  const TargetSimplex delta = default_target_simplex(2);
  OneFormField lambda;
  if (a.lambda == "zero") lambda = zero_form(d, 2);
  else if (a.lambda == "random") lambda = random_family(d, delta, run.cfg.seed, {a.host == "torus", 0.04, 2}).form;
  else if (a.lambda == "area") lambda = base_area_form(d, 2);
  else throw InvalidParams("unknown form '" + a.lambda + "' (zero, random, area)");

  const Cochain mu = mu_cocycle(lambda, host, delta, {run.cfg.quadrature_order});
  const Cochain dmu = coboundary(mu);
  if (dmu.values.empty()) run.diagnostics.push_back("host has no 3-simplices, so the coboundary of mu vanishes identically");
  const CoboundaryResult solve = coboundary_solve(mu);
  const bool closed = dmu.max_abs() < 1e-6 * (1 + mu.max_abs());
  run.result = {{"host", host.name},
                {"triangles", mu.values.size()},
                {"mu_max_abs", mu.max_abs()},
                {"mu_l2", mu.l2()},
                {"delta_mu_max_abs", dmu.max_abs()},
                {"cocycle", closed},
                {"solve",
                 {{"residual", solve.residual},
                  {"relative_residual", solve.relative_residual},
                  {"iterations", solve.iterations},
                  {"success", solve.success}}},
                {"harmonic_residual", harmonic_residual(mu)}};
  bool ok = closed && solve.success;
  if (a.lambda == "zero") {
    run.result["mu_identically_zero"] = mu.max_abs() == 0;
    ok = ok && mu.max_abs() == 0;
  }
  if (a.oracle) {
    SweptOptions so;
    so.theta_order = run.cfg.quadrature_order;
    so.transport.ode.tol = run.cfg.ode_tol;
    const Cochain swept = swept_area_cochain(two_form(lambda), host, delta, so);
    double diff = 0;
    for (std::size_t i = 0; i < mu.values.size(); ++i) diff = std::max(diff, std::abs(mu.values[i] - swept.values[i]));
    run.result["oracle_max_diff"] = diff;
    ok = ok && diff < 1e-6;
  }
  run.pass = ok;
  write_text(run.out("cocycle_mu.csv"), cochain_csv(mu));
  write_text(run.out("cocycle_alpha.csv"), cochain_csv(solve.alpha));
}

struct PrismArgs {
  int r = 1;
  std::string times = "1,3/2,2";
  int restarts = 16;
  std::string section = "exp";
  std::string start = "horizontal";
  double eps = 0.25;
  double bound = 1.0 / 16;
  int levels = 6;
  int attempts = 24;
  int samples = 4;
  bool refine = false;
};

PrismComplex build_prism(Run& run, const PrismArgs& a, FoldingTower* tower_out = nullptr) {
  const ComplexPtr T = run.cfg.model_complex();
  FoldingTower tower = iterate_fold(T, thom_pattern(T->dimension(), run.cfg.pattern_params()), a.r);
  PrismComplex pc = prism_complex(tower.top(), parse_grid(a.times));
  if (tower_out) *tower_out = std::move(tower);
  return pc;
}

void cmd_prism(Run& run, const PrismArgs& a) {
  run.params = {{"r", a.r}, {"times", a.times}};
  const PrismComplex pc = build_prism(run, a);
  Json slices = Json::array();
  bool ok = true;
  for (std::size_t k = 0; k < pc.slices(); ++k) {
    const bool m = slice_matches_source(pc, k);
    slices.push_back(m);
    ok = ok && m;
  }
  const int D = pc.complex->dimension();
  std::vector<std::size_t> per_slab(pc.slices() - 1, 0);
  for (std::size_t s : pc.slab_of_top) ++per_slab[s];
  run.result = {{"source_tops", pc.source->num_simplices(pc.source->dimension())},
                {"tops", pc.complex->num_simplices(D)},
                {"tops_per_slab", per_slab},
                {"vertices", pc.complex->num_vertices()},
                {"slices_match_source", slices}};
  run.pass = ok;
  save_complex(run.out("prism.json"), *pc.complex);
}

void cmd_collapse(Run& run, const PrismArgs& a) {
  run.params = {{"r", a.r}, {"times", a.times}, {"restarts", a.restarts}};
  const PrismComplex pc = build_prism(run, a);
  const Subcomplex bottom = prism_slice(pc, 0);
  CollapseOptions opts;
  opts.seed = run.cfg.seed;
  opts.restarts = a.restarts;
  opts.priority = latest_time_priority(pc);
  const CollapseResult res = collapse_sequence(pc.complex, bottom, opts);
  const CollapseVerification ver = verify_collapse(pc.complex, bottom, res.steps);
  const std::size_t expected = (pc.complex->total_simplices() - bottom.simplices.size()) / 2;
  run.result = {{"success", res.success},
                {"steps", res.steps.size()},
                {"expected_steps", expected},
                {"attempts", res.attempts},
                {"remaining", res.remaining.size()},
                {"target", bottom.simplices.size()},
                {"verified", ver.valid},
                {"acyclic", ver.acyclic}};
  if (!ver.reason.empty()) run.diagnostics.push_back("verification: " + ver.reason);
  run.pass = res.success && ver.valid && ver.acyclic && res.steps.size() == expected;
  std::ostringstream os;
  auto ids = [](const Simplex& s) {
    std::string t;
    for (VertexId v : s) t += (t.empty() ? "" : " ") + std::to_string(v);
    return t;
  };
  for (const auto& st : res.steps) os << ids(st.face) << " | " << ids(st.coface) << '\n';
  write_text(run.out("collapse_steps.txt"), os.str());
}

void cmd_timejiggle(Run& run, const PrismArgs& a) {
  run.params = {{"r", a.r}, {"times", a.times}, {"section", a.section}, {"start", a.start}, {"eps", a.eps},
                {"bound", a.bound}, {"levels", a.levels}, {"attempts", a.attempts}, {"samples", a.samples},
                {"refine", a.refine}};
  const int n = run.cfg.model_dim();
  const PlaneField timed = schedule_field(make_field(a.start, n), exp_field(n), a.eps);
  PrismArgs b = a;
  if (a.refine) {
    const auto probes = probe_points(n, n, 16, run.cfg.seed);
    std::string text;
    for (const auto& q : refine_time_grid(timed, probes, parse_grid(a.times))) text += (text.empty() ? "" : ",") + to_string(q);
    b.times = text;
    run.result["refined_times"] = text;
  }
  FoldingTower tower;
  const PrismComplex pc = build_prism(run, b, &tower);
  const EmbeddedPrism ep = embed_prism(pc, make_section(tower, run.cfg, a.section));
  TimeJiggleOptions opts;
  opts.bound = a.bound;
  opts.radius_levels = a.levels;
  opts.attempts_per_level = a.attempts;
  opts.certify = {a.samples, run.cfg.margin_threshold};
  const TimeJiggleResult res = time_jiggle(ep, suspend_field(timed), run.cfg.seed, opts);

  const auto& before = *ep.embedded;
  const auto& after = *res.prism.embedded;
  bool same = before.vertex_ids() == after.vertex_ids() && before.dimension() == after.dimension();
  for (int k = 0; same && k <= before.dimension(); ++k) same = before.simplices(k) == after.simplices(k);
  const auto d = static_cast<std::size_t>(pc.source->ambient_dim());
  bool fibre_only = true;
  for (std::size_t i = 0; i < before.num_vertices(); ++i) {
    const RVec& p = before.coords_at(i);
    const RVec& q = after.coords_at(i);
    const bool movable = pc.slice_of(before.vertex_ids()[i]) % 2 == 1;
    for (std::size_t j = 0; j < p.size(); ++j) {
      const bool fibre = j >= d && j + 1 < p.size();
      if (p[j] != q[j] && !(fibre && movable)) fibre_only = false;
    }
  }
  std::size_t moved = 0, rejected = 0;
  double largest = 0;
  for (const auto& m : res.moves) {
    moved += m.level >= 0;
    rejected += static_cast<std::size_t>(m.rejected);
    double s = 0;
    for (double x : m.displacement) s += x * x;
    largest = std::max(largest, std::sqrt(s));
  }
  run.result["before"] = margins_json(res.before);
  run.result["after"] = margins_json(res.after);
  run.result["movable"] = res.moves.size();
  run.result["moved"] = moved;
  run.result["rejected_samples"] = rejected;
  run.result["largest_displacement"] = largest;
  run.result["combinatorics_preserved"] = same;
  run.result["fibre_moves_only"] = fibre_only;
  run.pass = res.after.pass && same && fibre_only;
  save_complex(run.out("timejiggle.json"), after);
}

struct ExportArgs {
  std::string input;
  std::string format = "off";
  std::string project;
  std::string output;
};

void cmd_export(Run& run, const ExportArgs& a) {
  run.params = {{"input", a.input}, {"format", a.format}, {"project", a.project}, {"output", a.output}};
  if (a.format != "off" && a.format != "obj") throw InvalidParams("unknown mesh format '" + a.format + "' (off, obj)");
  LoadedComplex lc = load_complex(a.input);
  run.diagnostics = lc.diagnostics;
  const auto& c = *lc.complex;
  const MeshFormat fmt = a.format == "off" ? MeshFormat::Off : MeshFormat::Obj;
  const std::string name = a.output.empty() ? fs::path(a.input).stem().string() + "." + a.format : a.output;
  const std::string text = mesh_text(c, fmt, parse_projection(a.project));
  write_text(run.out(name), text);
  std::size_t edges = 0;
  for (std::size_t i = 0; c.dimension() >= 1 && i < c.num_simplices(1); ++i) edges += c.is_maximal(1, i);
  run.result = {{"vertices", c.num_vertices()},
                {"triangles", c.dimension() >= 2 ? c.num_simplices(2) : 0},
                {"polyline_edges", edges}};
}

bool verified_failure(const Error& e) {
  return e.kind() == "OrderExhausted" || e.kind() == "RejectionExhausted" || e.kind() == "TilingFailure";
}

}  // namespace

int run_cli(const std::vector<std::string>& args) {
  CLI::App app{"Thom jiggling toolkit: patterns, folding, jiggled sections, transversality, area cocycles, prisms."};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path;
  std::uint64_t seed = 0;
  std::string out_dir, t, u1, u0, model;
  double threshold = 0, ode_tol = 0;
  int quad = 0, grid = 0, r_max = 0;
  auto* o_seed = app.add_option("--seed", seed, "random seed");
  auto* o_out = app.add_option("--out", out_dir, "output directory");
  auto* o_thr = app.add_option("--threshold", threshold, "transversality margin threshold");
  auto* o_ode = app.add_option("--ode-tol", ode_tol, "ODE tolerance");
  auto* o_quad = app.add_option("--quad-order", quad, "Gauss-Legendre order");
  auto* o_t = app.add_option("--t", t, "pattern shrink factor (rational)");
  auto* o_u1 = app.add_option("--u1", u1, "pattern vertex mapped to 1 (rational)");
  auto* o_u0 = app.add_option("--u0", u0, "pattern vertex mapped to 0 (rational)");
  auto* o_model = app.add_option("--model", model, "circle | torus | box1 | box2");
  auto* o_grid = app.add_option("--grid", grid, "grid size m of the model triangulation");
  auto* o_rmax = app.add_option("--rmax", r_max, "largest fold order to scan");
  app.add_option("--config", config_path, "JSON run configuration")->check(CLI::ExistingFile);

  PatternArgs pa;
  auto* s_pattern = app.add_subcommand("pattern", "build and verify the Thom pattern K_n");
  s_pattern->add_option("--n", pa.n, "dimension")->check(CLI::Range(0, 4));
  s_pattern->add_flag("--verify", pa.verify, "re-check non-degeneracy, heredity and tiling");

  SubdivideArgs sa;
  auto* s_sub = app.add_subcommand("subdivide", "iterate the folding subdivision and check it");
  s_sub->add_option("--r", sa.r, "fold order")->check(CLI::Range(0, 6));
  s_sub->add_option("--input", sa.input, "complex JSON (default: the model triangulation)");

  JiggleArgs ja;
  auto* s_jig = app.add_subcommand("jiggle", "build a jiggled section and export its graph");
  s_jig->add_option("--r", ja.r, "fold order")->check(CLI::Range(0, 6));
  s_jig->add_option("--kind", ja.kind, "exp | colored | zero");
  s_jig->add_option("--project", ja.project, "comma-separated coordinates for the mesh");
  s_jig->add_option("--format", ja.format, "obj | off")->check(CLI::IsMember({"obj", "off"}));

  CertifyArgs ca;
  auto* s_cert = app.add_subcommand("certify", "transversality margins of a section against plane fields");
  s_cert->add_option("--r", ca.r, "fold order")->check(CLI::Range(0, 6));
  s_cert->add_option("--section", ca.section, "exp | colored | zero");
  s_cert->add_option("--field", ca.field, "exp | horizontal | schedule");
  s_cert->add_option("--start", ca.start, "schedule start field: horizontal | exp");
  s_cert->add_option("--eps", ca.eps, "schedule epsilon");
  s_cert->add_option("--samples", ca.samples, "lattice samples per dimension");

  ScanArgs sc;
  auto* s_scan = app.add_subcommand("scan", "least fold order transverse to a field family");
  s_scan->add_option("--family", sc.family, "exp | horizontal | schedule");
  s_scan->add_option("--start", sc.start, "schedule start field: horizontal | exp");
  s_scan->add_option("--eps", sc.eps, "schedule epsilon");
  s_scan->add_option("--rmin", sc.r_min, "smallest order scanned")->check(CLI::NonNegativeNumber);
  s_scan->add_option("--samples", sc.samples, "lattice samples per dimension");

  CocycleArgs co;
  auto* s_co = app.add_subcommand("cocycle", "area cocycle, its coboundary and the coboundary solve");
  s_co->add_option("--host", co.host, "torus | sphere");
  s_co->add_option("--lambda", co.lambda, "zero | random | area");
  s_co->add_option("--r", co.r, "fold order of the host")->check(CLI::Range(0, 3));
  s_co->add_flag("--oracle", co.oracle, "compare with the swept-area simulation");

  PrismArgs pr;
  auto add_prism = [&](CLI::App* s) {
    s->add_option("--r", pr.r, "fold order of the slice complex")->check(CLI::Range(0, 4));
    s->add_option("--times", pr.times, "comma-separated time grid");
  };
  auto* s_prism = app.add_subcommand("prism", "prism complex over a time grid");
  add_prism(s_prism);
  auto* s_col = app.add_subcommand("collapse", "collapse a prism onto its bottom slice");
  add_prism(s_col);
  s_col->add_option("--restarts", pr.restarts, "seeded restarts")->check(CLI::NonNegativeNumber);
  auto* s_tj = app.add_subcommand("timejiggle", "jiggle mid-slab vertices against the suspended field");
  add_prism(s_tj);
  s_tj->add_option("--section", pr.section, "exp | colored | zero");
  s_tj->add_option("--start", pr.start, "schedule start field: horizontal | exp");
  s_tj->add_option("--eps", pr.eps, "schedule epsilon");
  s_tj->add_option("--bound", pr.bound, "largest fibre displacement");
  s_tj->add_option("--levels", pr.levels, "radius halvings");
  s_tj->add_option("--attempts", pr.attempts, "samples per radius");
  s_tj->add_option("--samples", pr.samples, "lattice samples per dimension");
  s_tj->add_flag("--refine", pr.refine, "refine the time grid by plane-angle variation");

  ExportArgs ea;
  auto* s_exp = app.add_subcommand("export", "export a complex file as an OFF or OBJ mesh");
  s_exp->add_option("--input", ea.input, "complex JSON")->required();
  s_exp->add_option("--format", ea.format, "off | obj");
  s_exp->add_option("--project", ea.project, "comma-separated coordinates");
  s_exp->add_option("--output", ea.output, "mesh file name inside the output directory");

  std::vector<const char*> argv;
  for (const auto& s : args) argv.push_back(s.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  Run run;
  run.command = app.get_subcommands().front()->get_name();
  Json error;
  int exit_code = 0;
  try {
    RunConfig cfg = config_path.empty() ? RunConfig{} : load_config(config_path);
    if (o_seed->count()) cfg.seed = seed;
    if (o_out->count()) cfg.out_dir = out_dir;
    if (o_thr->count()) cfg.margin_threshold = threshold;
    if (o_ode->count()) cfg.ode_tol = ode_tol;
    if (o_quad->count()) cfg.quadrature_order = quad;
    if (o_t->count()) cfg.t = parse_rational(t);
    if (o_u1->count()) cfg.u1 = parse_rational(u1);
    if (o_u0->count()) cfg.u0 = parse_rational(u0);
    if (o_model->count()) cfg.model = model;
    if (o_grid->count()) cfg.grid = grid;
    if (o_rmax->count()) cfg.r_max = r_max;
    validate(cfg);
    run.cfg = cfg;
  } catch (const Error& e) {
    std::cerr << "thomjiggle: " << e.what() << '\n';
    return 1;
  }

  try {
    fs::create_directories(run.cfg.out_dir);
  } catch (const std::exception& e) {
    std::cerr << "thomjiggle: cannot create " << run.cfg.out_dir << ": " << e.what() << '\n';
    return 1;
  }

  try {
    const std::string& c = run.command;
    if (c == "pattern") cmd_pattern(run, pa);
    else if (c == "subdivide") cmd_subdivide(run, sa);
    else if (c == "jiggle") cmd_jiggle(run, ja);
    else if (c == "certify") cmd_certify(run, ca);
    else if (c == "scan") cmd_scan(run, sc);
    else if (c == "cocycle") cmd_cocycle(run, co);
    else if (c == "prism") cmd_prism(run, pr);
    else if (c == "collapse") cmd_collapse(run, pr);
    else if (c == "timejiggle") cmd_timejiggle(run, pr);
    else cmd_export(run, ea);
    exit_code = run.pass ? 0 : 2;
  } catch (const Error& e) {
    error = {{"kind", e.kind()}, {"message", e.what()}};
    exit_code = verified_failure(e) ? 2 : 1;
  } catch (const std::exception& e) {
    error = {{"kind", "InternalError"}, {"message", e.what()}};
    exit_code = 1;
  }

  Json report = {{"command", run.command},
                 {"status", exit_code == 0 ? "pass" : exit_code == 2 ? "fail" : "error"},
                 {"exit_code", exit_code},
                 {"config", to_json(run.cfg)},
                 {"params", run.params},
                 {"result", run.result},
                 {"diagnostics", run.diagnostics},
                 {"outputs", run.outputs}};
  if (!error.is_null()) report["error"] = error;
  const auto problems = schema_errors(report, report_schema());
  if (!problems.empty()) {
    for (const auto& p : problems) std::cerr << "thomjiggle: report schema: " << p << '\n';
    return 1;
  }
  const std::string report_path = (fs::path(run.cfg.out_dir) / (run.command + ".report.json")).string();
  try {
    write_text(report_path, json_text(report));
  } catch (const Error& e) {
    std::cerr << "thomjiggle: " << e.what() << '\n';
    return 1;
  }
  if (!error.is_null()) std::cerr << "thomjiggle: " << error["message"].get<std::string>() << '\n';
  std::cout << run.command << ": " << report["status"].get<std::string>() << " (" << report_path << ")\n";
  return exit_code;
}

}  // namespace thom
