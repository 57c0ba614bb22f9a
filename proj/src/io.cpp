#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "thomjiggle/errors.hpp"
#include "thomjiggle/io.hpp"

namespace thom {
namespace {

#include "report_schema.inc"  // kReportSchemaText

std::string fmt_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string line_col(const std::string& text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i < std::min(byte, text.size()); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

Json parse_json(const std::string& text, const std::string& source) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw SchemaViolation(source + ": " + line_col(text, e.byte) + ": malformed JSON");
  }
}

[[noreturn]] void bad(const std::string& source, const std::string& field, const std::string& what) {
  throw SchemaViolation(source + ": " + field + ": " + what);
}

Rational rational_field(const Json& j, const std::string& source, const std::string& field) {
  if (!j.is_string()) bad(source, field, "expected a rational string \"p/q\"");
  try {
    return parse_rational(j.get<std::string>());
  } catch (const Error&) {
    bad(source, field, "cannot parse \"" + j.get<std::string>() + "\" as a rational");
  }
}

long integer_field(const Json& j, const std::string& source, const std::string& field) {
  if (!j.is_number_integer()) bad(source, field, "expected an integer");
  return j.get<long>();
}

std::string type_of(const Json& j) {
  if (j.is_null()) return "null";
  if (j.is_boolean()) return "boolean";
  if (j.is_number_integer()) return "integer";
  if (j.is_number()) return "number";
  if (j.is_string()) return "string";
  if (j.is_array()) return "array";
  return "object";
}

bool has_type(const Json& j, const std::string& t) {
  const std::string got = type_of(j);
  return got == t || (t == "number" && got == "integer");
}

void check_schema(const Json& doc, const Json& schema, const std::string& path, std::vector<std::string>& errs) {
  if (schema.contains("type")) {
    const Json& t = schema["type"];
    bool ok = false;
    if (t.is_string()) ok = has_type(doc, t.get<std::string>());
    else
      for (const auto& alt : t) ok = ok || has_type(doc, alt.get<std::string>());
    if (!ok) {
      errs.push_back(path + ": expected " + t.dump() + ", got " + type_of(doc));
      return;
    }
  }
  if (schema.contains("enum")) {
    const auto& e = schema["enum"];
    if (std::find(e.begin(), e.end(), doc) == e.end()) errs.push_back(path + ": value " + doc.dump() + " not allowed");
  }
  if (schema.contains("minimum") && doc.is_number() && doc.get<double>() < schema["minimum"].get<double>())
    errs.push_back(path + ": below minimum");
  if (doc.is_object()) {
    if (schema.contains("required"))
      for (const auto& key : schema["required"])
        if (!doc.contains(key.get<std::string>())) errs.push_back(path + ": missing \"" + key.get<std::string>() + "\"");
    const Json props = schema.value("properties", Json::object());
    for (const auto& [key, value] : doc.items()) {
      if (props.contains(key)) {
        check_schema(value, props[key], path + "." + key, errs);
      } else if (schema.contains("additionalProperties")) {
        const Json& ap = schema["additionalProperties"];
        if (ap.is_boolean() && !ap.get<bool>()) errs.push_back(path + ": unexpected \"" + key + "\"");
        else if (ap.is_object()) check_schema(value, ap, path + "." + key, errs);
      }
    }
  }
  if (doc.is_array() && schema.contains("items"))
    for (std::size_t i = 0; i < doc.size(); ++i)
      check_schema(doc[i], schema["items"], path + "[" + std::to_string(i) + "]", errs);
}

}  // namespace

int RunConfig::model_dim() const {
  if (model == "circle" || model == "box1") return 1;
  if (model == "torus" || model == "box2") return 2;
  throw SchemaViolation("model: unknown model \"" + model + "\" (circle, torus, box1, box2)");
}

FlatModel RunConfig::flat_model() const {
  const bool torus = model == "circle" || model == "torus";
  return {model_dim(), torus ? ModelKind::Torus : ModelKind::Box};
}

ComplexPtr RunConfig::model_complex() const {
  const FlatModel fm = flat_model();
  return fm.kind == ModelKind::Torus ? torus_triangulation(fm.n, grid) : box_triangulation(fm.n, grid);
}

void validate(const RunConfig& cfg) {
  if (!(cfg.margin_threshold > 0)) throw SchemaViolation("margin_threshold: must be positive");
  if (!(cfg.ode_tol > 0)) throw SchemaViolation("ode_tol: must be positive");
  if (cfg.quadrature_order < 1 || cfg.quadrature_order > 128) throw SchemaViolation("quadrature_order: must be in 1..128");
  if (cfg.r_max < 0) throw SchemaViolation("r_max: must be non-negative");
  cfg.model_dim();
  const bool torus = cfg.flat_model().kind == ModelKind::Torus;
  if (cfg.grid < (torus ? 2 : 1)) throw SchemaViolation(torus ? "grid: periodic models need grid >= 2" : "grid: must be positive");
  if (!(cfg.t > 0 && cfg.t < 1)) throw SchemaViolation("t: must lie in (0,1)");
  if (!(cfg.u1 > 0 && cfg.u1 < cfg.u0 && cfg.u0 < 1)) throw SchemaViolation("u1, u0: need 0 < u1 < u0 < 1");
}

Json to_json(const RunConfig& cfg) {
  return Json{{"seed", cfg.seed},
              {"margin_threshold", cfg.margin_threshold},
              {"ode_tol", cfg.ode_tol},
              {"quadrature_order", cfg.quadrature_order},
              {"t", to_string(cfg.t)},
              {"u1", to_string(cfg.u1)},
              {"u0", to_string(cfg.u0)},
              {"model", cfg.model},
              {"grid", cfg.grid},
              {"r_max", cfg.r_max},
              {"out_dir", cfg.out_dir}};
}

RunConfig config_from_json(const Json& j, RunConfig cfg) {
  const std::string src = "config";
  if (!j.is_object()) throw SchemaViolation("config: expected an object");
  for (const auto& [key, v] : j.items()) {
    if (key == "seed") {
      if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long>() >= 0)) bad(src, key, "expected a non-negative integer");
      cfg.seed = v.get<std::uint64_t>();
    } else if (key == "margin_threshold" || key == "ode_tol") {
      if (!v.is_number()) bad(src, key, "expected a number");
      (key == "ode_tol" ? cfg.ode_tol : cfg.margin_threshold) = v.get<double>();
    } else if (key == "quadrature_order") {
      cfg.quadrature_order = static_cast<int>(integer_field(v, src, key));
    } else if (key == "grid") {
      cfg.grid = static_cast<int>(integer_field(v, src, key));
    } else if (key == "r_max") {
      cfg.r_max = static_cast<int>(integer_field(v, src, key));
    } else if (key == "t" || key == "u1" || key == "u0") {
      (key == "t" ? cfg.t : key == "u1" ? cfg.u1 : cfg.u0) = rational_field(v, src, key);
    } else if (key == "model" || key == "out_dir") {
      if (!v.is_string()) bad(src, key, "expected a string");
      (key == "model" ? cfg.model : cfg.out_dir) = v.get<std::string>();
    } else {
      bad(src, key, "unknown key");
    }
  }
  validate(cfg);
  return cfg;
}

RunConfig load_config(const std::string& path) {
  const std::string text = read_text(path);
  return config_from_json(parse_json(text, path));
}

std::string complex_to_text(const SimplicialComplex& c) {
  Json j;
  j["ambient_dim"] = c.ambient_dim();
  if (c.periodic_dims() > 0) j["periodic_dims"] = c.periodic_dims();
  Json verts = Json::array();
  for (std::size_t i = 0; i < c.num_vertices(); ++i) {
    Json coords = Json::array();
    for (const auto& q : c.coords_at(i)) coords.push_back(to_string(q));
    verts.push_back(Json{{"id", c.vertex_ids()[i]}, {"coords", coords}});
  }
  j["vertices"] = verts;
  Json simplices = Json::array();
  for (int k = 1; k <= c.dimension(); ++k)
    for (const auto& s : c.simplices(k)) simplices.push_back(s);
  j["simplices"] = simplices;
  if (c.has_coloring()) {
    Json col = Json::object();
    for (const auto& [v, color] : c.coloring_map()) col[std::to_string(v)] = color;
    j["coloring"] = col;
  }
  return json_text(j);
}

LoadedComplex complex_from_text(const std::string& text, const std::string& source) {
  const Json j = parse_json(text, source);
  if (!j.is_object()) bad(source, "<root>", "expected an object");
  for (const auto& [key, v] : j.items()) {
    (void)v;
    if (key != "ambient_dim" && key != "periodic_dims" && key != "vertices" && key != "simplices" && key != "coloring")
      bad(source, key, "unknown key");
  }
  if (!j.contains("ambient_dim")) bad(source, "ambient_dim", "missing");
  if (!j.contains("vertices")) bad(source, "vertices", "missing");
  if (!j.contains("simplices")) bad(source, "simplices", "missing");
  const long dim = integer_field(j["ambient_dim"], source, "ambient_dim");
  if (dim < 0) bad(source, "ambient_dim", "must be non-negative");
  BuildOptions opts;
  if (j.contains("periodic_dims")) {
    opts.periodic_dims = static_cast<int>(integer_field(j["periodic_dims"], source, "periodic_dims"));
    if (opts.periodic_dims < 0 || opts.periodic_dims > dim) bad(source, "periodic_dims", "must lie in 0..ambient_dim");
  }

  std::vector<VertexRecord> verts;
  std::set<VertexId> ids;
  if (!j["vertices"].is_array()) bad(source, "vertices", "expected an array");
  for (std::size_t i = 0; i < j["vertices"].size(); ++i) {
    const Json& v = j["vertices"][i];
    const std::string f = "vertices[" + std::to_string(i) + "]";
    if (!v.is_object() || !v.contains("id") || !v.contains("coords")) bad(source, f, "expected {id, coords}");
    const long id = integer_field(v["id"], source, f + ".id");
    if (id < 0 || id > 0xffffffffL) bad(source, f + ".id", "out of range");
    if (!ids.insert(static_cast<VertexId>(id)).second) bad(source, f + ".id", "duplicate vertex id");
    if (!v["coords"].is_array() || static_cast<long>(v["coords"].size()) != dim)
      bad(source, f + ".coords", "expected " + std::to_string(dim) + " coordinates");
    RVec p;
    for (std::size_t q = 0; q < v["coords"].size(); ++q)
      p.push_back(rational_field(v["coords"][q], source, f + ".coords[" + std::to_string(q) + "]"));
    verts.push_back({static_cast<VertexId>(id), std::move(p)});
  }

  std::vector<Simplex> simplices;
  if (!j["simplices"].is_array()) bad(source, "simplices", "expected an array");
  for (std::size_t i = 0; i < j["simplices"].size(); ++i) {
    const Json& s = j["simplices"][i];
    const std::string f = "simplices[" + std::to_string(i) + "]";
    if (!s.is_array() || s.empty()) bad(source, f, "expected a non-empty array of vertex ids");
    Simplex t;
    for (std::size_t q = 0; q < s.size(); ++q) {
      const long id = integer_field(s[q], source, f + "[" + std::to_string(q) + "]");
      if (id < 0 || !ids.count(static_cast<VertexId>(id)))
        throw DanglingVertexId(source + ": " + f + ": unknown vertex " + std::to_string(id));
      t.push_back(static_cast<VertexId>(id));
    }
    std::sort(t.begin(), t.end());
    if (std::adjacent_find(t.begin(), t.end()) != t.end()) bad(source, f, "repeated vertex");
    simplices.push_back(std::move(t));
  }

  std::optional<std::map<VertexId, int>> coloring;
  if (j.contains("coloring")) {
    if (!j["coloring"].is_object()) bad(source, "coloring", "expected an object {id: color}");
    coloring.emplace();
    for (const auto& [key, v] : j["coloring"].items()) {
      long id = -1;
      try {
        std::size_t used = 0;
        id = std::stol(key, &used);
        if (used != key.size()) id = -1;
      } catch (const std::exception&) {
      }
      if (id < 0) bad(source, "coloring." + key, "key is not a vertex id");
      (*coloring)[static_cast<VertexId>(id)] = static_cast<int>(integer_field(v, source, "coloring." + key));
    }
  }

  LoadedComplex out;
  std::set<Simplex> listed(simplices.begin(), simplices.end());
  std::set<Simplex> added;
  for (const auto& s : simplices) {
    const std::size_t k = s.size();
    if (k < 3) continue;
    // All faces of dimension >= 1.
    for (std::uint32_t mask = 1; mask + 1 < (1u << k); ++mask) {
      if (std::popcount(mask) < 2) continue;
      Simplex f;
      for (std::size_t q = 0; q < k; ++q)
        if (mask & (1u << q)) f.push_back(s[q]);
      if (!listed.count(f)) added.insert(f);
    }
  }
  for (const auto& f : added) {
    std::string ids_text;
    for (VertexId v : f) ids_text += (ids_text.empty() ? "" : ",") + std::to_string(v);
    out.diagnostics.push_back(source + ": face [" + ids_text + "] was missing and has been added");
  }
  out.complex = build_complex(static_cast<int>(dim), std::move(verts), simplices, std::move(coloring), opts);
  return out;
}

void save_complex(const std::string& path, const SimplicialComplex& c) { write_text(path, complex_to_text(c)); }

LoadedComplex load_complex(const std::string& path) { return complex_from_text(read_text(path), path); }

std::string mesh_text(const SimplicialComplex& c, MeshFormat format, const std::optional<std::vector<int>>& projection) {
  std::vector<int> axes;
  if (projection) {
    axes = *projection;
    if (axes.empty() || axes.size() > 3) throw InvalidParams("projection must pick one to three coordinates");
    for (int a : axes)
      if (a < 0 || a >= c.ambient_dim()) throw InvalidParams("projection names coordinate " + std::to_string(a));
  } else {
    if (c.ambient_dim() > 3)
      throw UnsupportedDimension("ambient dimension " + std::to_string(c.ambient_dim()) + " needs a projection");
    for (int a = 0; a < c.ambient_dim(); ++a) axes.push_back(a);
  }

  std::vector<Simplex> tris = c.dimension() >= 2 ? c.simplices(2) : std::vector<Simplex>{};
  std::vector<Simplex> edges;
  if (c.dimension() >= 1)
    for (std::size_t i = 0; i < c.num_simplices(1); ++i)
      if (c.is_maximal(1, i)) edges.push_back(c.simplex_vec(1, i));

  std::ostringstream os;
  auto point = [&](std::size_t i) {
    std::string line;
    for (int q = 0; q < 3; ++q) {
      const double x = q < static_cast<int>(axes.size()) ? to_double(c.coords_at(i)[static_cast<std::size_t>(axes[static_cast<std::size_t>(q)])]) : 0.0;
      line += (q ? " " : "") + fmt_double(x);
    }
    return line;
  };
  if (format == MeshFormat::Off) {
    os << "OFF\n" << c.num_vertices() << ' ' << tris.size() + edges.size() << " 0\n";
    for (std::size_t i = 0; i < c.num_vertices(); ++i) os << point(i) << '\n';
    for (const auto& t : tris)
      os << "3 " << c.vertex_index(t[0]) << ' ' << c.vertex_index(t[1]) << ' ' << c.vertex_index(t[2]) << '\n';
    for (const auto& e : edges) os << "2 " << c.vertex_index(e[0]) << ' ' << c.vertex_index(e[1]) << '\n';
  } else {
    for (std::size_t i = 0; i < c.num_vertices(); ++i) os << "v " << point(i) << '\n';
    for (const auto& t : tris)
      os << "f " << c.vertex_index(t[0]) + 1 << ' ' << c.vertex_index(t[1]) + 1 << ' ' << c.vertex_index(t[2]) + 1 << '\n';
    for (const auto& e : edges) os << "l " << c.vertex_index(e[0]) + 1 << ' ' << c.vertex_index(e[1]) + 1 << '\n';
  }
  return os.str();
}

void export_mesh(const std::string& path, const SimplicialComplex& c, MeshFormat format,
                 const std::optional<std::vector<int>>& projection) {
  write_text(path, mesh_text(c, format, projection));
}

std::string cochain_csv(const Cochain& c) {
  std::ostringstream os;
  for (int q = 0; q <= c.degree; ++q) os << 'v' << q << ',';
  os << "value\n";
  for (std::size_t i = 0; i < c.values.size(); ++i) {
    for (VertexId v : c.complex->simplex(c.degree, i)) os << v << ',';
    os << fmt_double(c.values[i]) << '\n';
  }
  return os.str();
}

std::vector<std::string> schema_errors(const Json& doc, const Json& schema) {
  std::vector<std::string> errs;
  check_schema(doc, schema, "$", errs);
  return errs;
}

const Json& report_schema() {
  static const Json schema = Json::parse(kReportSchemaText);
  return schema;
}

std::string json_text(const Json& j) { return j.dump(2) + "\n"; }

void write_text(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw InvalidParams("cannot open " + path + " for writing");
  f << text;
  if (!f) throw InvalidParams("failed writing " + path);
}

std::string read_text(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw InvalidParams("cannot open " + path);
  std::ostringstream os;
  os << f.rdbuf();
  return os.str();
}

}  // namespace thom
