#include <doctest.h>

#include <filesystem>
#include <sstream>

#include "thomjiggle/cli.hpp"
#include "thomjiggle/errors.hpp"
#include "thomjiggle/io.hpp"

using namespace thom;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("thomjiggle_test_io_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::size_t count_lines(const std::string& text, const std::string& prefix) {
  std::istringstream is(text);
  std::size_t n = 0;
  for (std::string line; std::getline(is, line);)
    if (line.rfind(prefix, 0) == 0) ++n;
  return n;
}

bool same_complex(const SimplicialComplex& a, const SimplicialComplex& b) {
  if (a.ambient_dim() != b.ambient_dim() || a.periodic_dims() != b.periodic_dims()) return false;
  if (a.vertex_ids() != b.vertex_ids() || a.dimension() != b.dimension()) return false;
  for (std::size_t i = 0; i < a.num_vertices(); ++i)
    if (a.coords_at(i) != b.coords_at(i)) return false;
  for (int k = 0; k <= a.dimension(); ++k)
    if (a.simplices(k) != b.simplices(k)) return false;
  return a.has_coloring() == b.has_coloring() && (!a.has_coloring() || a.coloring_map() == b.coloring_map());
}

int cli(std::vector<std::string> args) {
  args.insert(args.begin(), "thomjiggle");
  return run_cli(args);
}

}  // namespace

TEST_CASE("complex text round trip") {
  for (const auto& c : {standard_simplex(2), torus_triangulation(2, 2), thom_pattern(2).pattern,
                        barycentric_subdivide(standard_simplex(3)).first}) {
    const std::string text = complex_to_text(*c);
    auto back = complex_from_text(text);
    CHECK(back.diagnostics.empty());
    CHECK(same_complex(*c, *back.complex));
    CHECK(complex_to_text(*back.complex) == text);
  }
}

TEST_CASE("saving a loaded pattern is byte identical") {
  const auto dir = scratch("resave");
  const auto k2 = thom_pattern(2).pattern;
  save_complex((dir / "a.json").string(), *k2);
  auto loaded = load_complex((dir / "a.json").string());
  save_complex((dir / "b.json").string(), *loaded.complex);
  CHECK(read_text((dir / "a.json").string()) == read_text((dir / "b.json").string()));
  fs::remove_all(dir);
}

TEST_CASE("missing faces are added with a diagnostic") {
  const std::string text = R"({"ambient_dim": 2,
    "vertices": [{"id": 0, "coords": ["0", "0"]}, {"id": 1, "coords": ["1", "0"]}, {"id": 2, "coords": ["0", "1"]}],
    "simplices": [[0, 1, 2], [0, 1]]})";
  auto loaded = complex_from_text(text, "tri.json");
  CHECK(loaded.complex->num_simplices(1) == 3);
  REQUIRE(loaded.diagnostics.size() == 2);
  CHECK(loaded.diagnostics[0] == "tri.json: face [0,2] was missing and has been added");
}

TEST_CASE("schema violations name the location") {
  auto message = [](const std::string& text) {
    try {
      complex_from_text(text, "in.json");
    } catch (const Error& e) {
      return std::string(e.what());
    }
    return std::string();
  };
  CHECK(message("{\"ambient_dim\": 1,\n  \"vertices\": [}").find("in.json: line 2") != std::string::npos);
  CHECK(message(R"({"ambient_dim": 1, "vertices": [], "simplices": [], "extra": 1})").find("extra: unknown key") !=
        std::string::npos);
  CHECK(message(R"({"ambient_dim": 1, "vertices": [{"id": 0, "coords": ["1/0"]}], "simplices": []})")
            .find("vertices[0].coords[0]") != std::string::npos);
  CHECK(message(R"({"vertices": [], "simplices": []})").find("ambient_dim: missing") != std::string::npos);
  CHECK_THROWS_AS(complex_from_text(R"({"ambient_dim": 1, "vertices": [{"id": 0, "coords": ["0"]}], "simplices": [[0, 4]]})"),
                  DanglingVertexId);
  CHECK_THROWS_AS(
      complex_from_text(R"({"ambient_dim": 1, "vertices": [{"id": 0, "coords": ["0"]}, {"id": 0, "coords": ["1"]}], "simplices": []})"),
      SchemaViolation);
}

TEST_CASE("mesh export") {
  const std::string tri = mesh_text(*standard_simplex(2), MeshFormat::Off);
  CHECK(tri.rfind("OFF\n3 1 0\n", 0) == 0);
  CHECK(tri.substr(tri.size() - 8) == "3 0 1 2\n");
  const std::string k2 = mesh_text(*thom_pattern(2).pattern, MeshFormat::Off);
  CHECK(k2.rfind("OFF\n12 13 0\n", 0) == 0);
  const std::string obj = mesh_text(*thom_pattern(2).pattern, MeshFormat::Obj);
  CHECK(count_lines(obj, "v ") == 12);
  CHECK(count_lines(obj, "f ") == 13);
  const std::string circle = mesh_text(*torus_triangulation(1, 2), MeshFormat::Obj);
  CHECK(count_lines(circle, "v ") == 4);
  CHECK(count_lines(circle, "l ") == 4);
  CHECK(count_lines(mesh_text(*torus_triangulation(1, 2), MeshFormat::Off), "2 ") == 4);
  const auto graph = jiggle_exp(iterate_fold(torus_triangulation(2, 2), thom_pattern(2), 1), {2, ModelKind::Torus}).graph();
  CHECK_THROWS_AS(mesh_text(*graph, MeshFormat::Off), UnsupportedDimension);
  CHECK(count_lines(mesh_text(*graph, MeshFormat::Off, std::vector<int>{0, 1, 2}), "3 ") == graph->num_simplices(2));
  CHECK_THROWS_AS(mesh_text(*graph, MeshFormat::Off, std::vector<int>{0, 7}), InvalidParams);
  // Coordinates are printed to round trip.
  const auto odd = build_complex(1, {{0, {Rational(1, 3)}}, {1, {1}}}, {{0, 1}});
  CHECK(mesh_text(*odd, MeshFormat::Obj).find("0.33333333333333331") != std::string::npos);
}

TEST_CASE("cochain csv") {
  const auto c = standard_simplex(2);
  Cochain a = zero_cochain(c, 1);
  a.values = {1.5, -2, 0.25};
  CHECK(cochain_csv(a) == "v0,v1,value\n0,1,1.5\n0,2,-2\n1,2,0.25\n");
}

TEST_CASE("run configuration") {
  RunConfig cfg;
  CHECK_NOTHROW(validate(cfg));
  const Json j = to_json(cfg);
  CHECK(j["t"] == "1/4");
  CHECK(config_from_json(j).seed == cfg.seed);
  auto custom = config_from_json(Json{{"seed", 9}, {"model", "circle"}, {"u1", "1/4"}});
  CHECK(custom.seed == 9);
  CHECK(custom.model_dim() == 1);
  CHECK(custom.u1 == Rational(1, 4));
  CHECK(custom.model_complex()->num_simplices(1) == 4);
  CHECK_THROWS_AS(config_from_json(Json{{"bogus", 1}}), SchemaViolation);
  CHECK_THROWS_AS(config_from_json(Json{{"model", "klein"}}), SchemaViolation);
  CHECK_THROWS_AS(config_from_json(Json{{"u1", "3/4"}}), SchemaViolation);
  CHECK_THROWS_AS(config_from_json(Json{{"grid", 1}}), SchemaViolation);
  CHECK_THROWS_AS(config_from_json(Json{{"seed", -1}}), SchemaViolation);
  CHECK(schema_errors(j, report_schema()["properties"]["config"]).empty());
}

TEST_CASE("schema validator subset") {
  const Json schema = Json::parse(R"({"type": "object", "required": ["a"], "additionalProperties": false,
    "properties": {"a": {"type": "integer", "minimum": 0}, "b": {"enum": ["x", "y"]},
                   "c": {"type": "array", "items": {"type": "number"}}}})");
  CHECK(schema_errors(Json::parse(R"({"a": 1, "b": "x", "c": [1, 2.5]})"), schema).empty());
  CHECK(schema_errors(Json::parse(R"({"b": "x"})"), schema).size() == 1);
  CHECK(schema_errors(Json::parse(R"({"a": -1})"), schema).size() == 1);
  CHECK(schema_errors(Json::parse(R"({"a": 1, "b": "z"})"), schema).size() == 1);
  CHECK(schema_errors(Json::parse(R"({"a": 1, "c": [1, "q"]})"), schema).size() == 1);
  CHECK(schema_errors(Json::parse(R"({"a": 1, "d": 0})"), schema).size() == 1);
  CHECK(schema_errors(Json::parse(R"([1])"), schema).size() == 1);
}

TEST_CASE("cli exit codes and reports") {
  const auto dir = scratch("cli");
  const std::string out = dir.string();
  CHECK(cli({"--out", out, "pattern", "--n", "2", "--verify"}) == 0);
  const Json rep = Json::parse(read_text((dir / "pattern.report.json").string()));
  CHECK(schema_errors(rep, report_schema()).empty());
  CHECK(rep["status"] == "pass");
  CHECK(rep["exit_code"] == 0);
  CHECK(fs::exists(dir / "pattern_n2.json"));
  CHECK(fs::exists(dir / "pattern_n2.off"));

  CHECK(cli({"--out", out, "certify", "--r", "1", "--section", "zero", "--field", "horizontal"}) == 2);
  const Json fail = Json::parse(read_text((dir / "certify.report.json").string()));
  CHECK(fail["status"] == "fail");
  CHECK(schema_errors(fail, report_schema()).empty());

  CHECK(cli({"--out", out, "--rmax", "0", "scan", "--family", "horizontal"}) == 2);
  const Json exhausted = Json::parse(read_text((dir / "scan.report.json").string()));
  CHECK(exhausted["error"]["kind"] == "OrderExhausted");

  CHECK(cli({"--out", out, "--model", "klein", "pattern", "--n", "1"}) == 1);
  CHECK(cli({"--out", out, "export", "--input", (dir / "missing.json").string()}) == 1);
  CHECK(cli({"--out", out, "nonsense"}) == 1);
  CHECK(cli({"--out", out}) == 1);

  write_text((dir / "cfg.json").string(), R"({"model": "circle", "seed": 4})");
  CHECK(cli({"--config", (dir / "cfg.json").string(), "--out", out, "jiggle", "--r", "1"}) == 0);
  const Json jig = Json::parse(read_text((dir / "jiggle.report.json").string()));
  CHECK(jig["config"]["model"] == "circle");
  CHECK(jig["config"]["seed"] == 4);
  fs::remove_all(dir);
}
