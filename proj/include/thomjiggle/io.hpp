#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "thomjiggle/cocycle.hpp"

namespace thom {

using Json = nlohmann::json;

/// Everything a run depends on besides its subcommand flags.
struct RunConfig {
  std::uint64_t seed = 1;
  double margin_threshold = 1e-6;
  double ode_tol = 1e-10;
  int quadrature_order = 16;
  Rational t{1, 4};
  Rational u1{1, 3};
  Rational u0{2, 3};
  std::string model = "torus";  ///< circle | torus | box1 | box2
  int grid = 2;                 ///< m of the model triangulation
  int r_max = 4;
  std::string out_dir = ".";

  PatternParams pattern_params() const { return {t, u1, u0}; }
  /// Dimension of the model (1 for circle/box1).
  int model_dim() const;
  FlatModel flat_model() const;
  ComplexPtr model_complex() const;
};

/// Throws SchemaViolation naming the field.
void validate(const RunConfig& cfg);
Json to_json(const RunConfig& cfg);
/// Missing keys keep their defaults; unknown keys are rejected.
RunConfig config_from_json(const Json& j, RunConfig base = {});
RunConfig load_config(const std::string& path);

struct LoadedComplex {
  ComplexPtr complex;
  std::vector<std::string> diagnostics;
};

/// Canonical text: sorted ids, coordinates as "p/q" strings, trailing newline.
std::string complex_to_text(const SimplicialComplex& c);
/// `source` prefixes diagnostics. Simplex lists are closed under faces; each
/// added face is reported in the diagnostics.
LoadedComplex complex_from_text(const std::string& text, const std::string& source = "<input>");
void save_complex(const std::string& path, const SimplicialComplex& c);
LoadedComplex load_complex(const std::string& path);

enum class MeshFormat { Off, Obj };

/// Vertices in ascending id order; every 2-simplex becomes a triangle and
/// edges outside triangles become OFF 2-gons or OBJ polylines. Coordinates
/// are the stored ones (periodic charts are not unwrapped). `projection`
/// picks at most three coordinates; without it the ambient dimension must be <= 3.
std::string mesh_text(const SimplicialComplex& c, MeshFormat format,
                      const std::optional<std::vector<int>>& projection = std::nullopt);
void export_mesh(const std::string& path, const SimplicialComplex& c, MeshFormat format,
                 const std::optional<std::vector<int>>& projection = std::nullopt);

/// Header v0,...,vk,value; one row per simplex in index order.
std::string cochain_csv(const Cochain& c);

/// Subset of JSON Schema: type, required, properties, additionalProperties,
/// items, enum, minimum. Returns the violations (empty when valid).
std::vector<std::string> schema_errors(const Json& doc, const Json& schema);
/// Schema every CLI report satisfies.
const Json& report_schema();

/// Pretty-printed with sorted keys and a trailing newline.
std::string json_text(const Json& j);
void write_text(const std::string& path, const std::string& text);
std::string read_text(const std::string& path);

}  // namespace thom
